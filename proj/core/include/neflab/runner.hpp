#pragma once

#include <string>
#include <vector>

#include "neflab/config.hpp"

namespace neflab {

struct MissingArtifacts : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Outcome of one pipeline verb. json_text is the full "nef-lab-report/1"
/// document (also written to <output_dir>/report_<verb>.json); timing data
/// lives under the top-level "timings" key so reports stay comparable.
struct RunReport {
  bool passed = false;
  std::vector<std::string> failures;
  std::string json_text;
};

/// Solve the family over t_list, compute envelopes, write field dumps,
/// per-t level CSVs and the JSON report.
RunReport run_solve(const ExperimentConfig& cfg);

/// Full inequality suite on top of the solves: Young, calibrated Trudinger,
/// the Hoelder chain, the De Giorgi bound, the beta-sandwich and (k = n)
/// the maximum-principle comparison. Pre-existing corrupt field dumps in the
/// output directory raise MissingArtifacts.
RunReport run_verify(const ExperimentConfig& cfg);

/// Degeneration study over t_list (length >= 3): c_t power-law fit against
/// the expected exponent k - min(k, nu), sup-deficit table and uniformity
/// verdict (spread factor < 3).
RunReport run_sweep(const ExperimentConfig& cfg);

/// Least-squares slope of log(y) against log(t).
double fit_power_exponent(const std::vector<double>& t, const std::vector<double>& y);

}  // namespace neflab
