#pragma once

#include <string>

#include "neflab/estimates.hpp"
#include "neflab/field.hpp"

namespace neflab {

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Binary field dump: magic "NEFF", u32 n, u32 N, then N^{2n} little-endian
/// float64 values in row-major order.
void dump_field(const PeriodicField& f, const std::string& path);
PeriodicField load_field(const std::string& path);

/// Per-run level statistics as CSV: s, A_s, tail, omega_measure, trudinger_lhs.
void write_level_csv(const LevelStats& stats, const std::vector<double>& trudinger,
                     const std::string& path);

}  // namespace neflab
