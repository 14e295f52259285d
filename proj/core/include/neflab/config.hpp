#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "neflab/problem.hpp"
#include "neflab/solver.hpp"

namespace neflab {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One harmonic amplitude * cos(2 pi freq . x + phase) on the torus; freq has
/// one integer per real axis (2n entries).
struct CosineTerm {
  double amplitude = 0.0;
  std::vector<int> freq;
  double phase = 0.0;
};

/// Scalar field recipe: either an explicit cosine sum, a named synthetic
/// family ("zero", "bump", "two_level", "random"), or both (terms added on
/// top of the family).
struct FieldSpec {
  std::string family = "zero";
  double amplitude = 0.0;
  double sharpness = 1.0;  // bump concentration / two-level transition width
  int band = 2;            // max |frequency| for the random family
  std::vector<CosineTerm> terms;
};

struct ExperimentConfig {
  int n = 1;
  int N = 64;
  HermMatrix g = HermMatrix::identity(1);
  HermMatrix chi0 = HermMatrix::zero(1);
  FieldSpec rho;
  FieldSpec F;
  double p = 3.0;
  int k = 1;
  std::vector<double> t_list;
  std::vector<double> beta_schedule;
  int s_count = 64;
  double s_max_factor = 1.5;
  SolveOptions solve;
  int k_smooth = 10;
  std::string output_dir = ".";
  std::uint64_t seed = 1;

  void validate() const;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

/// Deterministic synthesis of a FieldSpec on a grid (random family is seeded).
PeriodicField synthesize_field(const Grid& grid, const FieldSpec& spec,
                               std::uint64_t seed);

/// Band-limited random field: independent Gaussian cosine amplitudes on all
/// modes with max |frequency| <= band (Nyquist-free), normalized to sup-norm
/// `amplitude`.
PeriodicField random_band_field(const Grid& grid, double amplitude, int band,
                                std::uint64_t seed);

/// amplitude * cos(2 pi freq . x + phase).
PeriodicField cosine_field(const Grid& grid, const CosineTerm& term);

/// Assemble the ProblemSpec (fields synthesized, density normalized).
ProblemSpec build_problem(const ExperimentConfig& cfg);

}  // namespace neflab
