#include "neflab/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

namespace neflab {

using nlohmann::json;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void axis_indices(const Grid& g, std::size_t i, int* a) {
  for (int d = g.dims() - 1; d >= 0; --d) {
    a[d] = static_cast<int>(i % static_cast<std::size_t>(g.N));
    i /= static_cast<std::size_t>(g.N);
  }
}

HermMatrix parse_matrix(const json& j, int n, const char* what) {
  HermMatrix m = HermMatrix::zero(n);
  if (j.is_number()) {
    m.d0 = j.get<double>();
    m.d1 = m.d0;
  } else if (j.is_array()) {
    if (j.size() != static_cast<std::size_t>(n))
      throw ConfigError(std::string(what) + ": diagonal needs n entries");
    m.d0 = j[0].get<double>();
    if (n == 2) m.d1 = j[1].get<double>();
  } else if (j.is_object()) {
    m.d0 = j.value("d0", 0.0);
    m.d1 = j.value("d1", 0.0);
    m.od = cplx(j.value("od_re", 0.0), j.value("od_im", 0.0));
  } else {
    throw ConfigError(std::string(what) + ": expected number, array or object");
  }
  return m;
}

FieldSpec parse_field(const json& j, int n, const char* what) {
  FieldSpec f;
  if (j.is_null()) return f;
  if (!j.is_object()) throw ConfigError(std::string(what) + ": expected object");
  f.family = j.value("family", std::string(j.contains("terms") ? "zero" : "zero"));
  f.amplitude = j.value("amplitude", 0.0);
  f.sharpness = j.value("sharpness", 1.0);
  f.band = j.value("band", 2);
  if (j.contains("terms")) {
    for (const json& t : j.at("terms")) {
      CosineTerm ct;
      ct.amplitude = t.at("amplitude").get<double>();
      ct.freq = t.at("freq").get<std::vector<int>>();
      ct.phase = t.value("phase", 0.0);
      if (ct.freq.size() != static_cast<std::size_t>(2 * n))
        throw ConfigError(std::string(what) + ": freq needs 2n entries");
      f.terms.push_back(std::move(ct));
    }
  }
  if (f.family != "zero" && f.family != "bump" && f.family != "two_level" &&
      f.family != "random")
    throw ConfigError(std::string(what) + ": unknown family '" + f.family + "'");
  return f;
}

}  // namespace

void ExperimentConfig::validate() const {
  try {
    Grid(n, N);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (g.n != n || chi0.n != n) throw ConfigError("config: matrix dimension mismatch");
  if (!(g.min_eig() > 0.0)) throw ConfigError("config: g must be positive definite");
  if (!(p > n)) throw ConfigError("config: p > n is required");
  if (k < 1 || k > n) throw ConfigError("config: k must lie in {1..n}");
  for (double t : t_list)
    if (!(t > 0.0 && t <= 1.0)) throw ConfigError("config: t_list must lie in (0,1]");
  for (std::size_t i = 0; i + 1 < t_list.size(); ++i)
    if (!(t_list[i] > t_list[i + 1])) throw ConfigError("config: t_list must decrease");
  for (std::size_t i = 0; i + 1 < beta_schedule.size(); ++i)
    if (!(beta_schedule[i] < beta_schedule[i + 1]))
      throw ConfigError("config: beta_schedule must increase");
  for (double b : beta_schedule)
    if (!(b >= 1.0)) throw ConfigError("config: beta values must be >= 1");
  if (s_count < 2) throw ConfigError("config: s_grid needs at least 2 levels");
  if (!(s_max_factor > 0.0)) throw ConfigError("config: s_max_factor must be positive");
  if (k_smooth < 1) throw ConfigError("config: k_smooth must be >= 1");
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: JSON parse error: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    cfg.n = j.at("n").get<int>();
    cfg.N = j.at("N").get<int>();
    cfg.g = j.contains("g") ? parse_matrix(j["g"], cfg.n, "g")
                            : HermMatrix::identity(cfg.n);
    cfg.chi0 = j.contains("chi0") ? parse_matrix(j["chi0"], cfg.n, "chi0")
                                  : HermMatrix::zero(cfg.n);
    cfg.rho = parse_field(j.value("rho", json()), cfg.n, "rho");
    cfg.F = parse_field(j.value("F", json()), cfg.n, "F");
    cfg.p = j.value("p", 3.0);
    cfg.k = j.value("k", cfg.n);
    cfg.t_list = j.value("t_list", std::vector<double>{1.0});
    cfg.beta_schedule =
        j.value("beta_schedule", std::vector<double>{50, 100, 200, 400, 800});
    if (j.contains("s_grid")) {
      cfg.s_count = j["s_grid"].value("count", 64);
      cfg.s_max_factor = j["s_grid"].value("max_factor", 1.5);
    }
    if (j.contains("tolerances")) {
      cfg.solve.tol = j["tolerances"].value("residual", 0.0);
      cfg.solve.max_newton = j["tolerances"].value("max_newton", 60);
      cfg.solve.max_cg = j["tolerances"].value("max_cg", 600);
    }
    cfg.k_smooth = j.value("k_smooth", 10);
    cfg.output_dir = j.value("output_dir", std::string("."));
    cfg.seed = j.value("seed", std::uint64_t{1});
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

PeriodicField cosine_field(const Grid& grid, const CosineTerm& term) {
  PeriodicField f(grid);
  const std::size_t tot = grid.total();
  int a[4] = {0, 0, 0, 0};
  for (std::size_t i = 0; i < tot; ++i) {
    axis_indices(grid, i, a);
    double phase = term.phase;
    for (int d = 0; d < grid.dims(); ++d)
      phase += kTwoPi * term.freq[d] * a[d] / grid.N;
    f.values[i] = term.amplitude * std::cos(phase);
  }
  return f;
}

PeriodicField random_band_field(const Grid& grid, double amplitude, int band,
                                std::uint64_t seed) {
  if (band < 1 || band >= grid.N / 2)
    throw std::invalid_argument("random_band_field: band must lie in [1, N/2)");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, kTwoPi);
  PeriodicField f(grid);
  const int D = grid.dims();
  std::vector<int> k(D, -band);
  CosineTerm term;
  term.freq.resize(D);
  for (;;) {
    // canonical representative: first nonzero component positive
    int first = 0;
    while (first < D && k[first] == 0) ++first;
    if (first < D && k[first] > 0) {
      term.amplitude = gauss(rng);
      term.phase = unif(rng);
      for (int d = 0; d < D; ++d) term.freq[d] = k[d];
      f += cosine_field(grid, term);
    }
    int d = D - 1;
    while (d >= 0 && ++k[d] > band) k[d--] = -band;
    if (d < 0) break;
  }
  double s = f.sup_abs();
  if (s > 0.0) f *= amplitude / s;
  return f;
}

PeriodicField synthesize_field(const Grid& grid, const FieldSpec& spec,
                               std::uint64_t seed) {
  PeriodicField f(grid);
  const std::size_t tot = grid.total();
  int a[4] = {0, 0, 0, 0};
  if (spec.family == "bump") {
    // smooth bump at the origin; sharpness concentrates the mass
    for (std::size_t i = 0; i < tot; ++i) {
      axis_indices(grid, i, a);
      double c = 0.0;
      for (int d = 0; d < grid.dims(); ++d) c += std::cos(kTwoPi * a[d] / grid.N) - 1.0;
      f.values[i] = spec.amplitude * std::exp(spec.sharpness * c);
    }
  } else if (spec.family == "two_level") {
    // smoothed indicator-type density, transition width ~ 1/sharpness
    for (std::size_t i = 0; i < tot; ++i) {
      axis_indices(grid, i, a);
      f.values[i] =
          spec.amplitude * std::tanh(spec.sharpness * std::cos(kTwoPi * a[0] / grid.N));
    }
  } else if (spec.family == "random") {
    f = random_band_field(grid, spec.amplitude, spec.band, seed);
  }
  for (const CosineTerm& t : spec.terms) f += cosine_field(grid, t);
  return f;
}

ProblemSpec build_problem(const ExperimentConfig& cfg) {
  cfg.validate();
  ProblemSpec spec;
  spec.grid = Grid(cfg.n, cfg.N);
  spec.g = cfg.g;
  spec.nef = NefClassSpec::make(cfg.chi0, synthesize_field(spec.grid, cfg.rho, cfg.seed));
  spec.F_raw = synthesize_field(spec.grid, cfg.F, cfg.seed + 1);
  spec.p = cfg.p;
  spec.normalize_density();
  spec.validate();
  return spec;
}

}  // namespace neflab
