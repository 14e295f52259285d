#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <random>

#include "neflab/calculus.hpp"
#include "neflab/config.hpp"
#include "neflab/io.hpp"
#include "neflab/problem.hpp"

using namespace neflab;

namespace {
constexpr double kPi = std::numbers::pi;

PeriodicField eval_xy(const Grid& g, double (*f)(double, double)) {
  PeriodicField out(g);
  for (int a0 = 0; a0 < g.N; ++a0)
    for (int a1 = 0; a1 < g.N; ++a1)
      out.values[static_cast<std::size_t>(a0) * g.N + a1] =
          f(static_cast<double>(a0) / g.N, static_cast<double>(a1) / g.N);
  return out;
}
}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(Grid(3, 16), std::invalid_argument);
  CHECK_THROWS_AS(Grid(1, 12), std::invalid_argument);
  CHECK_THROWS_AS(Grid(1, 4), std::invalid_argument);
  Grid g(2, 16);
  CHECK(g.total() == 65536);
  CHECK(g.freq(0) == 0);
  CHECK(g.freq(15) == -1);
  CHECK(g.is_nyquist(8));
}

TEST_CASE("pencil eigenvalues against brute force") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    HermMatrix a{2, u(rng), u(rng), cplx(u(rng), u(rng))};
    HermMatrix g{2, 2.0 + u(rng), 2.0 + u(rng), cplx(0.3 * u(rng), 0.3 * u(rng))};
    auto l = gen_eigenvalues(a, g);
    // roots of det(a - l g) by direct expansion
    for (double lam : {l[0], l[1]}) {
      HermMatrix d{2, a.d0 - lam * g.d0, a.d1 - lam * g.d1, a.od - lam * g.od};
      CHECK(std::abs(d.det()) < 1e-10);
    }
    CHECK(std::abs(sigma_k_normalized(a, g, 1) - 0.5 * (l[0] + l[1])) < 1e-12);
    CHECK(std::abs(sigma_k_normalized(a, g, 2) - l[0] * l[1]) < 1e-12);
  }
}

TEST_CASE("gamma cone arithmetic") {
  HermMatrix g = HermMatrix::identity(2);
  HermMatrix a = HermMatrix::diag(2, 2.0, -0.5);
  CHECK(sigma_k_normalized(a, g, 1) == doctest::Approx(0.75).epsilon(1e-14));  // (2-0.5)/2
  CHECK(sigma_k_normalized(a, g, 2) == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("complex hessian of a plane wave, n=1") {
  Grid grid(1, 32);
  SpectralTransform st(grid);
  // u = cos(2 pi (2x + 3y)): d^2u/dz dzbar = -pi^2 |2 + 3i|^2 u = -13 pi^2 u
  PeriodicField u = eval_xy(grid, [](double x, double y) {
    return std::cos(2.0 * kPi * (2.0 * x + 3.0 * y));
  });
  HermitianField h = complex_hessian(st, u);
  for (std::size_t i = 0; i < grid.total(); ++i) {
    CHECK(std::abs(h.entries[i].real() + 13.0 * kPi * kPi * u.values[i]) < 1e-9);
    CHECK(std::abs(h.entries[i].imag()) < 1e-10);
  }
}

TEST_CASE("complex hessian cross term, n=2") {
  Grid grid(2, 8);
  SpectralTransform st(grid);
  // u = cos(2 pi (x1 + y2)): c1 = 1, c2 = i, entry(0,1) = -pi^2 cbar1 c2 mode
  PeriodicField u(grid);
  int a[4];
  for (std::size_t i = 0; i < grid.total(); ++i) {
    std::size_t r = i;
    for (int d = 3; d >= 0; --d) {
      a[d] = static_cast<int>(r % 8);
      r /= 8;
    }
    u.values[i] = std::cos(2.0 * kPi * (a[0] + a[3]) / 8.0);
  }
  HermitianField h = complex_hessian(st, u);
  for (std::size_t i = 0; i < grid.total(); ++i) {
    const cplx* e = h.entries.data() + i * 3;
    double c = u.values[i];
    std::size_t r = i;
    for (int d = 3; d >= 0; --d) {
      a[d] = static_cast<int>(r % 8);
      r /= 8;
    }
    CHECK(std::abs(e[0].real() + kPi * kPi * c) < 1e-10);  // |c1|^2 = 1
    CHECK(std::abs(e[2].real() + kPi * kPi * c) < 1e-10);  // |c2|^2 = 1
    // cbar1 c2 = i on both conjugate modes: entry(0,1) = -i pi^2 cos(theta)
    CHECK(std::abs(e[1].real()) < 1e-10);
    CHECK(std::abs(e[1].imag() + kPi * kPi * c) < 1e-10);
  }
}

TEST_CASE("hessian entries have zero mean (exactness)") {
  for (int n : {1, 2}) {
    Grid grid(n, n == 1 ? 64 : 16);
    SpectralTransform st(grid);
    PeriodicField u = random_band_field(grid, 0.7, 3, 42 + n);
    HermitianField h = complex_hessian(st, u);
    const int tri = h.tri();
    for (int e = 0; e < tri; ++e) {
      cplx mean = 0.0;
      for (std::size_t i = 0; i < grid.total(); ++i) mean += h.entries[i * tri + e];
      mean /= static_cast<double>(grid.total());
      CHECK(std::abs(mean) < 1e-12);
    }
  }
}

TEST_CASE("Monge-Ampere mass invariance for 20 random band-limited fields") {
  std::vector<HermMatrix> gs1 = {HermMatrix::identity(1), HermMatrix::diag(1, 2.5)};
  std::vector<HermMatrix> gs2 = {HermMatrix::identity(2),
                                 HermMatrix{2, 1.3, 0.9, cplx(0.2, 0.1)}};
  for (int n : {1, 2}) {
    Grid grid(n, n == 1 ? 64 : 16);
    SpectralTransform st(grid);
    const auto& gs = (n == 1) ? gs1 : gs2;
    for (const HermMatrix& g : gs) {
      double vol = volume(grid, g);
      for (int trial = 0; trial < 20; ++trial) {
        PeriodicField u = random_band_field(grid, 0.05, grid.N / 4 - 1,
                                            1000 * n + trial);
        HermitianField a = complex_hessian(st, u);
        a.add_constant(g);
        double mass = integrate(det_ratio(a, g), g);
        CHECK(std::abs(mass - vol) < 1e-8 * vol);
      }
    }
  }
}

TEST_CASE("sigma_n coincides with det ratio") {
  Grid grid(2, 16);
  SpectralTransform st(grid);
  HermMatrix g{2, 1.2, 0.8, cplx(0.1, -0.2)};
  PeriodicField u = random_band_field(grid, 0.05, 3, 5);
  HermitianField a = complex_hessian(st, u);
  a.add_constant(g);
  PeriodicField d = det_ratio(a, g);
  PeriodicField s = sigma_k_ratio(a, g, 2);
  for (std::size_t i = 0; i < grid.total(); ++i)
    CHECK(std::abs(d.values[i] - s.values[i]) < 1e-12);
}

TEST_CASE("integrate is linear and monotone") {
  Grid grid(1, 16);
  HermMatrix g = HermMatrix::diag(1, 1.7);
  PeriodicField f = random_band_field(grid, 1.0, 3, 9);
  PeriodicField h = f;
  h += 0.25;  // h >= f pointwise
  CHECK(integrate(h, g) >= integrate(f, g));
  PeriodicField combo = f;
  combo *= 2.0;
  combo += h;
  CHECK(integrate(combo, g) ==
        doctest::Approx(2.0 * integrate(f, g) + integrate(h, g)).epsilon(1e-12));
  CHECK(integrate(PeriodicField(grid, 1.0), g) == doctest::Approx(1.7));
}

TEST_CASE("cohomology constants: closed forms and rho invariance") {
  SUBCASE("c_t = t^n for the trivial class") {
    for (int n : {1, 2}) {
      Grid grid(n, n == 1 ? 32 : 8);
      SpectralTransform st(grid);
      ProblemSpec spec;
      spec.grid = grid;
      spec.g = HermMatrix::identity(n);
      spec.nef = NefClassSpec::make(HermMatrix::zero(n), PeriodicField(grid));
      spec.F_raw = PeriodicField(grid);
      spec.normalize_density();
      for (double t : {1.0, 0.37, 0.05})
        CHECK(cohomology_constant(st, spec, t, n) ==
              doctest::Approx(std::pow(t, n)).epsilon(1e-12));
    }
  }
  SUBCASE("n=2 rank-one class: c_t = t(1+t)") {
    Grid grid(2, 8);
    SpectralTransform st(grid);
    ProblemSpec spec;
    spec.grid = grid;
    spec.g = HermMatrix::identity(2);
    spec.nef = NefClassSpec::make(HermMatrix::diag(2, 1.0, 0.0), PeriodicField(grid));
    spec.F_raw = PeriodicField(grid);
    spec.normalize_density();
    for (double t : {0.5, 0.1, 0.01})
      CHECK(cohomology_constant(st, spec, t, 2) ==
            doctest::Approx(t * (1.0 + t)).epsilon(1e-12));
    // numerical dimension detected from chi0
    CHECK(spec.nef.nu == 1);

    // same class with an exact perturbation: c_t unchanged
    CosineTerm term{0.05, {1, 0, 0, 0}, 0.0};
    ProblemSpec pert = spec;
    pert.nef = NefClassSpec::make(HermMatrix::diag(2, 1.0, 0.0),
                                  cosine_field(grid, term));
    for (double t : {0.5, 0.1, 0.01})
      CHECK(std::abs(cohomology_constant(st, pert, t, 2) -
                     cohomology_constant(st, spec, t, 2)) < 1e-10);
  }
}

TEST_CASE("density normalization") {
  Grid grid(1, 32);
  ProblemSpec spec;
  spec.grid = grid;
  spec.g = HermMatrix::diag(1, 2.0);
  spec.nef = NefClassSpec::make(HermMatrix::zero(1), PeriodicField(grid));
  CosineTerm term{0.8, {1, 0}, 0.3};
  spec.F_raw = cosine_field(grid, term);
  spec.normalize_density();
  double m = 0.0;
  for (double v : spec.F_hat.values) m += std::exp(v);
  m /= static_cast<double>(grid.total());
  CHECK(m == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("field dump round trip and corruption handling") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "neflab_io_test";
  fs::create_directories(dir);
  Grid grid(1, 16);
  PeriodicField f = random_band_field(grid, 1.0, 3, 77);
  std::string path = (dir / "f.neff").string();
  dump_field(f, path);
  PeriodicField g = load_field(path);
  CHECK(g.grid == f.grid);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(g.values[i] == f.values[i]);

  SUBCASE("bad magic") {
    std::string bad = (dir / "bad.neff").string();
    std::FILE* fp = std::fopen(bad.c_str(), "wb");
    std::fputs("JUNKJUNKJUNK", fp);
    std::fclose(fp);
    CHECK_THROWS_AS(load_field(bad), FormatError);
  }
  SUBCASE("truncated payload") {
    std::string trunc = (dir / "trunc.neff").string();
    fs::copy_file(path, trunc, fs::copy_options::overwrite_existing);
    fs::resize_file(trunc, 100);
    CHECK_THROWS_AS(load_field(trunc), FormatError);
  }
  fs::remove_all(dir);
}
