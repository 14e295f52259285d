#include "newton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace neflab::detail {

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

void remove_mean(std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m += v;
  m /= static_cast<double>(a.size());
  for (double& v : a) v -= m;
}

HermMatrix field_mean(const HermitianField& w) {
  HermMatrix m = HermMatrix::zero(w.grid.n);
  const int tri = w.tri();
  const std::size_t t = w.grid.total();
  cplx s0 = 0.0, s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < t; ++i) {
    const cplx* e = w.entries.data() + i * tri;
    s0 += e[0];
    if (tri == 3) {
      s1 += e[1];
      s2 += e[2];
    }
  }
  double inv = 1.0 / static_cast<double>(t);
  m.d0 = s0.real() * inv;
  if (tri == 3) {
    m.od = s1 * inv;
    m.d1 = s2.real() * inv;
  }
  return m;
}

// K d = -tr(W . Hess d) + b d, the (sign-flipped) Newton linearization.
struct LinearOperator {
  const SpectralTransform& st;
  const HermitianField& w;
  const std::vector<double>& b;  // zeroth-order coefficient, may be empty
  bool fix_mean;

  std::vector<double> apply(const std::vector<double>& p) const {
    const Grid& grid = st.grid();
    const std::size_t t = grid.total();
    PeriodicField pf(grid);
    pf.values = p;
    HermitianField hp = complex_hessian(st, pf);
    std::vector<double> out(t);
    const int tri = hp.tri();
    for (std::size_t i = 0; i < t; ++i) {
      const cplx* wh = w.entries.data() + i * tri;
      const cplx* hh = hp.entries.data() + i * tri;
      double tr = wh[0].real() * hh[0].real();
      if (tri == 3) {
        tr += wh[2].real() * hh[2].real();
        tr += 2.0 * std::real(wh[1] * std::conj(hh[1]));
      }
      out[i] = -tr + (b.empty() ? 0.0 : b[i] * p[i]);
    }
    if (fix_mean) remove_mean(out);
    return out;
  }
};

// Spectral inverse of the constant-coefficient average of K.
struct Preconditioner {
  const SpectralTransform& st;
  HermMatrix wbar;
  double bbar;
  bool fix_mean;

  std::vector<double> apply(const std::vector<double>& r) const {
    const Grid& grid = st.grid();
    PeriodicField rf(grid);
    rf.values = r;
    std::vector<cplx> spec = st.forward(rf);
    const HermMatrix& w = wbar;
    for_each_mode(grid, [&](std::size_t i, cplx c1, cplx c2) {
      double q = w.d0 * std::norm(c1);
      if (grid.n == 2)
        q += w.d1 * std::norm(c2) + 2.0 * std::real(w.od * std::conj(c2) * c1);
      double m = kPi2 * q + bbar;
      if (m > 1e-300) {
        spec[i] /= m;
      } else {
        spec[i] = fix_mean ? cplx(0.0) : spec[i] / 1e-300;
      }
    });
    return st.inverse_real(spec).values;
  }
};

std::vector<double> pcg_solve(const LinearOperator& K, const Preconditioner& M,
                              std::vector<double> rhs, double rel_tol, int max_iter) {
  if (K.fix_mean) remove_mean(rhs);
  const std::size_t t = rhs.size();
  std::vector<double> x(t, 0.0);
  std::vector<double> r = rhs;
  double target = rel_tol * norm2(rhs);
  if (norm2(rhs) == 0.0) return x;

  std::vector<double> z = M.apply(r);
  std::vector<double> p = z;
  double rz = dot(r, z);
  std::vector<double> best_x = x;
  double best_res = norm2(r);
  int stagnant = 0;

  for (int it = 0; it < max_iter; ++it) {
    std::vector<double> q = K.apply(p);
    double pq = dot(p, q);
    if (!(pq > 0.0)) break;  // loss of positivity from nonsymmetric part
    double alpha = rz / pq;
    for (std::size_t i = 0; i < t; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    double rn = norm2(r);
    if (rn < best_res * 0.99) {
      best_res = rn;
      best_x = x;
      stagnant = 0;
    } else if (++stagnant > 60) {
      break;
    }
    if (rn <= target) {
      best_x = x;
      break;
    }
    z = M.apply(r);
    double rz_new = dot(r, z);
    double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < t; ++i) p[i] = z[i] + beta * p[i];
  }
  if (K.fix_mean) remove_mean(best_x);
  return best_x;
}

}  // namespace

double admissibility_margin(const HermitianField& a, const HermMatrix& g, int k) {
  const int n = a.grid.n;
  const std::size_t t = a.grid.total();
  const int tri = a.tri();
  double margin = std::numeric_limits<double>::infinity();
  if (n == 1) {
    const double inv = 1.0 / g.d0;
    for (std::size_t i = 0; i < t; ++i)
      margin = std::min(margin, a.entries[i].real() * inv);
    return margin;
  }
  const double inv_dg = 1.0 / g.det();
  for (std::size_t i = 0; i < t; ++i) {
    const cplx* e = a.entries.data() + i * tri;
    double mixed = e[0].real() * g.d1 + e[2].real() * g.d0 -
                   2.0 * std::real(e[1] * std::conj(g.od));
    double s1 = 0.5 * mixed * inv_dg;
    if (k == 1) {
      margin = std::min(margin, s1);
      continue;
    }
    double s2 = (e[0].real() * e[2].real() - std::norm(e[1])) * inv_dg;
    if (k == n) {
      // smallest generalized eigenvalue: l1 + l2 = 2 s1, l1 l2 = s2
      double disc = std::max(0.0, s1 * s1 - s2);
      margin = std::min(margin, s1 - std::sqrt(disc));
    } else {
      margin = std::min(margin, std::min(s1, s2));
    }
  }
  return margin;
}

HermitianField linearization_weight(const HermitianField& a, const HermMatrix& g, int k) {
  const int n = a.grid.n;
  const std::size_t t = a.grid.total();
  HermitianField w(a.grid);
  if (n == 1) {
    const double inv = 1.0 / g.d0;
    for (std::size_t i = 0; i < t; ++i) w.entries[i] = inv;
    return w;
  }
  const double inv_dg = 1.0 / g.det();
  if (k == 1) {
    // constant: adj(g) / (2 det g) = g^{-1} / 2
    const cplx w01 = -g.od * (0.5 * inv_dg);
    for (std::size_t i = 0; i < t; ++i) {
      cplx* e = w.entries.data() + i * 3;
      e[0] = 0.5 * g.d1 * inv_dg;
      e[1] = w01;
      e[2] = 0.5 * g.d0 * inv_dg;
    }
    return w;
  }
  // k = 2: W = adj(A) / det g
  for (std::size_t i = 0; i < t; ++i) {
    const cplx* ae = a.entries.data() + i * 3;
    cplx* e = w.entries.data() + i * 3;
    e[0] = ae[2].real() * inv_dg;
    e[1] = -ae[1] * inv_dg;
    e[2] = ae[0].real() * inv_dg;
  }
  return w;
}

SolveResult newton_solve(const SpectralTransform& st, const EquationSpec& eq,
                         PeriodicField initial, const SolveOptions& opt) {
  const Grid& grid = st.grid();
  const std::size_t t = grid.total();
  const double tol = opt.resolve_tol(grid.n);
  const bool has_exp = eq.beta > 0.0;

  PeriodicField phi = std::move(initial);
  if (eq.fix_mean) phi += -phi.mean();

  auto assemble = [&](const PeriodicField& u) { return *eq.ghat + complex_hessian(st, u); };
  auto residual = [&](const HermitianField& a, const PeriodicField& u) {
    PeriodicField r = sigma_k_ratio(a, *eq.g, eq.k);
    if (eq.rhs)
      for (std::size_t i = 0; i < t; ++i) r.values[i] -= eq.rhs->values[i];
    if (has_exp)
      for (std::size_t i = 0; i < t; ++i)
        r.values[i] -= eq.c_exp * std::exp(eq.beta * u.values[i]);
    return r;
  };

  // Only k = n = 2 has an iterate-dependent linearization weight (adj A);
  // there the cone is an ellipticity requirement. For n = 1 and for k = 1 the
  // weight is constant and iterates may graze the cone boundary freely (the
  // exact solution's margin is e^{beta min u}, far below roundoff for large
  // beta), so enforcing membership during the line search would spuriously
  // block convergence.
  const bool enforce_cone = (grid.n == 2 && eq.k == 2);

  HermitianField a = assemble(phi);
  double margin = admissibility_margin(a, *eq.g, eq.k);
  if (enforce_cone && !(margin > 0.0))
    throw PositivityLoss("initial iterate not admissible (margin " +
                             std::to_string(margin) + ")",
                         std::numeric_limits<double>::infinity());

  PeriodicField res = residual(a, phi);
  double sup_r = res.sup_abs();
  SolveResult out;
  out.residual_history.push_back(sup_r);

  int iter = 0;
  bool blocked_by_cone = false;
  while (sup_r > tol && iter < opt.max_newton) {
    ++iter;
    HermitianField w = linearization_weight(a, *eq.g, eq.k);
    std::vector<double> b;
    if (has_exp) {
      b.resize(t);
      for (std::size_t i = 0; i < t; ++i)
        b[i] = eq.c_exp * eq.beta * std::exp(eq.beta * phi.values[i]);
    }
    LinearOperator K{st, w, b, eq.fix_mean};
    double bbar = 0.0;
    if (has_exp) {
      for (double v : b) bbar += v;
      bbar /= static_cast<double>(t);
    }
    Preconditioner M{st, field_mean(w), bbar, eq.fix_mean};

    double eta = std::clamp(0.3 * sup_r, 1e-12, 1e-2);
    std::vector<double> dv = pcg_solve(K, M, res.values, eta, opt.max_cg);

    PeriodicField delta(grid);
    delta.values = std::move(dv);
    HermitianField hd = complex_hessian(st, delta);

    bool accepted = false;
    blocked_by_cone = false;
    double alpha = 1.0;
    for (int ls = 0; ls < 40 && !accepted; ++ls, alpha *= 0.5) {
      HermitianField a_try = a;
      PeriodicField phi_try = phi;
      for (std::size_t i = 0; i < a_try.entries.size(); ++i)
        a_try.entries[i] += alpha * hd.entries[i];
      for (std::size_t i = 0; i < t; ++i) phi_try.values[i] += alpha * delta.values[i];

      if (enforce_cone) {
        double m_try = admissibility_margin(a_try, *eq.g, eq.k);
        if (!(m_try > 0.0)) {
          blocked_by_cone = true;
          continue;
        }
      }
      PeriodicField res_try = residual(a_try, phi_try);
      double sup_try = res_try.sup_abs();
      if (sup_try < sup_r * (1.0 - 1e-4 * alpha) || sup_try <= tol) {
        a = std::move(a_try);
        phi = std::move(phi_try);
        res = std::move(res_try);
        sup_r = sup_try;
        accepted = true;
      }
    }
    if (!accepted) {
      if (blocked_by_cone)
        throw PositivityLoss("line search could not maintain cone membership", sup_r);
      throw NonConvergence("Newton stalled at residual " + std::to_string(sup_r) +
                               "; consider a smaller continuation step",
                           sup_r);
    }
    if (eq.fix_mean) phi += -phi.mean();
    out.residual_history.push_back(sup_r);
  }
  if (sup_r > tol)
    throw NonConvergence("Newton did not reach tolerance", sup_r);
  margin = admissibility_margin(a, *eq.g, eq.k);

  out.phi = std::move(phi);
  out.residual_sup = sup_r;
  out.iterations = iter;
  out.positivity_margin = margin;
  if (has_exp) out.beta = eq.beta;
  return out;
}

namespace {

// Smallest t' >= t at which phi = 0 is comfortably admissible.
double admissible_start_time(const SpectralTransform& st, const ProblemSpec& spec,
                             double t, int k) {
  HermitianField chi = chi_form(st, spec);
  auto margin_at = [&](double tp) {
    HermitianField h = chi;
    h.add_constant(tp * spec.g);
    return admissibility_margin(h, spec.g, k);
  };
  if (margin_at(t) > 1e-8) return t;
  double tp = std::max(t, 1e-3);
  for (int i = 0; i < 60; ++i) {
    tp *= 2.0;
    if (margin_at(tp) > 0.05) return tp;
  }
  throw PositivityLoss("no admissible starting time found for continuation",
                       std::numeric_limits<double>::infinity());
}

}  // namespace

SolveResult continuation_solve_fixed(
    const SpectralTransform& st, const ProblemSpec& spec, double t, int k,
    const std::function<PeriodicField(double)>& rhs_fn, const SolveOptions& opt,
    const PeriodicField* warm) {
  HermitianField chi = chi_form(st, spec);
  auto solve_at = [&](double tp, PeriodicField start) {
    HermitianField ghat = chi;
    ghat.add_constant(tp * spec.g);
    PeriodicField rhs = rhs_fn(tp);
    EquationSpec eq{k, &ghat, &spec.g, &rhs, 0.0, 0.0, true};
    return newton_solve(st, eq, std::move(start), opt);
  };

  PeriodicField u = warm ? *warm : PeriodicField(spec.grid, 0.0);
  double t_cur;
  if (warm) {
    t_cur = t;  // caller guarantees the warm start is admissible at t
  } else {
    t_cur = admissible_start_time(st, spec, t, k);
  }

  SolveResult r;
  double ratio = 0.6;
  int rungs = 0;
  for (;;) {
    try {
      r = solve_at(t_cur, u);
    } catch (const SolveError&) {
      // shrink the continuation step and retry from the last good iterate
      ratio = std::sqrt(ratio);
      if (ratio > 0.995 || ++rungs > 200) throw;
      t_cur = std::min(t_cur / ratio, admissible_start_time(st, spec, t, k));
      continue;
    }
    u = r.phi;
    if (t_cur <= t) break;
    if (++rungs > 200)
      throw NonConvergence("continuation exceeded rung budget", r.residual_sup);
    t_cur = std::max(t, t_cur * ratio);
  }
  return r;
}

SolveResult continuation_solve_beta(
    const SpectralTransform& st, const ProblemSpec& spec, double t, int k,
    double beta, bool use_ct, const SolveOptions& opt,
    const PeriodicField* warm, double warm_beta) {
  if (beta < 1.0) throw std::invalid_argument("beta >= 1 required");
  HermitianField chi = chi_form(st, spec);
  auto solve_at = [&](double tp, double bp, PeriodicField start) {
    HermitianField ghat = chi;
    ghat.add_constant(tp * spec.g);
    double c = use_ct ? cohomology_constant(st, spec, tp, k) : 1.0;
    EquationSpec eq{k, &ghat, &spec.g, nullptr, bp, c, false};
    return newton_solve(st, eq, std::move(start), opt);
  };

  PeriodicField u(spec.grid, 0.0);
  double b_cur = 1.0;
  SolveResult r;

  if (warm && warm_beta >= 1.0) {
    u = *warm;
    b_cur = warm_beta;
  } else {
    // descend in t at beta = 1 from an admissible start
    double t_cur = admissible_start_time(st, spec, t, k);
    double ratio = 0.6;
    int rungs = 0;
    for (;;) {
      try {
        r = solve_at(t_cur, 1.0, u);
      } catch (const SolveError&) {
        ratio = std::sqrt(ratio);
        if (ratio > 0.995 || ++rungs > 200) throw;
        t_cur = std::min(t_cur / ratio, admissible_start_time(st, spec, t, k));
        continue;
      }
      u = r.phi;
      if (t_cur <= t) break;
      if (++rungs > 200)
        throw NonConvergence("continuation exceeded rung budget", r.residual_sup);
      t_cur = std::max(t, t_cur * ratio);
    }
    b_cur = 1.0;
  }

  // ascend in beta with warm starts
  double step = 2.0;
  int rungs = 0;
  if (b_cur >= beta) {
    r = solve_at(t, beta, u);
    return r;
  }
  for (;;) {
    double b_next = std::min(beta, b_cur * step);
    try {
      r = solve_at(t, b_next, u);
    } catch (const SolveError& e) {
      step = std::sqrt(step);
      if (step < 1.0005 || ++rungs > 300)
        throw NonConvergence(
            std::string("beta continuation failed near beta = ") +
                std::to_string(b_next) + ": " + e.what() +
                " (restart with a smaller beta step)",
            e.last_residual);
      continue;
    }
    u = r.phi;
    b_cur = b_next;
    if (b_cur >= beta) break;
    if (++rungs > 300)
      throw NonConvergence("beta continuation exceeded rung budget", r.residual_sup);
  }
  return r;
}

}  // namespace neflab::detail
