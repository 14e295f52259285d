#include "neflab/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace neflab {

namespace {
double safe_exp(double x) { return std::exp(std::min(x, 700.0)); }
}

LevelStats sublevel_stats(const PeriodicField& phi, const PeriodicField& V,
                          const PeriodicField& F_hat, const std::vector<double>& s_grid,
                          double weight_exponent, const HermMatrix& g) {
  LevelStats st;
  st.s_values = s_grid;
  const std::size_t tot = phi.size();
  const double cell = g.det() / static_cast<double>(tot);
  for (double s : s_grid) {
    double a = 0.0, tail = 0.0, meas = 0.0;
    for (std::size_t i = 0; i < tot; ++i) {
      double d = phi[i] - V[i];
      if (d <= -s) {
        double w = safe_exp(weight_exponent * F_hat[i]);
        a += (-d - s) * w;
        tail += w;
        meas += 1.0;
      }
    }
    st.A_s.push_back(a * cell);
    st.tail.push_back(tail * cell);
    st.omega_measure.push_back(meas * cell);
  }
  return st;
}

double entropy(const PeriodicField& phi, const PeriodicField& V,
               const PeriodicField& F_hat, double weight_exponent, const HermMatrix& g) {
  const std::size_t tot = phi.size();
  double s = 0.0;
  for (std::size_t i = 0; i < tot; ++i)
    s += (-phi[i] + V[i]) * safe_exp(weight_exponent * F_hat[i]);
  return s * g.det() / static_cast<double>(tot);
}

double orlicz_norm(const PeriodicField& G, double p, const HermMatrix& g) {
  const std::size_t tot = G.size();
  double s = 0.0;
  for (std::size_t i = 0; i < tot; ++i)
    s += safe_exp(G[i]) * std::pow(1.0 + std::abs(G[i]), p);
  return s * g.det() / static_cast<double>(tot);
}

YoungReport young_check(const PeriodicField& v_field, const PeriodicField& G, double p,
                        const HermMatrix& g) {
  (void)g;
  YoungReport rep;
  rep.C_p = 0.5 * p * std::pow((p - 1.0) / std::numbers::e, p - 1.0);
  rep.max_violation = -std::numeric_limits<double>::infinity();
  const std::size_t tot = v_field.size();
  for (std::size_t i = 0; i < tot; ++i) {
    double v = v_field[i];
    double eg = safe_exp(G[i]);
    double lhs = std::pow(v, p) * eg;
    double rhs = eg * std::pow(1.0 + std::abs(G[i]), p) + rep.C_p * safe_exp(2.0 * v);
    double viol = lhs - rhs;
    rep.max_violation = std::max(rep.max_violation, viol);
    if (viol > 1e-12) ++rep.violations;
  }
  return rep;
}

double trudinger_lhs(const PeriodicField& phi, const PeriodicField& V, double alpha0,
                     double s, double A_s, const HermMatrix& g) {
  const std::size_t tot = phi.size();
  const double cell = g.det() / static_cast<double>(tot);
  const int n = phi.grid.n;
  const double ex = (n + 1.0) / n;
  double denom = (A_s > 1e-300) ? std::pow(A_s, 1.0 / (1.0 + n)) : 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < tot; ++i) {
    double d = phi[i] - V[i];
    if (d <= -s) {
      double x = std::max(0.0, -(d + s));
      double arg = (denom > 0.0) ? alpha0 * std::pow(x / denom, ex) : 0.0;
      sum += safe_exp(arg);
    }
  }
  return sum * cell;
}

double moment_integral(const PeriodicField& phi, const PeriodicField& V,
                       const PeriodicField& F_hat, double weight_exponent, double s,
                       double p, const HermMatrix& g) {
  const std::size_t tot = phi.size();
  const double cell = g.det() / static_cast<double>(tot);
  const int n = phi.grid.n;
  const double ex = (n + 1.0) * p / n;
  double sum = 0.0;
  for (std::size_t i = 0; i < tot; ++i) {
    double d = phi[i] - V[i];
    if (d <= -s) sum += std::pow(-d - s, ex) * safe_exp(weight_exponent * F_hat[i]);
  }
  return sum * cell;
}

PhiComparison phi_comparison_check(const PeriodicField& phi_t, const PeriodicField& u_beta,
                                   const PeriodicField& psi, const PeriodicField& V,
                                   double s, double A_skb, int n) {
  PhiComparison out;
  double np1 = n + 1.0;
  out.epsilon = std::pow(A_skb * std::pow(n, -n) * std::pow(np1, n), 1.0 / np1);
  out.lambda = std::pow(n, n + 1.0) * std::pow(np1, -(n + 1.0)) *
               std::pow(out.epsilon, np1);

  const std::size_t tot = phi_t.size();
  double sup_phi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < tot; ++i) {
    double base = -psi[i] + u_beta[i] + 1.0 + out.lambda;
    if (base <= 0.0)
      throw BetaTooSmall("phi_comparison_check: psi >= u_beta + 1 somewhere; increase beta");
    double val = -out.epsilon * std::pow(base, n / np1) - (phi_t[i] - u_beta[i] + s);
    sup_phi = std::max(sup_phi, val);
  }
  out.sup_Phi = sup_phi;
  out.eps_beta = std::max(0.0, (u_beta - V).sup());
  return out;
}

HolderReport holder_chain_check(const LevelStats& stats, const std::vector<double>& moments,
                                double orlicz, double E_t, double alpha0, double p, int n,
                                double C) {
  HolderReport rep;
  rep.delta0 = (p - n) / (p * n);
  rep.q = p * (n + 1.0) / (p * (n + 1.0) - n);
  double bracket = orlicz + C + C * safe_exp(C * E_t);
  rep.B0 = std::pow(std::pow(2.0, p) * std::pow(alpha0, -p) * bracket, 1.0 / p);

  rep.min_margin_moment = std::numeric_limits<double>::infinity();
  rep.min_margin_levels = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < stats.s_values.size(); ++i) {
    double a = stats.A_s[i];
    double moment_bound =
        std::pow(2.0, p) * std::pow(alpha0, -p) * std::pow(a, p / n) * bracket;
    rep.min_margin_moment = std::min(rep.min_margin_moment, moment_bound - moments[i]);
    double level_bound = rep.B0 * std::pow(stats.tail[i], 1.0 + rep.delta0);
    rep.min_margin_levels = std::min(rep.min_margin_levels, level_bound - a);
  }
  rep.ok = rep.min_margin_moment >= -1e-12 && rep.min_margin_levels >= -1e-12;
  return rep;
}

DeGiorgiResult degiorgi_iterate(const LevelStats& stats, double B0, double delta0) {
  if (!(B0 > 0.0) || !(delta0 > 0.0))
    throw std::invalid_argument("degiorgi_iterate: B0, delta0 must be positive");
  DeGiorgiResult out;
  const std::size_t m = stats.s_values.size();

  std::size_t i0 = m;
  for (std::size_t i = 0; i < m; ++i) {
    if (2.0 * B0 * std::pow(stats.tail[i], delta0) <= 1.0) {
      i0 = i;
      break;
    }
  }
  if (i0 == m)
    throw NoValidS0("degiorgi_iterate: tail never small enough; B0 calibration suspect");
  out.s0 = stats.s_values[i0];
  out.S_infinity = out.s0 + 2.0 * B0 * std::pow(stats.tail[i0], delta0) /
                               (1.0 - std::pow(2.0, -delta0));

  out.min_relation_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      double r = stats.s_values[j] - stats.s_values[i];
      if (r > 1.0) break;
      double margin = B0 * std::pow(stats.tail[i], 1.0 + delta0) - r * stats.tail[j];
      out.min_relation_margin = std::min(out.min_relation_margin, margin);
    }
  }
  out.relation_ok = out.min_relation_margin >= -1e-12;
  return out;
}

double alpha0_estimate(const std::vector<const PeriodicField*>& candidates,
                       const HermMatrix& g, double cap) {
  if (candidates.empty())
    throw EmptyCandidates("alpha0_estimate: no candidate potentials");
  const double vol = g.det();
  auto admissible = [&](double alpha) {
    for (const PeriodicField* psi : candidates) {
      const std::size_t tot = psi->size();
      double s = 0.0;
      for (std::size_t i = 0; i < tot; ++i) s += safe_exp(alpha * (-(*psi)[i]));
      s *= vol / static_cast<double>(tot);
      if (s > 2.0 * vol) return false;
    }
    return true;
  };
  if (admissible(cap)) return cap;
  double lo = 0.0, hi = cap;
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (lo + hi);
    (admissible(mid) ? lo : hi) = mid;
  }
  return lo;
}

double calibrate_chain_constant(const std::vector<ChainObservation>& obs, double alpha0,
                                double p, int n) {
  auto holds = [&](double C) {
    for (const ChainObservation& o : obs) {
      for (double lhs : o.trudinger)
        if (lhs > C * safe_exp(C * o.E_t)) return false;
      HolderReport h = holder_chain_check(o.stats, o.moments, o.orlicz, o.E_t, alpha0, p,
                                          n, C);
      if (!h.ok) return false;
    }
    return true;
  };
  double hi = 1e-6;
  while (!holds(hi)) {
    hi *= 2.0;
    if (hi > 1e12)
      throw std::runtime_error("calibrate_chain_constant: no finite constant found");
  }
  double lo = hi / 2.0;
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (lo + hi);
    (holds(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace neflab
