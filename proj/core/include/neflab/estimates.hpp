#pragma once

#include "neflab/calculus.hpp"
#include "neflab/field.hpp"

#include <stdexcept>
#include <vector>

namespace neflab {

struct BetaTooSmall : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoValidS0 : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptyCandidates : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Sublevel-set statistics of the deficit phi - V over a grid of levels s:
///   Omega_s = {phi - V <= -s},
///   A_s     = int_{Omega_s} (-phi + V - s) e^{w F_hat} omega^n,
///   tail(s) = int_{Omega_s} e^{w F_hat} omega^n,
///   omega_measure(s) = int_{Omega_s} omega^n.
struct LevelStats {
  std::vector<double> s_values;
  std::vector<double> A_s;
  std::vector<double> tail;
  std::vector<double> omega_measure;
};

LevelStats sublevel_stats(const PeriodicField& phi, const PeriodicField& V,
                          const PeriodicField& F_hat, const std::vector<double>& s_grid,
                          double weight_exponent, const HermMatrix& g);

/// Energy E_t = int (-phi + V) e^{w F_hat} omega^n.
double entropy(const PeriodicField& phi, const PeriodicField& V,
               const PeriodicField& F_hat, double weight_exponent, const HermMatrix& g);

/// Integral Orlicz quantity int e^G (1 + |G|)^p omega^n for a log-density G.
double orlicz_norm(const PeriodicField& G, double p, const HermMatrix& g);

struct YoungReport {
  double C_p = 0.0;           // constant (p/2)((p-1)/e)^{p-1}
  double max_violation = 0.0;  // max of v^p e^G - e^G(1+|G|)^p - C_p e^{2v}
  std::size_t violations = 0;
};

/// Pointwise generalized Young inequality v^p e^G <= e^G (1+|G|)^p + C(p) e^{2v}.
YoungReport young_check(const PeriodicField& v_field, const PeriodicField& G, double p,
                        const HermMatrix& g);

/// Trudinger-type integral over Omega_s:
///   int_{Omega_s} exp{ alpha0 ((-(phi - V + s))_+ / A_s^{1/(1+n)})^{(n+1)/n} } omega^n.
double trudinger_lhs(const PeriodicField& phi, const PeriodicField& V, double alpha0,
                     double s, double A_s, const HermMatrix& g);

/// Moment integral int_{Omega_s} (-phi + V - s)^{(n+1)p/n} e^{w F_hat} omega^n.
double moment_integral(const PeriodicField& phi, const PeriodicField& V,
                       const PeriodicField& F_hat, double weight_exponent, double s,
                       double p, const HermMatrix& g);

struct PhiComparison {
  double epsilon = 0.0;  // epsilon^{n+1} = A n^{-n} (n+1)^n
  double lambda = 0.0;   // Lambda = n^{n+1} (n+1)^{-n-1} epsilon^{n+1}
  double sup_Phi = 0.0;
  double eps_beta = 0.0;  // sup (u_beta - V)_+
};

/// Maximum-principle comparison function
///   Phi = -epsilon (-psi + u_beta + 1 + Lambda)^{n/(n+1)} - (phi - u_beta + s);
/// requires psi < u_beta + 1 pointwise (throws BetaTooSmall otherwise).
PhiComparison phi_comparison_check(const PeriodicField& phi_t, const PeriodicField& u_beta,
                                   const PeriodicField& psi, const PeriodicField& V,
                                   double s, double A_skb, int n);

struct HolderReport {
  double B0 = 0.0;
  double delta0 = 0.0;
  double q = 0.0;
  double min_margin_moment = 0.0;  // min over s of RHS - moment (the moment bound)
  double min_margin_levels = 0.0;  // min over s of B0 tail^{1+delta0} - A_s
  bool ok = false;
};

/// The Young/Hölder chain: B0 from the calibrated constant, the moment bound,
/// and the level inequality A_s <= B0 tail(s)^{1+delta0}.
HolderReport holder_chain_check(const LevelStats& stats, const std::vector<double>& moments,
                                double orlicz, double E_t, double alpha0, double p, int n,
                                double C);

struct DeGiorgiResult {
  double S_infinity = 0.0;
  double s0 = 0.0;
  double min_relation_margin = 0.0;  // min of B0 tail(s)^{1+d0} - r tail(s+r)
  bool relation_ok = false;
};

/// De Giorgi iteration: S_infinity = s0 + 2 B0 tail(s0)^{delta0} / (1 - 2^{-delta0})
/// with s0 the first level where 2 B0 tail^{delta0} <= 1; also checks
/// r tail(s+r) <= B0 tail(s)^{1+delta0} on all grid pairs with r <= 1.
DeGiorgiResult degiorgi_iterate(const LevelStats& stats, double B0, double delta0);

/// Empirical alpha-invariant: largest alpha (bisected up to `cap`) with
/// int exp(alpha (-psi)) omega^n <= 2 Vol for every candidate.
double alpha0_estimate(const std::vector<const PeriodicField*>& candidates,
                       const HermMatrix& g, double cap = 16.0);

/// Smallest C such that a family of observed Trudinger values and level stats
/// satisfies the whole chain: lhs <= C e^{C E_t}, the moment bound, and
/// A_s <= B0(C) tail^{1+delta0}. Bisection; callers freeze 2x this value.
struct ChainObservation {
  LevelStats stats;
  std::vector<double> trudinger;  // per s
  std::vector<double> moments;    // per s
  double E_t = 0.0;
  double orlicz = 0.0;
};
double calibrate_chain_constant(const std::vector<ChainObservation>& obs, double alpha0,
                                double p, int n);

}  // namespace neflab
