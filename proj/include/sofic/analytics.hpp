#pragma once

// Closed-form and numeric functions of (d, k, delta): growth rates, the
// equitable optimum, delta_0 inversion, the psi / psi_0 curves and the core
// fixed point. Every Real result is computed at working_precision_bits().
// Entropies use natural logarithms with 0 log 0 = 0.

#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "sofic/hypergraph.hpp"
#include "sofic/numeric.hpp"

namespace sofic {

struct AnalyticParams {
  int d = 1;
  int k = 2;
  std::optional<double> eta;
  unsigned precision = 128;
};

/// lambda_0 = 1 / (2^{k-1} - 1).
Real lambda0(int k);
/// lambda = d lambda_0.
Real lambda(int d, int k);

/// log 2 + (d/k) log(1 - 2^{1-k}).
Real f_dk(int d, int k);

Real shannon_H(const std::vector<Real>& p);
Real H2(const Real& x);
/// -delta log delta_0 - (1 - delta) log(1 - delta_0).
Real H0(const Real& delta, const Real& delta0);

/// H(T) + (1-d) H(p, 1-p) - (d/k) log k + sum_ij T_ij log C(k, j) for a
/// d x (k+1) matrix with rows summing to 1/k and a common mean p.
Real F_type(const std::vector<std::vector<Real>>& T, int d, int k);

/// t*_j = C(k, j) / (k (2^k - 2)) for 1 <= j <= k-1; t*_0 = t*_k = 0.
std::vector<Rational> t_star(int k);

/// The row-symmetric objective on t_1..t_{k-1} (index j-1 holds t_j):
/// d H(t) + (1-d) H(p, 1-p) - (d/k) log k + d sum_j t_j log C(k, j).
double F_symmetric(const std::vector<double>& t, int d, int k);

struct TypeMaximum {
  std::vector<double> t;  // t_1..t_{k-1}
  double value = 0;
  int iterations = 0;
  double gradient_norm = 0;
};
/// Maximizes F_symmetric over {t >= 0, sum t = 1/k} by softmax-parametrized
/// gradient ascent with Armijo backtracking, started from `start` (or a
/// deliberately lopsided point when empty).
TypeMaximum maximize_type(int d, int k, std::vector<double> start = {});

/// g(x) = sum_{j=1}^{k-1} (kx - j) C(k, j) ((1-x)/x)^{j(1-d)/d}.
Real g_poly(const Real& x, int d, int k);
/// k[(x(1+y) - y)(1+y)^{k-1} - x + (1-x) y^k] with y = ((1-x)/x)^{(1-d)/d}.
Real g_poly_factored(const Real& x, int d, int k);

/// delta_0 (1 - 2^{2-k} + (delta_0/2)^{k-1}) /
///   (1 - 2^{2-k} + 2 (delta_0/2)^k + 2 ((1-delta_0)/2)^k).
Real delta_of_delta0(const Real& delta0, int k);
/// Inverse of delta_of_delta0 on [0, 1].
Real delta0_of_delta(const Real& delta, int k);
/// Result of the 10^4-point monotonicity scan of delta_of_delta0 (cached).
bool delta_map_monotone(int k);

/// H(x) + (d/k) log(1 - (1 - x^k - (1-x)^k) / (2^{k-1} - 1)).
Real psi(const Real& x, int d, int k);
/// (1-d) H(delta) + d H_0(delta) + (d/k) log(1 - (1 - delta_0^k - (1-delta_0)^k) / (2^{k-1} - 1)).
/// Checks agreement with psi0_alternate to 1e-9. Endpoints give the limit 0.
Real psi0(const Real& delta, int d, int k);
/// psi(delta_0) - (H(delta_0) - H_0(delta)) + (d-1)(H_0(delta) - H(delta)),
/// with the first gap from delta_0 eps log((1-delta_0)/delta_0) and the
/// second as a relative entropy.
Real psi0_alternate(const Real& delta, int d, int k);

struct PairTypeOptimum {
  Real delta;
  Real delta0;
  Real C;
  std::vector<std::pair<PairTypeMatrix, Real>> t;
  Real total;          // sum t, should be 1/k
  Real marginal_chi;   // sum (e10 + e11) t, should be 1/2
  Real marginal_chi2;  // sum (e01 + e11) t, should be 1/2
  Real p01;            // sum e01 t, should be delta / 2
};
/// t(e) = C ((1-delta_0)/2)^{e00+e11} (delta_0/2)^{e01+e10} C(k; e).
PairTypeOptimum t_delta(const Real& delta, int k);
/// H(t) + sum t(e) log C(k; e).
Real pair_F(const std::vector<std::pair<PairTypeMatrix, Real>>& t);

struct KlReport {
  Real delta;
  Real delta0;
  Real eps_hat;        // 1 - delta / delta_0
  Real entropy_gap;    // H(delta_0) - H_0(delta)
  Real identity_rhs;   // delta_0 eps_hat log((1 - delta_0) / delta_0)
  Real divergence;     // H_0(delta) - H(delta) >= 0
};
KlReport kl_report(const Real& delta, int k);

struct Psi0Point {
  Real delta;
  Real delta0;
  Real psi0;
  Real psi;
};
struct Psi0Scan {
  int d = 0;
  int k = 0;
  Real f;
  std::vector<Psi0Point> points;
  std::size_t argmax = 0;
  Real margin;            // max minus second-best value
  Real max_asymmetry;     // max |psi0(delta_i) - psi0(delta_{N-1-i})|
  bool below_half = true; // every value <= psi0 at the midpoint
};
/// Symmetric grid on [2^{-k/2}, 1 - 2^{-k/2}]; an odd point count puts the
/// midpoint exactly at 1/2.
Psi0Scan psi0_scan(int d, int k, int grid_points);
/// CSV with header "delta,delta0,psi0,psi,f_dk".
void write_psi0_csv(std::ostream& out, const Psi0Scan& scan, int digits = 25);

/// r = (log 2 / 2) 2^k - (1 + log 2) / 2 + eta.
Real r_of_eta(int k, const Real& eta);
struct EtaRounding {
  int d = 0;
  Real eta_prime;
  bool valid = false;  // 0 < eta' < (1 - log 2) / 2
};
EtaRounding d_of_eta(int k, const Real& eta);

/// P(Bin(n, p) >= j), summed in log space.
Real binomial_tail(std::int64_t n, const Real& p, std::int64_t j);

struct FixedPointTrace {
  std::vector<Real> p;
  Real p_inf;
  Real mu_core;           // P(Bin(d, p_inf) >= 3)
  Real mu_core_attached;  // 1 - (1 - p_inf)^d
  bool converged = false;
};
/// p_0 = lambda_0, p_{l+1} = lambda_0 P(Bin(d-1, p_l) >= 3)^{k-1}.
FixedPointTrace core_fixed_point(int d, int k, const Real& tol, int max_levels);
/// mu(C_l) = P(Bin(d, p_{l-1}) >= 3) and mu(C_l ∪ A_l) = P(Bin(d, p_{l-1}) > 0).
Real tree_core_mass(int d, int k, int level);
Real tree_core_attached_mass(int d, int k, int level);

}  // namespace sofic
