#include "sofic/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <ostream>

#include <boost/math/special_functions/gamma.hpp>

#include "sofic/errors.hpp"

namespace sofic {
namespace {

Real two_pow(int e) { return boost::multiprecision::ldexp(Real(1), e); }

Real log2_real() { return log(Real(2)); }

// x log x with 0 log 0 = 0.
Real xlogx(const Real& x) {
  if (x == 0) return Real(0);
  return x * log(x);
}

Real tolerance(double value) { return Real(value); }

void require_open_unit(const Real& x, const char* what) {
  if (!(x > 0 && x < 1)) throw InputError(std::string(what) + " must lie in (0, 1)");
}

void require_k(int k) {
  if (k < 2) throw InputError("k must be at least 2");
}

// 1 - (1 - x^k - (1-x)^k) / (2^{k-1} - 1), returned as its logarithm.
Real log_pair_factor(const Real& x, int k) {
  const Real inner = 1 - pow(x, k) - pow(1 - x, k);
  return log1p(-inner / (two_pow(k - 1) - 1));
}

Real psi0_closed(const Real& delta, const Real& delta0, int d, int k) {
  return (1 - d) * H2(delta) + d * H0(delta, delta0) + Real(d) / k * log_pair_factor(delta0, k);
}

Real psi0_route(const Real& delta, const Real& delta0, int d, int k) {
  const Real eps_hat = 1 - delta / delta0;
  const Real entropy_gap = delta0 * eps_hat * log((1 - delta0) / delta0);
  // H_0(delta) - H(delta) = delta log(delta / delta_0) + (1-delta) log((1-delta) / (1-delta_0)).
  Real divergence = 0;
  if (delta > 0) divergence += delta * log(delta / delta0);
  if (delta < 1) divergence += (1 - delta) * log((1 - delta) / (1 - delta0));
  return psi(delta0, d, k) - entropy_gap + (d - 1) * divergence;
}

}  // namespace

Real lambda0(int k) {
  require_k(k);
  PrecisionScope scope;
  return 1 / (two_pow(k - 1) - 1);
}

Real lambda(int d, int k) {
  PrecisionScope scope;
  return d * lambda0(k);
}

Real f_dk(int d, int k) {
  require_k(k);
  PrecisionScope scope;
  return log2_real() + Real(d) / k * log1p(-two_pow(1 - k));
}

Real shannon_H(const std::vector<Real>& p) {
  PrecisionScope scope;
  Real total = 0;
  for (const auto& x : p) {
    if (x < 0) throw InputError("entropy of a negative entry");
    total -= xlogx(x);
  }
  return total;
}

Real H2(const Real& x) {
  if (x < 0 || x > 1) throw InputError("H2 argument must lie in [0, 1]");
  PrecisionScope scope;
  return -xlogx(x) - xlogx(1 - x);
}

Real H0(const Real& delta, const Real& delta0) {
  PrecisionScope scope;
  Real total = 0;
  if (delta > 0) total -= delta * log(delta0);
  if (delta < 1) total -= (1 - delta) * log(1 - delta0);
  return total;
}

Real F_type(const std::vector<std::vector<Real>>& T, int d, int k) {
  require_k(k);
  if (static_cast<int>(T.size()) != d) throw InputError("type matrix needs d rows");
  PrecisionScope scope;
  const Real tol = tolerance(1e-9);
  std::optional<Real> p;
  Real entropy = 0;
  Real binomial_term = 0;
  for (const auto& row : T) {
    if (static_cast<int>(row.size()) != k + 1) throw InputError("type matrix rows need k+1 entries");
    Real sum = 0;
    Real mean = 0;
    for (int j = 0; j <= k; ++j) {
      if (row[j] < -tol) throw DomainError("negative type entry");
      sum += row[j];
      mean += j * row[j];
      if (row[j] > 0) {
        entropy -= xlogx(row[j]);
        binomial_term += row[j] * log(Real(binomial(k, j)));
      }
    }
    if (abs(sum - Real(1) / k) > tol) throw DomainError("type matrix row does not sum to 1/k");
    if (p && abs(*p - mean) > tol) throw DomainError("type matrix rows have different means");
    if (!p) p = mean;
  }
  const Real pm = p.value_or(Real(1) / 2);
  return entropy + (1 - d) * H2(pm) - Real(d) / k * log(Real(k)) + binomial_term;
}

std::vector<Rational> t_star(int k) {
  require_k(k);
  std::vector<Rational> t(k + 1, Rational(0));
  const BigInt scale = BigInt(k) * (ipow(BigInt(2), k) - 2);
  for (int j = 1; j < k; ++j) t[j] = Rational(binomial(k, j), scale);
  return t;
}

double F_symmetric(const std::vector<double>& t, int d, int k) {
  double entropy = 0;
  double p = 0;
  double binomial_term = 0;
  for (int j = 1; j < k; ++j) {
    const double x = t[j - 1];
    if (x > 0) entropy -= x * std::log(x);
    p += j * x;
    binomial_term += x * std::log(binomial(k, j).convert_to<double>());
  }
  const double hp = (p > 0 ? -p * std::log(p) : 0) + (p < 1 ? -(1 - p) * std::log(1 - p) : 0);
  return d * entropy + (1 - d) * hp - static_cast<double>(d) / k * std::log(k) + d * binomial_term;
}

TypeMaximum maximize_type(int d, int k, std::vector<double> start) {
  if (k < 3) throw InputError("the type simplex is a single point for k = 2");
  const int m = k - 1;
  if (start.empty()) {
    for (int j = 1; j <= m; ++j) start.push_back(j * j);
  }
  if (static_cast<int>(start.size()) != m) throw InputError("start needs k-1 entries");
  std::vector<double> theta(m);
  for (int j = 0; j < m; ++j) theta[j] = std::log(std::max(start[j], 1e-300));
  auto to_t = [&](const std::vector<double>& th) {
    const double top = *std::max_element(th.begin(), th.end());
    std::vector<double> t(m);
    double sum = 0;
    for (int j = 0; j < m; ++j) sum += t[j] = std::exp(th[j] - top);
    for (auto& x : t) x /= sum * k;
    return t;
  };
  std::vector<double> log_binomial(m);
  for (int j = 1; j <= m; ++j) log_binomial[j - 1] = std::log(binomial(k, j).convert_to<double>());
  // dF/dt_j = -d (log t_j + 1) + (1-d) j log((1-p)/p) + d log C(k, j); the
  // chain rule through t = softmax(theta) / k projects out the mean.
  auto gradient = [&](const std::vector<double>& t) {
    double p = 0;
    for (int j = 1; j <= m; ++j) p += j * t[j - 1];
    std::vector<double> g(m);
    double weighted = 0;
    for (int j = 1; j <= m; ++j) {
      g[j - 1] = -d * (std::log(t[j - 1]) + 1) + (1 - d) * j * std::log((1 - p) / p) + d * log_binomial[j - 1];
      weighted += k * t[j - 1] * g[j - 1];
    }
    std::vector<double> out(m);
    for (int j = 0; j < m; ++j) out[j] = t[j] * (g[j] - weighted);
    return out;
  };
  TypeMaximum result;
  auto t = to_t(theta);
  double value = F_symmetric(t, d, k);
  double step = 1.0;
  for (int it = 0; it < 200000; ++it) {
    const auto g = gradient(t);
    double norm2 = 0;
    for (double x : g) norm2 += x * x;
    result.gradient_norm = std::sqrt(norm2);
    result.iterations = it;
    if (result.gradient_norm < 1e-13) break;
    step = std::min(step * 2, 1e6);
    bool moved = false;
    while (step > 1e-18) {
      std::vector<double> trial(m);
      for (int j = 0; j < m; ++j) trial[j] = theta[j] + step * g[j];
      const auto tt = to_t(trial);
      const double v = F_symmetric(tt, d, k);
      if (v >= value + 1e-4 * step * norm2) {
        theta = trial;
        t = tt;
        value = v;
        moved = true;
        break;
      }
      step /= 2;
    }
    if (!moved) break;
  }
  result.t = t;
  result.value = value;
  return result;
}

Real g_poly(const Real& x, int d, int k) {
  require_open_unit(x, "x");
  if (d < 2) throw InputError("g needs d >= 2");
  PrecisionScope scope;
  const Real ratio = pow((1 - x) / x, Real(1 - d) / d);
  Real total = 0;
  Real power = 1;
  for (int j = 1; j < k; ++j) {
    power *= ratio;
    total += (k * x - j) * Real(binomial(k, j)) * power;
  }
  return total;
}

Real g_poly_factored(const Real& x, int d, int k) {
  require_open_unit(x, "x");
  if (d < 2) throw InputError("g needs d >= 2");
  PrecisionScope scope;
  const Real y = pow((1 - x) / x, Real(1 - d) / d);
  return k * ((x * (1 + y) - y) * pow(1 + y, k - 1) - x + (1 - x) * pow(y, k));
}

Real delta_of_delta0(const Real& delta0, int k) {
  require_k(k);
  if (delta0 < 0 || delta0 > 1) throw InputError("delta_0 must lie in [0, 1]");
  PrecisionScope scope;
  const Real base = 1 - two_pow(2 - k);
  const Real numerator = delta0 * (base + pow(delta0 / 2, k - 1));
  const Real denominator = base + 2 * pow(delta0 / 2, k) + 2 * pow((1 - delta0) / 2, k);
  return numerator / denominator;
}

bool delta_map_monotone(int k) {
  require_k(k);
  static std::mutex mutex;
  static std::map<std::pair<int, unsigned>, bool> cache;
  const auto key = std::make_pair(k, working_precision_bits());
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  PrecisionScope scope;
  constexpr int points = 10000;
  bool monotone = true;
  Real previous = delta_of_delta0(Real(0), k);
  for (int i = 1; i <= points && monotone; ++i) {
    const Real current = delta_of_delta0(Real(i) / points, k);
    monotone = current > previous;
    previous = current;
  }
  std::lock_guard lock(mutex);
  cache[key] = monotone;
  return monotone;
}

Real delta0_of_delta(const Real& delta, int k) {
  require_k(k);
  if (delta < 0 || delta > 1) throw InputError("delta must lie in [0, 1]");
  if (!delta_map_monotone(k)) {
    throw NumericalError("delta(delta_0) is not increasing on [0, 1] for k=" + std::to_string(k));
  }
  PrecisionScope scope;
  if (delta == 0 || delta == 1) return delta;
  // Bracket around delta (delta_0 = delta + O(2^{-k})), widening as needed.
  Real width = 4 * two_pow(-k);
  Real lo;
  Real hi;
  for (;;) {
    lo = std::max(Real(0), Real(delta - width));
    hi = std::min(Real(1), Real(delta + width));
    if (delta_of_delta0(lo, k) <= delta && delta_of_delta0(hi, k) >= delta) break;
    width *= 2;
  }
  const Real resolution = two_pow(-static_cast<int>(working_precision_bits()) + 4);
  int iterations = 0;
  while (hi - lo > resolution) {
    if (++iterations > 200) break;
    const Real mid = (lo + hi) / 2;
    if (delta_of_delta0(mid, k) < delta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  Real x = (lo + hi) / 2;
  Real residual = delta_of_delta0(x, k) - delta;
  // Newton polish with a central-difference slope; kept only if it helps.
  const Real h = two_pow(-static_cast<int>(working_precision_bits()) / 2);
  for (int step = 0; step < 3; ++step) {
    const Real a = std::max(Real(0), Real(x - h));
    const Real b = std::min(Real(1), Real(x + h));
    const Real slope = (delta_of_delta0(b, k) - delta_of_delta0(a, k)) / (b - a);
    if (slope <= 0) break;
    const Real candidate = x - residual / slope;
    if (candidate < 0 || candidate > 1) break;
    const Real r = delta_of_delta0(candidate, k) - delta;
    if (abs(r) >= abs(residual)) break;
    x = candidate;
    residual = r;
  }
  if (abs(residual) > Real(1e-12)) {
    throw NumericalError("delta_0 inversion did not converge within 200 iterations");
  }
  return x;
}

Real psi(const Real& x, int d, int k) {
  require_k(k);
  if (x < 0 || x > 1) throw InputError("psi argument must lie in [0, 1]");
  PrecisionScope scope;
  return H2(x) + Real(d) / k * log_pair_factor(x, k);
}

Real psi0(const Real& delta, int d, int k) {
  require_k(k);
  if (delta < 0 || delta > 1) throw InputError("delta must lie in [0, 1]");
  PrecisionScope scope;
  if (delta == 0 || delta == 1) return Real(0);
  const Real delta0 = delta0_of_delta(delta, k);
  const Real closed = psi0_closed(delta, delta0, d, k);
  const Real route = psi0_route(delta, delta0, d, k);
  if (abs(closed - route) > Real(1e-9)) {
    throw NumericalError("psi_0 routes disagree at delta=" + to_string(delta, 20));
  }
  return closed;
}

Real psi0_alternate(const Real& delta, int d, int k) {
  require_k(k);
  if (delta < 0 || delta > 1) throw InputError("delta must lie in [0, 1]");
  PrecisionScope scope;
  if (delta == 0 || delta == 1) return Real(0);
  return psi0_route(delta, delta0_of_delta(delta, k), d, k);
}

PairTypeOptimum t_delta(const Real& delta, int k) {
  require_k(k);
  require_open_unit(delta, "delta");
  PrecisionScope scope;
  PairTypeOptimum out;
  out.delta = delta;
  out.delta0 = delta0_of_delta(delta, k);
  const Real same = (1 - out.delta0) / 2;
  const Real cross = out.delta0 / 2;
  out.C = 1 / (k * (1 - two_pow(2 - k) + 2 * pow(cross, k) + 2 * pow(same, k)));
  out.total = 0;
  out.marginal_chi = 0;
  out.marginal_chi2 = 0;
  out.p01 = 0;
  for (const auto& e : admissible_pair_types(k)) {
    const Real value = out.C * pow(same, e.e00 + e.e11) * pow(cross, e.e01 + e.e10) * Real(e.multinomial());
    out.total += value;
    out.marginal_chi += (e.e10 + e.e11) * value;
    out.marginal_chi2 += (e.e01 + e.e11) * value;
    out.p01 += e.e01 * value;
    out.t.emplace_back(e, value);
  }
  const Real tol = tolerance(1e-10);
  if (abs(out.total - Real(1) / k) > tol || abs(out.marginal_chi - Real(1) / 2) > tol ||
      abs(out.marginal_chi2 - Real(1) / 2) > tol || abs(out.p01 - delta / 2) > tol) {
    throw NumericalError("t_delta violates a membership constraint");
  }
  return out;
}

Real pair_F(const std::vector<std::pair<PairTypeMatrix, Real>>& t) {
  PrecisionScope scope;
  Real total = 0;
  for (const auto& [e, value] : t) {
    if (value < 0) throw DomainError("negative pair-type entry");
    if (value == 0) continue;
    total += -value * log(value) + value * log(Real(e.multinomial()));
  }
  return total;
}

KlReport kl_report(const Real& delta, int k) {
  require_k(k);
  if (!(delta > 0 && delta <= Real(1) / 2)) throw InputError("delta must lie in (0, 1/2]");
  PrecisionScope scope;
  KlReport out;
  out.delta = delta;
  out.delta0 = delta0_of_delta(delta, k);
  out.eps_hat = 1 - delta / out.delta0;
  out.entropy_gap = H2(out.delta0) - H0(delta, out.delta0);
  out.identity_rhs = out.delta0 * out.eps_hat * log((1 - out.delta0) / out.delta0);
  out.divergence = H0(delta, out.delta0) - H2(delta);
  if (abs(out.entropy_gap - out.identity_rhs) > Real(1e-10)) {
    throw NumericalError("entropy gap identity fails at delta=" + to_string(delta, 20));
  }
  if (out.divergence < -Real(1e-30)) throw NumericalError("negative relative entropy");
  return out;
}

Psi0Scan psi0_scan(int d, int k, int grid_points) {
  require_k(k);
  if (grid_points < 2) throw InputError("scan needs at least two grid points");
  PrecisionScope scope;
  Psi0Scan scan;
  scan.d = d;
  scan.k = k;
  scan.f = f_dk(d, k);
  const Real edge = pow(Real(2), Real(-k) / 2);
  const Real half = Real(1) / 2;
  const Real spacing = (1 - 2 * edge) / (grid_points - 1);
  const Real middle = Real(grid_points - 1) / 2;
  for (int i = 0; i < grid_points; ++i) {
    Psi0Point point;
    point.delta = half + (Real(i) - middle) * spacing;
    point.delta0 = delta0_of_delta(point.delta, k);
    point.psi0 = psi0_closed(point.delta, point.delta0, d, k);
    const Real route = psi0_route(point.delta, point.delta0, d, k);
    if (abs(point.psi0 - route) > Real(1e-9)) throw NumericalError("psi_0 routes disagree during scan");
    point.psi = psi(point.delta, d, k);
    scan.points.push_back(std::move(point));
  }
  scan.argmax = 0;
  for (std::size_t i = 1; i < scan.points.size(); ++i) {
    if (scan.points[i].psi0 > scan.points[scan.argmax].psi0) scan.argmax = i;
  }
  std::optional<Real> second;
  for (std::size_t i = 0; i < scan.points.size(); ++i) {
    if (i == scan.argmax) continue;
    if (!second || scan.points[i].psi0 > *second) second = scan.points[i].psi0;
  }
  scan.margin = scan.points[scan.argmax].psi0 - second.value_or(scan.points[scan.argmax].psi0);
  scan.max_asymmetry = 0;
  const auto n = scan.points.size();
  for (std::size_t i = 0; i < n; ++i) {
    scan.max_asymmetry = std::max(scan.max_asymmetry, Real(abs(scan.points[i].psi0 - scan.points[n - 1 - i].psi0)));
  }
  if (grid_points % 2 == 1) {
    const Real& at_half = scan.points[n / 2].psi0;
    for (const auto& point : scan.points) {
      if (point.psi0 > at_half) scan.below_half = false;
    }
  }
  return scan;
}

void write_psi0_csv(std::ostream& out, const Psi0Scan& scan, int digits) {
  out << "delta,delta0,psi0,psi,f_dk\n";
  for (const auto& p : scan.points) {
    out << to_string(p.delta, digits) << ',' << to_string(p.delta0, digits) << ',' << to_string(p.psi0, digits)
        << ',' << to_string(p.psi, digits) << ',' << to_string(scan.f, digits) << '\n';
  }
}

Real r_of_eta(int k, const Real& eta) {
  require_k(k);
  PrecisionScope scope;
  const Real ln2 = log2_real();
  return ln2 / 2 * two_pow(k) - (1 + ln2) / 2 + eta;
}

EtaRounding d_of_eta(int k, const Real& eta) {
  PrecisionScope scope;
  EtaRounding out;
  const Real rk = r_of_eta(k, eta) * k;
  const Real rounded = floor(rk + Real(1) / 2);
  if (rounded < 1 || rounded > Real(std::numeric_limits<int>::max())) {
    throw DomainError("eta gives no valid generator count at k=" + std::to_string(k));
  }
  out.d = rounded.convert_to<int>();
  out.eta_prime = Real(out.d) / k - (r_of_eta(k, Real(0)));
  out.valid = out.eta_prime > 0 && out.eta_prime < (1 - log2_real()) / 2;
  return out;
}

Real binomial_tail(std::int64_t n, const Real& p, std::int64_t j) {
  if (n < 0 || p < 0 || p > 1) throw InputError("invalid binomial parameters");
  PrecisionScope scope;
  if (j <= 0) return Real(1);
  if (j > n) return Real(0);
  if (p == 0) return Real(0);
  if (p == 1) return Real(1);
  const Real log_p = log(p);
  const Real log_q = log1p(-p);
  const Real lg_n = boost::math::lgamma(Real(n + 1));
  auto log_pmf = [&](std::int64_t i) {
    return lg_n - boost::math::lgamma(Real(i + 1)) - boost::math::lgamma(Real(n - i + 1)) + i * log_p +
           (n - i) * log_q;
  };
  const Real mean = n * p;
  if (Real(j) <= mean) {
    // 1 - P(X < j), the lower sum being the short one.
    Real lower = 0;
    for (std::int64_t i = 0; i < j; ++i) lower += exp(log_pmf(i));
    return 1 - lower;
  }
  Real upper = 0;
  const Real cutoff = two_pow(-static_cast<int>(working_precision_bits()) - 8);
  for (std::int64_t i = j; i <= n; ++i) {
    const Real term = exp(log_pmf(i));
    upper += term;
    if (Real(i) > mean && term < cutoff * upper) break;
  }
  return upper;
}

FixedPointTrace core_fixed_point(int d, int k, const Real& tol, int max_levels) {
  if (d < 1) throw InputError("d must be at least 1");
  require_k(k);
  if (!(tol > 0)) throw InputError("tolerance must be positive");
  PrecisionScope scope;
  FixedPointTrace trace;
  const Real l0 = lambda0(k);
  trace.p.push_back(l0);
  for (int level = 0; level < max_levels; ++level) {
    const Real next = l0 * pow(binomial_tail(d - 1, trace.p.back(), 3), k - 1);
    if (next > trace.p.back()) throw NumericalError("fixed-point iteration increased");
    const bool done = abs(next - trace.p.back()) < tol;
    trace.p.push_back(next);
    if (done) {
      trace.converged = true;
      break;
    }
  }
  trace.p_inf = trace.p.back();
  trace.mu_core = binomial_tail(d, trace.p_inf, 3);
  trace.mu_core_attached = 1 - pow(1 - trace.p_inf, d);
  return trace;
}

Real tree_core_mass(int d, int k, int level) {
  if (level < 1) throw InputError("level must be at least 1");
  PrecisionScope scope;
  const auto trace = core_fixed_point(d, k, Real(0) + two_pow(-100000), level - 1);
  return binomial_tail(d, trace.p[std::min<std::size_t>(level - 1, trace.p.size() - 1)], 3);
}

Real tree_core_attached_mass(int d, int k, int level) {
  if (level < 1) throw InputError("level must be at least 1");
  PrecisionScope scope;
  const auto trace = core_fixed_point(d, k, Real(0) + two_pow(-100000), level - 1);
  return 1 - pow(1 - trace.p[std::min<std::size_t>(level - 1, trace.p.size() - 1)], d);
}

}  // namespace sofic
