#include "sofic/exact_count.hpp"

#include <chrono>

#include "sofic/errors.hpp"
#include "sofic/search.hpp"

namespace sofic {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_scale(const LabeledHypergraph& g, int bound, const char* what) {
  if (g.n() > bound) {
    throw ScaleError(std::string(what) + " is limited to n <= " + std::to_string(bound) + ", got n=" +
                     std::to_string(g.n()));
  }
}

void require_proper_equitable(const LabeledHypergraph& g, const Coloring& chi) {
  if (chi.size() != g.n()) throw InputError("colouring has the wrong length");
  if (!chi.equitable()) throw DomainError("colouring is not equitable");
  if (!is_proper(g, chi)) throw DomainError("colouring is not proper");
}

}  // namespace

std::string to_string(CountMethod method) {
  return method == CountMethod::enumeration ? "enumeration" : "closed_form";
}

CountReport count_proper(const LabeledHypergraph& g, const Rational& eps, const CountBounds& bounds) {
  if (eps < 0) throw InputError("eps must be non-negative");
  const auto start = Clock::now();
  const auto budget = violation_budget(eps, g.n());
  if (budget >= g.edge_count()) {
    return {ipow(BigInt(2), static_cast<unsigned>(g.n())), CountMethod::closed_form, seconds_since(start)};
  }
  check_scale(g, eps > 0 ? bounds.max_n_violations : bounds.max_n_exact, "counting");
  SearchOptions options;
  options.violation_budget = budget;
  return {count_colorings(g, options), CountMethod::enumeration, seconds_since(start)};
}

CountReport count_equitable(const LabeledHypergraph& g, const CountBounds& bounds) {
  const auto start = Clock::now();
  check_scale(g, bounds.max_n_exact, "counting");
  if (g.n() % 2 != 0) return {BigInt(0), CountMethod::closed_form, seconds_since(start)};
  SearchOptions options;
  options.equitable = true;
  return {count_colorings(g, options), CountMethod::enumeration, seconds_since(start)};
}

CountReport count_at_distance(const LabeledHypergraph& g, const Coloring& chi, const Rational& delta,
                              const CountBounds& bounds) {
  require_proper_equitable(g, chi);
  if (delta < 0 || delta > 1) throw InputError("delta must lie in [0, 1]");
  const Rational half_count = delta * g.n() / 2;
  if (denominator(half_count) != 1) throw DomainError("delta n / 2 must be an integer");
  const auto start = Clock::now();
  check_scale(g, bounds.max_n_exact, "counting");
  const int h = 2 * numerator(half_count).convert_to<int>();
  SearchOptions options;
  options.equitable = true;
  options.reference = &chi;
  options.hamming_lo = h;
  options.hamming_hi = h;
  return {count_colorings(g, options), CountMethod::enumeration, seconds_since(start)};
}

int cluster_radius(int n, int k) {
  // h <= 2^{-k/2} n  <=>  h^2 2^k <= n^2.
  const BigInt limit = BigInt(n) * n;
  const BigInt scale = ipow(BigInt(2), static_cast<unsigned>(k));
  int h = 0;
  while (BigInt(h + 1) * (h + 1) * scale <= limit) ++h;
  return h;
}

std::vector<Coloring> proper_equitable_colorings(const LabeledHypergraph& g, const CountBounds& bounds) {
  check_scale(g, bounds.max_n_exact, "enumeration");
  std::vector<Coloring> out;
  if (g.n() % 2 != 0) return out;
  SearchOptions options;
  options.equitable = true;
  enumerate_colorings(g, options, [&](const Coloring& c) {
    out.push_back(c);
    return true;
  });
  return out;
}

CountReport cluster_size(const LabeledHypergraph& g, const Coloring& chi, ClusterStrategy strategy,
                         const CountBounds& bounds) {
  require_proper_equitable(g, chi);
  const auto start = Clock::now();
  check_scale(g, bounds.max_n_exact, "counting");
  const int radius = cluster_radius(g.n(), g.k());
  if (strategy == ClusterStrategy::automatic) {
    // Search the Hamming ball when it is the smaller space.
    strategy = 4 * radius < g.n() ? ClusterStrategy::distance_bounded : ClusterStrategy::filter_all;
  }
  if (strategy == ClusterStrategy::distance_bounded) {
    SearchOptions options;
    options.equitable = true;
    options.reference = &chi;
    options.hamming_hi = radius;
    return {count_colorings(g, options), CountMethod::enumeration, seconds_since(start)};
  }
  BigInt total = 0;
  for (const auto& c : proper_equitable_colorings(g, bounds)) {
    if (hamming_count(c, chi) <= radius) ++total;
  }
  return {total, CountMethod::enumeration, seconds_since(start)};
}

void for_each_k_partition(int n, int k, const std::function<void(const std::vector<std::vector<int>>&)>& visit) {
  if (k < 1 || n % k != 0) throw InputError("k-partitions need k | n");
  std::vector<std::uint8_t> used(n, 0);
  std::vector<std::vector<int>> parts;
  std::function<void()> next_part;
  std::function<void(std::vector<int>&, int)> extend = [&](std::vector<int>& part, int from) {
    if (static_cast<int>(part.size()) == k) {
      parts.push_back(part);
      next_part();
      parts.pop_back();
      return;
    }
    for (int v = from; v < n; ++v) {
      if (used[v]) continue;
      used[v] = 1;
      part.push_back(v);
      extend(part, v + 1);
      part.pop_back();
      used[v] = 0;
    }
  };
  next_part = [&]() {
    int first = 0;
    while (first < n && used[first]) ++first;
    if (first == n) {
      visit(parts);
      return;
    }
    used[first] = 1;
    std::vector<int> part{first};
    extend(part, first + 1);
    used[first] = 0;
  };
  next_part();
}

Rational exact_first_moment(const ModelParams& params) {
  if (params.d < 0 || params.k < 2 || params.n < 1) throw InputError("invalid model parameters");
  if (params.n % params.k != 0) throw DomainError("k must divide n");
  if (params.n > 96) throw ScaleError("exact first moment is limited to n <= 96");
  const BigInt partitions = count_k_partitions(params.n, params.k);
  Rational total = 0;
  for (int m = 0; m <= params.n; ++m) {
    BigInt proper = 0;
    for (const auto& t : enumerate_types(params.n, params.k, m, /*bichromatic_only=*/true)) {
      proper += count_partitions_of_type(t);
    }
    if (params.d > 0 && proper == 0) continue;
    const Rational per_generator(proper, partitions);
    Rational term = binomial(params.n, m);
    for (int i = 0; i < params.d; ++i) term *= per_generator;
    total += term;
  }
  return total;
}

Rational exact_equitable_first_moment(const ModelParams& params) {
  params.require_equitable();
  if (params.n > 96) throw ScaleError("exact first moment is limited to n <= 96");
  BigInt proper = 0;
  for (const auto& t : enumerate_types(params.n, params.k, params.n / 2, true)) {
    proper += count_partitions_of_type(t);
  }
  const Rational per_generator(proper, count_k_partitions(params.n, params.k));
  Rational total = binomial(params.n, params.n / 2);
  for (int i = 0; i < params.d; ++i) total *= per_generator;
  return total;
}

Rational exact_planted_distance_moment(const ModelParams& params, const Rational& delta) {
  params.require_equitable();
  if (params.n > 60) throw ScaleError("exact planted moment is limited to n <= 60");
  if (delta < 0 || delta > 1) throw InputError("delta must lie in [0, 1]");
  const Rational half_count = delta * params.n / 2;
  if (denominator(half_count) != 1) throw DomainError("delta n / 2 must be an integer");
  const auto m = numerator(half_count).convert_to<std::int64_t>();
  BigInt single = 0;
  for (const auto& t : enumerate_types(params.n, params.k, params.n / 2, true)) {
    single += count_partitions_of_type(t);
  }
  BigInt joint = 0;
  for (const auto& t : enumerate_pair_types(params.k, equitable_cells(params.n, m))) {
    joint += count_pair_partitions(params.k, equitable_cells(params.n, m), t);
  }
  const Rational ratio(joint, single);
  const BigInt choices = binomial(params.n / 2, static_cast<unsigned>(m));
  Rational total = choices * choices;
  for (int i = 0; i < params.d; ++i) total *= ratio;
  return total;
}

bool is_good_coloring(const LabeledHypergraph& g, const Coloring& chi, const Rational& threshold,
                      const CountBounds& bounds) {
  if (chi.size() != g.n()) throw InputError("colouring has the wrong length");
  if (!chi.equitable() || !is_proper(g, chi)) return false;
  return Rational(cluster_size(g, chi, ClusterStrategy::automatic, bounds).value) <= threshold;
}

CountReport count_good(const LabeledHypergraph& g, const Rational& threshold, const CountBounds& bounds) {
  const auto start = Clock::now();
  const auto colorings = proper_equitable_colorings(g, bounds);
  const int radius = cluster_radius(g.n(), g.k());
  BigInt total = 0;
  for (const auto& c : colorings) {
    std::int64_t cluster = 0;
    for (const auto& other : colorings) cluster += hamming_count(c, other) <= radius;
    if (Rational(cluster) <= threshold) ++total;
  }
  return {total, CountMethod::enumeration, seconds_since(start)};
}

}  // namespace sofic
