#include "sofic/structure.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "sofic/errors.hpp"
#include "sofic/exact_count.hpp"
#include "sofic/search.hpp"

namespace sofic {
namespace {

struct Supports {
  std::vector<int> support_of;  // per edge, -1 when not critical
  std::vector<std::vector<int>> supported;
};

Supports compute_supports(const LabeledHypergraph& g, const Coloring& chi) {
  if (chi.size() != g.n()) throw InputError("colouring has the wrong length");
  if (g.k() < 3) throw DomainError("core machinery needs k >= 3");
  if (!is_proper(g, chi)) throw DomainError("core decomposition needs a proper colouring");
  Supports s;
  s.support_of.assign(g.edge_count(), -1);
  s.supported.assign(g.n(), {});
  for (const auto& c : critical_edges(g, chi)) {
    s.support_of[c.edge] = c.support;
    s.supported[c.support].push_back(c.edge);
  }
  return s;
}

// A' from the anchored supported edges of A-vertices: two supports collide
// when their anchored edges share a vertex.
std::vector<std::uint8_t> overcounted_from(const LabeledHypergraph& g, const Supports& s,
                                           const std::vector<std::uint8_t>& attached,
                                           const std::vector<std::uint8_t>& anchored_edge) {
  std::vector<std::uint8_t> out(g.n(), 0);
  std::vector<std::vector<int>> touching(g.n());
  for (int e = 0; e < g.edge_count(); ++e) {
    const int v = s.support_of[e];
    if (v < 0 || !anchored_edge[e] || !attached[v]) continue;
    for (int u : g.edge(e)) touching[u].push_back(v);
  }
  for (auto& list : touching) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    if (list.size() < 2) continue;
    for (int v : list) out[v] = 1;
  }
  return out;
}

bool settle(CoreDecomposition& out) {
  const auto& L = out.levels;
  const int last = static_cast<int>(L.size()) - 1;
  if (last >= 2 && L[last] == L[last - 1] && L[last - 1] == L[last - 2]) {
    out.stabilized_at = last - 2;
    return true;
  }
  return false;
}

}  // namespace

const CoreLevel& CoreDecomposition::level(int l) const {
  if (l < 0) throw InputError("level must be non-negative");
  if (l < static_cast<int>(levels.size())) return levels[l];
  if (!stabilized_at) throw InputError("level " + std::to_string(l) + " was not computed");
  return levels.back();
}

CoreDecomposition core_decomposition(const LabeledHypergraph& g, const Coloring& chi, int l_max) {
  if (l_max < 0) throw InputError("l_max must be non-negative");
  const auto s = compute_supports(g, chi);
  const int n = g.n();
  CoreDecomposition out;
  CoreLevel level0{std::vector<std::uint8_t>(n, 1), std::vector<std::uint8_t>(n, 0),
                   std::vector<std::uint8_t>(n, 0)};
  out.levels.push_back(level0);
  // broken[e]: vertices of e \ support outside the previous core. Against C_0
  // every critical edge is anchored.
  std::vector<int> broken(g.edge_count(), 0);
  std::vector<std::uint8_t> anchored(g.edge_count(), 0);
  std::vector<int> anchored_count(n, 0);
  for (int e = 0; e < g.edge_count(); ++e) {
    if (s.support_of[e] >= 0) {
      anchored[e] = 1;
      ++anchored_count[s.support_of[e]];
    }
  }
  for (int l = 1; l <= l_max; ++l) {
    const auto& previous = out.levels.back().core;
    CoreLevel next;
    next.core.assign(n, 0);
    next.attached.assign(n, 0);
    for (int v = 0; v < n; ++v) {
      next.core[v] = previous[v] && anchored_count[v] >= 3;
      next.attached[v] = !next.core[v] && anchored_count[v] >= 1;
    }
    next.overcounted = overcounted_from(g, s, next.attached, anchored);
    // Vertices leaving the core break the anchoring of edges they belong to.
    for (int u = 0; u < n; ++u) {
      if (!previous[u] || next.core[u]) continue;
      for (int e : g.edges_at(u)) {
        const int support = s.support_of[e];
        if (support < 0 || support == u) continue;
        if (broken[e]++ == 0) {
          anchored[e] = 0;
          --anchored_count[support];
        }
      }
    }
    out.levels.push_back(std::move(next));
    const auto& L = out.levels;
    for (int v = 0; v < n; ++v) {
      if (L.back().core[v] && !L[L.size() - 2].core[v]) throw NumericalError("core is not nested");
    }
    if (settle(out)) break;
  }
  return out;
}

CoreDecomposition core_decomposition_reference(const LabeledHypergraph& g, const Coloring& chi, int l_max) {
  if (l_max < 0) throw InputError("l_max must be non-negative");
  const auto s = compute_supports(g, chi);
  const int n = g.n();
  auto anchored_in = [&](int e, const std::vector<std::uint8_t>& core) {
    for (int u : g.edge(e)) {
      if (u != s.support_of[e] && !core[u]) return false;
    }
    return true;
  };
  CoreDecomposition out;
  out.levels.push_back({std::vector<std::uint8_t>(n, 1), std::vector<std::uint8_t>(n, 0),
                        std::vector<std::uint8_t>(n, 0)});
  for (int l = 1; l <= l_max; ++l) {
    const auto previous = out.levels.back().core;
    CoreLevel next{std::vector<std::uint8_t>(n, 0), std::vector<std::uint8_t>(n, 0),
                   std::vector<std::uint8_t>(n, 0)};
    for (int v = 0; v < n; ++v) {
      int count = 0;
      for (int e : s.supported[v]) count += anchored_in(e, previous);
      next.core[v] = count >= 3;
    }
    for (int v = 0; v < n; ++v) {
      if (next.core[v]) continue;
      for (int e : s.supported[v]) {
        if (anchored_in(e, previous)) next.attached[v] = 1;
      }
    }
    for (int v = 0; v < n; ++v) {
      if (!next.attached[v]) continue;
      for (int w = 0; w < n && !next.overcounted[v]; ++w) {
        if (w == v || !next.attached[w]) continue;
        for (int ev : s.supported[v]) {
          if (!anchored_in(ev, previous)) continue;
          for (int ew : s.supported[w]) {
            if (!anchored_in(ew, previous)) continue;
            const auto a = g.edge(ev);
            const auto b = g.edge(ew);
            for (int x : a) {
              if (std::find(b.begin(), b.end(), x) != b.end()) next.overcounted[v] = 1;
            }
          }
        }
      }
    }
    out.levels.push_back(std::move(next));
    if (settle(out)) break;
  }
  return out;
}

Rational density_of(const CoreLevel& level) {
  std::int64_t count = 0;
  const auto n = static_cast<std::int64_t>(level.core.size());
  for (std::int64_t v = 0; v < n; ++v) {
    count += level.core[v] || (level.attached[v] && !level.overcounted[v]);
  }
  return make_rational(count, n);
}

Rational density_report(const LabeledHypergraph& g, const Coloring& chi, int level) {
  return density_of(core_decomposition(g, chi, level).level(level));
}

std::vector<std::vector<int>> supported_edges(const LabeledHypergraph& g, const Coloring& chi) {
  if (g.k() < 3) throw DomainError("supported edges need k >= 3");
  std::vector<std::vector<int>> out(g.n());
  for (const auto& c : critical_edges(g, chi)) out[c.support].push_back(c.edge);
  return out;
}

int expansion_edge_count(const LabeledHypergraph& g, const std::vector<std::vector<int>>& supported,
                         const std::vector<int>& T) {
  std::vector<int> edges;
  for (int v : T) edges.insert(edges.end(), supported[v].begin(), supported[v].end());
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  int count = 0;
  for (int e : edges) {
    int inside = 0;
    for (int u : g.edge(e)) inside += std::find(T.begin(), T.end(), u) != T.end();
    count += inside >= 2;
  }
  return count;
}

ExpansivityReport expansivity_scan(const LabeledHypergraph& g, const Coloring& chi, int t_max,
                                   int random_trials, Rng& rng) {
  if (t_max < 1) throw InputError("t_max must be at least 1");
  if (chi.size() != g.n()) throw InputError("colouring has the wrong length");
  const auto supported = supported_edges(g, chi);
  const int n = g.n();
  ExpansivityReport report;
  report.t_max = t_max;
  report.max_excess = INT32_MIN;
  std::vector<int> T;
  std::function<void(int)> extend = [&](int from) {
    if (!T.empty()) {
      ++report.subsets_checked;
      const int excess = expansion_edge_count(g, supported, T) - 2 * static_cast<int>(T.size());
      if (excess > report.max_excess) {
        report.max_excess = excess;
        report.worst_set = T;
      }
      if (excess > 0) {
        ++report.violations;
        if (!report.first_violation) report.first_violation = T;
      }
    }
    if (static_cast<int>(T.size()) == t_max) return;
    for (int v = from; v < n; ++v) {
      T.push_back(v);
      extend(v + 1);
      T.pop_back();
    }
  };
  extend(0);

  report.size_cap = cluster_radius(n, g.k());
  report.random_trials = random_trials;
  report.random_max_excess = report.max_excess;
  // Seeds: pairs inside a common supported edge.
  std::vector<std::pair<int, int>> seeds;
  for (int v = 0; v < n; ++v) {
    for (int e : supported[v]) {
      for (int u : g.edge(e)) {
        if (u != v) seeds.emplace_back(v, u);
      }
    }
  }
  if (seeds.empty() || report.size_cap <= t_max) return report;
  for (int trial = 0; trial < random_trials; ++trial) {
    const auto [a, b] = seeds[rng.below(seeds.size())];
    std::vector<int> current{a, b};
    while (static_cast<int>(current.size()) < report.size_cap) {
      // Candidates: vertices of edges supported by the current set.
      std::set<int> candidates;
      for (int v : current) {
        for (int e : supported[v]) {
          for (int u : g.edge(e)) candidates.insert(u);
        }
      }
      for (int v : current) candidates.erase(v);
      if (candidates.empty()) break;
      int best_gain = INT32_MIN;
      std::vector<int> best;
      const int base = expansion_edge_count(g, supported, current);
      for (int u : candidates) {
        current.push_back(u);
        const int gain = expansion_edge_count(g, supported, current) - base;
        current.pop_back();
        if (gain > best_gain) {
          best_gain = gain;
          best = {u};
        } else if (gain == best_gain) {
          best.push_back(u);
        }
      }
      current.push_back(best[rng.below(best.size())]);
      const int excess = expansion_edge_count(g, supported, current) - 2 * static_cast<int>(current.size());
      report.random_max_excess = std::max(report.random_max_excess, excess);
      if (excess > 0 && !report.random_violation) {
        auto sorted = current;
        std::sort(sorted.begin(), sorted.end());
        report.random_violation = sorted;
      }
    }
  }
  return report;
}

std::optional<Coloring> rigidity_violation_search(const LabeledHypergraph& g, const Coloring& chi,
                                                  const std::vector<int>& R, const Rational& rho) {
  if (chi.size() != g.n()) throw InputError("colouring has the wrong length");
  if (rho < 0) throw InputError("rho must be non-negative");
  if (g.n() > 40) throw ScaleError("rigidity search is limited to n <= 40, got n=" + std::to_string(g.n()));
  // ceil(rho n) <= m <= floor(2^{-k/2} n).
  const Rational scaled = rho * g.n();
  BigInt lo = numerator(scaled) / denominator(scaled);
  if (Rational(lo) < scaled) ++lo;
  const int hi = cluster_radius(g.n(), g.k());
  if (lo > hi) return std::nullopt;
  SearchOptions options;
  options.reference = &chi;
  options.mask.assign(g.n(), 0);
  for (int v : R) {
    if (v < 0 || v >= g.n()) throw InputError("vertex outside the hypergraph");
    options.mask[v] = 1;
  }
  options.hamming_lo = lo.convert_to<int>();
  options.hamming_hi = hi;
  std::optional<Coloring> witness;
  enumerate_colorings(g, options, [&](const Coloring& c) {
    witness = c;
    return false;
  });
  return witness;
}

}  // namespace sofic
