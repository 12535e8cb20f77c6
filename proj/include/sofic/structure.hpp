#pragma once

// Core / attachment decomposition of a proper colouring, expansivity scans and
// rigidity violation search. All of these need k >= 3 so that every critical
// edge has a unique supporting vertex.

#include <cstdint>
#include <optional>
#include <vector>

#include "sofic/hypergraph.hpp"
#include "sofic/numeric.hpp"
#include "sofic/rng.hpp"

namespace sofic {

/// Membership vectors indexed by vertex.
struct CoreLevel {
  std::vector<std::uint8_t> core;         // C_l
  std::vector<std::uint8_t> attached;     // A_l
  std::vector<std::uint8_t> overcounted;  // A'_l
  friend bool operator==(const CoreLevel&, const CoreLevel&) = default;
};

struct CoreDecomposition {
  std::vector<CoreLevel> levels;
  /// First level l with levels l, l+1, l+2 identical.
  std::optional<int> stabilized_at;
  /// Level l, or the stable level when l lies beyond the computed range.
  const CoreLevel& level(int l) const;
};

/// C_0 = V, C_{l+1} = {v : v supports >= 3 edges e with e \ v ⊆ C_l};
/// A_l = {v ∉ C_l : some edge supported by v has e \ v ⊆ C_{l-1}}, A_0 = ∅;
/// A'_l = {v ∈ A_l : such edges of v and of some other w ∈ A_l intersect}.
/// Computes levels 0..l_max, stopping early once stabilized.
CoreDecomposition core_decomposition(const LabeledHypergraph& g, const Coloring& chi, int l_max);
/// Recomputes every level directly from the definitions.
CoreDecomposition core_decomposition_reference(const LabeledHypergraph& g, const Coloring& chi, int l_max);

/// |C_l ∪ A_l \ A'_l| / n.
Rational density_report(const LabeledHypergraph& g, const Coloring& chi, int level);
Rational density_of(const CoreLevel& level);

struct ExpansivityReport {
  int t_max = 0;
  std::int64_t subsets_checked = 0;
  /// max |E_T| - 2|T| over non-empty T with |T| <= t_max, and the first T in
  /// lexicographic order attaining it.
  int max_excess = 0;
  std::vector<int> worst_set;
  std::int64_t violations = 0;
  std::optional<std::vector<int>> first_violation;
  /// Greedy randomized growth beyond t_max, up to size_cap; heuristic.
  int size_cap = 0;
  int random_trials = 0;
  int random_max_excess = 0;
  std::optional<std::vector<int>> random_violation;
};

/// E_T = edges supported by some v ∈ T that meet T in at least two vertices.
int expansion_edge_count(const LabeledHypergraph& g, const std::vector<std::vector<int>>& supported,
                         const std::vector<int>& T);
/// supported[v] lists the edges supported by v.
std::vector<std::vector<int>> supported_edges(const LabeledHypergraph& g, const Coloring& chi);

ExpansivityReport expansivity_scan(const LabeledHypergraph& g, const Coloring& chi, int t_max,
                                   int random_trials, Rng& rng);

/// A proper colouring disagreeing with chi on between rho n and 2^{-k/2} n
/// vertices of R, or none when R is rho-rigid. Limited to n <= 40.
std::optional<Coloring> rigidity_violation_search(const LabeledHypergraph& g, const Coloring& chi,
                                                  const std::vector<int>& R, const Rational& rho);

}  // namespace sofic
