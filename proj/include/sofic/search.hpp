#pragma once

// Backtracking search over 2-colourings of a labelled hypergraph. Vertices are
// chosen by the number of incident edges that are not yet bichromatic; a
// vertex whose colour is forced by an edge with k-1 equal colours is always
// taken first once the violation budget is spent.

#include <climits>
#include <cstdint>
#include <functional>
#include <vector>

#include "sofic/hypergraph.hpp"
#include "sofic/numeric.hpp"

namespace sofic {

struct SearchOptions {
  /// Maximum number of monochromatic edges.
  std::int64_t violation_budget = 0;
  /// Restrict to colourings with exactly n/2 ones.
  bool equitable = false;
  /// With a reference colouring, the number of disagreements on the masked
  /// vertices (all vertices when mask is empty) must lie in [lo, hi].
  const Coloring* reference = nullptr;
  std::vector<std::uint8_t> mask;
  int hamming_lo = 0;
  int hamming_hi = INT_MAX;
};

/// Number of colourings satisfying the options. Once every edge is
/// bichromatic the remaining free vertices are counted in closed form.
BigInt count_colorings(const LabeledHypergraph& g, const SearchOptions& options);

/// Calls visit on each satisfying colouring in search order; stops early when
/// visit returns false. Returns false if stopped early.
bool enumerate_colorings(const LabeledHypergraph& g, const SearchOptions& options,
                         const std::function<bool(const Coloring&)>& visit);

}  // namespace sofic
