#pragma once

// Closed-form counts of k-partitions with a prescribed colour type, for one
// colouring (type vectors) and for a pair of colourings (pair-type maps).

#include <array>
#include <cstdint>
#include <vector>

#include "sofic/hypergraph.hpp"
#include "sofic/numeric.hpp"

namespace sofic {

/// counts[j] = number of parts with exactly j vertices of colour 1; the type
/// value is counts[j] / n.
struct TypeVector {
  int n = 0;
  int k = 0;
  std::vector<std::int64_t> counts;

  Rational value(int j) const { return make_rational(counts.at(j), n); }
  /// Number of colour-1 vertices, n * p(t).
  std::int64_t ones() const;
  /// p(t) = sum_j j t_j.
  Rational mean() const { return make_rational(ones(), n); }
  bool bichromatic() const { return counts.front() == 0 && counts.back() == 0; }
  void validate() const;

  friend bool operator==(const TypeVector&, const TypeVector&) = default;
  friend auto operator<=>(const TypeVector&, const TypeVector&) = default;
};

TypeVector type_from_values(int n, int k, const std::vector<Rational>& values);

/// All types of k-partitions of [n] with the given number of colour-1
/// vertices, optionally restricted to t_0 = t_k = 0. Throws ScaleError once
/// more than max_types types exist.
inline constexpr std::size_t kMaxTypes = 500'000;
std::vector<TypeVector> enumerate_types(int n, int k, std::int64_t ones, bool bichromatic_only,
                                        std::size_t max_types = kMaxTypes);

/// (pn)! ((1-p)n)! / prod_j [j!^{t_j n} (k-j)!^{t_j n} (t_j n)!].
BigInt count_partitions_of_type(const TypeVector& t);
/// Same count; checks that chi has n p(t) ones.
BigInt count_partitions_of_type(const Coloring& chi, const TypeVector& t);

/// Sizes |chi^{-1}(i) ∩ chi2^{-1}(j)| indexed 2i + j.
using CellSizes = std::array<std::int64_t, 4>;
CellSizes overlap_cells(const Coloring& chi, const Coloring& chi2);
/// Cells of two equitable colourings at Hamming distance 2m / n.
CellSizes equitable_cells(int n, std::int64_t m);

/// Number of k-partitions of type (chi, chi2, t):
///   prod_ij n_ij! / prod_e (t(e) n)! / prod_{ij,e} e_ij!^{t(e) n}.
/// Throws DomainError naming the violated marginal when p^t differs from the
/// cell sizes.
BigInt count_pair_partitions(int k, const CellSizes& cells, const PairTypeCounts& t);
BigInt count_pair_partitions(int k, const Coloring& chi, const Coloring& chi2, const PairTypeCounts& t);

/// Every pair-type count map compatible with the cell sizes.
std::vector<PairTypeCounts> enumerate_pair_types(int k, const CellSizes& cells);

}  // namespace sofic
