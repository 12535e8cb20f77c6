#pragma once

// The generator-labelled k-uniform hypergraph G_sigma and the statistics of a
// 2-colouring on it.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <span>
#include <vector>

#include "sofic/group.hpp"
#include "sofic/numeric.hpp"

namespace sofic {

class Coloring {
 public:
  Coloring() = default;
  explicit Coloring(std::vector<std::uint8_t> bits);
  /// Parses a 0/1 string such as "0101".
  static Coloring from_string(const std::string& text);
  /// The equitable colouring 0^{n/2} 1^{n/2}.
  static Coloring first_half_zero(int n);

  int size() const { return static_cast<int>(bits_.size()); }
  int operator[](int v) const { return bits_[v]; }
  void set(int v, int color) { bits_[v] = static_cast<std::uint8_t>(color); }
  int count_ones() const;
  bool equitable() const { return 2 * count_ones() == size(); }
  Coloring flipped() const;
  const std::vector<std::uint8_t>& bits() const { return bits_; }
  std::string str() const;

  friend auto operator<=>(const Coloring&, const Coloring&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Edges are the generator orbits, ordered by label and then by smallest
/// vertex; the vertices of every edge are sorted.
class LabeledHypergraph {
 public:
  static LabeledHypergraph from_hom(const UniformHom& hom);

  int n() const { return n_; }
  int k() const { return k_; }
  int d() const { return d_; }
  int edge_count() const { return static_cast<int>(labels_.size()); }
  int label(int edge) const { return labels_[edge]; }
  std::span<const int> edge(int e) const {
    return {vertices_.data() + static_cast<std::size_t>(e) * k_, static_cast<std::size_t>(k_)};
  }
  /// The edge with the given label that contains v.
  int edge_of(int v, int label) const { return incidence_[static_cast<std::size_t>(v) * d_ + label]; }
  std::span<const int> edges_at(int v) const {
    return {incidence_.data() + static_cast<std::size_t>(v) * d_, static_cast<std::size_t>(d_)};
  }

 private:
  int n_ = 0;
  int k_ = 0;
  int d_ = 0;
  std::vector<int> labels_;
  std::vector<int> vertices_;
  std::vector<int> incidence_;
};

LabeledHypergraph build_hypergraph(const UniformHom& hom);

int monochromatic_edge_count(const LabeledHypergraph& g, const Coloring& c);
/// At most floor(eps * n) monochromatic edges.
bool is_eps_proper(const LabeledHypergraph& g, const Coloring& c, const Rational& eps);
bool is_proper(const LabeledHypergraph& g, const Coloring& c);
/// floor(eps * n), the violation budget for eps-properness.
std::int64_t violation_budget(const Rational& eps, int n);

struct CriticalEdge {
  int edge = 0;
  int support = 0;
  friend bool operator==(const CriticalEdge&, const CriticalEdge&) = default;
};

/// Edges in which exactly one vertex carries its colour. Requires k >= 3: at
/// k = 2 both endpoints of a bichromatic edge qualify and the support is
/// undefined.
std::vector<CriticalEdge> critical_edges(const LabeledHypergraph& g, const Coloring& c);

int hamming_count(const Coloring& a, const Coloring& b);
Rational hamming_distance(const Coloring& a, const Coloring& b);

/// e_ij = |P ∩ chi^{-1}(i) ∩ chi2^{-1}(j)|.
struct PairTypeMatrix {
  int e00 = 0;
  int e01 = 0;
  int e10 = 0;
  int e11 = 0;

  int total() const { return e00 + e01 + e10 + e11; }
  int at(int i, int j) const;
  /// Both colourings bichromatic on the part.
  bool admissible(int k) const;
  BigInt multinomial() const;

  friend auto operator<=>(const PairTypeMatrix&, const PairTypeMatrix&) = default;
};

/// Every admissible pair type for edge size k, in lexicographic order.
std::vector<PairTypeMatrix> admissible_pair_types(int k);

PairTypeMatrix pair_type_matrix(std::span<const int> part, const Coloring& chi, const Coloring& chi2);

/// Part counts per pair type for one generator; the type map is count / n.
using PairTypeCounts = std::map<PairTypeMatrix, std::int64_t>;
PairTypeCounts pair_type_counts(const LabeledHypergraph& g, const Coloring& chi,
                                const Coloring& chi2, int label);
std::map<PairTypeMatrix, Rational> pair_type_map(const LabeledHypergraph& g, const Coloring& chi,
                                                 const Coloring& chi2, int label);

/// T[i][j] * n counts the label-i edges with j vertices of colour 1.
class GeneratorTypeMatrix {
 public:
  GeneratorTypeMatrix(int n, int k, std::vector<std::vector<std::int64_t>> counts);

  int n() const { return n_; }
  int k() const { return k_; }
  int d() const { return static_cast<int>(counts_.size()); }
  std::int64_t count(int label, int j) const { return counts_[label][j]; }
  Rational value(int label, int j) const { return make_rational(counts_[label][j], n_); }
  const std::vector<std::vector<std::int64_t>>& counts() const { return counts_; }
  /// The common row mean sum_j j T[i][j] when every row agrees.
  std::optional<Rational> common_mean() const;
  bool proper() const;

 private:
  int n_;
  int k_;
  std::vector<std::vector<std::int64_t>> counts_;
};

GeneratorTypeMatrix generator_type(const LabeledHypergraph& g, const Coloring& chi);

}  // namespace sofic
