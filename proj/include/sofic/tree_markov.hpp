#pragma once

// The Markov measure mu on proper colourings of the Cayley hyper-tree of
// (Z/kZ)^{*d}: finite domains, proper-pattern counts Q(D), cylinder masses,
// exact sampling, pullback names and local statistics of finite models.

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "sofic/group.hpp"
#include "sofic/hypergraph.hpp"
#include "sofic/numeric.hpp"
#include "sofic/rng.hpp"

namespace sofic {

/// A coset g<s_i>; members[j] = base s_i^j. `anchor` is the member already in
/// the domain when the edge was attached (the identity for the first edge).
struct TreeEdge {
  int generator = 0;
  std::vector<int> members;
  int anchor = 0;
};

/// A connected union of hyper-edges containing the identity, or {1}. Element
/// 0 is the identity; element i > 0 equals parent[i] * s_{step[i].generator}^{step[i].exponent}.
class TreeDomain {
 public:
  const ModelParams& params() const { return params_; }
  std::size_t size() const { return elements_.size(); }
  const std::vector<ReducedWord>& elements() const { return elements_; }
  const std::vector<TreeEdge>& edges() const { return edges_; }
  int parent(int element) const { return parent_[element]; }
  const Syllable& step(int element) const { return step_[element]; }
  /// Index of w, or -1.
  int index_of(const ReducedWord& w) const;

 private:
  friend class DomainBuilder;
  ModelParams params_;
  std::vector<ReducedWord> elements_;
  std::vector<TreeEdge> edges_;
  std::vector<int> parent_;
  std::vector<Syllable> step_;
  std::map<ReducedWord, int> index_;
};

/// All hyper-edges within `radius` edge layers of the identity.
TreeDomain build_ball(const ModelParams& params, int radius, std::size_t max_elements = 2'000'000);
/// The union of the given cosets (member word, generator); must be connected
/// and contain the identity. An empty list gives {1}.
TreeDomain make_domain(const ModelParams& params, const std::vector<std::pair<ReducedWord, int>>& cosets);

using Pattern = std::vector<std::uint8_t>;

bool is_proper_pattern(const TreeDomain& D, const Pattern& xi);
/// Q(D) by the recursion Q(e) = 2^k - 2, Q(D ∪ e) = Q(D)(2^{k-1} - 1).
BigInt count_proper_patterns(const TreeDomain& D);
/// Exhaustive count; limited to 20 elements.
BigInt count_proper_patterns_brute(const TreeDomain& D);
/// Every proper pattern; limited to 20 elements.
std::vector<Pattern> proper_patterns(const TreeDomain& D);

struct CylinderProbability {
  Rational probability;
  bool proper = true;  // false: the cylinder is empty and probability is 0
};
CylinderProbability cylinder_probability(const TreeDomain& D, const Pattern& xi);

/// Exact draw from mu restricted to D: a fair root bit, then each edge in
/// attachment order completed uniformly among the 2^{k-1} - 1 colourings of
/// its other members that keep it bichromatic.
Pattern sample_mu_pattern(const TreeDomain& D, Rng& rng);

struct Pullback {
  Pattern pattern;
  std::vector<int> vertices;  // sigma(g^{-1}) v per element
  bool proper = true;
  bool injective = true;
};
/// g -> c[sigma(g^{-1}) v] on D.
Pullback pullback_pattern(const UniformHom& hom, const Coloring& c, int v, const TreeDomain& D);

struct LocalConvergence {
  std::int64_t matches = 0;
  std::int64_t improper = 0;
  std::int64_t non_injective = 0;
  int n = 0;
  Rational frequency;  // matches / n
  Rational reference;  // 1 / Q(D)
};
LocalConvergence local_convergence_stat(const UniformHom& hom, const Coloring& chi, const TreeDomain& D,
                                        const Pattern& xi);

struct TreeCoreEstimate {
  std::int64_t samples = 0;
  std::int64_t in_core = 0;
  std::int64_t in_attached = 0;
  std::int64_t in_overcounted = 0;
  double mean = 0;    // P(1 ∈ C_l ∪ A_l \ A'_l)
  double standard_error = 0;
};
/// Monte Carlo estimate of mu(C_l ∪ A_l \ A'_l) at the identity. The tree is
/// sampled lazily, so every coset the definitions reach is drawn exactly
/// from mu and no depth truncation is involved.
TreeCoreEstimate estimate_tree_core_density(int d, int k, int level, std::int64_t samples, Rng& rng);

}  // namespace sofic
