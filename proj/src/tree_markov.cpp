#include "sofic/tree_markov.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "sofic/errors.hpp"

namespace sofic {

int TreeDomain::index_of(const ReducedWord& w) const {
  const auto it = index_.find(w);
  return it == index_.end() ? -1 : it->second;
}

class DomainBuilder {
 public:
  explicit DomainBuilder(const ModelParams& params) {
    if (params.d < 1 || params.k < 2) throw InputError("tree domains need d >= 1 and k >= 2");
    domain_.params_ = params;
    add(ReducedWord{}, -1, Syllable{0, 0});
  }

  int add(const ReducedWord& w, int parent, Syllable step) {
    const int index = static_cast<int>(domain_.elements_.size());
    domain_.elements_.push_back(w);
    domain_.parent_.push_back(parent);
    domain_.step_.push_back(step);
    domain_.index_.emplace(w, index);
    return index;
  }

  // Attaches base<s_i> through the member with exponent anchor_exponent.
  void attach(const ReducedWord& base, int generator, int anchor_exponent, int anchor) {
    const auto& params = domain_.params_;
    TreeEdge edge;
    edge.generator = generator;
    edge.anchor = anchor;
    for (int j = 0; j < params.k; ++j) {
      if (j == anchor_exponent) {
        edge.members.push_back(anchor);
        continue;
      }
      const auto word = multiply(params, base, generator_power(params, generator, j));
      if (domain_.index_of(word) >= 0) throw InputError("coset meets the domain twice");
      const int offset = ((j - anchor_exponent) % params.k + params.k) % params.k;
      edge.members.push_back(add(word, anchor, Syllable{generator, offset}));
    }
    domain_.edges_.push_back(std::move(edge));
  }

  TreeDomain& domain() { return domain_; }

 private:
  TreeDomain domain_;
};

namespace {

// Splits g into base * s_i^r with the base not ending in generator i.
std::pair<ReducedWord, int> coset_base(const ModelParams& params, const ReducedWord& g, int generator) {
  if (g.last_generator() != generator) return {g, 0};
  const auto& syllables = g.syllables();
  std::vector<Letter> letters;
  for (std::size_t i = 0; i + 1 < syllables.size(); ++i) {
    letters.push_back({syllables[i].generator, syllables[i].exponent});
  }
  return {reduce_word(params, letters), syllables.back().exponent};
}

}  // namespace

TreeDomain build_ball(const ModelParams& params, int radius, std::size_t max_elements) {
  if (radius < 0) throw InputError("radius must be non-negative");
  DomainBuilder builder(params);
  auto& D = builder.domain();
  // Frontier entries: element index and the generator of the edge it came
  // through (-1 for the identity).
  std::vector<std::pair<int, int>> frontier{{0, -1}};
  for (int layer = 0; layer < radius; ++layer) {
    std::vector<std::pair<int, int>> next;
    for (const auto& [element, entry] : frontier) {
      for (int i = 0; i < params.d; ++i) {
        if (i == entry) continue;
        if (D.size() + static_cast<std::size_t>(params.k - 1) > max_elements) {
          throw ScaleError("ball exceeds the element budget of " + std::to_string(max_elements));
        }
        const ReducedWord base = D.elements()[element];
        builder.attach(base, i, 0, element);
        const auto& members = D.edges().back().members;
        for (int j = 1; j < params.k; ++j) next.emplace_back(members[j], i);
      }
    }
    frontier = std::move(next);
  }
  return std::move(D);
}

TreeDomain make_domain(const ModelParams& params, const std::vector<std::pair<ReducedWord, int>>& cosets) {
  DomainBuilder builder(params);
  auto& D = builder.domain();
  std::vector<std::pair<ReducedWord, int>> pending;
  std::set<std::pair<ReducedWord, int>> seen;
  for (const auto& [word, generator] : cosets) {
    if (generator < 0 || generator >= params.d) throw InputError("generator out of range");
    const auto base = coset_base(params, word, generator).first;
    if (seen.insert({base, generator}).second) pending.emplace_back(base, generator);
  }
  while (!pending.empty()) {
    bool progress = false;
    for (auto it = pending.begin(); it != pending.end();) {
      const auto& [base, generator] = *it;
      int anchor = -1;
      int anchor_exponent = -1;
      for (int j = 0; j < params.k && anchor < 0; ++j) {
        const int index = D.index_of(multiply(params, base, generator_power(params, generator, j)));
        if (index >= 0) {
          anchor = index;
          anchor_exponent = j;
        }
      }
      if (anchor < 0) {
        ++it;
        continue;
      }
      builder.attach(base, generator, anchor_exponent, anchor);
      it = pending.erase(it);
      progress = true;
    }
    if (!progress) throw InputError("cosets do not form a connected domain containing the identity");
  }
  return std::move(D);
}

bool is_proper_pattern(const TreeDomain& D, const Pattern& xi) {
  if (xi.size() != D.size()) throw InputError("pattern size does not match the domain");
  for (const auto& edge : D.edges()) {
    int ones = 0;
    for (int m : edge.members) ones += xi[m];
    if (ones == 0 || ones == static_cast<int>(edge.members.size())) return false;
  }
  return true;
}

BigInt count_proper_patterns(const TreeDomain& D) {
  const int k = D.params().k;
  const auto& edges = D.edges();
  if (edges.empty()) return 2;
  BigInt q = ipow(BigInt(2), k) - 2;
  // Each later edge meets the earlier ones only at its anchor.
  for (std::size_t i = 1; i < edges.size(); ++i) q *= ipow(BigInt(2), k - 1) - 1;
  return q;
}

std::vector<Pattern> proper_patterns(const TreeDomain& D) {
  if (D.size() > 20) throw ScaleError("pattern enumeration is limited to 20 elements");
  std::vector<Pattern> out;
  const std::uint32_t total = std::uint32_t{1} << D.size();
  Pattern xi(D.size());
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    for (std::size_t i = 0; i < D.size(); ++i) xi[i] = (mask >> i) & 1u;
    if (is_proper_pattern(D, xi)) out.push_back(xi);
  }
  return out;
}

BigInt count_proper_patterns_brute(const TreeDomain& D) { return BigInt(proper_patterns(D).size()); }

CylinderProbability cylinder_probability(const TreeDomain& D, const Pattern& xi) {
  if (!is_proper_pattern(D, xi)) return {Rational(0), false};
  return {Rational(BigInt(1), count_proper_patterns(D)), true};
}

Pattern sample_mu_pattern(const TreeDomain& D, Rng& rng) {
  const int k = D.params().k;
  Pattern xi(D.size(), 0);
  xi[0] = static_cast<std::uint8_t>(rng.below(2));
  const std::uint64_t completions = (std::uint64_t{1} << (k - 1)) - 1;
  for (const auto& edge : D.edges()) {
    const int c = xi[edge.anchor];
    // Masks of the k-1 other members; the all-c mask is excluded.
    std::uint64_t mask = rng.below(completions);
    if (c == 0) ++mask;
    int bit = 0;
    for (int m : edge.members) {
      if (m == edge.anchor) continue;
      xi[m] = static_cast<std::uint8_t>((mask >> bit++) & 1u);
    }
  }
  return xi;
}

Pullback pullback_pattern(const UniformHom& hom, const Coloring& c, int v, const TreeDomain& D) {
  if (c.size() != hom.n()) throw InputError("colouring has the wrong length");
  if (v < 0 || v >= hom.n()) throw InputError("vertex out of range");
  if (hom.k() != D.params().k || hom.d() < D.params().d) throw InputError("domain and homomorphism disagree");
  Pullback out;
  out.vertices.assign(D.size(), v);
  out.pattern.assign(D.size(), 0);
  for (std::size_t i = 1; i < D.size(); ++i) {
    const auto& step = D.step(static_cast<int>(i));
    out.vertices[i] = hom.apply_power(step.generator, -step.exponent, out.vertices[D.parent(static_cast<int>(i))]);
  }
  for (std::size_t i = 0; i < D.size(); ++i) out.pattern[i] = static_cast<std::uint8_t>(c[out.vertices[i]]);
  out.proper = is_proper_pattern(D, out.pattern);
  auto sorted = out.vertices;
  std::sort(sorted.begin(), sorted.end());
  out.injective = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
  return out;
}

LocalConvergence local_convergence_stat(const UniformHom& hom, const Coloring& chi, const TreeDomain& D,
                                        const Pattern& xi) {
  if (xi.size() != D.size()) throw InputError("pattern size does not match the domain");
  LocalConvergence out;
  out.n = hom.n();
  for (int v = 0; v < hom.n(); ++v) {
    const auto pb = pullback_pattern(hom, chi, v, D);
    out.matches += pb.pattern == xi;
    out.improper += !pb.proper;
    out.non_injective += !pb.injective;
  }
  out.frequency = make_rational(out.matches, out.n);
  out.reference = Rational(BigInt(1), count_proper_patterns(D));
  return out;
}

namespace {

// The Cayley hyper-tree revealed on demand. A coset is drawn the first time
// it is touched, conditioned on the single member already coloured; by the
// tree property this reproduces mu whatever the exploration order.
class LazyTree {
 public:
  LazyTree(int d, int k, int max_level, Rng& rng) : d_(d), k_(k), levels_(max_level + 1), rng_(rng) {}

  void reset() {
    colors_.clear();
    parent_coset_.clear();
    parent_gen_.clear();
    children_.clear();
    memo_.clear();
    members_.clear();
    support_.clear();
    new_node(static_cast<std::uint8_t>(rng_.below(2)), -1, -1);
  }

  int coset_of(int node, int gen) {
    if (gen == parent_gen_[node]) return parent_coset_[node];
    const std::size_t slot = static_cast<std::size_t>(node) * d_ + gen;
    if (children_[slot] >= 0) return children_[slot];
    const int coset = static_cast<int>(support_.size());
    children_[slot] = coset;
    const int c = colors_[node];
    std::uint64_t mask = rng_.below((std::uint64_t{1} << (k_ - 1)) - 1);
    if (c == 0) ++mask;
    const std::size_t offset = members_.size();
    members_.push_back(node);
    int ones = c;
    for (int j = 0; j < k_ - 1; ++j) {
      const auto color = static_cast<std::uint8_t>((mask >> j) & 1u);
      ones += color;
      members_.push_back(new_node(color, coset, gen));
    }
    int support = -1;
    if (ones == 1 || ones == k_ - 1) {
      const int minority = ones == 1 ? 1 : 0;
      for (int j = 0; j < k_; ++j) {
        if (colors_[members_[offset + j]] == minority) support = members_[offset + j];
      }
    }
    support_.push_back(support);
    return coset;
  }

  const int* members(int coset) const { return members_.data() + static_cast<std::size_t>(coset) * k_; }
  int support(int coset) const { return support_[coset]; }

  bool in_core(int node, int level) {
    if (level == 0) return true;
    const std::size_t slot = static_cast<std::size_t>(node) * levels_ + level;
    if (memo_[slot] >= 0) return memo_[slot];
    int count = 0;
    for (int gen = 0; gen < d_ && count < 3; ++gen) {
      const int coset = coset_of(node, gen);
      if (support_[coset] == node && anchored(coset, level - 1)) ++count;
    }
    memo_[slot] = count >= 3;
    return count >= 3;
  }

  // e \ support ⊆ C_level.
  bool anchored(int coset, int level) {
    const int s = support_[coset];
    for (int j = 0; j < k_; ++j) {
      const int u = members_[static_cast<std::size_t>(coset) * k_ + j];
      if (u != s && !in_core(u, level)) return false;
    }
    return true;
  }

 private:
  int new_node(std::uint8_t color, int parent_coset, int parent_gen) {
    const int id = static_cast<int>(colors_.size());
    colors_.push_back(color);
    parent_coset_.push_back(parent_coset);
    parent_gen_.push_back(parent_gen);
    children_.insert(children_.end(), d_, -1);
    memo_.insert(memo_.end(), levels_, -1);
    return id;
  }

  int d_;
  int k_;
  int levels_;
  Rng& rng_;
  std::vector<std::uint8_t> colors_;
  std::vector<int> parent_coset_;
  std::vector<int> parent_gen_;
  std::vector<int> children_;
  std::vector<std::int8_t> memo_;
  std::vector<int> members_;
  std::vector<int> support_;
};

}  // namespace

TreeCoreEstimate estimate_tree_core_density(int d, int k, int level, std::int64_t samples, Rng& rng) {
  if (d < 1 || k < 3) throw DomainError("tree core estimate needs d >= 1 and k >= 3");
  if (level < 1) throw InputError("level must be at least 1");
  if (samples < 1) throw InputError("samples must be positive");
  LazyTree tree(d, k, level, rng);
  TreeCoreEstimate out;
  out.samples = samples;
  std::int64_t hits = 0;
  for (std::int64_t s = 0; s < samples; ++s) {
    tree.reset();
    const int root = 0;
    const bool core = tree.in_core(root, level);
    std::vector<int> anchored_edges;
    if (!core) {
      for (int gen = 0; gen < d; ++gen) {
        const int coset = tree.coset_of(root, gen);
        if (tree.support(coset) == root && tree.anchored(coset, level - 1)) anchored_edges.push_back(coset);
      }
    }
    const bool attached = !anchored_edges.empty();
    bool overcounted = false;
    for (int ev : anchored_edges) {
      for (int j = 0; j < k && !overcounted; ++j) {
        const int u = tree.members(ev)[j];
        for (int gen = 0; gen < d && !overcounted; ++gen) {
          const int ew = tree.coset_of(u, gen);
          if (ew == ev) continue;
          const int w = tree.support(ew);
          if (w < 0 || w == root) continue;
          if (tree.anchored(ew, level - 1) && !tree.in_core(w, level)) overcounted = true;
        }
      }
      if (overcounted) break;
    }
    out.in_core += core;
    out.in_attached += attached;
    out.in_overcounted += overcounted;
    hits += core || (attached && !overcounted);
  }
  out.mean = static_cast<double>(hits) / samples;
  out.standard_error = std::sqrt(out.mean * (1 - out.mean) / samples);
  return out;
}

}  // namespace sofic
