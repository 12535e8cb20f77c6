#include "sofic/search.hpp"

#include <array>

#include "sofic/errors.hpp"

namespace sofic {
namespace {

class Search {
 public:
  Search(const LabeledHypergraph& g, const SearchOptions& options)
      : g_(g), options_(options), n_(g.n()), k_(g.k()) {
    if (options.reference && options.reference->size() != n_) {
      throw InputError("reference colouring has the wrong length");
    }
    if (!options.mask.empty() && static_cast<int>(options.mask.size()) != n_) {
      throw InputError("mask has the wrong length");
    }
    if (options.equitable && n_ % 2 != 0) throw DomainError("equitable colourings need even n");
    color_.assign(n_, -1);
    counts_.assign(g.edge_count(), {0, 0});
    uncolored_.assign(g.edge_count(), k_);
    for (int v = 0; v < n_; ++v) {
      if (masked(v)) ++masked_remaining_;
    }
    binomial_.assign(n_ + 1, std::vector<std::uint64_t>(n_ + 1, 0));
    for (int a = 0; a <= n_; ++a) {
      binomial_[a][0] = 1;
      for (int b = 1; b <= a; ++b) binomial_[a][b] = binomial_[a - 1][b - 1] + binomial_[a - 1][b];
    }
  }

  std::uint64_t count() {
    total_ = 0;
    counting_ = true;
    if (feasible()) recurse();
    return total_;
  }

  bool enumerate(const std::function<bool(const Coloring&)>& visit) {
    counting_ = false;
    visit_ = &visit;
    stopped_ = false;
    if (feasible()) recurse();
    return !stopped_;
  }

 private:
  bool masked(int v) const { return options_.reference && (options_.mask.empty() || options_.mask[v]); }

  bool feasible() const {
    if (violations_ > options_.violation_budget) return false;
    if (options_.equitable && (2 * ones_ > n_ || 2 * zeros_ > n_)) return false;
    if (options_.reference) {
      if (distance_ > options_.hamming_hi) return false;
      if (distance_ + masked_remaining_ < options_.hamming_lo) return false;
    }
    return true;
  }

  void assign(int v, int c) {
    color_[v] = c;
    (c ? ones_ : zeros_) += 1;
    if (masked(v)) {
      --masked_remaining_;
      if ((*options_.reference)[v] != c) ++distance_;
    }
    for (int e : g_.edges_at(v)) {
      ++counts_[e][c];
      if (--uncolored_[e] == 0 && counts_[e][c] == k_) ++violations_;
    }
  }

  void unassign(int v) {
    const int c = color_[v];
    for (int e : g_.edges_at(v)) {
      if (uncolored_[e]++ == 0 && counts_[e][c] == k_) --violations_;
      --counts_[e][c];
    }
    if (masked(v)) {
      ++masked_remaining_;
      if ((*options_.reference)[v] != c) --distance_;
    }
    (c ? ones_ : zeros_) -= 1;
    color_[v] = -1;
  }

  bool unsatisfied(int e) const {
    return uncolored_[e] > 0 && (counts_[e][0] == 0 || counts_[e][1] == 0);
  }

  void recurse() {
    if (stopped_) return;
    int chosen = -1;
    int only_color = -1;
    if (violations_ == options_.violation_budget) {
      for (int e = 0; e < g_.edge_count() && chosen < 0; ++e) {
        if (uncolored_[e] != 1) continue;
        for (int c = 0; c < 2; ++c) {
          if (counts_[e][c] == k_ - 1) {
            for (int v : g_.edge(e)) {
              if (color_[v] < 0) chosen = v;
            }
            only_color = 1 - c;
          }
        }
      }
    }
    if (chosen < 0) {
      int best_score = 0;
      for (int v = 0; v < n_; ++v) {
        if (color_[v] >= 0) continue;
        int score = 0;
        for (int e : g_.edges_at(v)) score += unsatisfied(e);
        if (score > best_score) {
          best_score = score;
          chosen = v;
        }
      }
    }
    if (chosen < 0) {
      leaf();
      return;
    }
    for (int c = 0; c < 2; ++c) {
      if (only_color >= 0 && c != only_color) continue;
      assign(chosen, c);
      if (feasible()) recurse();
      unassign(chosen);
      if (stopped_) return;
    }
  }

  // Every remaining edge is bichromatic, so the free vertices only interact
  // through the equitable and Hamming constraints.
  void leaf() {
    std::vector<int> free;
    for (int v = 0; v < n_; ++v) {
      if (color_[v] < 0) free.push_back(v);
    }
    if (counting_) {
      total_ += free_count(free);
    } else {
      enumerate_free(free, 0);
    }
  }

  std::uint64_t free_count(const std::vector<int>& free) const {
    if (!options_.equitable && !options_.reference) return std::uint64_t{1} << free.size();
    // Free vertices split into masked with reference 0, masked with
    // reference 1, and unmasked.
    int a = 0;
    int b = 0;
    int u = 0;
    for (int v : free) {
      if (!masked(v)) {
        ++u;
      } else if ((*options_.reference)[v] == 0) {
        ++a;
      } else {
        ++b;
      }
    }
    const int need_ones = n_ / 2 - static_cast<int>(ones_);
    std::uint64_t total = 0;
    for (int x = 0; x <= a; ++x) {
      for (int y = 0; y <= b; ++y) {
        if (options_.reference) {
          const std::int64_t dist = distance_ + x + (b - y);
          if (dist < options_.hamming_lo || dist > options_.hamming_hi) continue;
        }
        const std::uint64_t masked_ways = binomial_[a][x] * binomial_[b][y];
        if (options_.equitable) {
          const int z = need_ones - x - y;
          if (z < 0 || z > u) continue;
          total += masked_ways * binomial_[u][z];
        } else {
          total += masked_ways << u;
        }
      }
    }
    return total;
  }

  void enumerate_free(const std::vector<int>& free, std::size_t index) {
    if (stopped_) return;
    if (index == free.size()) {
      std::vector<std::uint8_t> bits(n_);
      for (int v = 0; v < n_; ++v) bits[v] = static_cast<std::uint8_t>(color_[v]);
      if (!(*visit_)(Coloring(std::move(bits)))) stopped_ = true;
      return;
    }
    for (int c = 0; c < 2 && !stopped_; ++c) {
      assign(free[index], c);
      if (feasible()) enumerate_free(free, index + 1);
      unassign(free[index]);
    }
  }

  const LabeledHypergraph& g_;
  const SearchOptions& options_;
  int n_;
  int k_;
  std::vector<int> color_;
  std::vector<std::array<int, 2>> counts_;
  std::vector<int> uncolored_;
  std::vector<std::vector<std::uint64_t>> binomial_;
  std::int64_t violations_ = 0;
  std::int64_t ones_ = 0;
  std::int64_t zeros_ = 0;
  std::int64_t distance_ = 0;
  std::int64_t masked_remaining_ = 0;
  bool counting_ = true;
  std::uint64_t total_ = 0;
  const std::function<bool(const Coloring&)>* visit_ = nullptr;
  bool stopped_ = false;
};

}  // namespace

BigInt count_colorings(const LabeledHypergraph& g, const SearchOptions& options) {
  if (g.n() > 62) throw ScaleError("colouring search is limited to n <= 62, got n=" + std::to_string(g.n()));
  Search search(g, options);
  return BigInt(search.count());
}

bool enumerate_colorings(const LabeledHypergraph& g, const SearchOptions& options,
                         const std::function<bool(const Coloring&)>& visit) {
  if (g.n() > 62) throw ScaleError("colouring search is limited to n <= 62, got n=" + std::to_string(g.n()));
  Search search(g, options);
  return search.enumerate(visit);
}

}  // namespace sofic
