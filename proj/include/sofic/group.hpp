#pragma once

// The group (Z/kZ)^{*d}: words, uniform homomorphisms into Sym(n), and
// soficity checks.

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sofic/numeric.hpp"

namespace sofic {

struct ModelParams {
  int d = 1;  // number of generators
  int k = 2;  // generator order, equal to the edge size
  int n = 0;  // number of vertices

  /// Throws InputError unless d >= 1, k >= 2, n >= 1.
  void validate() const;
  /// validate() plus n divisible by k.
  void require_uniform() const;
  /// require_uniform() plus n even.
  void require_equitable() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

std::string describe(const ModelParams& params);

/// One letter of an unreduced word: generator index (0-based) raised to an
/// arbitrary integer exponent.
struct Letter {
  int generator = 0;
  int exponent = 1;
};

/// A syllable of a reduced word; exponent lies in [1, k-1].
struct Syllable {
  int generator = 0;
  int exponent = 1;
  friend auto operator<=>(const Syllable&, const Syllable&) = default;
};

/// Normal form in the free product: adjacent syllables use distinct
/// generators. The empty word is the identity.
class ReducedWord {
 public:
  ReducedWord() = default;

  const std::vector<Syllable>& syllables() const { return syllables_; }
  bool is_identity() const { return syllables_.empty(); }
  /// Sum of syllable exponents.
  int length() const;
  /// Generator of the last syllable, or -1 for the identity.
  int last_generator() const;

  friend auto operator<=>(const ReducedWord&, const ReducedWord&) = default;
  friend bool operator==(const ReducedWord&, const ReducedWord&) = default;

 private:
  friend ReducedWord reduce_word(const ModelParams&, std::span<const Letter>);
  std::vector<Syllable> syllables_;
};

ReducedWord reduce_word(const ModelParams& params, std::span<const Letter> letters);
ReducedWord reduce_word(const ModelParams& params, std::initializer_list<Letter> letters);
ReducedWord generator_power(const ModelParams& params, int generator, int exponent);
/// Reduced form of a*b.
ReducedWord multiply(const ModelParams& params, const ReducedWord& a, const ReducedWord& b);
ReducedWord inverse(const ModelParams& params, const ReducedWord& w);

/// Parses words such as "s1^2 s2 s1^-1" (1-based generators) or "1"/"e" for
/// the identity.
ReducedWord parse_word(const ModelParams& params, const std::string& text);
std::string to_string(const ReducedWord& w);

/// A homomorphism (Z/kZ)^{*d} -> Sym(n) in which every generator acts as a
/// disjoint product of k-cycles. Validated at construction.
class UniformHom {
 public:
  /// images[i][v] is the image of vertex v under generator i.
  static UniformHom from_images(int k, std::vector<std::vector<int>> images);

  const ModelParams& params() const { return params_; }
  int n() const { return params_.n; }
  int k() const { return params_.k; }
  int d() const { return params_.d; }
  std::span<const int> image(int generator) const { return images_[generator]; }
  const std::vector<std::vector<int>>& images() const { return images_; }

  int apply(int generator, int v) const { return images_[generator][v]; }
  int apply_power(int generator, int exponent, int v) const;

  friend bool operator==(const UniformHom&, const UniformHom&) = default;

 private:
  UniformHom(ModelParams params, std::vector<std::vector<int>> images);
  ModelParams params_;
  std::vector<std::vector<int>> images_;
};

/// sigma(w)v, applying syllables right to left.
int evaluate_word(const UniformHom& hom, const ReducedWord& w, int v);

struct SoficReport {
  int n = 0;
  std::int64_t multiplicative_vertices = 0;
  std::int64_t trace_vertices = 0;
  double mult_fraction = 0;
  double trace_fraction = 0;
  bool multiplicative = false;
  bool trace_preserving = false;
  bool sofic = false;
};

/// (D, delta)-multiplicativity and trace preservation, evaluated from the
/// generator images for every vertex.
SoficReport check_sofic(const UniformHom& hom, std::span<const ReducedWord> domain, double delta);

/// [n! (k-1)!^{n/k} / (k!^{n/k} (n/k)!)]^d.
BigInt count_uniform_homs(const ModelParams& params);
/// n! / (k!^{n/k} (n/k)!).
BigInt count_k_partitions(int n, int k);

inline const BigInt kDefaultEnumerationBound{10'000'000};

/// Every permutation of [n] that is a disjoint product of k-cycles.
std::vector<std::vector<int>> k_cycle_permutations(int n, int k);

/// Calls visit once for every uniform homomorphism. Throws ScaleError when
/// the total exceeds bound.
void for_each_uniform_hom(const ModelParams& params,
                          const std::function<void(const UniformHom&)>& visit,
                          const BigInt& bound = kDefaultEnumerationBound);
std::vector<UniformHom> enumerate_uniform_homs(const ModelParams& params,
                                               const BigInt& bound = kDefaultEnumerationBound);

}  // namespace sofic
