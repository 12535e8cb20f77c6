#include "sofic/group.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "sofic/errors.hpp"

namespace sofic {

void ModelParams::validate() const {
  if (d < 1) throw InputError("d must be >= 1 (got " + std::to_string(d) + ")");
  if (k < 2) throw InputError("k must be >= 2 (got " + std::to_string(k) + ")");
  if (n < 1) throw InputError("n must be >= 1 (got " + std::to_string(n) + ")");
}

void ModelParams::require_uniform() const {
  validate();
  if (n % k != 0) {
    throw InputError("n=" + std::to_string(n) + " is not divisible by k=" + std::to_string(k));
  }
}

void ModelParams::require_equitable() const {
  require_uniform();
  if (n % 2 != 0) throw InputError("n=" + std::to_string(n) + " must be even");
}

std::string describe(const ModelParams& params) {
  std::ostringstream out;
  out << "k=" << params.k << " d=" << params.d << " n=" << params.n;
  return out.str();
}

int ReducedWord::length() const {
  int total = 0;
  for (const auto& s : syllables_) total += s.exponent;
  return total;
}

int ReducedWord::last_generator() const {
  return syllables_.empty() ? -1 : syllables_.back().generator;
}

ReducedWord reduce_word(const ModelParams& params, std::span<const Letter> letters) {
  ReducedWord w;
  auto& stack = w.syllables_;
  for (const auto& letter : letters) {
    if (letter.generator < 0 || letter.generator >= params.d) {
      throw InputError("generator index " + std::to_string(letter.generator + 1) +
                       " outside [1, " + std::to_string(params.d) + "]");
    }
    int exponent = ((letter.exponent % params.k) + params.k) % params.k;
    if (exponent == 0) continue;
    if (!stack.empty() && stack.back().generator == letter.generator) {
      exponent = (stack.back().exponent + exponent) % params.k;
      stack.pop_back();
      if (exponent == 0) continue;
    }
    stack.push_back({letter.generator, exponent});
  }
  return w;
}

ReducedWord reduce_word(const ModelParams& params, std::initializer_list<Letter> letters) {
  return reduce_word(params, std::span<const Letter>(letters.begin(), letters.size()));
}

ReducedWord generator_power(const ModelParams& params, int generator, int exponent) {
  return reduce_word(params, {Letter{generator, exponent}});
}

namespace {
std::vector<Letter> letters_of(const ReducedWord& w) {
  std::vector<Letter> out;
  out.reserve(w.syllables().size());
  for (const auto& s : w.syllables()) out.push_back({s.generator, s.exponent});
  return out;
}
}  // namespace

ReducedWord multiply(const ModelParams& params, const ReducedWord& a, const ReducedWord& b) {
  auto letters = letters_of(a);
  const auto tail = letters_of(b);
  letters.insert(letters.end(), tail.begin(), tail.end());
  return reduce_word(params, letters);
}

ReducedWord inverse(const ModelParams& params, const ReducedWord& w) {
  std::vector<Letter> letters;
  for (auto it = w.syllables().rbegin(); it != w.syllables().rend(); ++it) {
    letters.push_back({it->generator, params.k - it->exponent});
  }
  return reduce_word(params, letters);
}

ReducedWord parse_word(const ModelParams& params, const std::string& text) {
  std::vector<Letter> letters;
  std::istringstream in(text);
  std::string token;
  while (in >> token) {
    if (token == "1" || token == "e") continue;
    if (token.size() < 2 || token[0] != 's') throw InputError("bad word token '" + token + "'");
    std::size_t pos = 1;
    std::size_t used = 0;
    int generator = 0;
    int exponent = 1;
    try {
      generator = std::stoi(token.substr(pos), &used);
      pos += used;
      if (pos < token.size()) {
        if (token[pos] != '^') throw InputError("bad word token '" + token + "'");
        exponent = std::stoi(token.substr(pos + 1), &used);
        if (pos + 1 + used != token.size()) throw InputError("bad word token '" + token + "'");
      }
    } catch (const std::logic_error&) {
      throw InputError("bad word token '" + token + "'");
    }
    letters.push_back({generator - 1, exponent});
  }
  return reduce_word(params, letters);
}

std::string to_string(const ReducedWord& w) {
  if (w.is_identity()) return "1";
  std::string out;
  for (const auto& s : w.syllables()) {
    if (!out.empty()) out += ' ';
    out += 's' + std::to_string(s.generator + 1);
    if (s.exponent != 1) out += '^' + std::to_string(s.exponent);
  }
  return out;
}

UniformHom::UniformHom(ModelParams params, std::vector<std::vector<int>> images)
    : params_(params), images_(std::move(images)) {}

UniformHom UniformHom::from_images(int k, std::vector<std::vector<int>> images) {
  if (images.empty()) throw InputError("a homomorphism needs at least one generator");
  const int n = static_cast<int>(images.front().size());
  ModelParams params{static_cast<int>(images.size()), k, n};
  params.require_uniform();
  std::vector<char> seen(n);
  for (int i = 0; i < params.d; ++i) {
    const auto& image = images[i];
    if (static_cast<int>(image.size()) != n) {
      throw InputError("generator " + std::to_string(i + 1) + " image has wrong length");
    }
    std::fill(seen.begin(), seen.end(), 0);
    for (int v : image) {
      if (v < 0 || v >= n || seen[v]) {
        throw InputError("generator " + std::to_string(i + 1) + " image is not a permutation");
      }
      seen[v] = 1;
    }
    std::fill(seen.begin(), seen.end(), 0);
    for (int v = 0; v < n; ++v) {
      if (seen[v]) continue;
      int size = 0;
      for (int u = v; !seen[u]; u = image[u]) {
        seen[u] = 1;
        ++size;
      }
      if (size != k) {
        throw InputError("generator " + std::to_string(i + 1) + " has an orbit of size " +
                         std::to_string(size) + " (expected " + std::to_string(k) + ")");
      }
    }
  }
  return UniformHom(params, std::move(images));
}

int UniformHom::apply_power(int generator, int exponent, int v) const {
  exponent = ((exponent % params_.k) + params_.k) % params_.k;
  const auto& image = images_[generator];
  for (int r = 0; r < exponent; ++r) v = image[v];
  return v;
}

int evaluate_word(const UniformHom& hom, const ReducedWord& w, int v) {
  if (v < 0 || v >= hom.n()) throw InputError("vertex out of range");
  const auto& syllables = w.syllables();
  for (auto it = syllables.rbegin(); it != syllables.rend(); ++it) {
    if (it->generator >= hom.d()) throw InputError("word uses a generator the homomorphism lacks");
    v = hom.apply_power(it->generator, it->exponent, v);
  }
  return v;
}

SoficReport check_sofic(const UniformHom& hom, std::span<const ReducedWord> domain, double delta) {
  const auto& params = hom.params();
  struct Pair {
    const ReducedWord* g;
    const ReducedWord* h;
    ReducedWord product;
  };
  std::vector<Pair> pairs;
  pairs.reserve(domain.size() * domain.size());
  for (const auto& g : domain) {
    for (const auto& h : domain) pairs.push_back({&g, &h, multiply(params, g, h)});
  }
  SoficReport report;
  report.n = hom.n();
  for (int v = 0; v < hom.n(); ++v) {
    bool mult = true;
    for (const auto& p : pairs) {
      if (evaluate_word(hom, p.product, v) != evaluate_word(hom, *p.g, evaluate_word(hom, *p.h, v))) {
        mult = false;
        break;
      }
    }
    bool free_point = true;
    for (const auto& f : domain) {
      if (!f.is_identity() && evaluate_word(hom, f, v) == v) {
        free_point = false;
        break;
      }
    }
    report.multiplicative_vertices += mult;
    report.trace_vertices += free_point;
  }
  report.mult_fraction = static_cast<double>(report.multiplicative_vertices) / hom.n();
  report.trace_fraction = static_cast<double>(report.trace_vertices) / hom.n();
  report.multiplicative = report.mult_fraction > 1.0 - delta;
  report.trace_preserving = report.trace_fraction > 1.0 - delta;
  report.sofic = report.multiplicative && report.trace_preserving;
  return report;
}

BigInt count_k_partitions(int n, int k) {
  if (n % k != 0) return 0;
  const unsigned blocks = static_cast<unsigned>(n / k);
  return factorial(n) / (ipow(factorial(k), blocks) * factorial(blocks));
}

BigInt count_uniform_homs(const ModelParams& params) {
  params.require_uniform();
  const unsigned blocks = static_cast<unsigned>(params.n / params.k);
  const BigInt per_generator = count_k_partitions(params.n, params.k) *
                               ipow(factorial(params.k - 1), blocks);
  return ipow(per_generator, static_cast<unsigned>(params.d));
}

namespace {

void extend_cycles(int n, int k, std::vector<int>& perm, std::vector<char>& used,
                   std::vector<std::vector<int>>& out) {
  int first = 0;
  while (first < n && used[first]) ++first;
  if (first == n) {
    out.push_back(perm);
    return;
  }
  used[first] = 1;
  std::vector<int> cycle{first};
  // Ordered choice of the remaining k-1 cycle members after `first`.
  std::function<void()> grow = [&]() {
    if (static_cast<int>(cycle.size()) == k) {
      for (int j = 0; j < k; ++j) perm[cycle[j]] = cycle[(j + 1) % k];
      extend_cycles(n, k, perm, used, out);
      return;
    }
    for (int u = first + 1; u < n; ++u) {
      if (used[u]) continue;
      used[u] = 1;
      cycle.push_back(u);
      grow();
      cycle.pop_back();
      used[u] = 0;
    }
  };
  grow();
  used[first] = 0;
}

}  // namespace

std::vector<std::vector<int>> k_cycle_permutations(int n, int k) {
  if (k < 2 || n < 1 || n % k != 0) throw InputError("k-cycle permutations need k | n");
  std::vector<std::vector<int>> out;
  std::vector<int> perm(n, -1);
  std::vector<char> used(n, 0);
  extend_cycles(n, k, perm, used, out);
  return out;
}

void for_each_uniform_hom(const ModelParams& params,
                          const std::function<void(const UniformHom&)>& visit,
                          const BigInt& bound) {
  const BigInt total = count_uniform_homs(params);
  if (total > bound) {
    throw ScaleError("enumeration of " + to_string(total) + " homomorphisms exceeds bound " +
                     to_string(bound));
  }
  const auto perms = k_cycle_permutations(params.n, params.k);
  std::vector<std::size_t> index(params.d, 0);
  std::vector<std::vector<int>> images(params.d);
  while (true) {
    for (int i = 0; i < params.d; ++i) images[i] = perms[index[i]];
    visit(UniformHom::from_images(params.k, images));
    int i = params.d - 1;
    while (i >= 0 && ++index[i] == perms.size()) index[i--] = 0;
    if (i < 0) break;
  }
}

std::vector<UniformHom> enumerate_uniform_homs(const ModelParams& params, const BigInt& bound) {
  std::vector<UniformHom> out;
  for_each_uniform_hom(params, [&](const UniformHom& hom) { out.push_back(hom); }, bound);
  return out;
}

}  // namespace sofic
