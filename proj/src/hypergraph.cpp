#include "sofic/hypergraph.hpp"

#include <algorithm>

#include "sofic/errors.hpp"

namespace sofic {

Coloring::Coloring(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto b : bits_) {
    if (b > 1) throw InputError("colouring entries must be 0 or 1");
  }
}

Coloring Coloring::from_string(const std::string& text) {
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (char ch : text) {
    if (ch != '0' && ch != '1') throw InputError("colouring string must contain only 0/1");
    bits.push_back(static_cast<std::uint8_t>(ch - '0'));
  }
  return Coloring(std::move(bits));
}

Coloring Coloring::first_half_zero(int n) {
  if (n % 2 != 0) throw InputError("equitable colouring needs even n");
  std::vector<std::uint8_t> bits(n, 0);
  std::fill(bits.begin() + n / 2, bits.end(), 1);
  return Coloring(std::move(bits));
}

int Coloring::count_ones() const {
  return static_cast<int>(std::count(bits_.begin(), bits_.end(), 1));
}

Coloring Coloring::flipped() const {
  auto bits = bits_;
  for (auto& b : bits) b ^= 1;
  return Coloring(std::move(bits));
}

std::string Coloring::str() const {
  std::string out;
  out.reserve(bits_.size());
  for (auto b : bits_) out.push_back(static_cast<char>('0' + b));
  return out;
}

LabeledHypergraph LabeledHypergraph::from_hom(const UniformHom& hom) {
  LabeledHypergraph g;
  g.n_ = hom.n();
  g.k_ = hom.k();
  g.d_ = hom.d();
  g.incidence_.assign(static_cast<std::size_t>(g.n_) * g.d_, -1);
  std::vector<int> orbit;
  for (int i = 0; i < g.d_; ++i) {
    for (int v = 0; v < g.n_; ++v) {
      if (g.incidence_[static_cast<std::size_t>(v) * g.d_ + i] >= 0) continue;
      orbit.clear();
      int u = v;
      do {
        orbit.push_back(u);
        u = hom.apply(i, u);
      } while (u != v);
      std::sort(orbit.begin(), orbit.end());
      const int edge = static_cast<int>(g.labels_.size());
      g.labels_.push_back(i);
      g.vertices_.insert(g.vertices_.end(), orbit.begin(), orbit.end());
      for (int w : orbit) g.incidence_[static_cast<std::size_t>(w) * g.d_ + i] = edge;
    }
  }
  return g;
}

LabeledHypergraph build_hypergraph(const UniformHom& hom) { return LabeledHypergraph::from_hom(hom); }

namespace {
void require_size(const LabeledHypergraph& g, const Coloring& c) {
  if (c.size() != g.n()) {
    throw InputError("colouring length " + std::to_string(c.size()) + " does not match n=" +
                     std::to_string(g.n()));
  }
}

int ones_on(std::span<const int> edge, const Coloring& c) {
  int ones = 0;
  for (int v : edge) ones += c[v];
  return ones;
}
}  // namespace

int monochromatic_edge_count(const LabeledHypergraph& g, const Coloring& c) {
  require_size(g, c);
  int count = 0;
  for (int e = 0; e < g.edge_count(); ++e) {
    const int ones = ones_on(g.edge(e), c);
    count += (ones == 0 || ones == g.k());
  }
  return count;
}

std::int64_t violation_budget(const Rational& eps, int n) {
  if (eps < 0) throw InputError("eps must be non-negative");
  const Rational scaled = eps * n;
  const BigInt floor_value = boost::multiprecision::numerator(scaled) /
                             boost::multiprecision::denominator(scaled);
  return floor_value > BigInt(INT64_MAX) ? INT64_MAX : floor_value.convert_to<std::int64_t>();
}

bool is_eps_proper(const LabeledHypergraph& g, const Coloring& c, const Rational& eps) {
  return monochromatic_edge_count(g, c) <= violation_budget(eps, g.n());
}

bool is_proper(const LabeledHypergraph& g, const Coloring& c) {
  return monochromatic_edge_count(g, c) == 0;
}

std::vector<CriticalEdge> critical_edges(const LabeledHypergraph& g, const Coloring& c) {
  require_size(g, c);
  if (g.k() < 3) throw DomainError("critical-edge support is undefined for k < 3");
  std::vector<CriticalEdge> out;
  for (int e = 0; e < g.edge_count(); ++e) {
    const auto edge = g.edge(e);
    const int ones = ones_on(edge, c);
    int minority = -1;
    if (ones == 1) minority = 1;
    if (ones == g.k() - 1) minority = 0;
    if (minority < 0) continue;
    for (int v : edge) {
      if (c[v] == minority) {
        out.push_back({e, v});
        break;
      }
    }
  }
  return out;
}

int hamming_count(const Coloring& a, const Coloring& b) {
  if (a.size() != b.size()) throw InputError("colourings have different lengths");
  int count = 0;
  for (int v = 0; v < a.size(); ++v) count += (a[v] != b[v]);
  return count;
}

Rational hamming_distance(const Coloring& a, const Coloring& b) {
  const int count = hamming_count(a, b);
  if (a.size() == 0) return 0;
  return make_rational(count, a.size());
}

int PairTypeMatrix::at(int i, int j) const {
  if (i == 0) return j == 0 ? e00 : e01;
  return j == 0 ? e10 : e11;
}

bool PairTypeMatrix::admissible(int k) const {
  if (e00 < 0 || e01 < 0 || e10 < 0 || e11 < 0 || total() != k) return false;
  const int first_ones = e10 + e11;
  const int second_ones = e01 + e11;
  return first_ones > 0 && first_ones < k && second_ones > 0 && second_ones < k;
}

BigInt PairTypeMatrix::multinomial() const {
  return factorial(total()) / (factorial(e00) * factorial(e01) * factorial(e10) * factorial(e11));
}

std::vector<PairTypeMatrix> admissible_pair_types(int k) {
  std::vector<PairTypeMatrix> out;
  for (int a = 0; a <= k; ++a) {
    for (int b = 0; a + b <= k; ++b) {
      for (int c = 0; a + b + c <= k; ++c) {
        PairTypeMatrix m{a, b, c, k - a - b - c};
        if (m.admissible(k)) out.push_back(m);
      }
    }
  }
  return out;
}

PairTypeMatrix pair_type_matrix(std::span<const int> part, const Coloring& chi, const Coloring& chi2) {
  if (chi.size() != chi2.size()) throw InputError("colourings have different lengths");
  PairTypeMatrix m;
  for (int v : part) {
    const int i = chi[v];
    const int j = chi2[v];
    if (i == 0 && j == 0) ++m.e00;
    if (i == 0 && j == 1) ++m.e01;
    if (i == 1 && j == 0) ++m.e10;
    if (i == 1 && j == 1) ++m.e11;
  }
  return m;
}

PairTypeCounts pair_type_counts(const LabeledHypergraph& g, const Coloring& chi,
                                const Coloring& chi2, int label) {
  require_size(g, chi);
  require_size(g, chi2);
  if (label < 0 || label >= g.d()) throw InputError("label out of range");
  PairTypeCounts counts;
  for (int e = 0; e < g.edge_count(); ++e) {
    if (g.label(e) != label) continue;
    const auto m = pair_type_matrix(g.edge(e), chi, chi2);
    if (!m.admissible(g.k())) {
      std::string part;
      for (int v : g.edge(e)) part += (part.empty() ? "" : ",") + std::to_string(v);
      throw DomainError("part {" + part + "} is not bichromatic under both colourings");
    }
    ++counts[m];
  }
  return counts;
}

std::map<PairTypeMatrix, Rational> pair_type_map(const LabeledHypergraph& g, const Coloring& chi,
                                                 const Coloring& chi2, int label) {
  std::map<PairTypeMatrix, Rational> out;
  for (const auto& [m, count] : pair_type_counts(g, chi, chi2, label)) {
    out[m] = make_rational(count, g.n());
  }
  return out;
}

GeneratorTypeMatrix::GeneratorTypeMatrix(int n, int k, std::vector<std::vector<std::int64_t>> counts)
    : n_(n), k_(k), counts_(std::move(counts)) {
  for (const auto& row : counts_) {
    if (static_cast<int>(row.size()) != k_ + 1) throw InputError("type row must have k+1 entries");
    std::int64_t parts = 0;
    for (auto c : row) {
      if (c < 0) throw InputError("negative type count");
      parts += c;
    }
    if (parts * k_ != n_) throw InputError("type row does not describe a k-partition of [n]");
  }
}

std::optional<Rational> GeneratorTypeMatrix::common_mean() const {
  std::optional<std::int64_t> mean;
  for (const auto& row : counts_) {
    std::int64_t ones = 0;
    for (int j = 0; j <= k_; ++j) ones += j * row[j];
    if (mean && *mean != ones) return std::nullopt;
    mean = ones;
  }
  if (!mean) return std::nullopt;
  return make_rational(*mean, n_);
}

bool GeneratorTypeMatrix::proper() const {
  return std::all_of(counts_.begin(), counts_.end(),
                     [&](const auto& row) { return row[0] == 0 && row[k_] == 0; });
}

GeneratorTypeMatrix generator_type(const LabeledHypergraph& g, const Coloring& chi) {
  require_size(g, chi);
  std::vector<std::vector<std::int64_t>> counts(g.d(), std::vector<std::int64_t>(g.k() + 1, 0));
  for (int e = 0; e < g.edge_count(); ++e) ++counts[g.label(e)][ones_on(g.edge(e), chi)];
  return GeneratorTypeMatrix(g.n(), g.k(), std::move(counts));
}

}  // namespace sofic
