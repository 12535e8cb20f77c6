#include "sofic/partition_counts.hpp"

#include <functional>

#include "sofic/errors.hpp"

namespace sofic {

std::int64_t TypeVector::ones() const {
  std::int64_t total = 0;
  for (int j = 0; j < static_cast<int>(counts.size()); ++j) total += j * counts[j];
  return total;
}

void TypeVector::validate() const {
  if (k < 2 || static_cast<int>(counts.size()) != k + 1) throw InputError("type vector needs k+1 entries");
  std::int64_t parts = 0;
  for (auto c : counts) {
    if (c < 0) throw DomainError("negative type entry");
    parts += c;
  }
  if (parts * k != n) throw DomainError("type entries must sum to 1/k");
}

TypeVector type_from_values(int n, int k, const std::vector<Rational>& values) {
  if (static_cast<int>(values.size()) != k + 1) throw InputError("type vector needs k+1 entries");
  TypeVector t{n, k, {}};
  for (const auto& v : values) {
    const Rational scaled = v * n;
    if (boost::multiprecision::denominator(scaled) != 1) {
      throw DomainError("type entry " + to_string(v) + " is not a multiple of 1/n");
    }
    t.counts.push_back(boost::multiprecision::numerator(scaled).convert_to<std::int64_t>());
  }
  t.validate();
  return t;
}

std::vector<TypeVector> enumerate_types(int n, int k, std::int64_t ones, bool bichromatic_only,
                                        std::size_t max_types) {
  if (k < 2 || n % k != 0) throw InputError("types need k | n");
  std::vector<TypeVector> out;
  std::vector<std::int64_t> counts(k + 1, 0);
  const int lo = bichromatic_only ? 1 : 0;
  const int hi = bichromatic_only ? k - 1 : k;
  // Fill counts[hi], counts[hi-1], ..., counts[lo]; the lowest index takes the
  // remaining parts.
  std::function<void(int, std::int64_t, std::int64_t)> fill = [&](int j, std::int64_t parts,
                                                                   std::int64_t rest) {
    if (j == lo) {
      if (parts < 0 || rest != static_cast<std::int64_t>(lo) * parts) return;
      counts[j] = parts;
      if (out.size() == max_types) {
        throw ScaleError("more than " + std::to_string(max_types) + " types for n=" + std::to_string(n) +
                         " k=" + std::to_string(k));
      }
      out.push_back(TypeVector{n, k, counts});
      counts[j] = 0;
      return;
    }
    for (std::int64_t c = 0; c <= parts && c * j <= rest; ++c) {
      // The remaining parts contribute at least lo ones each.
      if (rest - c * j < static_cast<std::int64_t>(lo) * (parts - c)) break;
      if (rest - c * j > static_cast<std::int64_t>(j - 1) * (parts - c)) continue;
      counts[j] = c;
      fill(j - 1, parts - c, rest - c * j);
    }
    counts[j] = 0;
  };
  if (lo > hi) return out;
  fill(hi, n / k, ones);
  return out;
}

BigInt count_partitions_of_type(const TypeVector& t) {
  t.validate();
  const std::int64_t ones = t.ones();
  BigInt denominator = 1;
  for (int j = 0; j <= t.k; ++j) {
    const auto c = static_cast<unsigned>(t.counts[j]);
    denominator *= ipow(factorial(j) * factorial(t.k - j), c) * factorial(c);
  }
  return factorial(static_cast<unsigned>(ones)) * factorial(static_cast<unsigned>(t.n - ones)) /
         denominator;
}

BigInt count_partitions_of_type(const Coloring& chi, const TypeVector& t) {
  if (chi.size() != t.n) throw InputError("colouring length does not match the type's n");
  if (chi.count_ones() != t.ones()) {
    throw DomainError("colouring has " + std::to_string(chi.count_ones()) +
                      " ones but the type requires " + std::to_string(t.ones()));
  }
  return count_partitions_of_type(t);
}

CellSizes overlap_cells(const Coloring& chi, const Coloring& chi2) {
  if (chi.size() != chi2.size()) throw InputError("colourings have different lengths");
  CellSizes cells{0, 0, 0, 0};
  for (int v = 0; v < chi.size(); ++v) ++cells[2 * chi[v] + chi2[v]];
  return cells;
}

CellSizes equitable_cells(int n, std::int64_t m) {
  if (n % 2 != 0 || m < 0 || 2 * m > n) throw InputError("invalid equitable distance");
  const std::int64_t half = n / 2;
  return {half - m, m, m, half - m};
}

namespace {
constexpr const char* kCellNames[4] = {"(0,0)", "(0,1)", "(1,0)", "(1,1)"};
}

BigInt count_pair_partitions(int k, const CellSizes& cells, const PairTypeCounts& t) {
  CellSizes marginal{0, 0, 0, 0};
  for (const auto& [m, count] : t) {
    if (!m.admissible(k)) throw DomainError("pair type is not bichromatic under both colourings");
    if (count < 0) throw DomainError("negative pair-type count");
    marginal[0] += m.e00 * count;
    marginal[1] += m.e01 * count;
    marginal[2] += m.e10 * count;
    marginal[3] += m.e11 * count;
  }
  for (int c = 0; c < 4; ++c) {
    if (marginal[c] != cells[c]) {
      throw DomainError(std::string("marginal mismatch in cell ") + kCellNames[c] + ": type gives " +
                        std::to_string(marginal[c]) + ", colourings give " + std::to_string(cells[c]));
    }
  }
  BigInt numerator = 1;
  for (auto size : cells) numerator *= factorial(static_cast<unsigned>(size));
  BigInt denominator = 1;
  for (const auto& [m, count] : t) {
    const auto c = static_cast<unsigned>(count);
    denominator *= factorial(c);
    denominator *= ipow(factorial(m.e00) * factorial(m.e01) * factorial(m.e10) * factorial(m.e11), c);
  }
  return numerator / denominator;
}

BigInt count_pair_partitions(int k, const Coloring& chi, const Coloring& chi2, const PairTypeCounts& t) {
  return count_pair_partitions(k, overlap_cells(chi, chi2), t);
}

std::vector<PairTypeCounts> enumerate_pair_types(int k, const CellSizes& cells) {
  const auto types = admissible_pair_types(k);
  std::vector<PairTypeCounts> out;
  PairTypeCounts current;
  CellSizes rest = cells;
  std::function<void(std::size_t)> fill = [&](std::size_t index) {
    if (rest[0] == 0 && rest[1] == 0 && rest[2] == 0 && rest[3] == 0) {
      out.push_back(current);
      return;
    }
    if (index == types.size()) return;
    const auto& m = types[index];
    const std::int64_t entries[4] = {m.e00, m.e01, m.e10, m.e11};
    std::int64_t max_count = INT64_MAX;
    for (int c = 0; c < 4; ++c) {
      if (entries[c] > 0) max_count = std::min(max_count, rest[c] / entries[c]);
    }
    for (std::int64_t count = max_count; count >= 0; --count) {
      for (int c = 0; c < 4; ++c) rest[c] -= entries[c] * count;
      if (count > 0) current[m] = count;
      fill(index + 1);
      current.erase(m);
      for (int c = 0; c < 4; ++c) rest[c] += entries[c] * count;
    }
  };
  fill(0);
  return out;
}

}  // namespace sofic
