#include "sofic/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

#include "sofic/errors.hpp"

namespace sofic {

void shuffle(std::vector<int>& values, Rng& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    std::swap(values[i - 1], values[rng.below(i)]);
  }
}

UniformHom sample_uniform_hom(const ModelParams& params, Rng& rng) {
  params.require_uniform();
  std::vector<std::vector<int>> images(params.d, std::vector<int>(params.n));
  std::vector<int> order(params.n);
  for (auto& image : images) {
    std::iota(order.begin(), order.end(), 0);
    shuffle(order, rng);
    // A uniform ordering cut into consecutive blocks gives a uniform
    // k-partition, and each block's internal order a uniform k-cycle.
    for (int start = 0; start < params.n; start += params.k) {
      for (int j = 0; j < params.k; ++j) {
        image[order[start + j]] = order[start + (j + 1) % params.k];
      }
    }
  }
  return UniformHom::from_images(params.k, std::move(images));
}

namespace {

std::shared_ptr<TypeWeightTable> build_table(int n, int k) {
  auto table = std::make_shared<TypeWeightTable>();
  table->n = n;
  table->k = k;
  table->types = enumerate_types(n, k, n / 2, /*bichromatic_only=*/true);
  if (table->types.empty()) {
    throw DomainError("no bichromatic type exists for n=" + std::to_string(n) + " k=" + std::to_string(k));
  }
  table->total = 0;
  for (const auto& t : table->types) {
    table->weights.push_back(count_partitions_of_type(t));
    table->total += table->weights.back();
  }
  double running = 0;
  for (const auto& w : table->weights) {
    const Rational exact(w, table->total);
    const double p = exact.convert_to<double>();
    if (p > 0) {
      const Rational collapsed(p);
      const Rational rel = abs(collapsed - exact) / exact;
      table->max_collapse_error = std::max(table->max_collapse_error, rel.convert_to<double>());
    }
    table->probabilities.push_back(p);
    running += p;
    table->cumulative.push_back(running);
  }
  if (table->max_collapse_error >= 1e-12) {
    throw NumericalError("type weight collapse error exceeds 1e-12");
  }
  return table;
}

}  // namespace

std::shared_ptr<const TypeWeightTable> bichromatic_type_table(int n, int k) {
  ModelParams{1, k, n}.require_equitable();
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const TypeWeightTable>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{n, k}];
  if (!slot) slot = build_table(n, k);
  return slot;
}

TypeVector sample_type_vector(int n, int k, Rng& rng) {
  const auto table = bichromatic_type_table(n, k);
  if (table->types.size() == 1) return table->types.front();
  const double u = rng.uniform() * table->cumulative.back();
  const auto it = std::upper_bound(table->cumulative.begin(), table->cumulative.end(), u);
  const auto index = std::min<std::size_t>(it - table->cumulative.begin(), table->types.size() - 1);
  return table->types[index];
}

TypeVector sample_type_vector(const Coloring& chi, int k, Rng& rng) {
  if (!chi.equitable()) throw DomainError("planted colouring must be equitable");
  return sample_type_vector(chi.size(), k, rng);
}

Partition sample_bichromatic_partition(const Coloring& chi, const TypeVector& t, Rng& rng) {
  t.validate();
  if (chi.size() != t.n) throw InputError("colouring length does not match the type's n");
  if (chi.count_ones() != t.ones()) throw DomainError("type is infeasible for this colouring");
  if (t.counts.front() != 0 || t.counts.back() != 0) throw DomainError("type has monochromatic parts");
  std::vector<int> ones;
  std::vector<int> zeros;
  for (int v = 0; v < chi.size(); ++v) (chi[v] ? ones : zeros).push_back(v);
  shuffle(ones, rng);
  shuffle(zeros, rng);
  // Consecutive blocks of the shuffled classes, matched in slot order. Every
  // partition of the type arises from the same number of shuffle pairs.
  Partition parts;
  parts.reserve(t.n / t.k);
  std::size_t next_one = 0;
  std::size_t next_zero = 0;
  for (int j = 0; j <= t.k; ++j) {
    for (std::int64_t c = 0; c < t.counts[j]; ++c) {
      std::vector<int> part;
      part.reserve(t.k);
      for (int a = 0; a < j; ++a) part.push_back(ones[next_one++]);
      for (int b = 0; b < t.k - j; ++b) part.push_back(zeros[next_zero++]);
      parts.push_back(std::move(part));
    }
  }
  return parts;
}

std::vector<int> cycles_on_partition(const Partition& parts, int n, Rng& rng) {
  std::vector<int> image(n, -1);
  for (auto part : parts) {
    shuffle(part, rng);
    const auto size = part.size();
    for (std::size_t j = 0; j < size; ++j) image[part[j]] = part[(j + 1) % size];
  }
  return image;
}

UniformHom sample_planted_hom(const ModelParams& params, const Coloring& chi, Rng& rng) {
  params.require_equitable();
  if (chi.size() != params.n) throw InputError("planted colouring has the wrong length");
  if (!chi.equitable()) throw DomainError("planted colouring must be equitable");
  std::vector<std::vector<int>> images;
  images.reserve(params.d);
  for (int i = 0; i < params.d; ++i) {
    const auto t = sample_type_vector(params.n, params.k, rng);
    const auto parts = sample_bichromatic_partition(chi, t, rng);
    images.push_back(cycles_on_partition(parts, params.n, rng));
  }
  return UniformHom::from_images(params.k, std::move(images));
}

UniformHom sample_planted_hom_rejection(const ModelParams& params, const Coloring& chi, Rng& rng,
                                        std::uint64_t max_attempts) {
  params.require_equitable();
  if (params.n > 40) throw ScaleError("rejection sampling is limited to n <= 40");
  if (!chi.equitable() || chi.size() != params.n) throw DomainError("planted colouring must be equitable");
  for (std::uint64_t attempt = 0; attempt < max_attempts; ++attempt) {
    auto hom = sample_uniform_hom(params, rng);
    if (is_proper(build_hypergraph(hom), chi)) return hom;
  }
  throw NumericalError("rejection sampler exhausted its attempt budget");
}

}  // namespace sofic
