#pragma once

// Exact samplers for the uniform model (uniform over all uniform
// homomorphisms) and the planted model (uniform over those for which a fixed
// equitable colouring is proper).

#include <memory>
#include <vector>

#include "sofic/group.hpp"
#include "sofic/hypergraph.hpp"
#include "sofic/partition_counts.hpp"
#include "sofic/rng.hpp"

namespace sofic {

using Partition = std::vector<std::vector<int>>;

void shuffle(std::vector<int>& values, Rng& rng);

UniformHom sample_uniform_hom(const ModelParams& params, Rng& rng);

/// Exact weights f(t) of every bichromatic type with p(t) = 1/2, plus the
/// floating-point cumulative table used for the categorical draw.
struct TypeWeightTable {
  int n = 0;
  int k = 0;
  std::vector<TypeVector> types;
  std::vector<BigInt> weights;
  BigInt total;
  std::vector<double> probabilities;
  std::vector<double> cumulative;
  /// max_i |p_i - w_i/total| / (w_i/total), checked below 1e-12.
  double max_collapse_error = 0;
};

/// Cached per (n, k); safe to call from several threads.
std::shared_ptr<const TypeWeightTable> bichromatic_type_table(int n, int k);

TypeVector sample_type_vector(int n, int k, Rng& rng);
TypeVector sample_type_vector(const Coloring& chi, int k, Rng& rng);

/// Uniform over k-partitions of type (chi, t): the colour classes are split
/// into blocks of sizes j and k - j and the blocks are matched uniformly.
/// Requires t_0 = t_k = 0.
Partition sample_bichromatic_partition(const Coloring& chi, const TypeVector& t, Rng& rng);

/// Places an independent uniform k-cycle on every part.
std::vector<int> cycles_on_partition(const Partition& parts, int n, Rng& rng);

UniformHom sample_planted_hom(const ModelParams& params, const Coloring& chi, Rng& rng);

/// Rejection from the uniform model; a cross-check oracle for n <= 40.
UniformHom sample_planted_hom_rejection(const ModelParams& params, const Coloring& chi, Rng& rng,
                                        std::uint64_t max_attempts = 100'000'000);

}  // namespace sofic
