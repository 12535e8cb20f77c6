#pragma once

// Exact counts of proper colourings of a fixed hypergraph, and exact model
// moments over random uniform homomorphisms. No floating point is used for
// any returned value.

#include <functional>
#include <string>
#include <vector>

#include "sofic/group.hpp"
#include "sofic/hypergraph.hpp"
#include "sofic/numeric.hpp"
#include "sofic/partition_counts.hpp"

namespace sofic {

enum class CountMethod { enumeration, closed_form };
std::string to_string(CountMethod method);

struct CountReport {
  BigInt value;
  CountMethod method = CountMethod::enumeration;
  double elapsed = 0;  // seconds
};

struct CountBounds {
  int max_n_exact = 40;      // eps = 0
  int max_n_violations = 32; // eps > 0
};

/// Z(eps; sigma): colourings with at most floor(eps n) monochromatic edges.
CountReport count_proper(const LabeledHypergraph& g, const Rational& eps, const CountBounds& bounds = {});
/// Z_e(sigma): proper equitable colourings.
CountReport count_equitable(const LabeledHypergraph& g, const CountBounds& bounds = {});
/// Z_chi(delta): proper equitable colourings at Hamming distance exactly delta
/// from chi. Requires delta n / 2 to be an integer.
CountReport count_at_distance(const LabeledHypergraph& g, const Coloring& chi, const Rational& delta,
                              const CountBounds& bounds = {});

/// Largest h with h <= 2^{-k/2} n, computed exactly.
int cluster_radius(int n, int k);

enum class ClusterStrategy { automatic, distance_bounded, filter_all };
/// |C_sigma(chi)|: proper equitable colourings within distance 2^{-k/2}.
CountReport cluster_size(const LabeledHypergraph& g, const Coloring& chi,
                         ClusterStrategy strategy = ClusterStrategy::automatic,
                         const CountBounds& bounds = {});

/// Every proper equitable colouring, in search order.
std::vector<Coloring> proper_equitable_colorings(const LabeledHypergraph& g, const CountBounds& bounds = {});

/// Visits every k-partition of [n] (parts sorted, listed by smallest
/// element). Brute-force oracle for the closed-form partition counts.
void for_each_k_partition(int n, int k, const std::function<void(const std::vector<std::vector<int>>&)>& visit);

/// E^u_n[Z] = sum_m C(n, m) (sum over proper types with m ones of f(t) / N)^d,
/// N the number of k-partitions. d = 0 is accepted and gives 2^n.
Rational exact_first_moment(const ModelParams& params);
/// E^u_n[Z_e] = C(n, n/2) (sum over bichromatic types with p = 1/2 of f / N)^d.
Rational exact_equitable_first_moment(const ModelParams& params);
/// E^p_n[Z_chi(delta)] = C(n/2, m)^2 (sum_t g(t) / sum_t f(t))^d, m = delta n / 2.
Rational exact_planted_distance_moment(const ModelParams& params, const Rational& delta);

/// Equitable, proper, and |C_sigma(chi)| <= threshold.
bool is_good_coloring(const LabeledHypergraph& g, const Coloring& chi, const Rational& threshold,
                      const CountBounds& bounds = {});
/// Z_g: the number of good colourings.
CountReport count_good(const LabeledHypergraph& g, const Rational& threshold, const CountBounds& bounds = {});

}  // namespace sofic
