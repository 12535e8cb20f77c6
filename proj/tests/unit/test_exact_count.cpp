#include "doctest.h"
#include "oracles.hpp"
#include "sofic/errors.hpp"
#include "sofic/exact_count.hpp"
#include "sofic/samplers.hpp"

using namespace sofic;

namespace {

UniformHom four_cycle() { return UniformHom::from_images(2, {{1, 0, 3, 2}, {2, 3, 0, 1}}); }

// Average over Hom_unif of the brute-force proper count.
Rational enumeration_first_moment(const ModelParams& p) {
  BigInt total = 0;
  std::int64_t homs = 0;
  for_each_uniform_hom(p, [&](const UniformHom& h) {
    total += oracle::count_colorings(h, 0);
    ++homs;
  });
  return Rational(total, homs);
}

// Average over Hom_chi of the number of proper equitable colourings at
// distance exactly delta from chi, by brute force.
Rational enumeration_planted_moment(const ModelParams& p, const Coloring& chi, const Rational& delta) {
  BigInt total = 0;
  std::int64_t homs = 0;
  for_each_uniform_hom(p, [&](const UniformHom& h) {
    if (oracle::mono_orbits(h, chi) != 0) return;
    ++homs;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << p.n); ++mask) {
      Coloring c = oracle::from_mask(mask, p.n);
      if (!c.equitable() || hamming_distance(c, chi) != delta) continue;
      total += oracle::mono_orbits(h, c) == 0;
    }
  });
  return Rational(total, homs);
}

}  // namespace

TEST_CASE("count_proper examples") {
  for (int k = 2; k <= 6; ++k) {
    std::vector<int> cyc(k);
    for (int v = 0; v < k; ++v) cyc[v] = (v + 1) % k;
    auto g = build_hypergraph(UniformHom::from_images(k, {cyc}));
    CHECK(count_proper(g, Rational(0)).value == (BigInt(1) << k) - 2);
  }
  auto c4 = build_hypergraph(four_cycle());
  CHECK(count_proper(c4, Rational(0)).value == 2);
  // eps >= d/k: every colouring qualifies.
  CountReport all = count_proper(c4, Rational(1));
  CHECK(all.value == 16);
  CHECK(all.method == CountMethod::closed_form);
}

TEST_CASE("count_proper agrees with brute force") {
  Rng rng(21, 0);
  for (ModelParams p : {ModelParams{2, 3, 12}, ModelParams{3, 2, 10}, ModelParams{4, 4, 16}, ModelParams{5, 3, 15}}) {
    for (int trial = 0; trial < 5; ++trial) {
      auto hom = sample_uniform_hom(p, rng);
      auto g = build_hypergraph(hom);
      for (int budget : {0, 1, 3}) {
        Rational eps = make_rational(budget, p.n);
        CHECK(count_proper(g, eps).value == oracle::count_colorings(hom, budget));
      }
      CHECK(count_equitable(g).value == oracle::count_colorings(hom, 0, p.n % 2 == 0) * (p.n % 2 == 0));
    }
  }
}

TEST_CASE("count bounds refuse large instances") {
  Rng rng(1, 0);
  auto g = build_hypergraph(sample_uniform_hom({2, 3, 48}, rng));
  CHECK_THROWS_AS(count_proper(g, Rational(0)), ScaleError);
  auto h = build_hypergraph(sample_uniform_hom({2, 3, 36}, rng));
  CHECK_THROWS_AS(count_proper(h, make_rational(1, 36)), ScaleError);
}

TEST_CASE("Z(eps) is monotone and Z >= Z_e") {
  Rng rng(22, 0);
  for (int trial = 0; trial < 10; ++trial) {
    auto g = build_hypergraph(sample_uniform_hom({3, 3, 18}, rng));
    BigInt previous = 0;
    for (int budget = 0; budget <= 6; ++budget) {
      BigInt z = count_proper(g, make_rational(budget, 18)).value;
      CHECK(z >= previous);
      previous = z;
    }
    CHECK(count_proper(g, Rational(0)).value >= count_equitable(g).value);
  }
}

TEST_CASE("distance counts, cluster sizes and their identities") {
  auto g = build_hypergraph(UniformHom::from_images(2, {{1, 0, 3, 2}}));
  Coloring chi = Coloring::from_string("0101");
  CHECK(count_equitable(g).value == 4);
  CHECK(count_at_distance(g, chi, make_rational(1, 2)).value == 2);
  CHECK(count_at_distance(g, chi, Rational(0)).value == 1);
  CHECK_THROWS_AS(count_at_distance(g, chi, make_rational(1, 4)), DomainError);
  CHECK_THROWS_AS(count_at_distance(g, Coloring::from_string("0011"), Rational(0)), DomainError);

  Rng rng(23, 0);
  for (ModelParams p : {ModelParams{3, 3, 18}, ModelParams{4, 4, 24}, ModelParams{2, 2, 12}}) {
    Coloring c = Coloring::first_half_zero(p.n);
    for (int trial = 0; trial < 5; ++trial) {
      auto g2 = build_hypergraph(sample_planted_hom(p, c, rng));
      BigInt sum = 0;
      for (int m = 0; m <= p.n / 2; ++m) {
        Rational delta = make_rational(2 * m, p.n);
        BigInt z = count_at_distance(g2, c, delta).value;
        CHECK(z == count_at_distance(g2, c, 1 - delta).value);
        sum += z;
      }
      CHECK(sum == count_equitable(g2).value);
      CHECK(count_at_distance(g2, c, Rational(0)).value == 1);

      BigInt cluster = cluster_size(g2, c).value;
      CHECK(cluster >= 1);
      CHECK(cluster == cluster_size(g2, c, ClusterStrategy::filter_all).value);
      CHECK(cluster == cluster_size(g2, c, ClusterStrategy::distance_bounded).value);
      BigInt direct = 0;
      const int radius = cluster_radius(p.n, p.k);
      for (const auto& other : proper_equitable_colorings(g2)) direct += hamming_count(c, other) <= radius;
      CHECK(cluster == direct);
    }
  }
}

TEST_CASE("cluster radius is exact") {
  CHECK(cluster_radius(16, 2) == 8);
  CHECK(cluster_radius(16, 4) == 4);
  CHECK(cluster_radius(20, 3) == 7);  // 20 / sqrt(8) = 7.07
  CHECK(cluster_radius(60, 6) == 7);  // 60 / 8 = 7.5
}

TEST_CASE("first moment: closed form against enumeration") {
  CHECK(exact_first_moment({1, 2, 4}) == 4);
  CHECK(exact_first_moment({2, 2, 4}) == make_rational(8, 3));
  CHECK(exact_first_moment({0, 3, 6}) == 64);
  for (ModelParams p : {ModelParams{1, 2, 4}, ModelParams{2, 2, 4}, ModelParams{3, 2, 4}, ModelParams{1, 3, 6},
                        ModelParams{2, 3, 6}, ModelParams{1, 2, 6}, ModelParams{2, 2, 6}, ModelParams{1, 4, 8}}) {
    CAPTURE(describe(p));
    CHECK(exact_first_moment(p) == enumeration_first_moment(p));
  }
}

TEST_CASE("equitable first moment against enumeration") {
  for (ModelParams p : {ModelParams{1, 2, 4}, ModelParams{2, 2, 4}, ModelParams{2, 3, 6}, ModelParams{2, 2, 6}}) {
    BigInt total = 0;
    std::int64_t homs = 0;
    for_each_uniform_hom(p, [&](const UniformHom& h) {
      total += oracle::count_colorings(h, 0, true);
      ++homs;
    });
    CHECK(exact_equitable_first_moment(p) == Rational(total, homs));
  }
}

TEST_CASE("planted distance moment against enumeration") {
  CHECK(exact_planted_distance_moment({2, 3, 6}, Rational(0)) == 1);
  CHECK(exact_planted_distance_moment({2, 3, 6}, Rational(1)) == 1);
  CHECK(exact_planted_distance_moment({3, 4, 8}, Rational(1)) == 1);
  struct Case {
    ModelParams p;
    Rational delta;
  };
  for (const Case& c : {Case{{1, 2, 4}, make_rational(1, 2)}, Case{{2, 2, 4}, make_rational(1, 2)},
                        Case{{2, 2, 4}, Rational(1)}, Case{{2, 3, 6}, make_rational(1, 3)},
                        Case{{2, 3, 6}, make_rational(2, 3)}, Case{{1, 2, 8}, make_rational(1, 4)}}) {
    Coloring chi = Coloring::first_half_zero(c.p.n);
    CAPTURE(describe(c.p));
    CHECK(exact_planted_distance_moment(c.p, c.delta) == enumeration_planted_moment(c.p, chi, c.delta));
  }
}

TEST_CASE("good colourings") {
  auto c4 = build_hypergraph(four_cycle());
  CHECK_FALSE(is_good_coloring(c4, Coloring::from_string("0011"), Rational(100)));
  // The 4-cycle's proper colourings are 0110 and 1001 (edges {0,1},{2,3},{0,2},{1,3}).
  CHECK(is_good_coloring(c4, Coloring::from_string("0110"), Rational(16)));
  CHECK(count_good(c4, Rational(16)).value == 2);
  // Cluster radius at n = 4, k = 2 is 2, so each colouring's cluster is itself.
  CHECK(count_good(c4, Rational(1)).value == 2);
  CHECK(count_good(c4, make_rational(1, 2)).value == 0);

  // threshold E^u[Z_e] on a hand-checkable case
  const Rational threshold = exact_equitable_first_moment({2, 2, 4});
  std::int64_t good = 0;
  for (std::uint64_t mask = 0; mask < 16; ++mask) {
    Coloring c = oracle::from_mask(mask, 4);
    if (!c.equitable() || !is_proper(c4, c)) continue;
    good += Rational(cluster_size(c4, c).value) <= threshold;
  }
  CHECK(count_good(c4, threshold).value == good);
}
