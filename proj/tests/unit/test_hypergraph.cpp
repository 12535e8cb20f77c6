#include "doctest.h"
#include "oracles.hpp"
#include "sofic/errors.hpp"
#include "sofic/hypergraph.hpp"
#include "sofic/rng.hpp"
#include "sofic/samplers.hpp"

using namespace sofic;

namespace {

std::vector<int> edge_vec(const LabeledHypergraph& g, int e) {
  auto s = g.edge(e);
  return {s.begin(), s.end()};
}

}  // namespace

TEST_CASE("build_hypergraph lists orbits in label then vertex order") {
  auto single = build_hypergraph(UniformHom::from_images(4, {{1, 2, 3, 0}}));
  REQUIRE(single.edge_count() == 1);
  CHECK(edge_vec(single, 0) == std::vector<int>{0, 1, 2, 3});

  auto g = build_hypergraph(UniformHom::from_images(2, {{1, 0, 3, 2}}));
  REQUIRE(g.edge_count() == 2);
  CHECK(edge_vec(g, 0) == std::vector<int>{0, 1});
  CHECK(edge_vec(g, 1) == std::vector<int>{2, 3});
  CHECK(g.label(0) == 0);

  auto c4 = build_hypergraph(UniformHom::from_images(2, {{1, 0, 3, 2}, {2, 3, 0, 1}}));
  REQUIRE(c4.edge_count() == 4);
  CHECK(edge_vec(c4, 2) == std::vector<int>{0, 2});
  CHECK(edge_vec(c4, 3) == std::vector<int>{1, 3});
  CHECK(c4.label(3) == 1);
}

TEST_CASE("every label partitions the vertex set") {
  Rng rng(1, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const ModelParams p{3, 4, 24};
    auto g = build_hypergraph(sample_uniform_hom(p, rng));
    CHECK(g.edge_count() == p.d * p.n / p.k);
    for (int label = 0; label < p.d; ++label) {
      std::vector<int> hits(p.n, 0);
      for (int e = 0; e < g.edge_count(); ++e)
        if (g.label(e) == label)
          for (int v : g.edge(e)) ++hits[v];
      for (int v = 0; v < p.n; ++v) {
        CHECK(hits[v] == 1);
        CHECK(g.label(g.edge_of(v, label)) == label);
      }
    }
  }
}

TEST_CASE("monochromatic counts and eps-properness") {
  auto g = build_hypergraph(UniformHom::from_images(2, {{1, 0, 3, 2}}));
  CHECK(monochromatic_edge_count(g, Coloring::from_string("0000")) == 2);
  CHECK(monochromatic_edge_count(g, Coloring::from_string("0101")) == 0);
  CHECK(monochromatic_edge_count(g, Coloring::from_string("0011")) == 2);
  CHECK(is_proper(g, Coloring::from_string("0101")));
  CHECK(is_eps_proper(g, Coloring::from_string("0011"), make_rational(1, 2)));
  CHECK_FALSE(is_eps_proper(g, Coloring::from_string("0011"), make_rational(1, 4)));
  CHECK(violation_budget(make_rational(1, 3), 10) == 3);
  CHECK_THROWS_AS(monochromatic_edge_count(g, Coloring::from_string("010")), InputError);
}

TEST_CASE("properness, zero mono count and the type matrix agree") {
  Rng rng(2, 0);
  const ModelParams p{2, 3, 6};
  for (int trial = 0; trial < 20; ++trial) {
    auto hom = sample_uniform_hom(p, rng);
    auto g = build_hypergraph(hom);
    for (std::uint64_t mask = 0; mask < 64; ++mask) {
      Coloring c = oracle::from_mask(mask, 6);
      const int mono = monochromatic_edge_count(g, c);
      CHECK(mono == oracle::mono_orbits(hom, c));
      auto T = generator_type(g, c);
      bool zero_ends = true;
      for (int i = 0; i < p.d; ++i) zero_ends = zero_ends && T.count(i, 0) == 0 && T.count(i, p.k) == 0;
      CHECK((mono == 0) == zero_ends);
      CHECK(T.proper() == (mono == 0));
    }
  }
}

TEST_CASE("all-zero colouring has every edge monochromatic") {
  Rng rng(3, 0);
  const ModelParams p{3, 3, 12};
  auto g = build_hypergraph(sample_uniform_hom(p, rng));
  Coloring zeros(std::vector<std::uint8_t>(12, 0));
  CHECK(monochromatic_edge_count(g, zeros) == p.d * p.n / p.k);
  auto T = generator_type(g, zeros);
  for (int i = 0; i < p.d; ++i) {
    CHECK(T.value(i, 0) == make_rational(1, 3));
    for (int j = 1; j <= p.k; ++j) CHECK(T.count(i, j) == 0);
  }
}

TEST_CASE("generator_type example and row sums") {
  auto g = build_hypergraph(UniformHom::from_images(2, {{1, 0, 3, 2}}));
  auto T = generator_type(g, Coloring::from_string("0101"));
  CHECK(T.value(0, 0) == 0);
  CHECK(T.value(0, 1) == make_rational(1, 2));
  CHECK(T.value(0, 2) == 0);
  REQUIRE(T.common_mean().has_value());
  CHECK(*T.common_mean() == make_rational(1, 2));
}

TEST_CASE("critical edges and supports") {
  auto g = build_hypergraph(UniformHom::from_images(3, {{1, 2, 0}}));
  CHECK(critical_edges(g, Coloring::from_string("000")).empty());
  auto crit = critical_edges(g, Coloring::from_string("100"));
  REQUIRE(crit.size() == 1);
  CHECK(crit[0].support == 0);
  crit = critical_edges(g, Coloring::from_string("101"));
  REQUIRE(crit.size() == 1);
  CHECK(crit[0].support == 1);

  auto g2 = build_hypergraph(UniformHom::from_images(2, {{1, 0}}));
  CHECK_THROWS_AS(critical_edges(g2, Coloring::from_string("01")), DomainError);

  // At most one supported edge per generator at each vertex.
  Rng rng(4, 0);
  const ModelParams p{5, 4, 16};
  for (int trial = 0; trial < 20; ++trial) {
    Coloring chi = Coloring::first_half_zero(16);
    auto h = build_hypergraph(sample_planted_hom(p, chi, rng));
    std::vector<int> per(16, 0);
    for (auto& c : critical_edges(h, chi)) ++per[c.support];
    for (int v = 0; v < 16; ++v) CHECK(per[v] <= p.d);
  }
}

TEST_CASE("hamming distance is a metric") {
  CHECK(hamming_distance(Coloring::from_string("0101"), Coloring::from_string("0101")) == 0);
  CHECK(hamming_distance(Coloring::from_string("0101"), Coloring::from_string("1010")) == 1);
  CHECK(hamming_distance(Coloring::from_string("0101"), Coloring::from_string("0111")) == make_rational(1, 4));
  CHECK_THROWS_AS(hamming_distance(Coloring::from_string("01"), Coloring::from_string("011")), InputError);
  Rng rng(6, 0);
  for (int trial = 0; trial < 500; ++trial) {
    Coloring a = oracle::from_mask(rng() & 0xFFF, 12), b = oracle::from_mask(rng() & 0xFFF, 12),
             c = oracle::from_mask(rng() & 0xFFF, 12);
    CHECK(hamming_distance(a, b) == hamming_distance(b, a));
    CHECK(hamming_distance(a, c) <= hamming_distance(a, b) + hamming_distance(b, c));
    CHECK((hamming_distance(a, b) == 0) == (a == b));
  }
}

TEST_CASE("pair type matrices") {
  const int part[] = {0, 1};
  PairTypeMatrix m = pair_type_matrix(part, Coloring::from_string("10"), Coloring::from_string("01"));
  CHECK(m == PairTypeMatrix{0, 1, 1, 0});

  Rng rng(8, 0);
  const ModelParams p{2, 4, 8};
  Coloring chi = Coloring::first_half_zero(8);
  auto g = build_hypergraph(sample_planted_hom(p, chi, rng));
  for (int label = 0; label < 2; ++label)
    for (const auto& [e, count] : pair_type_counts(g, chi, chi, label)) CHECK((e.e01 == 0 && e.e10 == 0));

  // n = 2k, one part per generator: the part is bichromatic with e00 = e11 = k/2.
  UniformHom single = UniformHom::from_images(4, {{1, 2, 3, 0}});
  Coloring c = Coloring::from_string("0011");
  auto t = pair_type_map(build_hypergraph(single), c, c, 0);
  REQUIRE(t.size() == 1);
  CHECK(t.begin()->first == PairTypeMatrix{2, 0, 0, 2});
  CHECK(t.begin()->second == make_rational(1, 4));

  CHECK_THROWS_AS(pair_type_map(build_hypergraph(single), Coloring::from_string("0000"), c, 0), DomainError);
}

TEST_CASE("pair type maps satisfy the marginal constraints") {
  Rng rng(9, 0);
  const ModelParams p{3, 4, 16};
  Coloring chi = Coloring::first_half_zero(16);
  for (int trial = 0; trial < 20; ++trial) {
    auto hom = sample_planted_hom(p, chi, rng);
    auto g = build_hypergraph(hom);
    // A second proper colouring: the complement.
    Coloring other = chi.flipped();
    for (int label = 0; label < p.d; ++label) {
      Rational total = 0, m1 = 0, m2 = 0;
      for (const auto& [e, t] : pair_type_map(g, chi, other, label)) {
        total += t;
        m1 += (e.e10 + e.e11) * t;
        m2 += (e.e01 + e.e11) * t;
      }
      CHECK(total == make_rational(1, 4));
      CHECK(m1 == make_rational(1, 2));
      CHECK(m2 == make_rational(1, 2));
    }
  }
}

TEST_CASE("admissible pair types") {
  for (int k = 2; k <= 6; ++k) {
    auto types = admissible_pair_types(k);
    for (const auto& e : types) {
      CHECK(e.total() == k);
      CHECK(e.admissible(k));
    }
    // Count by brute force over all 4-compositions of k.
    std::size_t expected = 0;
    for (int a = 0; a <= k; ++a)
      for (int b = 0; a + b <= k; ++b)
        for (int c = 0; a + b + c <= k; ++c) {
          PairTypeMatrix e{a, b, c, k - a - b - c};
          expected += e.e10 + e.e11 > 0 && e.e10 + e.e11 < k && e.e01 + e.e11 > 0 && e.e01 + e.e11 < k;
        }
    CHECK(types.size() == expected);
  }
}
