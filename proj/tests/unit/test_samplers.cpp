#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "sofic/errors.hpp"
#include "sofic/hypergraph.hpp"
#include "sofic/partition_counts.hpp"
#include "sofic/samplers.hpp"

using namespace sofic;

namespace {

using Hist = std::map<std::vector<std::vector<int>>, std::int64_t>;

std::vector<UniformHom> planted_support(const ModelParams& p, const Coloring& chi) {
  std::vector<UniformHom> out;
  for_each_uniform_hom(p, [&](const UniformHom& h) {
    if (is_proper(build_hypergraph(h), chi)) out.push_back(h);
  });
  return out;
}

}  // namespace

TEST_CASE("rng streams are reproducible and distinct") {
  Rng a(42, 7), b(42, 7), c(42, 8);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    auto x = a(), y = b(), z = c();
    CHECK(x == y);
    differs = differs || x != z;
  }
  CHECK(differs);
  Rng r(1, 0);
  for (int i = 0; i < 1000; ++i) {
    CHECK(r.below(7) < 7);
    double u = r.uniform();
    CHECK((u >= 0.0 && u < 1.0));
  }
}

TEST_CASE("uniform sampler: determinism and single-cycle case") {
  const ModelParams p{3, 4, 12};
  Rng a(9, 1), b(9, 1);
  CHECK(sample_uniform_hom(p, a) == sample_uniform_hom(p, b));
  Rng r(3, 0);
  for (int trial = 0; trial < 100; ++trial) {
    auto h = sample_uniform_hom(ModelParams{2, 5, 5}, r);
    CHECK(build_hypergraph(h).edge_count() == 2);
  }
}

TEST_CASE("uniform sampler frequencies at k=2, d=1, n=4") {
  Rng rng(100, 0);
  Hist hist;
  const int samples = 30000;
  for (int i = 0; i < samples; ++i) ++hist[sample_uniform_hom({1, 2, 4}, rng).images()];
  CHECK(hist.size() == 3);
  for (const auto& [key, count] : hist) CHECK(std::abs(count / double(samples) - 1.0 / 3) < 0.02);
}

TEST_CASE("uniform sampler passes chi-square against the enumeration") {
  for (ModelParams p : {ModelParams{2, 2, 4}, ModelParams{1, 3, 6}, ModelParams{2, 3, 6}}) {
    const auto support = enumerate_uniform_homs(p);
    Rng rng(200 + p.d * 10 + p.k, 0);
    Hist hist;
    const std::int64_t samples = 1'000'000;
    for (std::int64_t i = 0; i < samples; ++i) ++hist[sample_uniform_hom(p, rng).images()];
    CHECK(hist.size() == support.size());
    const double pval = oracle::chi_square_uniform_p(hist, support.size(), samples);
    CAPTURE(describe(p));
    CHECK(pval > 1e-3);
  }
}

TEST_CASE("planted sampler passes chi-square against the filtered enumeration") {
  for (ModelParams p : {ModelParams{2, 2, 4}, ModelParams{2, 3, 6}, ModelParams{1, 2, 6}}) {
    const Coloring chi = Coloring::first_half_zero(p.n);
    const auto support = planted_support(p, chi);
    Rng rng(300 + p.d * 10 + p.k, 0);
    Hist hist;
    const std::int64_t samples = 1'000'000;
    for (std::int64_t i = 0; i < samples; ++i) {
      auto h = sample_planted_hom(p, chi, rng);
      ++hist[h.images()];
    }
    CHECK(hist.size() == support.size());
    for (const auto& h : support) CHECK(hist.count(h.images()) == 1);
    const double pval = oracle::chi_square_uniform_p(hist, support.size(), samples);
    CAPTURE(describe(p));
    CHECK(pval > 1e-3);
  }
  CHECK(planted_support({2, 2, 4}, Coloring::from_string("0011")).size() == 4);
}

TEST_CASE("planted outputs are always proper") {
  Rng rng(5, 0);
  for (ModelParams p : {ModelParams{4, 3, 30}, ModelParams{20, 6, 120}, ModelParams{3, 2, 50}}) {
    Coloring chi = Coloring::first_half_zero(p.n);
    for (int trial = 0; trial < 50; ++trial) CHECK(monochromatic_edge_count(build_hypergraph(sample_planted_hom(p, chi, rng)), chi) == 0);
  }
  // An arbitrary equitable colouring, not just the first-half one.
  Coloring chi = Coloring::from_string("011010011001");
  for (int trial = 0; trial < 50; ++trial) CHECK(is_proper(build_hypergraph(sample_planted_hom({3, 3, 12}, chi, rng)), chi));
  CHECK_THROWS_AS(sample_planted_hom({1, 4, 6}, Coloring::from_string("000111"), rng), InputError);
  // The exact type table is refused, not exhausted, when it would be too large.
  CHECK_THROWS_AS(sample_planted_hom({1, 25, 5000}, Coloring::first_half_zero(5000), rng), ScaleError);
  CHECK_THROWS_AS(sample_planted_hom({1, 3, 6}, Coloring::from_string("000011"), rng), DomainError);
}

TEST_CASE("rejection and direct planted samplers agree") {
  const ModelParams p{2, 2, 4};
  const Coloring chi = Coloring::from_string("0011");
  Rng a(1, 0), b(2, 0);
  Hist direct, rejection;
  const int samples = 100000;
  for (int i = 0; i < samples; ++i) {
    ++direct[sample_planted_hom(p, chi, a).images()];
    ++rejection[sample_planted_hom_rejection(p, chi, b).images()];
  }
  double tv = 0;
  for (const auto& [key, count] : direct) tv += std::abs(count - rejection[key]) / double(samples);
  CHECK(tv / 2 < 0.02);
}

TEST_CASE("type vector draws") {
  Rng rng(7, 0);
  for (int n : {4, 6, 10}) {
    auto t = sample_type_vector(n, 2, rng);
    CHECK(t.counts == std::vector<std::int64_t>{0, n / 2, 0});
  }

  // k = 4, n = 8: two bichromatic types with p = 1/2.
  auto table = bichromatic_type_table(8, 4);
  REQUIRE(table->types.size() == 2);
  CHECK(table->max_collapse_error < 1e-12);
  const TypeVector two{8, 4, {0, 0, 2, 0, 0}}, split{8, 4, {0, 1, 0, 1, 0}};
  const double w_two = count_partitions_of_type(two).convert_to<double>();
  const double w_split = count_partitions_of_type(split).convert_to<double>();
  int hits = 0;
  const int samples = 100000;
  for (int i = 0; i < samples; ++i) hits += sample_type_vector(8, 4, rng) == two;
  const double expected = w_two / (w_two + w_split);
  CHECK(std::abs(hits / double(samples) - expected) < 0.02 * expected);

  // k = 3, n = 120: the only feasible type is the lattice point nearest t*.
  std::map<TypeVector, int> hist;
  for (int i = 0; i < 1000; ++i) ++hist[sample_type_vector(120, 3, rng)];
  auto mode = std::max_element(hist.begin(), hist.end(), [](auto& a, auto& b) { return a.second < b.second; });
  CHECK(mode->first.counts == std::vector<std::int64_t>{0, 20, 20, 0});

  // k = 4, n = 48: the mode is the lattice type closest to t* = (0, 1/14, 3/28, 1/14, 0).
  hist.clear();
  for (int i = 0; i < 20000; ++i) ++hist[sample_type_vector(48, 4, rng)];
  mode = std::max_element(hist.begin(), hist.end(), [](auto& a, auto& b) { return a.second < b.second; });
  // n t* = (0, 3.43, 5.14, 3.43, 0); feasible types have t1 = t3 and t1 + t2 + t3 = 12.
  CHECK(mode->first.counts == std::vector<std::int64_t>{0, 3, 6, 3, 0});
}

TEST_CASE("bichromatic partitions have the requested type") {
  Rng rng(11, 0);
  Coloring chi = Coloring::from_string("0011");
  std::map<Partition, int> hist;
  const int samples = 40000;
  for (int i = 0; i < samples; ++i) {
    auto parts = sample_bichromatic_partition(chi, TypeVector{4, 2, {0, 2, 0}}, rng);
    for (auto& part : parts) std::sort(part.begin(), part.end());
    std::sort(parts.begin(), parts.end());
    ++hist[parts];
  }
  REQUIRE(hist.size() == 2);
  CHECK(hist.count(Partition{{0, 2}, {1, 3}}) == 1);
  CHECK(hist.count(Partition{{0, 3}, {1, 2}}) == 1);
  for (const auto& [parts, count] : hist) CHECK(std::abs(count / double(samples) - 0.5) < 0.02);

  Coloring big = Coloring::first_half_zero(40);
  for (int trial = 0; trial < 100; ++trial) {
    TypeVector t = sample_type_vector(big, 5, rng);
    auto parts = sample_bichromatic_partition(big, t, rng);
    TypeVector seen{40, 5, std::vector<std::int64_t>(6, 0)};
    for (const auto& part : parts) {
      int ones = 0;
      for (int v : part) ones += big[v];
      CHECK((ones > 0 && ones < 5));
      ++seen.counts[ones];
    }
    CHECK(seen == t);
  }
  CHECK_THROWS_AS(sample_bichromatic_partition(chi, TypeVector{4, 2, {1, 0, 1}}, rng), DomainError);
}

TEST_CASE("generator type vectors are uncorrelated") {
  const ModelParams p{2, 4, 8};
  const Coloring chi = Coloring::first_half_zero(8);
  Rng rng(13, 0);
  const int samples = 100000;
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (int i = 0; i < samples; ++i) {
    auto T = generator_type(build_hypergraph(sample_planted_hom(p, chi, rng)), chi);
    const double x = T.count(0, 2), y = T.count(1, 2);
    sx += x, sy += y, sxx += x * x, syy += y * y, sxy += x * y;
  }
  const double mx = sx / samples, my = sy / samples;
  const double corr = (sxy / samples - mx * my) / std::sqrt((sxx / samples - mx * mx) * (syy / samples - my * my));
  CHECK(std::abs(corr) < 0.01);
}

TEST_CASE("planted law is invariant under colour-preserving relabelling") {
  // Vertices 0 and 1 share colour 0; the number of colour-1 vertices in the
  // generator-1 edge through each has the same law.
  const ModelParams p{2, 4, 16};
  const Coloring chi = Coloring::first_half_zero(16);
  Rng rng(17, 0);
  const int samples = 50000;
  std::vector<double> f0(5, 0), f1(5, 0);
  for (int i = 0; i < samples; ++i) {
    auto g = build_hypergraph(sample_planted_hom(p, chi, rng));
    auto ones = [&](int v) {
      int c = 0;
      for (int u : g.edge(g.edge_of(v, 0))) c += chi[u];
      return c;
    };
    f0[ones(0)] += 1.0 / samples;
    f1[ones(7)] += 1.0 / samples;
  }
  for (int j = 0; j < 5; ++j) CHECK(std::abs(f0[j] - f1[j]) < 0.01);
}
