// sofic-lab: command-line front end. Parameters and the (seed, stream) pair
// go to stderr as a "# params:" line; results go to stdout.
//
// Exit codes: 0 success, 2 invalid input or numerical failure, 3 scale refusal.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sofic/analytics.hpp"
#include "sofic/errors.hpp"
#include "sofic/exact_count.hpp"
#include "sofic/harness.hpp"
#include "sofic/hypergraph.hpp"
#include "sofic/io.hpp"
#include "sofic/samplers.hpp"
#include "sofic/structure.hpp"
#include "sofic/tree_markov.hpp"

using namespace sofic;

namespace {

struct Common {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

void echo_params(const Common& common, const std::string& command, const std::string& record) {
  std::cerr << "# params: command=" << command << " " << describe(RngState{common.seed, common.stream});
  if (!record.empty()) std::cerr << " " << record;
  std::cerr << "\n";
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw InputError("bad integer '" + item + "'");
    } catch (const std::logic_error&) {
      throw InputError("bad integer '" + item + "'");
    }
  }
  return out;
}

// Words separated by ';', e.g. "s1; s1 s2".
std::vector<ReducedWord> parse_domain(const ModelParams& p, const std::string& text) {
  std::vector<ReducedWord> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ';'))
    if (item.find_first_not_of(' ') != std::string::npos) out.push_back(parse_word(p, item));
  return out;
}

std::vector<ReducedWord> default_sofic_domain(const ModelParams& p) {
  std::vector<ReducedWord> D;
  for (int i = 0; i < p.d; ++i) D.push_back(generator_power(p, i, 1));
  for (int i = 0; i < p.d; ++i)
    for (int j = 0; j < p.d; ++j)
      if (i != j) D.push_back(reduce_word(p, {Letter{i, 1}, Letter{j, 1}}));
  return D;
}

Coloring coloring_or_default(const std::string& text, int n) {
  if (text.empty()) return Coloring::first_half_zero(n);
  Coloring c = Coloring::from_string(text);
  if (c.size() != n) throw InputError("colouring length does not match n");
  return c;
}

void emit_instance(const UniformHom& hom, const std::string& output) {
  if (output.empty())
    std::cout << hom_to_json(hom) << "\n";
  else
    save_hom(output, hom);
}

int resolve_d(std::optional<int> d, std::optional<double> eta, int k) {
  if (d.has_value() == eta.has_value()) throw InputError("give exactly one of --d and --eta");
  if (d) return *d;
  EtaRounding r = d_of_eta(k, Real(*eta));
  if (!r.valid) throw DomainError("eta gives no valid degree for this k");
  return r.d;
}

std::string params_record(int d, int k, int n = -1) {
  std::ostringstream out;
  out << "d=" << d << " k=" << k;
  if (n >= 0) out << " n=" << n;
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random hypergraph colourings of free products of cyclic groups"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--seed", common.seed, "RNG seed")->capture_default_str();
  app.add_option("--stream", common.stream, "RNG stream")->capture_default_str();

  int k = 3, n = 0;
  std::optional<int> d;
  std::optional<double> eta;
  std::string input, output, chi_text;

  // sample-uniform / sample-planted
  auto* su = app.add_subcommand("sample-uniform", "Draw from the uniform model; prints the instance JSON");
  auto* sp = app.add_subcommand("sample-planted", "Draw from the planted model for a colouring");
  for (auto* sub : {su, sp}) {
    sub->add_option("--k", k)->required();
    sub->add_option("--d", d)->required();
    sub->add_option("--n", n)->required();
    sub->add_option("--output,-o", output, "Write the instance here instead of stdout");
  }
  sp->add_option("--chi", chi_text, "0/1 string; default 0^{n/2}1^{n/2}");

  // count
  std::string eps_text = "0", delta_text, good_text;
  bool equitable = false, cluster = false;
  auto* count = app.add_subcommand("count", "Exact colouring counts of an instance");
  count->add_option("--input,-i", input)->required();
  count->add_option("--eps", eps_text, "Violation fraction for Z(eps)")->capture_default_str();
  count->add_flag("--equitable", equitable, "Count proper equitable colourings");
  count->add_option("--chi", chi_text, "Reference colouring for --delta / --cluster");
  count->add_option("--delta", delta_text, "Count proper equitable colourings at this distance from --chi");
  count->add_flag("--cluster", cluster, "Cluster size of --chi");
  count->add_option("--good", good_text, "Count good colourings with this cluster threshold");

  // analytic
  auto* analytic = app.add_subcommand("analytic", "Closed-form and numeric quantities");
  analytic->require_subcommand(1);
  std::string x_text;
  int points = 2001, levels = 200;
  auto add_dk = [&](CLI::App* sub, bool need_d) {
    sub->add_option("--k", k)->required();
    if (need_d) {
      sub->add_option("--d", d);
      sub->add_option("--eta", eta);
    }
  };
  auto* a_f = analytic->add_subcommand("f", "f(d, k)");
  add_dk(a_f, true);
  auto* a_psi = analytic->add_subcommand("psi", "psi(x)");
  add_dk(a_psi, true);
  a_psi->add_option("--x", x_text)->required();
  auto* a_psi0 = analytic->add_subcommand("psi0", "psi_0(delta)");
  add_dk(a_psi0, true);
  a_psi0->add_option("--delta", x_text)->required();
  auto* a_tstar = analytic->add_subcommand("tstar", "The equitable optimum t*");
  add_dk(a_tstar, false);
  auto* a_fp = analytic->add_subcommand("fixed-point", "Core fixed-point iteration");
  add_dk(a_fp, true);
  a_fp->add_option("--levels", levels)->capture_default_str();
  auto* a_scan = analytic->add_subcommand("scan", "psi_0 grid scan as CSV");
  add_dk(a_scan, true);
  a_scan->add_option("--points", points)->capture_default_str();
  a_scan->add_option("--output,-o", output);

  // structure
  int level = 4, t_max = 3, trials = 0;
  std::string rho_text, set_text;
  auto* core = app.add_subcommand("core-density", "Density of C_l ∪ A_l \\ A'_l");
  core->add_option("--input,-i", input)->required();
  core->add_option("--chi", chi_text);
  core->add_option("--level", level)->capture_default_str();
  auto* expans = app.add_subcommand("expansivity", "Exhaustive |E_T| <= 2|T| scan");
  expans->add_option("--input,-i", input)->required();
  expans->add_option("--chi", chi_text);
  expans->add_option("--t-max", t_max)->capture_default_str();
  expans->add_option("--trials", trials, "Randomized growth trials beyond t-max")->capture_default_str();
  auto* rigid = app.add_subcommand("rigidity", "Search for a rho-rigidity violation");
  rigid->add_option("--input,-i", input)->required();
  rigid->add_option("--chi", chi_text);
  rigid->add_option("--rho", rho_text)->required();
  rigid->add_option("--set", set_text, "Comma-separated vertices of R; default all");

  // tree_markov
  int generator = 1, radius = -1;
  std::string pattern_text;
  auto* local = app.add_subcommand("local-convergence", "Pullback pattern frequency against 1/Q(D)");
  local->add_option("--input,-i", input)->required();
  local->add_option("--chi", chi_text);
  local->add_option("--generator", generator, "Single-edge domain along this generator (1-based)")
      ->capture_default_str();
  local->add_option("--radius", radius, "Use the ball of this radius instead");
  local->add_option("--pattern", pattern_text, "0/1 pattern in domain order; default the first proper one");

  // sofic-check
  std::string domain_text;
  double sofic_delta = 0.1;
  auto* sofic = app.add_subcommand("sofic-check", "(D, delta)-soficity of an instance");
  sofic->add_option("--input,-i", input)->required();
  sofic->add_option("--delta", sofic_delta)->capture_default_str();
  sofic->add_option("--domain", domain_text, "Words separated by ';'; default s_i and s_i s_j");

  // moments
  auto* moments = app.add_subcommand("moments", "Exact model moments");
  moments->require_subcommand(1);
  auto* m_first = moments->add_subcommand("first", "E[Z] under the uniform model");
  auto* m_pd = moments->add_subcommand("planted-distance", "E[Z_chi(delta)] under the planted model");
  for (auto* sub : {m_first, m_pd}) {
    sub->add_option("--k", k)->required();
    sub->add_option("--d", d)->required();
    sub->add_option("--n", n)->required();
  }
  m_pd->add_option("--delta", delta_text)->required();

  // experiment
  std::string config_path;
  auto* experiment = app.add_subcommand("experiment", "Run an experiment config");
  experiment->add_option("config", config_path)->required();
  std::string experiment_output;
  experiment->add_option("-o,--output", experiment_output, "Overrides the config's output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    PrecisionScope precision;
    Rng rng(common.seed, common.stream);

    if (*su || *sp) {
      ModelParams p{*d, k, n};
      if (*su) {
        echo_params(common, "sample-uniform", describe(p));
        emit_instance(sample_uniform_hom(p, rng), output);
      } else {
        const Coloring chi = coloring_or_default(chi_text, n);
        echo_params(common, "sample-planted", describe(p) + " chi=" + chi.str());
        emit_instance(sample_planted_hom(p, chi, rng), output);
      }
      return 0;
    }

    if (*count) {
      const UniformHom hom = load_hom(input);
      const LabeledHypergraph g = build_hypergraph(hom);
      std::ostringstream record;
      record << describe(hom.params()) << " input=" << input;
      CountReport rep;
      if (!good_text.empty()) {
        record << " good=" << good_text;
        echo_params(common, "count", record.str());
        rep = count_good(g, parse_rational(good_text));
      } else if (cluster) {
        const Coloring chi = coloring_or_default(chi_text, hom.n());
        record << " cluster chi=" << chi.str();
        echo_params(common, "count", record.str());
        rep = cluster_size(g, chi);
      } else if (!delta_text.empty()) {
        const Coloring chi = coloring_or_default(chi_text, hom.n());
        record << " chi=" << chi.str() << " delta=" << delta_text;
        echo_params(common, "count", record.str());
        rep = count_at_distance(g, chi, parse_rational(delta_text));
      } else if (equitable) {
        record << " equitable";
        echo_params(common, "count", record.str());
        rep = count_equitable(g);
      } else {
        record << " eps=" << eps_text;
        echo_params(common, "count", record.str());
        rep = count_proper(g, parse_rational(eps_text));
      }
      std::cout << to_string(rep.value) << "\n";
      std::cerr << "# method=" << to_string(rep.method) << " seconds=" << rep.elapsed << "\n";
      return 0;
    }

    if (*analytic) {
      const int digits = static_cast<int>(working_precision_bits() * 0.30103) - 2;
      if (*a_tstar) {
        echo_params(common, "analytic tstar", "k=" + std::to_string(k));
        for (const Rational& t : t_star(k)) std::cout << to_string(t) << "\n";
        return 0;
      }
      const int dd = resolve_d(d, eta, k);
      const std::string record = params_record(dd, k) + " precision=" + std::to_string(working_precision_bits());
      if (*a_f) {
        echo_params(common, "analytic f", record);
        std::cout << to_string(f_dk(dd, k), digits) << "\n";
      } else if (*a_psi) {
        echo_params(common, "analytic psi", record + " x=" + x_text);
        std::cout << to_string(psi(Real(parse_rational(x_text)), dd, k), digits) << "\n";
      } else if (*a_psi0) {
        echo_params(common, "analytic psi0", record + " delta=" + x_text);
        std::cout << to_string(psi0(Real(parse_rational(x_text)), dd, k), digits) << "\n";
      } else if (*a_fp) {
        echo_params(common, "analytic fixed-point", record);
        FixedPointTrace trace = core_fixed_point(dd, k, Real("1e-30"), levels);
        for (std::size_t l = 0; l < trace.p.size(); ++l) std::cout << "p" << l << "," << to_string(trace.p[l], digits) << "\n";
        std::cout << "p_inf," << to_string(trace.p_inf, digits) << "\n"
                  << "mu_core," << to_string(trace.mu_core, digits) << "\n"
                  << "mu_core_attached," << to_string(trace.mu_core_attached, digits) << "\n"
                  << "converged," << (trace.converged ? 1 : 0) << "\n";
      } else if (*a_scan) {
        echo_params(common, "analytic scan", record + " points=" + std::to_string(points));
        Psi0Scan scan = psi0_scan(dd, k, points);
        std::ostringstream csv;
        write_psi0_csv(csv, scan, digits);
        csv << "# params: " << record << " points=" << points << "\n";
        if (output.empty())
          std::cout << csv.str();
        else
          write_text_file(output, csv.str());
        std::cerr << "# argmax_delta=" << to_string(scan.points[scan.argmax].delta, 20)
                  << " margin=" << to_string(scan.margin, 6) << "\n";
      }
      return 0;
    }

    if (*core || *expans || *rigid) {
      const UniformHom hom = load_hom(input);
      const LabeledHypergraph g = build_hypergraph(hom);
      const Coloring chi = coloring_or_default(chi_text, hom.n());
      const std::string record = describe(hom.params()) + " input=" + input + " chi=" + chi.str();
      if (*core) {
        echo_params(common, "core-density", record + " level=" + std::to_string(level));
        Rational density = density_report(g, chi, level);
        std::cout << to_string(density) << "\n";
        std::cerr << "# decimal=" << density.convert_to<double>() << "\n";
      } else if (*expans) {
        echo_params(common, "expansivity",
                    record + " t_max=" + std::to_string(t_max) + " trials=" + std::to_string(trials));
        ExpansivityReport rep = expansivity_scan(g, chi, t_max, trials, rng);
        std::cout << "subsets_checked," << rep.subsets_checked << "\n"
                  << "max_excess," << rep.max_excess << "\n"
                  << "violations," << rep.violations << "\n"
                  << "random_max_excess," << rep.random_max_excess << "\n"
                  << "random_violation," << (rep.random_violation ? 1 : 0) << "\n";
      } else {
        std::vector<int> R = parse_int_list(set_text);
        if (set_text.empty())
          for (int v = 0; v < hom.n(); ++v) R.push_back(v);
        echo_params(common, "rigidity", record + " rho=" + rho_text + " set=" + (set_text.empty() ? "all" : set_text));
        auto witness = rigidity_violation_search(g, chi, R, parse_rational(rho_text));
        std::cout << (witness ? witness->str() : "rigid") << "\n";
      }
      return 0;
    }

    if (*local) {
      const UniformHom hom = load_hom(input);
      const Coloring chi = coloring_or_default(chi_text, hom.n());
      const TreeDomain D =
          radius >= 0 ? build_ball(hom.params(), radius) : make_domain(hom.params(), {{ReducedWord{}, generator - 1}});
      Pattern xi;
      if (pattern_text.empty()) {
        xi = proper_patterns(D).front();
      } else {
        Coloring c = Coloring::from_string(pattern_text);
        if (c.size() != static_cast<int>(D.size())) throw InputError("pattern length does not match the domain");
        xi = c.bits();
      }
      echo_params(common, "local-convergence",
                  describe(hom.params()) + " input=" + input + " domain_size=" + std::to_string(D.size()));
      LocalConvergence stat = local_convergence_stat(hom, chi, D, xi);
      std::cout << "frequency," << to_string(stat.frequency) << "\n"
                << "reference," << to_string(stat.reference) << "\n"
                << "improper," << stat.improper << "\n"
                << "non_injective," << stat.non_injective << "\n";
      return 0;
    }

    if (*sofic) {
      const UniformHom hom = load_hom(input);
      const auto D = domain_text.empty() ? default_sofic_domain(hom.params()) : parse_domain(hom.params(), domain_text);
      std::ostringstream record;
      record << describe(hom.params()) << " input=" << input << " delta=" << sofic_delta << " |D|=" << D.size();
      echo_params(common, "sofic-check", record.str());
      SoficReport rep = check_sofic(hom, D, sofic_delta);
      std::cout << "mult_fraction," << rep.mult_fraction << "\n"
                << "trace_fraction," << rep.trace_fraction << "\n"
                << "sofic," << (rep.sofic ? 1 : 0) << "\n";
      return 0;
    }

    if (*moments) {
      ModelParams p{*d, k, n};
      if (*m_first) {
        echo_params(common, "moments first", describe(p));
        std::cout << to_string(exact_first_moment(p)) << "\n";
      } else {
        echo_params(common, "moments planted-distance", describe(p) + " delta=" + delta_text);
        std::cout << to_string(exact_planted_distance_moment(p, parse_rational(delta_text))) << "\n";
      }
      return 0;
    }

    if (*experiment) {
      ExperimentConfig config = load_experiment_config(config_path);
      if (!experiment_output.empty()) config.output = experiment_output;
      echo_params(common, "experiment", describe(config));
      ExperimentReport rep = run_experiment(config);
      if (config.output.empty()) std::cout << rep.csv;
      std::cerr << rep.summary_json;
      return 0;
    }
  } catch (const ScaleError& e) {
    std::cerr << "scale refused: " << e.what() << "\n";
    return 3;
  } catch (const InputError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "outside domain: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
