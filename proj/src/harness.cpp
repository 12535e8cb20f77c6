#include "sofic/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "sofic/analytics.hpp"
#include "sofic/errors.hpp"
#include "sofic/exact_count.hpp"
#include "sofic/hypergraph.hpp"
#include "sofic/io.hpp"
#include "sofic/samplers.hpp"
#include "sofic/structure.hpp"
#include "sofic/tree_markov.hpp"

namespace sofic {

namespace {

using nlohmann::json;

const std::vector<std::string> kKinds = {"first-moment", "density", "local-convergence", "sofic", "concentration"};

// Streams at and above this value are reserved for per-experiment draws that
// are not tied to a replica (tree Monte Carlo, concentration reference).
constexpr std::uint64_t kReservedStream = std::uint64_t{1} << 62;

std::string fmt(double x) {
  std::ostringstream out;
  out << std::setprecision(17) << x;
  return out.str();
}

double tolerance(const ExperimentConfig& c, const std::string& name, double fallback) {
  auto it = c.tolerances.find(name);
  return it == c.tolerances.end() ? fallback : it->second;
}

struct Stats {
  double mean = 0;
  double standard_error = 0;
  std::int64_t count = 0;
};

Stats summarize(const std::vector<double>& xs) {
  Stats s;
  s.count = static_cast<std::int64_t>(xs.size());
  if (xs.empty()) return s;
  double sum = 0;
  for (double x : xs) sum += x;
  s.mean = sum / xs.size();
  if (xs.size() > 1) {
    double ss = 0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.standard_error = std::sqrt(ss / (xs.size() - 1) / xs.size());
  }
  return s;
}

// One replica's output: the row cells after (n, replica, seed, stream), a
// numeric value for the summary, or an error message.
struct ReplicaResult {
  std::vector<std::string> cells;
  double value = 0;
  bool ok = true;
  std::string error;
};

template <class Body>
std::vector<ReplicaResult> run_replicas(int replicas, Body body) {
  std::vector<ReplicaResult> results(replicas);
  parallel_for(replicas, [&](int r) {
    try {
      results[r] = body(r);
    } catch (const std::exception& e) {
      results[r].ok = false;
      results[r].error = e.what();
    }
  });
  return results;
}

ModelParams params_for(const ExperimentConfig& c, int n) {
  ModelParams p{c.resolved_d(), c.k, n};
  p.validate();
  return p;
}

struct Block {
  json summary;
  bool pass = true;
};

// Per-kind column sets, excluding the shared prefix and the status column.
std::vector<std::string> kind_columns(const std::string& kind) {
  if (kind == "first-moment") return {"Z"};
  if (kind == "density") return {"density", "core", "attached", "overcounted"};
  if (kind == "local-convergence") return {"frequency", "reference", "improper", "non_injective"};
  if (kind == "sofic") return {"mult_fraction", "trace_fraction", "sofic"};
  return {"f"};
}

Block first_moment_block(const ExperimentConfig& c, const ModelParams& p, std::vector<ReplicaResult>& results) {
  results = run_replicas(c.replicas, [&](int r) {
    Rng rng(c.seed, r);
    UniformHom hom = sample_uniform_hom(p, rng);
    CountReport z = count_proper(build_hypergraph(hom), Rational(0));
    ReplicaResult out;
    out.cells = {to_string(z.value)};
    out.value = z.value.convert_to<double>();
    return out;
  });
  std::vector<double> values;
  for (const auto& r : results)
    if (r.ok) values.push_back(r.value);
  Stats s = summarize(values);
  Rational exact = exact_first_moment(p);
  Block b;
  b.summary["exact"] = to_string(exact);
  b.summary["exact_value"] = exact.convert_to<double>();
  b.summary["mean"] = s.mean;
  b.summary["stderr"] = s.standard_error;

  // Exact comparison against the enumeration average when the model is small.
  const BigInt homs = count_uniform_homs(p);
  if (homs <= BigInt(20000) && p.n <= 40) {
    BigInt total = 0;
    for_each_uniform_hom(p, [&](const UniformHom& h) { total += count_proper(build_hypergraph(h), Rational(0)).value; });
    Rational average(total, homs);
    b.summary["enumeration_average"] = to_string(average);
    b.summary["exact_equal"] = average == exact;
    b.pass = average == exact;
  } else {
    const double sigmas = tolerance(c, "sigmas", 4.0);
    const double gap = std::abs(s.mean - exact.convert_to<double>());
    b.summary["exact_equal"] = nullptr;
    b.pass = gap <= sigmas * s.standard_error;
  }
  return b;
}

Block density_block(const ExperimentConfig& c, const ModelParams& p, std::vector<ReplicaResult>& results) {
  p.require_equitable();
  const Coloring chi = Coloring::first_half_zero(p.n);
  results = run_replicas(c.replicas, [&](int r) {
    Rng rng(c.seed, r);
    UniformHom hom = sample_planted_hom(p, chi, rng);
    CoreDecomposition dec = core_decomposition(build_hypergraph(hom), chi, c.level);
    const CoreLevel& level = dec.level(c.level);
    auto count = [](const std::vector<std::uint8_t>& xs) { return std::count(xs.begin(), xs.end(), 1); };
    Rational density = density_of(level);
    ReplicaResult out;
    out.cells = {fmt(density.convert_to<double>()), std::to_string(count(level.core)),
                 std::to_string(count(level.attached)), std::to_string(count(level.overcounted))};
    out.value = density.convert_to<double>();
    return out;
  });
  std::vector<double> values;
  for (const auto& r : results)
    if (r.ok) values.push_back(r.value);
  Stats s = summarize(values);
  Rng tree_rng(c.seed, kReservedStream);
  TreeCoreEstimate tree = estimate_tree_core_density(p.d, p.k, c.level, c.tree_samples, tree_rng);
  const double sigmas = tolerance(c, "sigmas", 3.0);
  const double combined = std::sqrt(s.standard_error * s.standard_error + tree.standard_error * tree.standard_error);
  Block b;
  b.summary["mean"] = s.mean;
  b.summary["stderr"] = s.standard_error;
  b.summary["ci95"] = {s.mean - 1.96 * s.standard_error, s.mean + 1.96 * s.standard_error};
  b.summary["tree_mean"] = tree.mean;
  b.summary["tree_stderr"] = tree.standard_error;
  b.summary["tree_samples"] = tree.samples;
  {
    PrecisionScope scope;
    b.summary["fixed_point_core"] = tree_core_mass(p.d, p.k, c.level).convert_to<double>();
    b.summary["fixed_point_core_attached"] = tree_core_attached_mass(p.d, p.k, c.level).convert_to<double>();
  }
  b.summary["difference"] = s.mean - tree.mean;
  b.summary["allowed"] = sigmas * combined;
  b.pass = std::abs(s.mean - tree.mean) <= sigmas * combined;
  return b;
}

Block local_convergence_block(const ExperimentConfig& c, const ModelParams& p, std::vector<ReplicaResult>& results) {
  p.require_equitable();
  const Coloring chi = Coloring::first_half_zero(p.n);
  const TreeDomain D = make_domain(p, {{ReducedWord{}, 0}});
  const Pattern xi = proper_patterns(D).front();
  results = run_replicas(c.replicas, [&](int r) {
    Rng rng(c.seed, r);
    UniformHom hom = sample_planted_hom(p, chi, rng);
    LocalConvergence stat = local_convergence_stat(hom, chi, D, xi);
    ReplicaResult out;
    out.value = stat.frequency.convert_to<double>();
    out.cells = {fmt(out.value), to_string(stat.reference), std::to_string(stat.improper),
                 std::to_string(stat.non_injective)};
    return out;
  });
  std::vector<double> values;
  for (const auto& r : results)
    if (r.ok) values.push_back(r.value);
  Stats s = summarize(values);
  const double reference = 1.0 / count_proper_patterns(D).convert_to<double>();
  const double allowed = tolerance(c, "abs", 0.03);
  Block b;
  b.summary["mean"] = s.mean;
  b.summary["stderr"] = s.standard_error;
  b.summary["reference"] = reference;
  b.summary["allowed"] = allowed;
  b.pass = std::abs(s.mean - reference) <= allowed;
  return b;
}

std::vector<ReducedWord> sofic_domain(const ModelParams& p) {
  std::vector<ReducedWord> D;
  for (int i = 0; i < p.d; ++i) D.push_back(generator_power(p, i, 1));
  for (int i = 0; i < p.d; ++i)
    for (int j = 0; j < p.d; ++j)
      if (i != j) D.push_back(reduce_word(p, {Letter{i, 1}, Letter{j, 1}}));
  return D;
}

Block sofic_block(const ExperimentConfig& c, const ModelParams& p, std::vector<ReplicaResult>& results) {
  const std::vector<ReducedWord> D = sofic_domain(p);
  const double delta = tolerance(c, "delta", 0.1);
  results = run_replicas(c.replicas, [&](int r) {
    Rng rng(c.seed, r);
    SoficReport rep = check_sofic(sample_uniform_hom(p, rng), D, delta);
    ReplicaResult out;
    out.cells = {fmt(rep.mult_fraction), fmt(rep.trace_fraction), rep.sofic ? "1" : "0"};
    out.value = rep.sofic ? 1.0 : 0.0;
    return out;
  });
  std::vector<double> values;
  for (const auto& r : results)
    if (r.ok) values.push_back(r.value);
  Stats s = summarize(values);
  const double min_fraction = tolerance(c, "min_fraction", 0.99);
  Block b;
  b.summary["sofic_fraction"] = s.mean;
  b.summary["min_fraction"] = min_fraction;
  b.pass = s.count == c.replicas && s.mean >= min_fraction;
  return b;
}

Block concentration_block(const ExperimentConfig& c, const ModelParams& p, std::vector<ReplicaResult>& results) {
  ConcentrationReport rep = concentration_probe(p, c.replicas, c.seed);
  results.assign(c.replicas, {});
  for (int r = 0; r < c.replicas; ++r) {
    results[r].value = rep.values[r];
    results[r].cells = {fmt(rep.values[r])};
  }
  Block b;
  b.summary["mean"] = rep.mean;
  json tails = json::object();
  for (const auto& [t, prob] : rep.tail) tails[fmt(t)] = prob;
  b.summary["tail"] = tails;
  json hist = json::array();
  for (const auto& [centre, count] : rep.histogram) hist.push_back({centre, count});
  b.summary["histogram"] = hist;
  const double limit = tolerance(c, "tail", 0.05);
  b.summary["allowed_tail_0.2"] = limit;
  b.pass = rep.tail.at(0.2) < limit;
  return b;
}

}  // namespace

void parallel_for(int count, const std::function<void(int)>& body) {
  if (count <= 0) return;
  const int workers = std::max(1, std::min<int>(count, static_cast<int>(std::thread::hardware_concurrency())));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

void ExperimentConfig::validate() const {
  if (std::find(kKinds.begin(), kKinds.end(), kind) == kKinds.end())
    throw InputError("unknown experiment kind '" + kind + "'");
  if (k < 2) throw InputError("k must be at least 2");
  if (d.has_value() == eta.has_value()) throw InputError("exactly one of d and eta must be given");
  if (d && *d < 1) throw InputError("d must be at least 1");
  if (n_list.empty()) throw InputError("the n list is empty");
  for (int n : n_list)
    if (n < 1) throw InputError("every n must be positive");
  if (replicas < 1) throw InputError("replicas must be at least 1, got " + std::to_string(replicas));
  if (level < 0) throw InputError("level must be non-negative");
  if (tree_samples < 1) throw InputError("tree_samples must be positive");
  for (const auto& [name, value] : tolerances)
    if (!(value > 0)) throw InputError("tolerance '" + name + "' must be positive");
}

int ExperimentConfig::resolved_d() const {
  if (d) return *d;
  PrecisionScope scope;
  EtaRounding r = d_of_eta(k, Real(*eta));
  if (!r.valid) throw DomainError("eta does not give a valid degree for this k");
  return r.d;
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed experiment config: ") + e.what());
  }
  ExperimentConfig c;
  try {
    c.kind = j.at("kind").get<std::string>();
    c.k = j.at("k").get<int>();
    if (j.contains("d")) c.d = j["d"].get<int>();
    if (j.contains("eta")) c.eta = j["eta"].get<double>();
    const json& n = j.contains("n") ? j["n"] : j.at("n_list");
    if (n.is_array())
      c.n_list = n.get<std::vector<int>>();
    else
      c.n_list = {n.get<int>()};
    c.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("replicas")) {
      // A list of replica labels is accepted; only its length matters.
      const json& replicas = j["replicas"];
      c.replicas = replicas.is_array() ? static_cast<int>(replicas.size()) : replicas.get<int>();
    }
    c.level = j.value("level", 4);
    c.tree_samples = j.value("tree_samples", std::int64_t{100000});
    if (j.contains("tolerances")) c.tolerances = j["tolerances"].get<std::map<std::string, double>>();
    c.output = j.value("output", std::string{});
  } catch (const json::exception& e) {
    throw InputError(std::string("invalid experiment config: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  return parse_experiment_config(read_text_file(path));
}

std::string describe(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "kind=" << c.kind << " k=" << c.k;
  if (c.d) out << " d=" << *c.d;
  if (c.eta) out << " eta=" << fmt(*c.eta);
  out << " n=[";
  for (std::size_t i = 0; i < c.n_list.size(); ++i) out << (i ? "," : "") << c.n_list[i];
  out << "] seed=" << c.seed << " replicas=" << c.replicas << " level=" << c.level
      << " tree_samples=" << c.tree_samples;
  for (const auto& [name, value] : c.tolerances) out << " tol." << name << "=" << fmt(value);
  if (!c.output.empty()) out << " output=" << c.output;
  return out.str();
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report;
  report.columns = {"n", "replica", "seed", "stream"};
  for (const auto& col : kind_columns(config.kind)) report.columns.push_back(col);
  report.columns.push_back("status");

  json summary;
  summary["params"] = describe(config);
  summary["kind"] = config.kind;
  summary["d"] = config.resolved_d();
  summary["blocks"] = json::array();
  report.pass = true;

  for (int n : config.n_list) {
    std::vector<ReplicaResult> results;
    json block;
    block["n"] = n;
    try {
      const ModelParams p = params_for(config, n);
      Block b;
      if (config.kind == "first-moment")
        b = first_moment_block(config, p, results);
      else if (config.kind == "density")
        b = density_block(config, p, results);
      else if (config.kind == "local-convergence")
        b = local_convergence_block(config, p, results);
      else if (config.kind == "sofic")
        b = sofic_block(config, p, results);
      else
        b = concentration_block(config, p, results);
      block.update(b.summary);
      block["pass"] = b.pass;
      report.pass = report.pass && b.pass;
    } catch (const std::exception& e) {
      block["pass"] = false;
      block["error"] = e.what();
      report.pass = false;
    }
    std::int64_t failed = 0;
    const std::size_t width = kind_columns(config.kind).size();
    for (int r = 0; r < static_cast<int>(results.size()); ++r) {
      std::vector<std::string> row = {std::to_string(n), std::to_string(r), std::to_string(config.seed),
                                      std::to_string(r)};
      const ReplicaResult& res = results[r];
      for (std::size_t i = 0; i < width; ++i) row.push_back(res.ok && i < res.cells.size() ? res.cells[i] : "");
      if (!res.ok) ++failed;
      row.push_back(res.ok ? "ok" : "error: " + res.error);
      report.rows.push_back(std::move(row));
    }
    block["failed_rows"] = failed;
    report.failed_rows += failed;
    summary["blocks"].push_back(block);
  }
  summary["failed_rows"] = report.failed_rows;
  summary["pass"] = report.pass;

  std::ostringstream csv;
  for (std::size_t i = 0; i < report.columns.size(); ++i) csv << (i ? "," : "") << report.columns[i];
  csv << "\n";
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::string cell = row[i];
      std::replace(cell.begin(), cell.end(), ',', ';');
      std::replace(cell.begin(), cell.end(), '\n', ' ');
      csv << (i ? "," : "") << cell;
    }
    csv << "\n";
  }
  csv << "# params: " << describe(config) << "\n";
  report.csv = csv.str();
  report.summary_json = summary.dump(2) + "\n";

  if (!config.output.empty()) {
    write_text_file(config.output, report.csv);
    std::string json_path = config.output;
    const auto dot = json_path.find_last_of('.');
    const auto slash = json_path.find_last_of('/');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) json_path.erase(dot);
    write_text_file(json_path + ".json", report.summary_json);
  }
  return report;
}

ConcentrationReport concentration_probe(const ModelParams& params, int replicas, std::uint64_t seed) {
  params.require_equitable();
  if (replicas < 1) throw InputError("replicas must be at least 1");
  const Coloring chi = Coloring::first_half_zero(params.n);
  Rng ref_rng(seed, kReservedStream + 1);
  const UniformHom reference = sample_planted_hom(params, chi, ref_rng);

  ConcentrationReport rep;
  rep.values.assign(replicas, 0.0);
  parallel_for(replicas, [&](int r) {
    Rng rng(seed, r);
    UniformHom hom = sample_planted_hom(params, chi, rng);
    std::int64_t differing = 0;
    for (int i = 0; i < params.d; ++i)
      for (int v = 0; v < params.n; ++v) differing += hom.apply(i, v) != reference.apply(i, v);
    rep.values[r] = static_cast<double>(differing) / (static_cast<double>(params.n) * params.d);
  });

  double sum = 0;
  for (double f : rep.values) sum += f;
  rep.mean = sum / replicas;

  constexpr double kBin = 0.01;
  std::map<std::int64_t, std::int64_t> bins;
  for (double t : {0.05, 0.1, 0.2}) rep.tail[t] = 0;
  for (double f : rep.values) {
    const double dev = f - rep.mean;
    ++bins[static_cast<std::int64_t>(std::floor(dev / kBin + 0.5))];
    for (auto& [t, count] : rep.tail)
      if (std::abs(dev) > t) count += 1;
  }
  for (auto& [t, count] : rep.tail) count /= replicas;
  for (const auto& [index, count] : bins) rep.histogram.emplace_back(index * kBin, count);
  return rep;
}

}  // namespace sofic
