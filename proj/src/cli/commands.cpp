#include "catdag/commands.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "catdag/causal.hpp"
#include "catdag/errors.hpp"
#include "catdag/oracle.hpp"
#include "catdag/summaries.hpp"
#include "catdag/trace_io.hpp"

namespace catdag::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

int require_variable(const std::vector<std::string>& names, const std::string& name) {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw QueryError("unknown variable '" + name + "'");
  return static_cast<int>(it - names.begin());
}

int require_level(const std::vector<std::string>& levels, const std::string& var, const std::string& label) {
  const auto it = std::find(levels.begin(), levels.end(), label);
  if (it == levels.end()) throw QueryError("variable '" + var + "' has no level '" + label + "'");
  return static_cast<int>(it - levels.begin());
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory " + dir.string() + ": " + ec.message());
}

void write_json_file(const fs::path& path, const json& j) {
  auto out = open_output(path);
  out << j.dump(2) << '\n';
}

void write_node_comment(std::ostream& out, const std::vector<std::string>& names) {
  out << "# nodes:";
  for (std::size_t i = 0; i < names.size(); ++i) out << ' ' << (i + 1) << '=' << names[i];
  out << '\n';
}

void write_edges_file(const fs::path& path, const std::vector<std::string>& names, std::span<const Edge> edges,
                      const std::string& note = {}) {
  auto out = open_output(path);
  write_node_comment(out, names);
  if (!note.empty()) out << "# " << note << '\n';
  write_edge_list(out, edges);
}

json query_spec_to_json(const QuerySpec& q) {
  return {{"response", q.response}, {"treatments", q.treatments}, {"levels", q.levels}, {"benchmark", q.benchmark}};
}

QuerySpec query_spec_from_json(const json& j) {
  QuerySpec q;
  q.response = j.value("response", std::string());
  q.treatments = j.value("treatments", std::vector<std::string>());
  q.levels = j.value("levels", std::vector<std::string>());
  q.benchmark = j.value("benchmark", std::string());
  return q;
}

Dataset load_dataset(const LearnOptions& o) { return ingest_csv(o.input, o.csv); }

McmcConfig prepared_config(const LearnOptions& o, const Dataset& ds) {
  McmcConfig config = o.mcmc;
  if (o.init_dag_file) {
    std::ifstream in(*o.init_dag_file);
    if (!in) throw InputError("cannot open initial DAG file " + o.init_dag_file->string());
    const auto edges = read_edge_list(in, ds.num_vars());
    config.init_dag = Dag::from_edges(ds.num_vars(), edges);
    config.init = InitDag::kUser;
  }
  if (!o.query.empty()) {
    std::vector<std::vector<std::string>> levels;
    for (int j = 0; j < ds.num_vars(); ++j) levels.push_back(ds.levels(j));
    config.causal_queries.clear();
    for (const auto& r : resolve_queries(o.query, ds.names(), levels)) config.causal_queries.push_back(r.query);
  }
  return config;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::vector<ResolvedQuery> resolve_queries(const QuerySpec& spec, const std::vector<std::string>& names,
                                           const std::vector<std::vector<std::string>>& levels) {
  if (spec.response.empty()) throw QueryError("a causal query needs --response");
  if (spec.treatments.empty()) throw QueryError("a causal query needs at least one --treatment");
  if (!spec.levels.empty() && spec.levels.size() != 2) {
    throw QueryError("--levels takes exactly two labels: treated,reference");
  }
  const int y = require_variable(names, spec.response);
  const auto& y_levels = levels[static_cast<std::size_t>(y)];
  const int benchmark =
      spec.benchmark.empty() ? static_cast<int>(y_levels.size()) - 1 : require_level(y_levels, spec.response, spec.benchmark);
  std::vector<ResolvedQuery> out;
  for (const auto& tname : spec.treatments) {
    const int v = require_variable(names, tname);
    if (v == y) throw QueryError("response and treatment must differ ('" + tname + "')");
    const auto& v_levels = levels[static_cast<std::size_t>(v)];
    std::vector<std::pair<int, int>> contrasts;
    if (!spec.levels.empty()) {
      contrasts.emplace_back(require_level(v_levels, tname, spec.levels[0]), require_level(v_levels, tname, spec.levels[1]));
    } else {
      for (int m = 1; m < static_cast<int>(v_levels.size()); ++m) contrasts.emplace_back(m, 0);
    }
    for (const auto& [high, low] : contrasts) {
      out.push_back({{y, v, high, low, benchmark},
                     spec.response,
                     tname,
                     v_levels[static_cast<std::size_t>(high)],
                     v_levels[static_cast<std::size_t>(low)],
                     y_levels[static_cast<std::size_t>(benchmark)]});
    }
  }
  return out;
}

json to_json(const LearnOptions& o) {
  json j = {{"input", o.input.string()},
            {"delimiter", std::string(1, o.csv.delimiter)},
            {"header", o.csv.header},
            {"mcmc", config_to_json(o.mcmc)},
            {"query", query_spec_to_json(o.query)},
            {"repair_mpm", o.repair_mpm},
            {"out_dir", o.out_dir.string()}};
  if (o.init_dag_file) j["init_dag_file"] = o.init_dag_file->string();
  return j;
}

LearnOptions learn_options_from_json(const json& j) {
  LearnOptions o;
  try {
    o.input = j.at("input").get<std::string>();
    const auto delim = j.value("delimiter", std::string(","));
    if (delim.size() != 1) throw ConfigError("delimiter must be a single character");
    o.csv.delimiter = delim[0];
    o.csv.header = j.value("header", true);
    if (j.contains("init_dag_file")) o.init_dag_file = fs::path(j.at("init_dag_file").get<std::string>());
    if (j.contains("query")) o.query = query_spec_from_json(j.at("query"));
    o.repair_mpm = j.value("repair_mpm", true);
    o.out_dir = j.value("out_dir", std::string("catdag_out"));
    // The user DAG (if any) is re-read from init_dag_file; q is not known here.
    json mcmc = j.value("mcmc", json::object());
    mcmc.erase("init_dag");
    mcmc.erase("causal_queries");
    if (mcmc.value("init", std::string("empty")) == "user") mcmc["init"] = "empty";
    o.mcmc = config_from_json(mcmc, 0);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed learn options: ") + e.what());
  }
  return o;
}

json to_json(const CausalOptionsCli& o) {
  json j = {{"learn", to_json(o.learn)},
            {"query", query_spec_to_json(o.query)},
            {"quantiles", o.quantiles},
            {"mc_draws", o.mc_draws}};
  if (o.trace) j["trace"] = o.trace->string();
  if (o.out_dir) j["out_dir"] = o.out_dir->string();
  return j;
}

CausalOptionsCli causal_options_from_json(const json& j) {
  CausalOptionsCli o;
  try {
    if (j.contains("trace")) o.trace = fs::path(j.at("trace").get<std::string>());
    if (j.contains("learn") && j.at("learn").contains("input")) o.learn = learn_options_from_json(j.at("learn"));
    o.query = query_spec_from_json(j.at("query"));
    o.quantiles = j.value("quantiles", o.quantiles);
    o.mc_draws = j.value("mc_draws", o.mc_draws);
    if (j.contains("out_dir")) o.out_dir = fs::path(j.at("out_dir").get<std::string>());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed causal options: ") + e.what());
  }
  return o;
}

json to_json(const SimulateOptions& o) {
  return {{"q", o.q},
          {"n", o.n},
          {"reps", o.replicates},
          {"edge_prob", o.edge_prob},
          {"seed", o.seed},
          {"iterations", o.iterations},
          {"burn_in", o.burn_in},
          {"bdeu_a", o.bdeu_a},
          {"prior_c", o.prior_c},
          {"prior_d", o.prior_d},
          {"truth_mc_draws", o.truth_mc_draws},
          {"threads", o.threads},
          {"out_dir", o.out_dir.string()}};
}

SimulateOptions simulate_options_from_json(const json& j) {
  SimulateOptions o;
  try {
    o.q = j.value("q", o.q);
    o.n = j.value("n", o.n);
    o.replicates = j.value("reps", o.replicates);
    o.edge_prob = j.value("edge_prob", o.edge_prob);
    o.seed = j.value("seed", o.seed);
    o.iterations = j.value("iterations", o.iterations);
    o.burn_in = j.value("burn_in", o.burn_in);
    o.bdeu_a = j.value("bdeu_a", o.bdeu_a);
    o.prior_c = j.value("prior_c", o.prior_c);
    o.prior_d = j.value("prior_d", o.prior_d);
    o.truth_mc_draws = j.value("truth_mc_draws", o.truth_mc_draws);
    o.threads = j.value("threads", o.threads);
    o.out_dir = j.value("out_dir", o.out_dir.string());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed simulate options: ") + e.what());
  }
  return o;
}

json to_json(const OracleCheckOptions& o) {
  json j = {{"learn", to_json(o.learn)}};
  if (o.out_dir) j["out_dir"] = o.out_dir->string();
  return j;
}

OracleCheckOptions oracle_check_options_from_json(const json& j) {
  OracleCheckOptions o;
  try {
    o.learn = learn_options_from_json(j.at("learn"));
    if (j.contains("out_dir")) o.out_dir = fs::path(j.at("out_dir").get<std::string>());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed oracle-check options: ") + e.what());
  }
  return o;
}

json read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open manifest " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError("manifest " + path.string() + " is not valid JSON: " + e.what());
  }
  if (!j.contains("command") || !j.contains("options")) {
    throw ConfigError("manifest " + path.string() + " lacks command/options");
  }
  return j;
}

void cmd_learn(const LearnOptions& options, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  const Dataset ds = load_dataset(options);
  const McmcConfig config = prepared_config(options, ds);
  config.validate(ds.num_vars());
  ensure_dir(options.out_dir);

  const Trace trace = run_chain(ds, config);
  const PpiMatrix p = ppi(trace);
  const DirectedGraph m = mpm(p);
  const Dag map = map_dag(trace);

  {
    auto out = open_output(options.out_dir / "ppi.csv");
    write_ppi_csv(out, p, ds.names());
  }
  write_edges_file(options.out_dir / "mpm.edges", ds.names(), m.edges,
                   m.cyclic ? "cyclic: the median probability graph contains a directed cycle" : "");
  const auto map_edges = map.edges();
  write_edges_file(options.out_dir / "map.edges", ds.names(), map_edges);
  {
    auto out = open_output(options.out_dir / "cpdag.edges");
    write_node_comment(out, ds.names());
    if (m.cyclic && !options.repair_mpm) {
      out << "# MPM is cyclic; no CPDAG written (enable MPM repair to obtain one)\n";
    } else {
      const Dag base = m.cyclic ? repair_cycles(m, p) : Dag::from_edges(ds.num_vars(), m.edges);
      if (m.cyclic) {
        out << "# MPM was cyclic; lowest-PPI edge of each cycle removed\n";
        write_edges_file(options.out_dir / "mpm_repaired.edges", ds.names(), base.edges());
      }
      write_cpdag(out, to_cpdag(base));
    }
  }
  write_trace(options.out_dir / "trace.jsonl", trace, TraceHeader::from_dataset(ds));

  const double wall = seconds_since(start);
  write_json_file(options.out_dir / "manifest.json",
                  {{"command", "learn"},
                   {"options", to_json(options)},
                   {"seed", config.seed},
                   {"q", ds.num_vars()},
                   {"n", ds.num_rows()},
                   {"draws", trace.draws.size()},
                   {"accepted", trace.accepted},
                   {"proposed", trace.proposed},
                   {"acceptance_rate", trace.acceptance_rate()},
                   {"mpm_cyclic", m.cyclic},
                   {"wall_time_seconds", wall}});
  log << "learn: q=" << ds.num_vars() << " n=" << ds.num_rows() << " draws=" << trace.draws.size()
      << " acceptance=" << std::setprecision(4) << trace.acceptance_rate() << " mpm_edges=" << m.edges.size()
      << (m.cyclic ? " (cyclic)" : "") << " -> " << options.out_dir.string() << '\n';
}

void cmd_causal(const CausalOptionsCli& options, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  LoadedTrace loaded;
  if (options.trace) {
    loaded = read_trace(*options.trace);
  } else {
    if (options.learn.input.empty()) throw ConfigError("causal needs --trace or --input");
    const Dataset ds = load_dataset(options.learn);
    LearnOptions learn = options.learn;
    learn.query = options.query;
    McmcConfig config = prepared_config(learn, ds);
    if (config.store_theta == StoreTheta::kNone) throw ConfigError("causal effects need stored parameters");
    loaded.header = TraceHeader::from_dataset(ds);
    loaded.trace = run_chain(ds, config);
  }
  const auto queries = resolve_queries(options.query, loaded.header.names, loaded.header.levels);
  std::vector<CausalQuery> raw;
  for (const auto& r : queries) raw.push_back(r.query);
  CausalOptions copts;
  copts.mc_draws = options.mc_draws;
  const auto estimates = bma_estimates(loaded.trace, raw, options.quantiles, copts);

  json records = json::array();
  std::ostringstream csv;
  csv.precision(17);
  csv << "response,treatment,level,reference,benchmark,mean,sd";
  for (double p : options.quantiles) csv << ",q" << p;
  csv << ",draws,response_is_parent_draws,monte_carlo_draws\n";
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const auto& q = queries[i];
    const auto& e = estimates[i];
    json quant = json::object();
    for (const auto& [p, v] : e.quantiles) {
      std::ostringstream key;
      key << p;
      quant[key.str()] = v;
    }
    records.push_back({{"response", q.response},
                       {"treatment", q.treatment},
                       {"level", q.level},
                       {"reference", q.reference},
                       {"benchmark", q.benchmark},
                       {"mean", e.mean},
                       {"sd", e.sd},
                       {"quantiles", quant},
                       {"draws_used", e.draws_used},
                       {"response_is_parent_draws", e.response_is_parent_draws},
                       {"monte_carlo_draws", e.monte_carlo_draws}});
    csv << q.response << ',' << q.treatment << ',' << q.level << ',' << q.reference << ',' << q.benchmark << ','
        << e.mean << ',' << e.sd;
    for (const auto& qv : e.quantiles) csv << ',' << qv.second;
    csv << ',' << e.draws_used << ',' << e.response_is_parent_draws << ',' << e.monte_carlo_draws << '\n';
  }
  out << records.dump(2) << '\n';
  if (options.out_dir) {
    ensure_dir(*options.out_dir);
    write_json_file(*options.out_dir / "estimates.json", records);
    open_output(*options.out_dir / "estimates.csv") << csv.str();
    write_json_file(*options.out_dir / "manifest.json", {{"command", "causal"},
                                                         {"options", to_json(options)},
                                                         {"draws", loaded.trace.draws.size()},
                                                         {"wall_time_seconds", seconds_since(start)}});
  }
}

void cmd_simulate(const SimulateOptions& options, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  if (options.n.empty()) throw ConfigError("simulate needs at least one sample size");
  std::vector<ScenarioConfig> cells;
  for (std::size_t n : options.n) {
    ScenarioConfig c;
    c.q = options.q;
    c.n = n;
    c.replicates = options.replicates;
    c.edge_prob = options.edge_prob;
    c.seed = options.seed;
    c.iterations = options.iterations;
    c.burn_in = options.burn_in;
    c.hyper.a = options.bdeu_a;
    c.dag_prior = {options.prior_c, options.prior_d};
    c.truth_mc_draws = options.truth_mc_draws;
    c.threads = options.threads;
    c.validate();
    cells.push_back(c);
  }
  ensure_dir(options.out_dir);
  std::vector<ReplicateResult> all;
  std::vector<ScenarioSummary> summary;
  for (const auto& c : cells) {
    auto results = run_scenario(c);
    summary.push_back(aggregate(results));
    const auto& s = summary.back();
    log << "simulate: q=" << s.q << " n=" << s.n << " G=" << s.replicates << std::fixed << std::setprecision(2)
        << " SHD=" << s.shd << " SEN=" << s.sen << " SPE=" << s.spe << " AE=" << s.ae << std::defaultfloat << '\n';
    all.insert(all.end(), std::make_move_iterator(results.begin()), std::make_move_iterator(results.end()));
  }
  {
    auto out = open_output(options.out_dir / "replicates.csv");
    write_replicates_csv(out, all);
  }
  {
    auto out = open_output(options.out_dir / "summary.csv");
    write_summary_csv(out, summary);
  }
  write_json_file(options.out_dir / "manifest.json", {{"command", "simulate"},
                                                      {"options", to_json(options)},
                                                      {"wall_time_seconds", seconds_since(start)}});
}

double cmd_oracle_check(const OracleCheckOptions& options, std::ostream& out) {
  const Dataset ds = load_dataset(options.learn);
  if (ds.num_vars() > kMaxEnumerationNodes) {
    throw ConfigError("oracle-check enumerates all DAGs and supports at most " +
                      std::to_string(kMaxEnumerationNodes) + " variables");
  }
  const McmcConfig config = prepared_config(options.learn, ds);
  const Trace trace = run_chain(ds, config);
  const PpiMatrix mcmc_ppi = ppi(trace);
  const ExactPosterior post = exact_posterior(ds, config.hyper, config.dag_prior);
  const PpiMatrix exact_ppi = post.ppi();

  double max_dev = 0.0;
  for (std::size_t i = 0; i < exact_ppi.values.size(); ++i) {
    max_dev = std::max(max_dev, std::abs(exact_ppi.values[i] - mcmc_ppi.values[i]));
  }
  out << "exact PPI\n";
  write_ppi_csv(out, exact_ppi, ds.names());
  out << "MCMC PPI\n";
  write_ppi_csv(out, mcmc_ppi, ds.names());
  out << "max abs deviation: " << std::setprecision(17) << max_dev << '\n';

  if (options.out_dir) {
    ensure_dir(*options.out_dir);
    {
      auto f = open_output(*options.out_dir / "exact_ppi.csv");
      write_ppi_csv(f, exact_ppi, ds.names());
    }
    {
      auto f = open_output(*options.out_dir / "mcmc_ppi.csv");
      write_ppi_csv(f, mcmc_ppi, ds.names());
    }
    write_json_file(*options.out_dir / "manifest.json", {{"command", "oracle-check"},
                                                         {"options", to_json(options)},
                                                         {"acceptance_rate", trace.acceptance_rate()},
                                                         {"max_abs_deviation", max_dev}});
  }
  return max_dev;
}

}  // namespace catdag::cli
