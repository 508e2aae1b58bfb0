#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "catdag/commands.hpp"
#include "catdag/errors.hpp"

namespace {

using namespace catdag;
using namespace catdag::cli;

constexpr int kInputError = 1;
constexpr int kConfigError = 2;

struct LearnFlags {
  std::string input;
  char delimiter = ',';
  bool no_header = false;
  std::size_t iters = 5000;
  std::size_t burnin = 1000;
  std::size_t thin = 1;
  std::uint64_t seed = 1;
  double a = 1.0;
  double c = 1.0;
  double d = 1.0;
  std::string store_theta = "all";
  std::string init = "empty";
  std::string init_dag;
  bool no_repair = false;
};

void add_learn_flags(CLI::App* cmd, LearnFlags& f, bool require_input) {
  auto* in = cmd->add_option("--input", f.input, "CSV file of categorical observations");
  if (require_input) in->required();
  cmd->add_option("--delimiter", f.delimiter, "CSV field delimiter");
  cmd->add_flag("--no-header", f.no_header, "CSV has no header row");
  cmd->add_option("--iters", f.iters, "MCMC iterations S")->capture_default_str();
  cmd->add_option("--burnin", f.burnin, "burn-in B")->capture_default_str();
  cmd->add_option("--thin", f.thin, "thinning interval")->capture_default_str();
  cmd->add_option("--seed", f.seed, "random seed")->capture_default_str();
  cmd->add_option("--bdeu-a", f.a, "BDEu imaginary sample size a")->capture_default_str();
  cmd->add_option("--prior-c", f.c, "Beta(c, d) edge-probability prior, c")->capture_default_str();
  cmd->add_option("--prior-d", f.d, "Beta(c, d) edge-probability prior, d")->capture_default_str();
  cmd->add_option("--store-theta", f.store_theta, "all, none or causal-only")->capture_default_str();
  cmd->add_option("--init", f.init, "initial DAG: empty or random")->capture_default_str();
  cmd->add_option("--init-dag", f.init_dag, "edge-list file with the initial DAG");
  cmd->add_flag("--no-repair-mpm", f.no_repair, "do not break cycles of the MPM graph");
}

LearnOptions to_learn_options(const LearnFlags& f) {
  LearnOptions o;
  o.input = f.input;
  o.csv.delimiter = f.delimiter;
  o.csv.header = !f.no_header;
  o.mcmc.iterations = f.iters;
  o.mcmc.burn_in = f.burnin;
  o.mcmc.thin = f.thin;
  o.mcmc.seed = f.seed;
  o.mcmc.hyper.a = f.a;
  o.mcmc.dag_prior = {f.c, f.d};
  o.mcmc.store_theta = parse_store_theta(f.store_theta);
  if (f.init == "random") {
    o.mcmc.init = InitDag::kRandom;
  } else if (f.init != "empty") {
    throw ConfigError("--init must be empty or random (use --init-dag for a user DAG)");
  }
  if (!f.init_dag.empty()) o.init_dag_file = f.init_dag;
  o.repair_mpm = !f.no_repair;
  return o;
}

void add_query_flags(CLI::App* cmd, QuerySpec& q) {
  cmd->add_option("--response", q.response, "response variable name");
  cmd->add_option("--treatment", q.treatments, "treatment variable name(s)")->delimiter(',');
  cmd->add_option("--levels", q.levels, "treated,reference level labels")->delimiter(',');
  cmd->add_option("--benchmark", q.benchmark, "response level whose probability is contrasted");
}

int run(int argc, char** argv) {
  CLI::App app{"Bayesian structure learning and causal effect estimation for categorical data"};
  app.require_subcommand(1);

  std::string manifest;
  std::string out_dir;

  LearnFlags learn_flags;
  QuerySpec learn_query;
  auto* learn = app.add_subcommand("learn", "sample DAGs and parameters; write PPI, MPM, MAP, CPDAG and trace");
  add_learn_flags(learn, learn_flags, false);
  add_query_flags(learn, learn_query);
  learn->add_option("--out-dir", out_dir, "output directory");
  learn->add_option("--manifest", manifest, "rerun from a manifest.json");

  LearnFlags causal_flags;
  QuerySpec causal_query;
  std::string trace_path;
  std::vector<double> quantiles{0.05, 0.95};
  std::size_t mc_draws = 100000;
  auto* causal = app.add_subcommand("causal", "posterior summaries of causal effects");
  add_learn_flags(causal, causal_flags, false);
  add_query_flags(causal, causal_query);
  causal->add_option("--trace", trace_path, "trace.jsonl written by learn");
  causal->add_option("--quantiles", quantiles, "posterior quantile probabilities")->delimiter(',');
  causal->add_option("--mc-draws", mc_draws, "forward-sampling draws for large joints")->capture_default_str();
  causal->add_option("--out-dir", out_dir, "output directory");
  causal->add_option("--manifest", manifest, "rerun from a manifest.json");

  SimulateOptions sim;
  std::string grid = "tables";
  auto* simulate = app.add_subcommand("simulate", "synthetic Gaussian-SEM benchmark");
  simulate->add_option("--q", sim.q, "number of variables")->capture_default_str();
  auto* n_opt = simulate->add_option("--n", sim.n, "sample sizes")->delimiter(',');
  simulate->add_option("--grid", grid, "default sample sizes: tables (200,500,1000,2000) or text (100,200,500,1000)")
      ->capture_default_str();
  simulate->add_option("--reps", sim.replicates, "replicates G per cell")->capture_default_str();
  simulate->add_option("--edge-prob", sim.edge_prob, "edge probability (default 2/q)");
  simulate->add_option("--seed", sim.seed, "master seed")->capture_default_str();
  simulate->add_option("--iters", sim.iterations, "MCMC iterations (default by q)");
  simulate->add_option("--burnin", sim.burn_in, "burn-in (default by q)");
  simulate->add_option("--bdeu-a", sim.bdeu_a)->capture_default_str();
  simulate->add_option("--prior-c", sim.prior_c)->capture_default_str();
  simulate->add_option("--prior-d", sim.prior_d)->capture_default_str();
  simulate->add_option("--truth-draws", sim.truth_mc_draws, "Monte Carlo draws per true effect")->capture_default_str();
  simulate->add_option("--threads", sim.threads, "worker threads (0 = all cores)");
  simulate->add_option("--out-dir", out_dir, "output directory");
  simulate->add_option("--manifest", manifest, "rerun from a manifest.json");

  LearnFlags oracle_flags;
  auto* oracle = app.add_subcommand("oracle-check", "compare MCMC PPIs with the exact posterior (q <= 5)");
  add_learn_flags(oracle, oracle_flags, false);
  oracle->add_option("--out-dir", out_dir, "output directory");
  oracle->add_option("--manifest", manifest, "rerun from a manifest.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  const auto manifest_options = [&](const char* command) {
    const auto j = read_manifest(manifest);
    if (j.at("command") != command) {
      throw ConfigError("manifest was written by '" + j.at("command").get<std::string>() + "', not '" + command + "'");
    }
    return j.at("options");
  };

  if (learn->parsed()) {
    LearnOptions o;
    if (!manifest.empty()) {
      o = learn_options_from_json(manifest_options("learn"));
    } else {
      if (learn_flags.input.empty()) throw ConfigError("learn needs --input");
      o = to_learn_options(learn_flags);
      o.query = learn_query;
    }
    if (!out_dir.empty()) o.out_dir = out_dir;
    cmd_learn(o, std::cout);
  } else if (causal->parsed()) {
    CausalOptionsCli o;
    if (!manifest.empty()) {
      o = causal_options_from_json(manifest_options("causal"));
    } else {
      if (!trace_path.empty()) o.trace = trace_path;
      if (!causal_flags.input.empty()) o.learn = to_learn_options(causal_flags);
      o.query = causal_query;
      o.quantiles = quantiles;
      o.mc_draws = mc_draws;
    }
    if (!out_dir.empty()) o.out_dir = out_dir;
    cmd_causal(o, std::cout);
  } else if (simulate->parsed()) {
    if (!manifest.empty()) {
      sim = simulate_options_from_json(manifest_options("simulate"));
    } else if (n_opt->count() == 0) {
      if (grid == "text") {
        sim.n = {100, 200, 500, 1000};
      } else if (grid != "tables") {
        throw ConfigError("--grid must be tables or text");
      }
    }
    if (!out_dir.empty()) sim.out_dir = out_dir;
    cmd_simulate(sim, std::cout);
  } else if (oracle->parsed()) {
    OracleCheckOptions o;
    if (!manifest.empty()) {
      o = oracle_check_options_from_json(manifest_options("oracle-check"));
    } else {
      if (oracle_flags.input.empty()) throw ConfigError("oracle-check needs --input");
      o.learn = to_learn_options(oracle_flags);
    }
    if (!out_dir.empty()) o.out_dir = out_dir;
    cmd_oracle_check(o, std::cout);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const QueryError& e) {
    std::cerr << "query error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
}
