#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "catdag/data.hpp"
#include "catdag/mcmc.hpp"
#include "catdag/query.hpp"
#include "catdag/scenario.hpp"

namespace catdag::cli {

/// Query in terms of names and level labels, resolved against a dataset.
struct QuerySpec {
  std::string response;
  std::vector<std::string> treatments;
  /// "high,low" labels; empty means every non-reference level against the
  /// lowest-coded level.
  std::vector<std::string> levels;
  /// Benchmark label of the response; empty means the highest-coded level.
  std::string benchmark;

  bool empty() const { return response.empty() && treatments.empty(); }
};

struct ResolvedQuery {
  CausalQuery query;
  std::string response;
  std::string treatment;
  std::string level;
  std::string reference;
  std::string benchmark;
};

/// Throws QueryError on unknown names or labels.
std::vector<ResolvedQuery> resolve_queries(const QuerySpec& spec, const std::vector<std::string>& names,
                                           const std::vector<std::vector<std::string>>& levels);

struct LearnOptions {
  std::filesystem::path input;
  CsvOptions csv;
  McmcConfig mcmc;
  std::optional<std::filesystem::path> init_dag_file;
  QuerySpec query;  // used by --store-theta causal-only
  bool repair_mpm = true;
  std::filesystem::path out_dir = "catdag_out";
};

struct CausalOptionsCli {
  std::optional<std::filesystem::path> trace;
  LearnOptions learn;  // inline chain when no trace is given
  QuerySpec query;
  std::vector<double> quantiles{0.05, 0.95};
  std::size_t mc_draws = 100000;
  std::optional<std::filesystem::path> out_dir;
};

struct SimulateOptions {
  int q = 10;
  std::vector<std::size_t> n{200, 500, 1000, 2000};
  std::size_t replicates = 50;
  double edge_prob = 0.0;
  std::uint64_t seed = 1;
  std::size_t iterations = 0;
  std::size_t burn_in = 0;
  double bdeu_a = 1.0;
  double prior_c = 1.0;
  double prior_d = 1.0;
  std::size_t truth_mc_draws = 1000000;
  std::size_t threads = 0;
  std::filesystem::path out_dir = "catdag_sim";
};

struct OracleCheckOptions {
  LearnOptions learn;
  std::optional<std::filesystem::path> out_dir;
};

nlohmann::json to_json(const LearnOptions& o);
nlohmann::json to_json(const CausalOptionsCli& o);
nlohmann::json to_json(const SimulateOptions& o);
nlohmann::json to_json(const OracleCheckOptions& o);
LearnOptions learn_options_from_json(const nlohmann::json& j);
CausalOptionsCli causal_options_from_json(const nlohmann::json& j);
SimulateOptions simulate_options_from_json(const nlohmann::json& j);
OracleCheckOptions oracle_check_options_from_json(const nlohmann::json& j);

/// Reads manifest.json and returns {"command": ..., "options": ...}.
nlohmann::json read_manifest(const std::filesystem::path& path);

// Each command writes its artifacts and a manifest.json into its output
// directory, and a short report to `log`.
void cmd_learn(const LearnOptions& options, std::ostream& log);
void cmd_causal(const CausalOptionsCli& options, std::ostream& out);
void cmd_simulate(const SimulateOptions& options, std::ostream& log);
/// Returns the maximum absolute PPI deviation.
double cmd_oracle_check(const OracleCheckOptions& options, std::ostream& out);

}  // namespace catdag::cli
