#include "catdag/trace_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "catdag/errors.hpp"

namespace catdag {

using nlohmann::json;

namespace {

std::string init_name(InitDag init) {
  switch (init) {
    case InitDag::kEmpty:
      return "empty";
    case InitDag::kRandom:
      return "random";
    case InitDag::kUser:
      return "user";
  }
  return "empty";
}

InitDag parse_init(const std::string& s) {
  if (s == "empty") return InitDag::kEmpty;
  if (s == "random") return InitDag::kRandom;
  if (s == "user") return InitDag::kUser;
  throw ConfigError("unknown initial DAG mode '" + s + "'");
}

json edges_to_json(const Dag& dag) {
  json out = json::array();
  for (const Edge& e : dag.edges()) out.push_back({e.from + 1, e.to + 1});
  return out;
}

Dag edges_from_json(const json& j, int q) {
  std::vector<Edge> edges;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) throw InputError("trace: edge must be a [from, to] pair");
    edges.push_back({e[0].get<int>() - 1, e[1].get<int>() - 1});
  }
  return Dag::from_edges(q, edges);
}

json theta_to_json(const Theta& theta) {
  json nodes = json::array();
  for (int j = 0; j < theta.num_nodes(); ++j) {
    if (!theta.has_node(j)) continue;
    const auto& node = theta.node(j);
    json parents = json::array();
    for (int p : node.parents) parents.push_back(p + 1);
    json rows = json::array();
    for (const auto& row : node.rows) rows.push_back({{"config", row.config}, {"p", row.probs}});
    nodes.push_back({{"node", j + 1}, {"parents", parents}, {"rows", rows}});
  }
  return {{"lazy_seed", theta.lazy_seed()}, {"a", theta.bdeu_a()}, {"nodes", nodes}};
}

Theta theta_from_json(const json& j, const std::vector<int>& cards) {
  Theta theta(cards, j.at("a").get<double>(), j.at("lazy_seed").get<std::uint64_t>());
  for (const auto& node : j.at("nodes")) {
    std::vector<int> parents;
    for (const auto& p : node.at("parents")) parents.push_back(p.get<int>() - 1);
    std::vector<ThetaRow> rows;
    for (const auto& row : node.at("rows")) {
      rows.push_back({row.at("config").get<std::uint64_t>(), row.at("p").get<std::vector<double>>()});
    }
    const int idx = node.at("node").get<int>() - 1;
    if (idx < 0 || idx >= static_cast<int>(cards.size())) throw InputError("trace: theta node out of range");
    theta.set_node(idx, std::move(parents), std::move(rows));
  }
  return theta;
}

}  // namespace

TraceHeader TraceHeader::from_dataset(const Dataset& ds) {
  TraceHeader h;
  h.names = ds.names();
  for (int j = 0; j < ds.num_vars(); ++j) h.levels.push_back(ds.levels(j));
  h.cardinalities = ds.cardinalities();
  return h;
}

json query_to_json(const CausalQuery& query) {
  return {{"response", query.response + 1},
          {"treatment", query.treatment + 1},
          {"treatment_high", query.treatment_high},
          {"treatment_low", query.treatment_low},
          {"benchmark", query.benchmark}};
}

CausalQuery query_from_json(const json& j) {
  CausalQuery q;
  q.response = j.at("response").get<int>() - 1;
  q.treatment = j.at("treatment").get<int>() - 1;
  q.treatment_high = j.at("treatment_high").get<int>();
  q.treatment_low = j.at("treatment_low").get<int>();
  q.benchmark = j.at("benchmark").get<int>();
  return q;
}

json config_to_json(const McmcConfig& config) {
  json queries = json::array();
  for (const auto& query : config.causal_queries) queries.push_back(query_to_json(query));
  json out = {{"iterations", config.iterations},
              {"burn_in", config.burn_in},
              {"thin", config.thin},
              {"seed", config.seed},
              {"bdeu_a", config.hyper.a},
              {"prior_c", config.dag_prior.c},
              {"prior_d", config.dag_prior.d},
              {"init", init_name(config.init)},
              {"store_theta", to_string(config.store_theta)},
              {"causal_queries", queries}};
  if (config.init_dag) out["init_dag"] = edges_to_json(*config.init_dag);
  return out;
}

McmcConfig config_from_json(const json& j, int q) {
  McmcConfig c;
  try {
    c.iterations = j.value("iterations", c.iterations);
    c.burn_in = j.value("burn_in", c.burn_in);
    c.thin = j.value("thin", c.thin);
    c.seed = j.value("seed", c.seed);
    c.hyper.a = j.value("bdeu_a", c.hyper.a);
    c.dag_prior.c = j.value("prior_c", c.dag_prior.c);
    c.dag_prior.d = j.value("prior_d", c.dag_prior.d);
    c.init = parse_init(j.value("init", std::string("empty")));
    c.store_theta = parse_store_theta(j.value("store_theta", std::string("all")));
    if (j.contains("causal_queries")) {
      for (const auto& query : j.at("causal_queries")) c.causal_queries.push_back(query_from_json(query));
    }
    if (j.contains("init_dag")) c.init_dag = edges_from_json(j.at("init_dag"), q);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
  return c;
}

void write_trace(std::ostream& out, const Trace& trace, const TraceHeader& header) {
  json manifest = {{"type", "manifest"},
                   {"format", "catdag-trace/1"},
                   {"names", header.names},
                   {"levels", header.levels},
                   {"cardinalities", header.cardinalities},
                   {"config", config_to_json(trace.config)},
                   {"accepted", trace.accepted},
                   {"proposed", trace.proposed},
                   {"acceptance_rate", trace.acceptance_rate()},
                   {"draws", trace.draws.size()}};
  out << manifest.dump() << '\n';
  for (const Draw& draw : trace.draws) {
    json rec = {{"type", "draw"}, {"iteration", draw.iteration}, {"edges", edges_to_json(draw.dag)}};
    if (draw.theta) rec["theta"] = theta_to_json(*draw.theta);
    out << rec.dump() << '\n';
  }
}

void write_trace(const std::filesystem::path& path, const Trace& trace, const TraceHeader& header) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write trace file " + path.string());
  write_trace(out, trace, header);
}

LoadedTrace read_trace(std::istream& in) {
  LoadedTrace loaded;
  std::string line;
  std::size_t line_no = 0;
  bool have_manifest = false;
  int q = 0;
  try {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const json rec = json::parse(line);
      const std::string type = rec.at("type").get<std::string>();
      if (type == "manifest") {
        loaded.header.names = rec.at("names").get<std::vector<std::string>>();
        loaded.header.cardinalities = rec.at("cardinalities").get<std::vector<int>>();
        if (rec.contains("levels")) {
          loaded.header.levels = rec.at("levels").get<std::vector<std::vector<std::string>>>();
        } else {
          for (int c : loaded.header.cardinalities) {
            std::vector<std::string> labels;
            for (int m = 0; m < c; ++m) labels.push_back(std::to_string(m));
            loaded.header.levels.push_back(std::move(labels));
          }
        }
        if (loaded.header.names.size() != loaded.header.cardinalities.size() ||
            loaded.header.levels.size() != loaded.header.cardinalities.size()) {
          throw InputError("trace manifest: names, levels and cardinalities disagree");
        }
        q = static_cast<int>(loaded.header.cardinalities.size());
        loaded.trace.config = config_from_json(rec.at("config"), q);
        loaded.trace.accepted = rec.at("accepted").get<std::size_t>();
        loaded.trace.proposed = rec.at("proposed").get<std::size_t>();
        have_manifest = true;
      } else if (type == "draw") {
        if (!have_manifest) throw InputError("trace: draw record before the manifest");
        Draw draw{rec.at("iteration").get<std::size_t>(), edges_from_json(rec.at("edges"), q), std::nullopt};
        if (rec.contains("theta")) draw.theta = theta_from_json(rec.at("theta"), loaded.header.cardinalities);
        loaded.trace.draws.push_back(std::move(draw));
      } else {
        throw InputError("trace: unknown record type '" + type + "'");
      }
    }
  } catch (const json::exception& e) {
    throw InputError("trace line " + std::to_string(line_no) + ": " + e.what());
  }
  if (!have_manifest) throw InputError("trace has no manifest record");
  return loaded;
}

LoadedTrace read_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open trace file " + path.string());
  return read_trace(in);
}

}  // namespace catdag
