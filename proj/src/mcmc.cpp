#include "catdag/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "catdag/errors.hpp"

namespace catdag {

std::string to_string(StoreTheta s) {
  switch (s) {
    case StoreTheta::kAll:
      return "all";
    case StoreTheta::kNone:
      return "none";
    case StoreTheta::kCausalOnly:
      return "causal-only";
  }
  return "all";
}

StoreTheta parse_store_theta(const std::string& s) {
  if (s == "all") return StoreTheta::kAll;
  if (s == "none") return StoreTheta::kNone;
  if (s == "causal-only") return StoreTheta::kCausalOnly;
  throw ConfigError("--store-theta must be one of all, none, causal-only (got '" + s + "')");
}

void McmcConfig::validate(int q) const {
  if (iterations == 0) throw ConfigError("iterations must be positive");
  if (burn_in >= iterations) {
    throw ConfigError("burn-in (" + std::to_string(burn_in) + ") must be smaller than iterations (" +
                      std::to_string(iterations) + "); the trace would be empty");
  }
  if (thin == 0) throw ConfigError("thin must be positive");
  hyper.validate();
  dag_prior.validate();
  if (init == InitDag::kUser) {
    if (!init_dag) throw ConfigError("user-supplied initial DAG missing");
    if (init_dag->num_nodes() != q) throw ConfigError("initial DAG node count does not match the data");
  }
  if (store_theta == StoreTheta::kCausalOnly && causal_queries.empty()) {
    throw ConfigError("--store-theta causal-only needs at least one causal query");
  }
  for (const auto& query : causal_queries) {
    if (query.response < 0 || query.response >= q || query.treatment < 0 || query.treatment >= q) {
      throw ConfigError("causal query refers to a node outside the data");
    }
  }
}

std::size_t McmcConfig::retained_draws() const {
  if (burn_in >= iterations || thin == 0) return 0;
  return (iterations - burn_in + thin - 1) / thin;
}

namespace {

std::size_t uniform_index(std::size_t size, Rng& rng) {
  const auto idx = static_cast<std::size_t>(uniform_open01(rng) * static_cast<double>(size));
  return std::min(idx, size - 1);
}

double log_ratio_with_sizes(FamilyScorer& scorer, const Dag& dag, const Dag& next, const Operator& op,
                            const DagPriorParams& dag_prior, std::size_t size_here, std::size_t size_next) {
  double log_r = 0.0;
  for (int v : affected_nodes(op)) log_r += scorer.family(v, next.parents(v)) - scorer.family(v, dag.parents(v));
  log_r += log_dag_prior(next, dag_prior) - log_dag_prior(dag, dag_prior);
  log_r += std::log(static_cast<double>(size_here)) - std::log(static_cast<double>(size_next));
  return log_r;
}

}  // namespace

Proposal propose(const Dag& dag, Rng& rng) {
  const auto ops = valid_operators(dag);
  if (ops.empty()) throw std::logic_error("propose: no valid operators (q < 2)");
  const Operator op = ops[uniform_index(ops.size(), rng)];
  const Dag next = apply_operator(dag, op);
  return {op, std::log(static_cast<double>(ops.size())) -
                  std::log(static_cast<double>(count_valid_operators(next)))};
}

double log_accept_ratio(FamilyScorer& scorer, const Dag& dag, const Operator& op,
                        const DagPriorParams& dag_prior) {
  const Dag next = apply_operator(dag, op);
  return log_ratio_with_sizes(scorer, dag, next, op, dag_prior, count_valid_operators(dag),
                              count_valid_operators(next));
}

double log_accept_ratio(const Dataset& ds, const Dag& dag, const Operator& op, const DirichletHyper& hyper,
                        const DagPriorParams& dag_prior) {
  FamilyScorer scorer(ds, hyper);
  return log_accept_ratio(scorer, dag, op, dag_prior);
}

Theta sample_theta(CountsCache& counts, const Dag& dag, const DirichletHyper& hyper, Rng& rng) {
  const Dataset& ds = counts.dataset();
  Theta theta(ds.cardinalities(), hyper.a, rng());
  std::vector<double> alpha;
  for (int j = 0; j < dag.num_nodes(); ++j) {
    const auto table = counts.get(j, dag.parents(j));
    const int card = table->node_cardinality;
    const double entry = hyper.entry(table->num_configs * static_cast<std::uint64_t>(card));
    std::vector<ThetaRow> rows;
    rows.reserve(table->table.size());
    for (const auto& cfg : table->table) {
      alpha.assign(static_cast<std::size_t>(card), entry);
      for (std::size_t m = 0; m < alpha.size(); ++m) alpha[m] += cfg.counts[m];
      rows.push_back({cfg.config, dirichlet_draw(alpha, rng)});
    }
    theta.set_node(j, dag.parents(j), std::move(rows));
  }
  return theta;
}

Theta sample_theta(const Dataset& ds, const Dag& dag, const DirichletHyper& hyper, Rng& rng) {
  CountsCache counts(ds);
  return sample_theta(counts, dag, hyper, rng);
}

Dag random_start_dag(int q, Rng& rng) {
  std::vector<int> order(static_cast<std::size_t>(q));
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[uniform_index(i, rng)]);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      if (uniform_open01(rng) < 0.5) edges.push_back({order[i], order[j]});
    }
  }
  return Dag::from_edges(q, edges);
}

std::vector<int> query_relevant_nodes(const Dag& dag, const CausalQuery& query) {
  const int seeds[] = {query.response, query.treatment};
  return dag.ancestral_closure(seeds);
}

Trace run_chain(const Dataset& ds, const McmcConfig& config) {
  const int q = ds.num_vars();
  config.validate(q);
  if (q < 2) throw ConfigError("structure learning needs at least two variables");

  Rng rng(config.seed);
  FamilyScorer scorer(ds, config.hyper, config.counts_cache_capacity);

  Dag current(q);
  if (config.init == InitDag::kRandom) current = random_start_dag(q, rng);
  if (config.init == InitDag::kUser) current = *config.init_dag;

  Trace trace;
  trace.config = config;
  trace.draws.reserve(config.retained_draws());

  std::vector<Operator> ops = valid_operators(current);
  for (std::size_t s = 1; s <= config.iterations; ++s) {
    const Operator op = ops[uniform_index(ops.size(), rng)];
    Dag next = apply_operator(current, op);
    auto next_ops = valid_operators(next);
    const double log_r =
        log_ratio_with_sizes(scorer, current, next, op, config.dag_prior, ops.size(), next_ops.size());
    ++trace.proposed;
    if (std::log(uniform_open01(rng)) < log_r) {
      current = std::move(next);
      ops = std::move(next_ops);
      ++trace.accepted;
    }

    const bool keep = s > config.burn_in && (s - config.burn_in - 1) % config.thin == 0;
    if (!keep) continue;
    // theta draws of discarded iterations never feed back into the structure
    // update, so they are only generated for retained iterations.
    Draw draw{s, current, std::nullopt};
    if (config.store_theta != StoreTheta::kNone) {
      Theta theta = sample_theta(scorer.counts(), current, config.hyper, rng);
      if (config.store_theta == StoreTheta::kCausalOnly) {
        std::vector<int> keep_nodes;
        for (const auto& query : config.causal_queries) {
          const auto rel = query_relevant_nodes(current, query);
          keep_nodes.insert(keep_nodes.end(), rel.begin(), rel.end());
        }
        std::sort(keep_nodes.begin(), keep_nodes.end());
        keep_nodes.erase(std::unique(keep_nodes.begin(), keep_nodes.end()), keep_nodes.end());
        theta = theta.restricted(keep_nodes);
      }
      draw.theta = std::move(theta);
    }
    trace.draws.push_back(std::move(draw));
  }
  return trace;
}

}  // namespace catdag
