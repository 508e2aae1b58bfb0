#include "catdag/causal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "catdag/data.hpp"
#include "catdag/errors.hpp"

namespace catdag {

namespace {

std::uint64_t state_space(const std::vector<int>& cards, std::span<const int> nodes) {
  std::uint64_t size = 1;
  for (int j : nodes) {
    const auto c = static_cast<std::uint64_t>(cards[static_cast<std::size_t>(j)]);
    if (size > std::numeric_limits<std::uint64_t>::max() / c) return std::numeric_limits<std::uint64_t>::max();
    size *= c;
  }
  return size;
}

void validate_query(const Theta& theta, const Dag& dag, const CausalQuery& query) {
  const int q = dag.num_nodes();
  if (theta.num_nodes() != q) throw std::logic_error("theta and dag disagree on node count");
  if (query.response < 0 || query.response >= q || query.treatment < 0 || query.treatment >= q) {
    throw QueryError("causal query node out of range");
  }
  if (query.response == query.treatment) throw QueryError("response and treatment must differ");
  const int card_v = theta.cardinality(query.treatment);
  const int card_y = theta.cardinality(query.response);
  if (query.treatment_high < 0 || query.treatment_high >= card_v || query.treatment_low < 0 ||
      query.treatment_low >= card_v) {
    throw QueryError("treatment level out of range");
  }
  if (query.benchmark < 0 || query.benchmark >= card_y) throw QueryError("benchmark level out of range");
}

bool response_is_parent(const Dag& dag, const CausalQuery& query) {
  const auto& pa = dag.parents(query.treatment);
  return std::binary_search(pa.begin(), pa.end(), query.response);
}

// Advances a mixed-radix digit vector; digits[0] is least significant.
void advance(std::vector<int>& digits, const std::vector<int>& cards) {
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (++digits[i] < cards[i]) return;
    digits[i] = 0;
  }
}

// Per-stratum accumulators for the parent-adjusted contrast.
struct Strata {
  std::vector<double> pk;
  std::vector<double> num_high, den_high, num_low, den_low;

  explicit Strata(std::uint64_t k)
      : pk(k, 0.0), num_high(k, 0.0), den_high(k, 0.0), num_low(k, 0.0), den_low(k, 0.0) {}
};

// Sums the benchmark mass of Y per parent stratum in a (possibly intervened) table.
std::vector<double> benchmark_mass(const JointTable& table, const Dag& dag, const CausalQuery& query,
                                   const ConfigCoder& coder) {
  const auto& pa = dag.parents(query.treatment);
  std::vector<int> pa_pos;
  for (int p : pa) pa_pos.push_back(table.position(p));
  const int y_pos = table.position(query.response);
  std::vector<double> mass(coder.size(), 0.0);
  std::vector<int> digits(table.nodes().size(), 0);
  for (double p : table.probabilities()) {
    if (p != 0.0 && digits[static_cast<std::size_t>(y_pos)] == query.benchmark) {
      std::uint64_t k = 0;
      for (std::size_t i = 0; i < pa_pos.size(); ++i) {
        k += static_cast<std::uint64_t>(digits[static_cast<std::size_t>(pa_pos[i])]) * coder.stride(i);
      }
      mass[k] += p;
    }
    advance(digits, table.cardinalities());
  }
  return mass;
}

// Exact evaluation from an observational table over an ancestral superset of
// {Y} U fa(v). Strata whose conditioning event has zero mass in floating
// point (but positive parent mass) fall back to the truncated product.
GammaResult gamma_from_table(const Theta& theta, const Dag& dag, const CausalQuery& query,
                             const JointTable& table) {
  const int v = query.treatment;
  const auto& pa = dag.parents(v);
  const ConfigCoder coder(pa, theta.cardinalities());
  std::vector<int> pa_pos;
  for (int p : pa) pa_pos.push_back(table.position(p));
  const int v_pos = table.position(v);
  const int y_pos = table.position(query.response);
  if (v_pos < 0 || y_pos < 0) throw std::logic_error("joint table does not cover the query");

  Strata s(coder.size());
  std::vector<int> digits(table.nodes().size(), 0);
  for (double p : table.probabilities()) {
    std::uint64_t k = 0;
    for (std::size_t i = 0; i < pa_pos.size(); ++i) {
      k += static_cast<std::uint64_t>(digits[static_cast<std::size_t>(pa_pos[i])]) * coder.stride(i);
    }
    const int m = digits[static_cast<std::size_t>(v_pos)];
    const bool hit = digits[static_cast<std::size_t>(y_pos)] == query.benchmark;
    s.pk[k] += p;
    if (m == query.treatment_high) {
      s.den_high[k] += p;
      if (hit) s.num_high[k] += p;
    }
    if (m == query.treatment_low) {
      s.den_low[k] += p;
      if (hit) s.num_low[k] += p;
    }
    advance(digits, table.cardinalities());
  }

  std::vector<double> do_high, do_low;
  double gamma = 0.0;
  for (std::uint64_t k = 0; k < coder.size(); ++k) {
    if (s.pk[k] <= 0.0) continue;
    double cond_high = 0.0;
    double cond_low = 0.0;
    if (s.den_high[k] > 0.0) {
      cond_high = s.num_high[k] / s.den_high[k];
    } else {
      if (do_high.empty()) {
        do_high = benchmark_mass(JointTable(theta, dag, table.nodes(), JointTable::Intervention{v, query.treatment_high}),
                                 dag, query, coder);
      }
      cond_high = do_high[k] / s.pk[k];
    }
    if (s.den_low[k] > 0.0) {
      cond_low = s.num_low[k] / s.den_low[k];
    } else {
      if (do_low.empty()) {
        do_low = benchmark_mass(JointTable(theta, dag, table.nodes(), JointTable::Intervention{v, query.treatment_low}),
                                dag, query, coder);
      }
      cond_low = do_low[k] / s.pk[k];
    }
    gamma += (cond_high - cond_low) * s.pk[k];
  }
  return {std::clamp(gamma, -1.0, 1.0), 0.0, true, false};
}

// Forward sampling of the two intervened models with common random numbers.
GammaResult gamma_monte_carlo(const Theta& theta, const Dag& dag, const CausalQuery& query,
                              std::span<const int> nodes, const CausalOptions& options) {
  const int q = dag.num_nodes();
  std::vector<std::uint8_t> in_set(static_cast<std::size_t>(q), 0);
  for (int j : nodes) in_set[static_cast<std::size_t>(j)] = 1;
  std::vector<int> order;
  for (int j : dag.topological_order()) {
    if (in_set[static_cast<std::size_t>(j)]) order.push_back(j);
  }
  std::vector<ConfigCoder> coders;
  coders.reserve(static_cast<std::size_t>(q));
  for (int j = 0; j < q; ++j) coders.emplace_back(dag.parents(j), theta.cardinalities());
  std::map<std::pair<int, std::uint64_t>, std::vector<double>> rows;
  const auto row = [&](int j, std::uint64_t k) -> const std::vector<double>& {
    auto it = rows.find({j, k});
    if (it == rows.end()) it = rows.emplace(std::make_pair(j, k), theta.conditional(j, k)).first;
    return it->second;
  };
  const auto draw_level = [](const std::vector<double>& probs, double u) {
    double acc = 0.0;
    for (std::size_t m = 0; m + 1 < probs.size(); ++m) {
      acc += probs[m];
      if (u < acc) return static_cast<int>(m);
    }
    return static_cast<int>(probs.size()) - 1;
  };

  Rng rng(mix_seed(options.mc_seed, static_cast<std::uint64_t>(query.treatment) * 131u +
                                        static_cast<std::uint64_t>(query.response)));
  std::vector<int> high(static_cast<std::size_t>(q), 0), low(static_cast<std::size_t>(q), 0);
  std::vector<int> digits;
  double sum = 0.0;
  double sum_sq = 0.0;
  const std::size_t draws = std::max<std::size_t>(options.mc_draws, 2);
  for (std::size_t i = 0; i < draws; ++i) {
    for (int j : order) {
      const double u = uniform_open01(rng);
      if (j == query.treatment) {
        high[static_cast<std::size_t>(j)] = query.treatment_high;
        low[static_cast<std::size_t>(j)] = query.treatment_low;
        continue;
      }
      for (auto* arm : {&high, &low}) {
        digits.clear();
        for (int p : dag.parents(j)) digits.push_back((*arm)[static_cast<std::size_t>(p)]);
        (*arm)[static_cast<std::size_t>(j)] = draw_level(row(j, coders[static_cast<std::size_t>(j)].encode(digits)), u);
      }
    }
    const double d = (high[static_cast<std::size_t>(query.response)] == query.benchmark ? 1.0 : 0.0) -
                     (low[static_cast<std::size_t>(query.response)] == query.benchmark ? 1.0 : 0.0);
    sum += d;
    sum_sq += d * d;
  }
  const double n = static_cast<double>(draws);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n), false, false};
}

}  // namespace

JointTable::JointTable(const Theta& theta, const Dag& dag, std::vector<int> nodes,
                       std::optional<Intervention> intervention)
    : nodes_(std::move(nodes)) {
  std::sort(nodes_.begin(), nodes_.end());
  nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
  const int q = dag.num_nodes();
  std::vector<int> pos(static_cast<std::size_t>(q), -1);
  for (std::size_t i = 0; i < nodes_.size(); ++i) pos[static_cast<std::size_t>(nodes_[i])] = static_cast<int>(i);
  for (int j : nodes_) {
    cards_.push_back(theta.cardinality(j));
    for (int p : dag.parents(j)) {
      if (pos[static_cast<std::size_t>(p)] < 0) throw std::logic_error("JointTable: node set is not ancestral");
    }
  }
  const std::uint64_t size = state_space(theta.cardinalities(), nodes_);
  if (size > (std::uint64_t{1} << 32)) throw std::length_error("JointTable: state space too large");

  // Dense conditional tables for the factors in the product.
  struct Factor {
    std::size_t slot;
    std::vector<int> parent_slots;
    std::vector<std::uint64_t> strides;
    int card;
    std::vector<double> cpt;  // config * card + level
  };
  std::vector<Factor> factors;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const int j = nodes_[i];
    if (intervention && intervention->node == j) continue;
    const auto& pa = dag.parents(j);
    if (!theta.has_node(j) || theta.node(j).parents != pa) {
      throw std::logic_error("JointTable: theta does not match the DAG at node " + std::to_string(j + 1));
    }
    const ConfigCoder coder(pa, theta.cardinalities());
    Factor f{i, {}, {}, theta.cardinality(j), {}};
    for (std::size_t t = 0; t < pa.size(); ++t) {
      f.parent_slots.push_back(pos[static_cast<std::size_t>(pa[t])]);
      f.strides.push_back(coder.stride(t));
    }
    f.cpt.resize(coder.size() * static_cast<std::uint64_t>(f.card));
    for (std::uint64_t k = 0; k < coder.size(); ++k) {
      const auto probs = theta.conditional(j, k);
      std::copy(probs.begin(), probs.end(), f.cpt.begin() + static_cast<std::ptrdiff_t>(k * static_cast<std::uint64_t>(f.card)));
    }
    factors.push_back(std::move(f));
  }
  const int v_slot = intervention ? pos.at(static_cast<std::size_t>(intervention->node)) : -1;
  if (intervention && v_slot < 0) throw std::logic_error("JointTable: intervened node outside the node set");

  probs_.assign(size, 0.0);
  std::vector<int> digits(nodes_.size(), 0);
  for (std::uint64_t cell = 0; cell < size; ++cell, advance(digits, cards_)) {
    if (v_slot >= 0 && digits[static_cast<std::size_t>(v_slot)] != intervention->level) continue;
    double p = 1.0;
    for (const Factor& f : factors) {
      std::uint64_t k = 0;
      for (std::size_t t = 0; t < f.parent_slots.size(); ++t) {
        k += static_cast<std::uint64_t>(digits[static_cast<std::size_t>(f.parent_slots[t])]) * f.strides[t];
      }
      p *= f.cpt[k * static_cast<std::uint64_t>(f.card) + static_cast<std::uint64_t>(digits[f.slot])];
    }
    probs_[cell] = p;
  }
}

std::vector<int> JointTable::decode(std::uint64_t cell) const {
  std::vector<int> digits(cards_.size());
  for (std::size_t i = 0; i < cards_.size(); ++i) {
    digits[i] = static_cast<int>(cell % static_cast<std::uint64_t>(cards_[i]));
    cell /= static_cast<std::uint64_t>(cards_[i]);
  }
  return digits;
}

int JointTable::position(int node) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), node);
  return (it != nodes_.end() && *it == node) ? static_cast<int>(it - nodes_.begin()) : -1;
}

double JointTable::total() const { return std::accumulate(probs_.begin(), probs_.end(), 0.0); }

AncestralSampler::AncestralSampler(const Theta& theta, const Dag& dag,
                                   std::optional<JointTable::Intervention> intervention)
    : theta_(theta), dag_(dag), intervention_(intervention), order_(dag.topological_order()) {}

const std::vector<double>& AncestralSampler::row(int j, std::uint64_t config) const {
  auto it = rows_.find({j, config});
  if (it == rows_.end()) it = rows_.emplace(std::make_pair(j, config), theta_.conditional(j, config)).first;
  return it->second;
}

std::vector<int> AncestralSampler::sample(Rng& rng) const {
  std::vector<int> x(static_cast<std::size_t>(dag_.num_nodes()), 0);
  std::vector<int> digits;
  for (int j : order_) {
    if (intervention_ && intervention_->node == j) {
      x[static_cast<std::size_t>(j)] = intervention_->level;
      continue;
    }
    digits.clear();
    for (int p : dag_.parents(j)) digits.push_back(x[static_cast<std::size_t>(p)]);
    const ConfigCoder coder(dag_.parents(j), theta_.cardinalities());
    const auto& probs = row(j, coder.encode(digits));
    const double u = uniform_open01(rng);
    double acc = 0.0;
    int level = static_cast<int>(probs.size()) - 1;
    for (std::size_t m = 0; m + 1 < probs.size(); ++m) {
      acc += probs[m];
      if (u < acc) {
        level = static_cast<int>(m);
        break;
      }
    }
    x[static_cast<std::size_t>(j)] = level;
  }
  return x;
}

InterventionalDistribution interventional_distribution(const Theta& theta, const Dag& dag, int v, int level,
                                                       const CausalOptions& options) {
  if (v < 0 || v >= dag.num_nodes()) throw QueryError("intervened node out of range");
  if (level < 0 || level >= theta.cardinality(v)) throw QueryError("intervention level out of range");
  std::vector<int> all(static_cast<std::size_t>(dag.num_nodes()));
  std::iota(all.begin(), all.end(), 0);
  const JointTable::Intervention intervention{v, level};
  if (state_space(theta.cardinalities(), all) <= options.max_exact_cells) {
    return JointTable(theta, dag, std::move(all), intervention);
  }
  return AncestralSampler(theta, dag, intervention);
}

GammaResult gamma_v(const Theta& theta, const Dag& dag, const CausalQuery& query, const CausalOptions& options) {
  validate_query(theta, dag, query);
  if (response_is_parent(dag, query)) return {0.0, 0.0, true, true};
  const auto nodes = query_relevant_nodes(dag, query);
  if (state_space(theta.cardinalities(), nodes) <= options.max_exact_cells) {
    return gamma_from_table(theta, dag, query, JointTable(theta, dag, nodes));
  }
  return gamma_monte_carlo(theta, dag, query, nodes, options);
}

std::vector<GammaResult> gamma_many(const Theta& theta, const Dag& dag, std::span<const CausalQuery> queries,
                                    const CausalOptions& options) {
  std::vector<int> nodes;
  for (const auto& query : queries) {
    validate_query(theta, dag, query);
    const auto rel = query_relevant_nodes(dag, query);
    nodes.insert(nodes.end(), rel.begin(), rel.end());
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  std::vector<GammaResult> out;
  out.reserve(queries.size());
  // A shared table pays off while it stays small; large unions are cheaper
  // handled query by query over their own ancestral sets.
  const std::uint64_t shared_cells = state_space(theta.cardinalities(), nodes);
  if (shared_cells > options.max_exact_cells || (queries.size() > 1 && shared_cells > (std::uint64_t{1} << 16))) {
    for (const auto& query : queries) out.push_back(gamma_v(theta, dag, query, options));
    return out;
  }
  const JointTable table(theta, dag, nodes);
  for (const auto& query : queries) {
    if (response_is_parent(dag, query)) {
      out.push_back({0.0, 0.0, true, true});
    } else {
      out.push_back(gamma_from_table(theta, dag, query, table));
    }
  }
  return out;
}

std::vector<LevelEffect> effect_battery(const Theta& theta, const Dag& dag, int v, int y, int reference,
                                        int benchmark, const CausalOptions& options) {
  if (v < 0 || v >= theta.num_nodes()) throw QueryError("treatment out of range");
  const int card = theta.cardinality(v);
  if (card < 2) throw QueryError("treatment needs at least two levels");
  std::vector<CausalQuery> queries;
  for (int m = 0; m < card; ++m) {
    if (m != reference) queries.push_back({y, v, m, reference, benchmark});
  }
  const auto results = gamma_many(theta, dag, queries, options);
  std::vector<LevelEffect> out;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    out.push_back({queries[i].treatment_high, reference, results[i].value});
  }
  return out;
}

CausalEstimate summarize_draws(std::span<const double> values, std::span<const double> quantile_probs) {
  if (values.empty()) throw InputError("cannot summarize an empty set of draws");
  CausalEstimate est;
  est.draws_used = values.size();
  const double n = static_cast<double>(values.size());
  est.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : values) ss += (x - est.mean) * (x - est.mean);
  est.sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> probs(quantile_probs.begin(), quantile_probs.end());
  std::sort(probs.begin(), probs.end());
  for (double p : probs) {
    if (p < 0.0 || p > 1.0) throw ConfigError("quantile probability outside [0, 1]");
    const double h = (n - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    est.quantiles.emplace_back(p, sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]));
  }
  return est;
}

std::vector<CausalEstimate> bma_estimates(const Trace& trace, std::span<const CausalQuery> queries,
                                          std::span<const double> quantile_probs, const CausalOptions& options) {
  if (trace.draws.empty()) throw InputError("trace is empty");
  std::vector<std::vector<double>> values(queries.size());
  std::vector<std::size_t> parent_draws(queries.size(), 0), mc_draws(queries.size(), 0);
  for (std::size_t s = 0; s < trace.draws.size(); ++s) {
    const Draw& draw = trace.draws[s];
    if (!draw.theta) throw InputError("trace draws carry no parameters; rerun with --store-theta all");
    for (const auto& query : queries) {
      for (int j : query_relevant_nodes(draw.dag, query)) {
        if (!draw.theta->has_node(j)) {
          throw QueryError("trace does not retain the parameters this query needs (stored causal-only "
                           "for different queries)");
        }
      }
    }
    CausalOptions per_draw = options;
    per_draw.mc_seed = mix_seed(options.mc_seed, s);
    const auto results = gamma_many(*draw.theta, draw.dag, queries, per_draw);
    for (std::size_t i = 0; i < queries.size(); ++i) {
      values[i].push_back(results[i].value);
      if (results[i].response_is_parent) ++parent_draws[i];
      if (!results[i].exact) ++mc_draws[i];
    }
  }
  std::vector<CausalEstimate> out;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    auto est = summarize_draws(values[i], quantile_probs);
    est.response_is_parent_draws = parent_draws[i];
    est.monte_carlo_draws = mc_draws[i];
    out.push_back(std::move(est));
  }
  return out;
}

CausalEstimate bma_estimate(const Trace& trace, const CausalQuery& query, std::span<const double> quantile_probs,
                            const CausalOptions& options) {
  return bma_estimates(trace, std::span<const CausalQuery>(&query, 1), quantile_probs, options).front();
}

}  // namespace catdag
