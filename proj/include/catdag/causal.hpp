#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "catdag/dag.hpp"
#include "catdag/mcmc.hpp"
#include "catdag/query.hpp"
#include "catdag/random.hpp"
#include "catdag/theta.hpp"

namespace catdag {

struct CausalOptions {
  /// Largest joint state space (over the query's ancestral set) summed exactly.
  std::uint64_t max_exact_cells = std::uint64_t{1} << 22;
  /// Forward-sampling draws used beyond that limit.
  std::size_t mc_draws = 100000;
  std::uint64_t mc_seed = 0x5eed;
};

/// Dense probability table over an ancestrally closed node set, optionally
/// under a hard intervention do(X_v = level) (truncated factorization).
/// Cells use mixed-radix coding with nodes()[0] as least significant digit.
class JointTable {
 public:
  struct Intervention {
    int node = -1;
    int level = 0;
  };

  JointTable(const Theta& theta, const Dag& dag, std::vector<int> nodes,
             std::optional<Intervention> intervention = std::nullopt);

  const std::vector<int>& nodes() const { return nodes_; }
  const std::vector<int>& cardinalities() const { return cards_; }
  std::span<const double> probabilities() const { return probs_; }
  std::vector<int> decode(std::uint64_t cell) const;
  /// Position of a node in nodes(), or -1.
  int position(int node) const;
  double total() const;

 private:
  std::vector<int> nodes_;
  std::vector<int> cards_;
  std::vector<double> probs_;
};

/// Ancestral sampler from the (possibly intervened) DAG, used when the joint
/// is too large to tabulate.
class AncestralSampler {
 public:
  AncestralSampler(const Theta& theta, const Dag& dag, std::optional<JointTable::Intervention> intervention);

  /// One joint configuration over all q nodes.
  std::vector<int> sample(Rng& rng) const;

 private:
  const std::vector<double>& row(int j, std::uint64_t config) const;

  Theta theta_;
  Dag dag_;
  std::optional<JointTable::Intervention> intervention_;
  std::vector<int> order_;
  mutable std::map<std::pair<int, std::uint64_t>, std::vector<double>> rows_;
};

using InterventionalDistribution = std::variant<JointTable, AncestralSampler>;

/// p(x | do(X_v = level)) over all q variables: a dense table when the state
/// space is within options.max_exact_cells, otherwise a sampler.
InterventionalDistribution interventional_distribution(const Theta& theta, const Dag& dag, int v, int level,
                                                       const CausalOptions& options = {});

struct GammaResult {
  double value = 0.0;
  double std_error = 0.0;
  bool exact = true;
  /// Response is a parent of the treatment; value is exactly 0.
  bool response_is_parent = false;
};

/// Parent-adjusted effect sum_k [Pr(Y=b | v=high, pa=k) - Pr(Y=b | v=low, pa=k)] Pr(pa=k),
/// with the probabilities taken from the joint induced by theta.
/// Throws QueryError on y == v or out-of-range levels.
GammaResult gamma_v(const Theta& theta, const Dag& dag, const CausalQuery& query,
                    const CausalOptions& options = {});

/// Several queries on one draw, sharing the joint table where possible.
std::vector<GammaResult> gamma_many(const Theta& theta, const Dag& dag, std::span<const CausalQuery> queries,
                                    const CausalOptions& options = {});

struct LevelEffect {
  int level = 0;
  int reference = 0;
  double value = 0.0;
};

/// One effect per non-reference level m of X_v, contrast (m, reference).
std::vector<LevelEffect> effect_battery(const Theta& theta, const Dag& dag, int v, int y, int reference,
                                        int benchmark, const CausalOptions& options = {});

struct CausalEstimate {
  double mean = 0.0;
  double sd = 0.0;
  std::vector<std::pair<double, double>> quantiles;  // (probability, value), increasing
  std::size_t draws_used = 0;
  std::size_t response_is_parent_draws = 0;
  std::size_t monte_carlo_draws = 0;
};

inline constexpr double kDefaultQuantiles[] = {0.05, 0.95};

/// Posterior summary of gamma_v over the retained draws; the mean is the BMA
/// estimate. Throws InputError on an empty trace or draws without theta.
CausalEstimate bma_estimate(const Trace& trace, const CausalQuery& query,
                            std::span<const double> quantile_probs = kDefaultQuantiles,
                            const CausalOptions& options = {});

std::vector<CausalEstimate> bma_estimates(const Trace& trace, std::span<const CausalQuery> queries,
                                          std::span<const double> quantile_probs = kDefaultQuantiles,
                                          const CausalOptions& options = {});

/// Summary of a sample of gamma values (mean, sd with n-1, type-7 quantiles).
CausalEstimate summarize_draws(std::span<const double> values, std::span<const double> quantile_probs);

}  // namespace catdag
