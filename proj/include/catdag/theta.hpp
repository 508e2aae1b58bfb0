#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace catdag {

struct ThetaRow {
  std::uint64_t config = 0;
  std::vector<double> probs;  // over the levels of the node; sums to 1
};

struct NodeTheta {
  bool present = false;
  std::vector<int> parents;      // sorted, matches the DAG the draw belongs to
  std::uint64_t num_configs = 1;  // |X_pa|
  std::vector<ThetaRow> rows;     // materialized configurations, sorted by config
};

/// One draw of the DAG parameter: a conditional probability vector per node
/// and parent configuration. Only configurations observed in the data are
/// materialized; any other configuration is a prior Dirichlet draw generated
/// on demand from a sub-seed of (lazy_seed, node, config), so repeated
/// lookups within a draw agree.
class Theta {
 public:
  Theta() = default;
  Theta(std::vector<int> cardinalities, double bdeu_a, std::uint64_t lazy_seed);

  int num_nodes() const { return static_cast<int>(cards_.size()); }
  int cardinality(int j) const { return cards_[static_cast<std::size_t>(j)]; }
  const std::vector<int>& cardinalities() const { return cards_; }
  double bdeu_a() const { return a_; }
  std::uint64_t lazy_seed() const { return lazy_seed_; }

  void set_node(int j, std::vector<int> parents, std::vector<ThetaRow> rows);
  bool has_node(int j) const { return nodes_[static_cast<std::size_t>(j)].present; }
  const NodeTheta& node(int j) const { return nodes_[static_cast<std::size_t>(j)]; }

  bool materialized(int j, std::uint64_t config) const;
  std::vector<double> conditional(int j, std::uint64_t config) const;

  /// Copy keeping only the listed nodes.
  Theta restricted(std::span<const int> nodes) const;

  /// Every materialized vector is nonnegative and sums to 1 within tol.
  bool is_normalized(double tol = 1e-12) const;

 private:
  std::vector<int> cards_;
  double a_ = 1.0;
  std::uint64_t lazy_seed_ = 0;
  std::vector<NodeTheta> nodes_;
};

}  // namespace catdag
