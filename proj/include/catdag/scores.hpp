#pragma once

#include <cstddef>
#include <mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "catdag/dag.hpp"
#include "catdag/data.hpp"
#include "catdag/priors.hpp"

namespace catdag {

/// Dirichlet-multinomial log marginal likelihood of a family table:
/// sum over observed configurations k of log h(a_k) - log h(a_k + N^k).
double log_family_ml(const FamilyCounts& counts, const DirichletHyper& hyper);

/// Throws std::logic_error if j is among pa.
double log_family_ml(const Dataset& ds, int j, std::span<const int> pa, const DirichletHyper& hyper);

/// Sum of family scores over all nodes of the DAG.
double log_dag_ml(const Dataset& ds, const Dag& dag, const DirichletHyper& hyper);

/// Memoized family scores over one dataset, backed by a CountsCache.
/// Thread-safe.
class FamilyScorer {
 public:
  FamilyScorer(const Dataset& ds, DirichletHyper hyper,
               std::size_t counts_capacity = CountsCache::kDefaultCapacity);

  double family(int j, std::span<const int> parents);
  double dag(const Dag& dag);

  const Dataset& dataset() const { return counts_.dataset(); }
  const DirichletHyper& hyper() const { return hyper_; }
  CountsCache& counts() { return counts_; }

 private:
  struct KeyHash {
    std::size_t operator()(const std::vector<int>& key) const noexcept;
  };
  static constexpr std::size_t kMaxMemo = std::size_t{1} << 20;

  DirichletHyper hyper_;
  CountsCache counts_;
  std::mutex mu_;
  std::unordered_map<std::vector<int>, double, KeyHash> memo_;
};

}  // namespace catdag
