#include "catdag/scores.hpp"

#include <algorithm>
#include <cmath>

namespace catdag {

double log_family_ml(const FamilyCounts& counts, const DirichletHyper& hyper) {
  const int card = counts.node_cardinality;
  const double alpha = hyper.entry(counts.num_configs * static_cast<std::uint64_t>(card));
  const double alpha_row = alpha * card;
  // Per observed configuration:
  // lgamma(A) - card*lgamma(alpha) - lgamma(A + N) + sum_m lgamma(alpha + n_m).
  const double lg_alpha = std::lgamma(alpha);
  const double lg_row = std::lgamma(alpha_row);
  double total = 0.0;
  for (const auto& row : counts.table) {
    double n_k = 0.0;
    double term = lg_row;
    for (auto c : row.counts) {
      n_k += c;
      if (c != 0) term += std::lgamma(alpha + c) - lg_alpha;
    }
    term -= std::lgamma(alpha_row + n_k);
    total += term;
  }
  return total;
}

double log_family_ml(const Dataset& ds, int j, std::span<const int> pa, const DirichletHyper& hyper) {
  return log_family_ml(family_counts(ds, j, pa), hyper);
}

double log_dag_ml(const Dataset& ds, const Dag& dag, const DirichletHyper& hyper) {
  double total = 0.0;
  for (int j = 0; j < dag.num_nodes(); ++j) total += log_family_ml(ds, j, dag.parents(j), hyper);
  return total;
}

std::size_t FamilyScorer::KeyHash::operator()(const std::vector<int>& key) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (int v : key) {
    h ^= static_cast<std::size_t>(v) + 1;
    h *= 0x100000001b3ULL;
  }
  return h;
}

FamilyScorer::FamilyScorer(const Dataset& ds, DirichletHyper hyper, std::size_t counts_capacity)
    : hyper_(hyper), counts_(ds, counts_capacity) {
  hyper_.validate();
}

double FamilyScorer::family(int j, std::span<const int> parents) {
  std::vector<int> key;
  key.reserve(parents.size() + 1);
  key.push_back(j);
  key.insert(key.end(), parents.begin(), parents.end());
  std::sort(key.begin() + 1, key.end());
  {
    std::lock_guard lock(mu_);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  }
  const double value = log_family_ml(*counts_.get(j, parents), hyper_);
  std::lock_guard lock(mu_);
  if (memo_.size() >= kMaxMemo) memo_.clear();
  memo_.emplace(std::move(key), value);
  return value;
}

double FamilyScorer::dag(const Dag& dag) {
  double total = 0.0;
  for (int j = 0; j < dag.num_nodes(); ++j) total += family(j, dag.parents(j));
  return total;
}

}  // namespace catdag
