#include "catdag/theta.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "catdag/data.hpp"
#include "catdag/priors.hpp"
#include "catdag/random.hpp"

namespace catdag {

Theta::Theta(std::vector<int> cardinalities, double bdeu_a, std::uint64_t lazy_seed)
    : cards_(std::move(cardinalities)), a_(bdeu_a), lazy_seed_(lazy_seed), nodes_(cards_.size()) {}

void Theta::set_node(int j, std::vector<int> parents, std::vector<ThetaRow> rows) {
  auto& node = nodes_.at(static_cast<std::size_t>(j));
  std::sort(parents.begin(), parents.end());
  node.num_configs = ConfigCoder(parents, cards_).size();
  node.parents = std::move(parents);
  std::sort(rows.begin(), rows.end(), [](const ThetaRow& a, const ThetaRow& b) { return a.config < b.config; });
  node.rows = std::move(rows);
  node.present = true;
}

namespace {

const ThetaRow* find_row(const NodeTheta& node, std::uint64_t config) {
  auto it = std::lower_bound(node.rows.begin(), node.rows.end(), config,
                             [](const ThetaRow& r, std::uint64_t k) { return r.config < k; });
  return (it != node.rows.end() && it->config == config) ? &*it : nullptr;
}

}  // namespace

bool Theta::materialized(int j, std::uint64_t config) const {
  return find_row(nodes_.at(static_cast<std::size_t>(j)), config) != nullptr;
}

std::vector<double> Theta::conditional(int j, std::uint64_t config) const {
  const auto& node = nodes_.at(static_cast<std::size_t>(j));
  if (!node.present) throw std::logic_error("Theta: node " + std::to_string(j + 1) + " not stored in this draw");
  if (config >= node.num_configs) throw std::out_of_range("Theta: parent configuration out of range");
  if (const ThetaRow* row = find_row(node, config)) return row->probs;
  const int card = cards_[static_cast<std::size_t>(j)];
  const double alpha = bdeu_entry(a_, node.num_configs * static_cast<std::uint64_t>(card));
  const std::vector<double> prior(static_cast<std::size_t>(card), alpha);
  Rng rng(mix_seed(mix_seed(lazy_seed_, static_cast<std::uint64_t>(j)), config));
  return dirichlet_draw(prior, rng);
}

Theta Theta::restricted(std::span<const int> nodes) const {
  Theta out(cards_, a_, lazy_seed_);
  for (int j : nodes) out.nodes_.at(static_cast<std::size_t>(j)) = nodes_.at(static_cast<std::size_t>(j));
  return out;
}

bool Theta::is_normalized(double tol) const {
  for (const auto& node : nodes_) {
    for (const auto& row : node.rows) {
      double sum = 0.0;
      for (double p : row.probs) {
        if (!(p >= 0.0)) return false;
        sum += p;
      }
      if (std::abs(sum - 1.0) > tol) return false;
    }
  }
  return true;
}

}  // namespace catdag
