#include "catdag/priors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "catdag/errors.hpp"

namespace catdag {

void DirichletHyper::validate() const {
  if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("BDEu mass a must be positive, got " + std::to_string(a));
}

double DirichletHyper::entry(std::uint64_t family_cells) const { return bdeu_entry(a, family_cells); }

void DagPriorParams::validate() const {
  if (!(c > 0.0) || !std::isfinite(c) || !(d > 0.0) || !std::isfinite(d)) {
    throw ConfigError("Beta-Binomial DAG prior needs c > 0 and d > 0");
  }
}

double bdeu_entry(double a, std::uint64_t family_cells) {
  if (!(a > 0.0)) throw std::invalid_argument("bdeu_entry: a must be positive");
  if (family_cells == 0) throw std::invalid_argument("bdeu_entry: empty family state space");
  return a / static_cast<double>(family_cells);
}

double log_dirichlet_norm(std::span<const double> alpha) {
  double sum = 0.0;
  double log_prod = 0.0;
  for (double a : alpha) {
    if (!(a > 0.0)) throw InputError("log_dirichlet_norm: entries must be positive");
    sum += a;
    log_prod += std::lgamma(a);
  }
  return std::lgamma(sum) - log_prod;
}

double log_skeleton_prior(std::size_t edges, int q, const DagPriorParams& params) {
  const double max_edges = 0.5 * static_cast<double>(q) * static_cast<double>(q - 1);
  const double k = static_cast<double>(edges);
  if (k > max_edges) throw std::invalid_argument("log_skeleton_prior: more edges than node pairs");
  const double c = params.c;
  const double d = params.d;
  return std::lgamma(k + c) + std::lgamma(max_edges - k + d) - std::lgamma(max_edges + c + d) +
         std::lgamma(c + d) - std::lgamma(c) - std::lgamma(d);
}

double log_dag_prior(const Dag& dag, const DagPriorParams& params) {
  return log_skeleton_prior(dag.num_edges(), dag.num_nodes(), params);
}

}  // namespace catdag
