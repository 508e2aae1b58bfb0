#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "catdag/errors.hpp"
#include "catdag/oracle.hpp"
#include "support/oracles.hpp"

using namespace catdag;

TEST(Enumerate, CountsMatchBruteForce) {
  const std::size_t expected[] = {1, 1, 3, 25, 543};
  for (int q = 0; q <= 4; ++q) {
    EXPECT_EQ(enumerate_dags(q).size(), oracle::brute_force_dag_count(q)) << q;
    EXPECT_EQ(enumerate_dags(q).size(), expected[q]);
  }
  EXPECT_EQ(enumerate_dags(5).size(), 29281u);
  EXPECT_THROW(enumerate_dags(6), ConfigError);
}

TEST(Enumerate, DuplicateFree) {
  auto dags = enumerate_dags(4);
  std::vector<std::vector<Edge>> edges;
  for (const auto& d : dags) edges.push_back(d.edges());
  std::sort(edges.begin(), edges.end());
  EXPECT_EQ(std::unique(edges.begin(), edges.end()), edges.end());
}

TEST(ExactPosterior, EmptyDataGivesNormalizedPrior) {
  const Dataset ds = Dataset::empty(std::vector<int>{2, 2, 2});
  const auto post = exact_posterior(ds, {}, {});
  double total = 0.0;
  double prior_z = 0.0;
  for (const auto& e : post.entries) prior_z += std::exp(log_dag_prior(e.dag, {}));
  for (const auto& e : post.entries) {
    total += e.probability;
    EXPECT_NEAR(e.probability, std::exp(log_dag_prior(e.dag, {})) / prior_z, 1e-14);
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(ExactPosterior, StrongDependenceSplitsEvenly) {
  std::vector<std::vector<int>> rows;
  for (int i = 0; i < 40; ++i) rows.push_back({i % 2, i % 2});
  const Dataset ds = Dataset::from_rows(std::vector<int>{2, 2}, rows);
  const auto post = exact_posterior(ds, {}, {});
  const double fwd = post.probability_of(Dag::from_edges(2, std::vector<Edge>{{0, 1}}));
  const double bwd = post.probability_of(Dag::from_edges(2, std::vector<Edge>{{1, 0}}));
  EXPECT_NEAR(fwd + bwd, 1.0, 1e-9);
  EXPECT_NEAR(fwd, bwd, 1e-12);
  const auto p = post.ppi();
  EXPECT_NEAR(p(0, 1), fwd, 1e-15);
}

TEST(ExactPosterior, InvariantToRowOrderAndRelabeling) {
  Rng rng(3);
  std::vector<std::vector<int>> rows;
  for (int i = 0; i < 30; ++i) {
    const int a = uniform_open01(rng) < 0.5;
    rows.push_back({a, uniform_open01(rng) < (a ? 0.8 : 0.3), uniform_open01(rng) < 0.4});
  }
  const Dataset ds = Dataset::from_rows(std::vector<int>{2, 2, 2}, rows);
  auto reversed = rows;
  std::reverse(reversed.begin(), reversed.end());
  const auto p1 = exact_posterior(ds, {}, {}).ppi();
  const auto p2 = exact_posterior(Dataset::from_rows(std::vector<int>{2, 2, 2}, reversed), {}, {}).ppi();
  for (std::size_t i = 0; i < p1.values.size(); ++i) EXPECT_NEAR(p1.values[i], p2.values[i], 1e-10);
  // swap nodes 0 and 2
  std::vector<std::vector<int>> swapped;
  for (const auto& r : rows) swapped.push_back({r[2], r[1], r[0]});
  const auto p3 = exact_posterior(Dataset::from_rows(std::vector<int>{2, 2, 2}, swapped), {}, {}).ppi();
  const int perm[] = {2, 1, 0};
  for (int u = 0; u < 3; ++u) {
    for (int v = 0; v < 3; ++v) EXPECT_NEAR(p1(u, v), p3(perm[u], perm[v]), 1e-10);
  }
}

TEST(ExactPosterior, EquivalentDagsScoreEqually) {
  Rng rng(5);
  std::vector<std::vector<int>> rows;
  for (int i = 0; i < 50; ++i) {
    rows.push_back({uniform_open01(rng) < 0.5, uniform_open01(rng) < 0.3, uniform_open01(rng) < 0.6,
                    uniform_open01(rng) < 0.5});
  }
  const Dataset ds = Dataset::from_rows(std::vector<int>{2, 2, 2, 2}, rows);
  const auto post = exact_posterior(ds, {}, {});
  std::map<std::pair<std::vector<Edge>, std::vector<Edge>>, double> by_class;
  for (const auto& e : post.entries) {
    const Cpdag c = to_cpdag(e.dag);
    auto [it, inserted] = by_class.emplace(std::make_pair(c.directed, c.undirected), e.log_unnormalized);
    if (!inserted && e.dag.num_edges() == 0) continue;
    if (!inserted) EXPECT_NEAR(it->second, e.log_unnormalized, 1e-9);
  }
}

TEST(ExactCausalMean, DisconnectedAndDegenerateCases) {
  // X0 and X1 independent coins, X2 a strong copy of X1: the effect of X0 on
  // X2 is small; the effect of X1 on X2 is large and positive.
  Rng rng(7);
  std::vector<std::vector<int>> rows;
  for (int i = 0; i < 300; ++i) {
    const int b = uniform_open01(rng) < 0.5;
    rows.push_back({uniform_open01(rng) < 0.5, b, uniform_open01(rng) < (b ? 0.95 : 0.05)});
  }
  const Dataset ds = Dataset::from_rows(std::vector<int>{2, 2, 2}, rows);
  const auto none = exact_causal_mean(ds, {2, 0, 1, 0, 1}, {}, {}, 500, 3);
  EXPECT_LT(std::abs(none.value), 0.05);
  const auto strong = exact_causal_mean(ds, {2, 1, 1, 0, 1}, {}, {}, 500, 3);
  EXPECT_GT(strong.value, 0.3);
  EXPECT_GT(strong.std_error, 0.0);
  EXPECT_THROW(exact_causal_mean(ds, {2, 1, 1, 0, 1}, {}, {}, 1), ConfigError);
}
