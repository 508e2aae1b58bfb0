#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "catdag/dag.hpp"
#include "catdag/errors.hpp"
#include "catdag/random.hpp"
#include "support/oracles.hpp"

using namespace catdag;

namespace {

Dag dag_of(int q, std::vector<Edge> edges) { return Dag::from_edges(q, edges); }

}  // namespace

TEST(IsAcyclic, Examples) {
  EXPECT_TRUE(is_acyclic(std::vector<Edge>{}, 3));
  EXPECT_FALSE(is_acyclic(std::vector<Edge>{{0, 1}, {1, 2}, {2, 0}}, 3));
  EXPECT_TRUE(is_acyclic(std::vector<Edge>{{0, 1}, {1, 2}, {0, 2}}, 3));
  EXPECT_THROW(is_acyclic(std::vector<Edge>{{0, 3}}, 3), InputError);
}

TEST(Dag, FromEdgesRejectsBadInput) {
  EXPECT_THROW(dag_of(3, {{0, 0}}), InputError);
  EXPECT_THROW(dag_of(3, {{0, 1}, {1, 0}}), InputError);
  EXPECT_THROW(dag_of(3, {{0, 1}, {0, 1}}), InputError);
  EXPECT_THROW(dag_of(3, {{0, 1}, {1, 2}, {2, 0}}), InputError);
  EXPECT_THROW(dag_of(2, {{0, 5}}), InputError);
}

TEST(Dag, ParentsChildrenAndClosure) {
  const Dag d = dag_of(4, {{2, 1}, {0, 1}, {1, 3}});
  EXPECT_EQ(d.parents(1), (std::vector<int>{0, 2}));
  EXPECT_EQ(d.children(1), (std::vector<int>{3}));
  EXPECT_TRUE(d.has_path(0, 3));
  EXPECT_FALSE(d.has_path(3, 0));
  const int seeds[] = {1};
  EXPECT_EQ(d.ancestral_closure(seeds), (std::vector<int>{0, 1, 2}));
  const auto order = d.topological_order();
  for (const Edge& e : d.edges()) {
    EXPECT_LT(std::find(order.begin(), order.end(), e.from), std::find(order.begin(), order.end(), e.to));
  }
}

TEST(Operators, EmptyTwoNodeDagHasTwoInserts) {
  const auto ops = valid_operators(Dag(2));
  ASSERT_EQ(ops.size(), 2u);
  EXPECT_EQ(ops[0].kind, OperatorKind::kInsert);
}

TEST(Operators, CompleteThreeNodeDagHasFiveMoves) {
  const Dag d = dag_of(3, {{0, 1}, {0, 2}, {1, 2}});
  // three deletions, reversal of 0->1 and 1->2 (reversing 0->2 closes a cycle)
  EXPECT_EQ(count_valid_operators(d), 5u);
  EXPECT_FALSE(is_valid_operator(d, {OperatorKind::kReverse, 0, 2}));
  EXPECT_THROW(apply_operator(d, {OperatorKind::kReverse, 0, 2}), std::logic_error);
}

TEST(Operators, CountsMatchBruteForceOnAllFourNodeDags) {
  for (const auto& edges : oracle::brute_force_dags(4)) {
    const Dag d = Dag::from_edges(4, edges);
    const auto ops = valid_operators(d);
    ASSERT_EQ(ops.size(), oracle::brute_force_operator_count(edges, 4));
    EXPECT_EQ(ops.size(), count_valid_operators(d));
    EXPECT_TRUE(std::is_sorted(ops.begin(), ops.end()));
    for (const auto& op : ops) EXPECT_TRUE(is_acyclic(apply_operator(d, op).edges(), 4));
  }
}

TEST(Operators, AffectedNodes) {
  EXPECT_EQ(affected_nodes({OperatorKind::kInsert, 2, 0}), (std::vector<int>{0}));
  EXPECT_EQ(affected_nodes({OperatorKind::kReverse, 2, 0}), (std::vector<int>{0, 2}));
}

TEST(Cpdag, ChainIsUndirectedColliderIsCompelled) {
  const Cpdag chain = to_cpdag(dag_of(3, {{0, 1}, {1, 2}}));
  EXPECT_TRUE(chain.directed.empty());
  EXPECT_EQ(chain.undirected.size(), 2u);
  const Cpdag collider = to_cpdag(dag_of(3, {{0, 2}, {1, 2}}));
  EXPECT_EQ(collider.directed.size(), 2u);
  EXPECT_TRUE(collider.undirected.empty());
}

TEST(Cpdag, MeekRuleOnePropagatesOrientation) {
  // 0 -> 2 <- 1, 2 -> 3: the collider forces 2 -> 3.
  const Cpdag g = to_cpdag(dag_of(4, {{0, 2}, {1, 2}, {2, 3}}));
  EXPECT_EQ(g.directed, (std::vector<Edge>{{0, 2}, {1, 2}, {2, 3}}));
}

TEST(Cpdag, MarkovEquivalentDagsShareCpdag) {
  // Group all q=4 DAGs by skeleton + v-structures; each group must share one CPDAG,
  // and different groups must differ.
  std::map<std::pair<std::vector<Edge>, std::vector<VStructure>>, Cpdag> seen;
  std::set<std::vector<Edge>> distinct;
  for (const auto& edges : oracle::brute_force_dags(4)) {
    const Dag d = Dag::from_edges(4, edges);
    std::vector<Edge> skel;
    for (const Edge& e : edges) skel.push_back({std::min(e.from, e.to), std::max(e.from, e.to)});
    std::sort(skel.begin(), skel.end());
    const auto key = std::make_pair(skel, v_structures(d));
    const Cpdag c = to_cpdag(d);
    auto [it, inserted] = seen.emplace(key, c);
    if (!inserted) EXPECT_EQ(it->second, c);
  }
  std::set<std::pair<std::vector<Edge>, std::vector<Edge>>> cpdags;
  for (const auto& [key, c] : seen) cpdags.insert({c.directed, c.undirected});
  EXPECT_EQ(cpdags.size(), seen.size());
  EXPECT_EQ(seen.size(), 185u);  // equivalence classes on four labeled nodes
}

TEST(EdgeListIo, RoundTripIsOneBased) {
  const Dag d = dag_of(3, {{0, 2}, {1, 2}});
  std::stringstream ss;
  const auto edges = d.edges();
  write_edge_list(ss, edges);
  EXPECT_EQ(ss.str(), "1 3\n2 3\n");
  std::istringstream in("# comment\n\n1 3\n2 3\n");
  EXPECT_EQ(read_edge_list(in, 3), edges);
  std::istringstream bad("1 4\n");
  EXPECT_THROW(read_edge_list(bad, 3), InputError);
}

TEST(EdgeListIo, CpdagRoundTrip) {
  const Cpdag c = to_cpdag(dag_of(4, {{0, 1}, {1, 2}, {3, 2}}));
  std::stringstream ss;
  write_cpdag(ss, c);
  EXPECT_EQ(read_cpdag(ss, 4), c);
}
