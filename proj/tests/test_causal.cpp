#include <gtest/gtest.h>

#include <cmath>
#include <algorithm>
#include <numeric>

#include "catdag/causal.hpp"
#include "catdag/errors.hpp"
#include "support/oracles.hpp"

using namespace catdag;

namespace {

Theta hand_theta(const Dag& dag, const std::vector<int>& cards, const std::vector<std::vector<std::vector<double>>>& cpts) {
  Theta t(cards, 1.0, 99);
  for (int j = 0; j < dag.num_nodes(); ++j) {
    std::vector<ThetaRow> rows;
    const auto& cpt = cpts[static_cast<std::size_t>(j)];
    for (std::size_t k = 0; k < cpt.size(); ++k) rows.push_back({k, cpt[k]});
    t.set_node(j, dag.parents(j), rows);
  }
  return t;
}

Dag dag_of(int q, std::vector<Edge> e) { return Dag::from_edges(q, e); }

std::vector<int> all_nodes(int q) {
  std::vector<int> v(static_cast<std::size_t>(q));
  std::iota(v.begin(), v.end(), 0);
  return v;
}

Dag random_dag_on(int q, Rng& rng) {
  std::vector<int> perm = all_nodes(q);
  for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[static_cast<std::size_t>(uniform_open01(rng) * i)]);
  std::vector<Edge> e;
  for (int i = 0; i < q; ++i) {
    for (int j = i + 1; j < q; ++j) {
      if (uniform_open01(rng) < 0.5) e.push_back({perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]});
    }
  }
  return Dag::from_edges(q, e);
}

}  // namespace

TEST(Interventional, ChainChildFollowsConditional) {
  const Dag d = dag_of(2, {{0, 1}});
  const Theta t = hand_theta(d, {2, 2}, {{{0.3, 0.7}}, {{0.9, 0.1}, {0.2, 0.8}}});
  const JointTable table(t, d, all_nodes(2), JointTable::Intervention{0, 1});
  const auto p = table.probabilities();
  EXPECT_DOUBLE_EQ(p[0], 0.0);
  EXPECT_DOUBLE_EQ(p[2], 0.0);
  EXPECT_NEAR(p[1], 0.2, 1e-15);
  EXPECT_NEAR(p[3], 0.8, 1e-15);
}

TEST(Interventional, ChildlessTreatmentLeavesOtherMarginals) {
  const Dag d = dag_of(3, {{0, 1}, {0, 2}});
  Rng rng(3);
  const Theta t = oracle::random_full_theta(d, {2, 3, 2}, rng);
  const JointTable obs(t, d, all_nodes(3));
  const JointTable intv(t, d, all_nodes(3), JointTable::Intervention{2, 1});
  std::vector<double> m_obs(6, 0.0), m_int(6, 0.0);
  for (std::uint64_t c = 0; c < 12; ++c) {
    const auto x = obs.decode(c);
    m_obs[static_cast<std::size_t>(x[0] + 2 * x[1])] += obs.probabilities()[c];
    m_int[static_cast<std::size_t>(x[0] + 2 * x[1])] += intv.probabilities()[c];
  }
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(m_obs[i], m_int[i], 1e-15);
}

TEST(Interventional, ColliderMatchesEnumeration) {
  const Dag d = dag_of(3, {{0, 2}, {1, 2}});
  const Theta t = hand_theta(d, {2, 2, 2},
                             {{{0.4, 0.6}}, {{0.25, 0.75}}, {{0.9, 0.1}, {0.5, 0.5}, {0.3, 0.7}, {0.05, 0.95}}});
  for (int v = 0; v < 3; ++v) {
    for (int level = 0; level < 2; ++level) {
      const auto dist = interventional_distribution(t, d, v, level);
      const auto& table = std::get<JointTable>(dist);
      const auto ref = oracle::brute_force_interventional(t, d, v, level);
      ASSERT_EQ(table.probabilities().size(), ref.size());
      for (std::size_t c = 0; c < ref.size(); ++c) EXPECT_NEAR(table.probabilities()[c], ref[c], 1e-15);
      EXPECT_NEAR(table.total(), 1.0, 1e-12);
    }
  }
}

TEST(Interventional, FallsBackToSamplerBeyondLimit) {
  const Dag d = dag_of(3, {{0, 1}, {1, 2}});
  Rng rng(5);
  const Theta t = oracle::random_full_theta(d, {2, 2, 2}, rng);
  CausalOptions o;
  o.max_exact_cells = 4;
  const auto dist = interventional_distribution(t, d, 1, 1, o);
  ASSERT_TRUE(std::holds_alternative<AncestralSampler>(dist));
  const auto& sampler = std::get<AncestralSampler>(dist);
  const auto ref = oracle::brute_force_interventional(t, d, 1, 1);
  std::vector<double> freq(8, 0.0);
  Rng srng(6);
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto x = sampler.sample(srng);
    ASSERT_EQ(x[1], 1);
    freq[static_cast<std::size_t>(x[0] + 2 * x[1] + 4 * x[2])] += 1.0 / n;
  }
  for (std::size_t c = 0; c < 8; ++c) EXPECT_NEAR(freq[c], ref[c], 4.0 * std::sqrt(ref[c] * (1 - ref[c]) / n) + 1e-12);
  EXPECT_THROW(interventional_distribution(t, d, 1, 2), QueryError);
}

TEST(Gamma, NoParentsIsConditionalDifference) {
  const Dag d = dag_of(2, {{1, 0}});
  const Theta t = hand_theta(d, {2, 2}, {{{0.7, 0.3}, {0.2, 0.8}}, {{0.5, 0.5}}});
  const auto g = gamma_v(t, d, {0, 1, 1, 0, 1});
  EXPECT_NEAR(g.value, 0.8 - 0.3, 1e-15);
  EXPECT_TRUE(g.exact);
}

TEST(Gamma, DisconnectedIsZero) {
  const Dag d = dag_of(4, {{0, 1}, {2, 3}});
  Rng rng(2);
  const Theta t = oracle::random_full_theta(d, {2, 2, 2, 2}, rng);
  EXPECT_NEAR(gamma_v(t, d, {3, 1, 1, 0, 1}).value, 0.0, 1e-15);
}

TEST(Gamma, ConfoundedTriangleMatchesTruncatedFactorization) {
  const Dag d = dag_of(3, {{0, 1}, {0, 2}, {1, 2}});
  const Theta t = hand_theta(d, {2, 2, 2},
                             {{{0.35, 0.65}},
                              {{0.8, 0.2}, {0.3, 0.7}},
                              {{0.9, 0.1}, {0.6, 0.4}, {0.45, 0.55}, {0.15, 0.85}}});
  const CausalQuery q{2, 1, 1, 0, 1};
  EXPECT_NEAR(gamma_v(t, d, q).value, oracle::brute_force_effect(t, d, q), 1e-15);
  // Adjusting on the parent removes the confounded association.
  const double naive = (0.65 * 0.7 * 0.85 + 0.35 * 0.2 * 0.4) / (0.65 * 0.7 + 0.35 * 0.2) -
                       (0.65 * 0.3 * 0.55 + 0.35 * 0.8 * 0.1) / (0.65 * 0.3 + 0.35 * 0.8);
  EXPECT_GT(std::abs(naive - gamma_v(t, d, q).value), 1e-3);
}

TEST(Gamma, ResponseParentOfTreatmentShortCircuits) {
  const Dag d = dag_of(2, {{0, 1}});
  Rng rng(1);
  const Theta t = oracle::random_full_theta(d, {2, 2}, rng);
  const auto g = gamma_v(t, d, {0, 1, 1, 0, 1});
  EXPECT_EQ(g.value, 0.0);
  EXPECT_TRUE(g.response_is_parent);
}

TEST(Gamma, InvalidQueries) {
  const Dag d = dag_of(2, {{0, 1}});
  Rng rng(1);
  const Theta t = oracle::random_full_theta(d, {2, 2}, rng);
  EXPECT_THROW(gamma_v(t, d, {1, 1, 1, 0, 1}), QueryError);
  EXPECT_THROW(gamma_v(t, d, {1, 0, 2, 0, 1}), QueryError);
  EXPECT_THROW(gamma_v(t, d, {1, 0, 1, 0, 5}), QueryError);
  EXPECT_THROW(gamma_v(t, d, {1, 7, 1, 0, 1}), QueryError);
}

TEST(Gamma, RandomInstancesMatchBruteForce) {
  Rng rng(31);
  for (int rep = 0; rep < 40; ++rep) {
    const int q = 3 + rep % 3;
    std::vector<int> cards(static_cast<std::size_t>(q));
    for (auto& c : cards) c = 2 + static_cast<int>(uniform_open01(rng) * 2);
    const Dag d = random_dag_on(q, rng);
    const Theta t = oracle::random_full_theta(d, cards, rng);
    for (int v = 0; v < q; ++v) {
      for (int y = 0; y < q; ++y) {
        if (y == v) continue;
        const CausalQuery query{y, v, cards[static_cast<std::size_t>(v)] - 1, 0, cards[static_cast<std::size_t>(y)] - 1};
        const auto g = gamma_v(t, d, query);
        const double ref = g.response_is_parent ? 0.0 : oracle::brute_force_effect(t, d, query);
        ASSERT_NEAR(g.value, ref, 1e-12) << "rep " << rep << " v " << v << " y " << y;
        ASSERT_LE(std::abs(g.value), 1.0);
      }
    }
  }
}

TEST(Gamma, ZeroProbabilityStratumUsesTruncatedProduct) {
  // X1 = 1 never occurs when X0 = 0, so Pr(X1 = 1, X0 = 0) = 0.
  const Dag d = dag_of(3, {{0, 1}, {0, 2}, {1, 2}});
  const Theta t = hand_theta(d, {2, 2, 2},
                             {{{0.5, 0.5}}, {{1.0, 0.0}, {0.4, 0.6}}, {{0.9, 0.1}, {0.6, 0.4}, {0.3, 0.7}, {0.2, 0.8}}});
  const CausalQuery q{2, 1, 1, 0, 1};
  EXPECT_NEAR(gamma_v(t, d, q).value, oracle::brute_force_effect(t, d, q), 1e-15);
}

TEST(Gamma, MonteCarloFallbackWithinError) {
  Rng rng(8);
  const Dag d = dag_of(4, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {1, 3}});
  const Theta t = oracle::random_full_theta(d, {2, 3, 2, 2}, rng);
  const CausalQuery q{3, 1, 2, 0, 1};
  CausalOptions o;
  o.max_exact_cells = 8;
  o.mc_draws = 200000;
  const auto mc = gamma_v(t, d, q, o);
  EXPECT_FALSE(mc.exact);
  EXPECT_GT(mc.std_error, 0.0);
  EXPECT_NEAR(mc.value, gamma_v(t, d, q).value, 3.0 * mc.std_error);
}

TEST(Gamma, RelabelingInvariance) {
  Rng rng(12);
  const Dag d = dag_of(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  const std::vector<int> cards{2, 3, 2, 2};
  const Theta t = oracle::random_full_theta(d, cards, rng);
  const std::vector<int> perm{2, 0, 3, 1};  // old -> new
  std::vector<Edge> pe;
  for (const Edge& e : d.edges()) pe.push_back({perm[static_cast<std::size_t>(e.from)], perm[static_cast<std::size_t>(e.to)]});
  const Dag pd = Dag::from_edges(4, pe);
  std::vector<int> pcards(4);
  for (int j = 0; j < 4; ++j) pcards[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])] = cards[static_cast<std::size_t>(j)];
  // Rebuild theta in the new labels by evaluating the old CPTs on decoded configs.
  Theta pt(pcards, 1.0, 0);
  for (int j = 0; j < 4; ++j) {
    const int nj = perm[static_cast<std::size_t>(j)];
    const ConfigCoder new_coder(pd.parents(nj), pcards);
    const ConfigCoder old_coder(d.parents(j), cards);
    std::vector<ThetaRow> rows;
    for (std::uint64_t k = 0; k < new_coder.size(); ++k) {
      const auto digits = new_coder.decode(k);
      std::vector<int> old_digits;
      for (int u : d.parents(j)) {
        const auto& np = pd.parents(nj);
        const auto pos = std::find(np.begin(), np.end(), perm[static_cast<std::size_t>(u)]) - np.begin();
        old_digits.push_back(digits[static_cast<std::size_t>(pos)]);
      }
      rows.push_back({k, t.conditional(j, old_coder.encode(old_digits))});
    }
    pt.set_node(nj, pd.parents(nj), rows);
  }
  const CausalQuery q{3, 1, 2, 0, 1};
  const CausalQuery pq{perm[3], perm[1], 2, 0, 1};
  EXPECT_NEAR(gamma_v(t, d, q).value, gamma_v(pt, pd, pq).value, 1e-14);
}

TEST(Gamma, ManyAgreesWithSingle) {
  Rng rng(4);
  const Dag d = dag_of(4, {{0, 1}, {1, 2}, {0, 3}});
  const Theta t = oracle::random_full_theta(d, {2, 2, 2, 2}, rng);
  const std::vector<CausalQuery> qs{{2, 1, 1, 0, 1}, {2, 0, 1, 0, 0}, {0, 3, 1, 0, 1}, {3, 0, 0, 1, 1}};
  const auto many = gamma_many(t, d, qs);
  for (std::size_t i = 0; i < qs.size(); ++i) EXPECT_NEAR(many[i].value, gamma_v(t, d, qs[i]).value, 1e-15);
}

TEST(EffectBattery, ArityAndAntisymmetry) {
  Rng rng(6);
  const Dag d = dag_of(3, {{0, 1}, {1, 2}});
  const Theta t = oracle::random_full_theta(d, {3, 3, 2}, rng);
  EXPECT_EQ(effect_battery(t, d, 0, 1, 0, 1).size(), 2u);
  const auto three = effect_battery(t, d, 1, 2, 0, 1);
  ASSERT_EQ(three.size(), 2u);
  EXPECT_EQ(three[0].level, 1);
  EXPECT_NEAR(three[0].value, gamma_v(t, d, {2, 1, 1, 0, 1}).value, 1e-15);
  EXPECT_NEAR(gamma_v(t, d, {2, 1, 2, 0, 1}).value, -gamma_v(t, d, {2, 1, 0, 2, 1}).value, 1e-15);
  const Dag bd = dag_of(2, {{0, 1}});
  const Theta bt = oracle::random_full_theta(bd, {2, 2}, rng);
  const auto single = effect_battery(bt, bd, 0, 1, 0, 1);
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(single[0].value, gamma_v(bt, bd, {1, 0, 1, 0, 1}).value);
}

TEST(Bma, IdenticalDrawsHaveZeroSpread) {
  const Dag d = dag_of(2, {{1, 0}});
  Rng rng(1);
  const Theta t = oracle::random_full_theta(d, {2, 2}, rng);
  Trace trace;
  for (int i = 0; i < 10; ++i) trace.draws.push_back({static_cast<std::size_t>(i), d, t});
  const CausalQuery q{0, 1, 1, 0, 1};
  const auto est = bma_estimate(trace, q);
  EXPECT_EQ(est.sd, 0.0);
  EXPECT_NEAR(est.mean, gamma_v(t, d, q).value, 1e-15);
  EXPECT_EQ(est.draws_used, 10u);
}

TEST(Bma, ErrorsOnEmptyOrParameterlessTraces) {
  Trace empty;
  EXPECT_THROW(bma_estimate(empty, {}), InputError);
  Trace bare;
  bare.draws.push_back({1, Dag(2), std::nullopt});
  EXPECT_THROW(bma_estimate(bare, {0, 1, 1, 0, 1}), InputError);
}

TEST(Bma, QuantilesBracketMeanOnPosteriorTrace) {
  Rng rng(15);
  std::vector<std::vector<int>> rows;
  for (int i = 0; i < 60; ++i) {
    const int a = uniform_open01(rng) < 0.5;
    const int b = uniform_open01(rng) < (a ? 0.8 : 0.3);
    const int c = uniform_open01(rng) < (b ? 0.7 : 0.2);
    rows.push_back({a, b, c});
  }
  const Dataset ds = Dataset::from_rows(std::vector<int>{2, 2, 2}, rows);
  McmcConfig c;
  c.iterations = 1500;
  c.burn_in = 300;
  const Trace trace = run_chain(ds, c);
  const auto est = bma_estimate(trace, {2, 1, 1, 0, 1});
  ASSERT_EQ(est.quantiles.size(), 2u);
  EXPECT_LE(est.quantiles[0].second, est.mean);
  EXPECT_LE(est.mean, est.quantiles[1].second);
  EXPECT_LE(std::abs(est.mean), 1.0);
}

TEST(Summaries, TypeSevenQuantiles) {
  const std::vector<double> v{5, 1, 3, 2, 4};
  const std::vector<double> p{0.95, 0.05, 0.5};
  const auto est = summarize_draws(v, p);
  ASSERT_EQ(est.quantiles.size(), 3u);
  EXPECT_DOUBLE_EQ(est.quantiles[0].second, 1.2);
  EXPECT_DOUBLE_EQ(est.quantiles[1].second, 3.0);
  EXPECT_DOUBLE_EQ(est.quantiles[2].second, 4.8);
  EXPECT_DOUBLE_EQ(est.mean, 3.0);
  EXPECT_DOUBLE_EQ(est.sd, std::sqrt(2.5));
}
