#include <gtest/gtest.h>

#include <sstream>

#include "catdag/errors.hpp"
#include "catdag/scenario.hpp"

using namespace catdag;

namespace {

ScenarioConfig small_config() {
  ScenarioConfig c;
  c.q = 5;
  c.n = 150;
  c.replicates = 3;
  c.seed = 4;
  c.iterations = 600;
  c.burn_in = 100;
  c.truth_mc_draws = 20000;
  c.threads = 2;
  return c;
}

}  // namespace

TEST(Scenario, Defaults) {
  ScenarioConfig c;
  c.q = 10;
  EXPECT_DOUBLE_EQ(c.effective_edge_prob(), 0.2);
  EXPECT_EQ(c.effective_iterations(), 5000u);
  EXPECT_EQ(c.effective_burn_in(), 1000u);
  c.q = 20;
  EXPECT_EQ(c.effective_iterations(), 10000u);
  EXPECT_EQ(c.effective_burn_in(), 2000u);
}

TEST(Scenario, Validation) {
  ScenarioConfig c = small_config();
  c.replicates = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = small_config();
  c.edge_prob = 1.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = small_config();
  c.burn_in = 600;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Scenario, ReplicatesAreDeterministicAndThreadIndependent) {
  ScenarioConfig c = small_config();
  const auto a = run_scenario(c);
  c.threads = 1;
  const auto b = run_scenario(c);
  ASSERT_EQ(a.size(), 3u);
  std::ostringstream sa, sb;
  write_replicates_csv(sa, a);
  write_replicates_csv(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
  for (std::size_t r = 0; r < a.size(); ++r) {
    EXPECT_EQ(a[r].replicate, r);
    EXPECT_EQ(a[r].seed, 4u + r);
    EXPECT_EQ(a[r].abs_error.size(), 4u);
    EXPECT_GE(a[r].sen, 0.0);
    EXPECT_LE(a[r].spe, 1.0);
  }
}

TEST(Scenario, SampleSizesShareGroundTruth) {
  ScenarioConfig c = small_config();
  c.replicates = 1;
  const auto small = run_replicate(c, 0);
  c.n = 300;
  const auto large = run_replicate(c, 0);
  EXPECT_EQ(small.truth, large.truth);
  EXPECT_EQ(small.true_effect, large.true_effect);
}

TEST(Scenario, AggregateLayout) {
  const auto results = run_scenario(small_config());
  const auto s = aggregate(results);
  EXPECT_EQ(s.replicates, 3u);
  double shd = 0.0;
  for (const auto& r : results) shd += r.shd;
  EXPECT_NEAR(s.shd, shd / 3.0, 1e-12);
  std::ostringstream out;
  write_summary_csv(out, {s});
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "q,n,G,SHD,SEN,SPE,AE,SHD_sd,SEN_sd,SPE_sd,AE_sd,SEN_cpdag,SPE_cpdag");
  EXPECT_THROW(aggregate({}), InputError);
}
