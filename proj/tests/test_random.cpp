#include <gtest/gtest.h>

#include <cmath>

#include "catdag/random.hpp"

using namespace catdag;

TEST(Random, UniformInOpenInterval) {
  Rng rng(1);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = uniform_open01(rng);
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000.0, 0.5, 3.0 * std::sqrt(1.0 / 12.0 / 100000.0));
}

TEST(Random, NormalMoments) {
  Rng rng(2);
  const int n = 200000;
  double s = 0.0;
  double s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = standard_normal(rng);
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 3.0 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 1.0, 3.0 * std::sqrt(2.0 / n));
}

TEST(Random, GammaMeanIncludingSmallShapes) {
  for (double shape : {0.05, 0.5, 1.0, 3.7}) {
    Rng rng(3);
    const int n = 100000;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::exp(log_gamma_variate(shape, rng));
    EXPECT_NEAR(s / n, shape, 3.5 * std::sqrt(shape / n)) << shape;
  }
  Rng rng(4);
  EXPECT_THROW(log_gamma_variate(0.0, rng), std::invalid_argument);
}

TEST(Random, TinyShapeDirichletStaysNormalized) {
  Rng rng(5);
  const std::vector<double> alpha{1e-4, 1e-4, 1e-4};
  for (int i = 0; i < 1000; ++i) {
    const auto p = dirichlet_draw(alpha, rng);
    double s = 0.0;
    for (double x : p) {
      ASSERT_GE(x, 0.0);
      s += x;
    }
    ASSERT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(Random, StreamsAreReproducible) {
  Rng a(42), b(42), c(43);
  const std::vector<double> alpha{1.0, 2.0};
  EXPECT_EQ(dirichlet_draw(alpha, a), dirichlet_draw(alpha, b));
  EXPECT_NE(dirichlet_draw(alpha, a), dirichlet_draw(alpha, c));
  EXPECT_NE(mix_seed(1, 2), mix_seed(2, 1));
}
