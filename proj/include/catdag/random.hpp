#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace catdag {

using Rng = std::mt19937_64;

/// Uniform draw on the open interval (0, 1) with 53 random bits.
double uniform_open01(Rng& rng);

double standard_normal(Rng& rng);

/// Natural log of a Gamma(shape, 1) variate, computed without underflow for
/// very small shapes (Marsaglia-Tsang with the shape+1 boost).
double log_gamma_variate(double shape, Rng& rng);

/// Dirichlet(alpha) draw normalized in log space; entries sum to 1.
std::vector<double> dirichlet_draw(std::span<const double> alpha, Rng& rng);

/// SplitMix64 finalizer; used to derive independent sub-seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace catdag
