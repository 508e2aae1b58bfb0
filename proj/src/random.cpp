#include "catdag/random.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace catdag {

double uniform_open01(Rng& rng) {
  for (;;) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    if (u > 0.0) return u;
  }
}

double standard_normal(Rng& rng) {
  // Marsaglia polar method; the second variate is discarded so each call
  // consumes a self-contained slice of the stream.
  for (;;) {
    const double x = 2.0 * uniform_open01(rng) - 1.0;
    const double y = 2.0 * uniform_open01(rng) - 1.0;
    const double s = x * x + y * y;
    if (s > 0.0 && s < 1.0) return x * std::sqrt(-2.0 * std::log(s) / s);
  }
}

double log_gamma_variate(double shape, Rng& rng) {
  if (!(shape > 0.0)) throw std::invalid_argument("log_gamma_variate: shape must be positive");
  double boost = 0.0;
  if (shape < 1.0) {
    // G(shape) = G(shape + 1) * U^(1/shape)
    boost = std::log(uniform_open01(rng)) / shape;
    shape += 1.0;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = standard_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open01(rng);
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return std::log(d * v) + boost;
  }
}

std::vector<double> dirichlet_draw(std::span<const double> alpha, Rng& rng) {
  std::vector<double> out(alpha.size());
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < alpha.size(); ++m) {
    out[m] = log_gamma_variate(alpha[m], rng);
    max_log = std::max(max_log, out[m]);
  }
  double sum = 0.0;
  for (double& x : out) {
    x = std::exp(x - max_log);
    sum += x;
  }
  for (double& x : out) x /= sum;
  return out;
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace catdag
