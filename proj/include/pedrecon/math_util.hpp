#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace pedrecon {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Numerically stable 1/(1+exp(-z)).
inline double logistic(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
inline double log1pexp(double z) {
  if (z > 35.0) return z;
  if (z < -35.0) return std::exp(z);
  return std::log1p(std::exp(z));
}

inline double sqr(double x) { return x * x; }

// log N(y | mean, sd^2); -inf off-support for sd == 0 (point mass).
inline double normal_logpdf(double y, double mean, double sd) {
  if (sd <= 0.0) return y == mean ? 0.0 : kNegInf;
  const double z = (y - mean) / sd;
  return -0.5 * z * z - std::log(sd) - 0.91893853320467274178;  // ln(sqrt(2*pi))
}

// log density at y > 0 of exp(N(log_mean, var)).
inline double lognormal_logpdf(double y, double log_mean, double var) {
  if (y <= 0.0 || var <= 0.0) return kNegInf;
  const double ly = std::log(y);
  return -ly - 0.5 * std::log(2.0 * M_PI * var) - sqr(ly - log_mean) / (2.0 * var);
}

// Fixed 64-bit mix; used to derive independent per-chain / per-case streams
// from one master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(master ^ (stream + 1) * 0x9E3779B97F4A7C15ULL);
}

inline std::mt19937_64 seeded_rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xFFFFFFFFu),
                    static_cast<std::uint32_t>(seed >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace pedrecon
