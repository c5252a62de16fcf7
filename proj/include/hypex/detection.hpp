#pragma once

#include <cstdint>
#include <vector>

namespace hypex {

// Standard normal tail P(Z > x) = erfc(x / sqrt 2) / 2.
double q_function(double x);

// exp(-x^2 / 2), an upper bound on q_function(x) for x >= 0.
double q_chernoff_bound(double x);

// Error probability of the midpoint detector for s1 = (m, ..., m) versus
// s2 = 0 in unit white Gaussian noise of dimension dim: Q(sqrt(dim) m / 2).
double analytic_error(std::uint64_t dim, double amplitude);

// exp(-m^2 dim / 8).
double chernoff_error_bound(std::uint64_t dim, double amplitude);

struct DetectionScenario {
  std::uint64_t dim = 1;
  double amplitude = 0.0;
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

// Trials run in fixed-size chunks, each with a generator seeded by
// derive_seed(seed, chunk_index); the count does not depend on the number of
// worker threads.
inline constexpr std::uint64_t kTrialsPerChunk = 1 << 16;

// splitmix64 finalizer applied to seed + (index + 1) * golden ratio.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// Number of misclassified trials out of s.trials.
std::uint64_t count_detection_errors(const DetectionScenario& s, unsigned workers = 0);

// count_detection_errors / trials.
double simulate_detection(const DetectionScenario& s, unsigned workers = 0);

struct SweepRow {
  std::uint64_t dim;
  double amplitude;
  double analytic_pe;
  double chernoff_bound;
  double empirical_pe;
  std::uint64_t trials;
};

// One row per (dim, amplitude), dims outer. Row r simulates with seed
// derive_seed(seed, r).
std::vector<SweepRow> sweep(const std::vector<std::uint64_t>& dims,
                            const std::vector<double>& amplitudes, std::uint64_t trials,
                            std::uint64_t seed, unsigned workers = 0);

}  // namespace hypex
