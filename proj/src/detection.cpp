#include "hypex/detection.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <thread>

#include "hypex/errors.hpp"

namespace hypex {

namespace {

void validate_signal(std::uint64_t dim, double amplitude) {
  if (dim < 1) throw ValidationError("signal dimension must be at least 1");
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw ValidationError("signal amplitude must be finite and nonnegative");
  }
}

std::uint64_t errors_in_chunk(const DetectionScenario& s, std::uint64_t chunk) {
  const std::uint64_t begin = chunk * kTrialsPerChunk;
  const std::uint64_t count = std::min(kTrialsPerChunk, s.trials - begin);
  std::mt19937_64 rng(derive_seed(s.seed, chunk));
  std::bernoulli_distribution coin(0.5);
  std::normal_distribution<double> noise;

  const double threshold = static_cast<double>(s.dim) * s.amplitude / 2.0;
  std::uint64_t errors = 0;
  for (std::uint64_t i = 0; i < count; ++i) {
    const bool signal_present = coin(rng);  // H1: s1 = (m, ..., m)
    const double offset = signal_present ? s.amplitude : 0.0;
    double statistic = 0.0;
    for (std::uint64_t k = 0; k < s.dim; ++k) statistic += offset + noise(rng);
    // Minimum distance to s1 versus s2 reduces to the midpoint test on sum r.
    const bool decide_signal = statistic > threshold;
    errors += decide_signal != signal_present;
  }
  return errors;
}

}  // namespace

double q_function(double x) {
  if (!std::isfinite(x)) throw ValidationError("Q-function argument must be finite");
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double q_chernoff_bound(double x) {
  if (!(x >= 0.0)) throw ValidationError("Chernoff tail bound is defined for x >= 0");
  return std::exp(-0.5 * x * x);
}

double analytic_error(std::uint64_t dim, double amplitude) {
  validate_signal(dim, amplitude);
  return q_function(std::sqrt(static_cast<double>(dim)) * amplitude / 2.0);
}

double chernoff_error_bound(std::uint64_t dim, double amplitude) {
  validate_signal(dim, amplitude);
  return std::exp(-amplitude * amplitude * static_cast<double>(dim) / 8.0);
}

void DetectionScenario::validate() const {
  validate_signal(dim, amplitude);
  if (trials < 1) throw ValidationError("trial count must be at least 1");
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t count_detection_errors(const DetectionScenario& s, unsigned workers) {
  s.validate();
  const std::uint64_t chunks = (s.trials + kTrialsPerChunk - 1) / kTrialsPerChunk;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, chunks));

  std::vector<std::uint64_t> per_chunk(chunks, 0);
  if (workers <= 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) per_chunk[c] = errors_in_chunk(s, c);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::uint64_t c = next++; c < chunks; c = next++) per_chunk[c] = errors_in_chunk(s, c);
      });
    }
  }
  return std::accumulate(per_chunk.begin(), per_chunk.end(), std::uint64_t{0});
}

double simulate_detection(const DetectionScenario& s, unsigned workers) {
  return static_cast<double>(count_detection_errors(s, workers)) / static_cast<double>(s.trials);
}

std::vector<SweepRow> sweep(const std::vector<std::uint64_t>& dims,
                            const std::vector<double>& amplitudes, std::uint64_t trials,
                            std::uint64_t seed, unsigned workers) {
  if (dims.empty() || amplitudes.empty()) {
    throw ValidationError("sweep needs at least one dimension and one amplitude");
  }
  std::vector<SweepRow> rows;
  rows.reserve(dims.size() * amplitudes.size());
  std::uint64_t row_index = 0;
  for (std::uint64_t dim : dims) {
    for (double m : amplitudes) {
      const DetectionScenario s{dim, m, trials, derive_seed(seed, row_index++)};
      rows.push_back({dim, m, analytic_error(dim, m), chernoff_error_bound(dim, m),
                      simulate_detection(s, workers), trials});
    }
  }
  return rows;
}

}  // namespace hypex
