#include "hypex/boltzmann.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "hypex/combinatorics.hpp"

namespace hypex {

namespace {

// Unnormalized Boltzmann weights measured from the ground level, so the
// largest weight is exactly 1.
VectorX<double> shifted_weights(const VectorX<double>& levels, double beta) {
  const double ground = levels.minCoeff();
  return (-beta * (levels.array() - ground)).exp().matrix();
}

// Mean energy above the ground level.
double shifted_mean(const VectorX<double>& shifted_levels, double beta) {
  const VectorX<double> w = (-beta * shifted_levels.array()).exp().matrix();
  return shifted_levels.dot(w) / w.sum();
}

// (1 + x) ln(1 + x) - x for x >= -1, with a series near 0.
long double relative_entropy_kernel(long double x) {
  if (std::abs(x) < 0.05L) {
    long double term = x * x;
    long double sum = 0.0L;
    for (int n = 2; n < 40; ++n) {
      sum += term / static_cast<long double>(n * (n - 1));
      term *= -x;
    }
    return sum;
  }
  const long double one_plus = 1.0L + x;
  if (one_plus <= 0.0L) return 1.0L;
  return one_plus * std::log1p(x) - x;
}

void validate_levels(const VectorX<double>& levels) {
  if (levels.size() < 2) throw ValidationError("an energy system needs at least two levels");
  if (!levels.allFinite()) throw ValidationError("energy levels must be finite");
}

}  // namespace

EnergySystem::EnergySystem(VectorX<double> levels, double beta)
    : levels_(std::move(levels)), beta_(beta) {
  validate_levels(levels_);
  if (!std::isfinite(beta_)) throw ValidationError("beta must be finite");
  if (beta_ < 0.0) throw ValidationError("negative beta (population inversion) is not supported");
}

double partition_function(const EnergySystem& sys) {
  const double ground = sys.levels().minCoeff();
  return std::exp(-sys.beta() * ground) * shifted_weights(sys.levels(), sys.beta()).sum();
}

double log_partition_function(const EnergySystem& sys) {
  const double ground = sys.levels().minCoeff();
  return -sys.beta() * ground + std::log(shifted_weights(sys.levels(), sys.beta()).sum());
}

Distribution boltzmann_distribution(const EnergySystem& sys) {
  VectorX<double> w = shifted_weights(sys.levels(), sys.beta());
  w /= w.sum();
  return Distribution(std::move(w));
}

double mean_energy(const EnergySystem& sys) {
  return sys.levels().dot(boltzmann_distribution(sys).probs());
}

double entropy_nats(const Distribution& p) {
  double h = 0.0;
  for (Index a = 0; a < p.size(); ++a) {
    if (p[a] > 0.0) h -= p[a] * std::log(p[a]);
  }
  return h;
}

double solve_beta(const VectorX<double>& levels, double target_mean, double tol) {
  validate_levels(levels);
  if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
  if (!std::isfinite(target_mean)) throw ValidationError("target mean energy must be finite");

  const double ground = levels.minCoeff();
  const VectorX<double> shifted = (levels.array() - ground).matrix();
  const double target = target_mean - ground;
  const double uniform_mean = shifted.mean();
  if (!(target > 0.0) || target > uniform_mean + tol) {
    throw InfeasibleError(
        "target mean energy must lie in (min level, mean level] for beta >= 0");
  }
  if (target >= uniform_mean - tol) return 0.0;

  // Mean energy falls strictly with beta, so grow an upper bracket and bisect
  // to full double resolution.
  int iterations = 0;
  double lo = 0.0;
  double hi = 1.0;
  while (shifted_mean(shifted, hi) > target) {
    lo = hi;
    hi *= 2.0;
    if (++iterations >= 200 || !std::isfinite(hi)) {
      throw NumericalError("could not bracket beta for the target mean energy");
    }
  }
  while (iterations++ < 200) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (shifted_mean(shifted, mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double err_lo = std::abs(shifted_mean(shifted, lo) - target);
  const double err_hi = std::abs(shifted_mean(shifted, hi) - target);
  const double beta = err_lo <= err_hi ? lo : hi;
  if (std::min(err_lo, err_hi) > tol) {
    throw NumericalError("beta bisection did not reach the requested tolerance");
  }
  return beta;
}

double log_multiplicity_exact(const Occupancy& occupancy) {
  return log_multinomial<double>(occupancy.span());
}

double log_multiplicity_stirling(const Occupancy& occupancy) {
  auto x_log_x = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };
  double acc = x_log_x(static_cast<double>(occupancy.n()));
  for (std::uint64_t c : occupancy.span()) acc -= x_log_x(static_cast<double>(c));
  return acc;
}

MaxEntReport maxent_verify(const EnergySystem& sys, std::uint64_t trials, std::uint64_t seed) {
  if (trials < 1) throw ValidationError("maxent verification needs at least one trial");
  const Index k = sys.size();
  const Distribution boltzmann = boltzmann_distribution(sys);
  const VectorX<double>& p = boltzmann.probs();

  // Feasible directions d satisfy sum d = 0 and sum eps d = 0.
  Eigen::MatrixXd constraints(2, k);
  constraints.row(0).setOnes();
  constraints.row(1) = (sys.levels().array() - sys.levels().mean()).matrix().transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(constraints, Eigen::ComputeFullV);
  svd.setThreshold(1e-12);
  const Index rank = svd.rank();
  const Index free_dims = k - rank;

  MaxEntReport report{false, true, -std::numeric_limits<double>::infinity(), 0, 0.0};
  if (free_dims == 0) return report;
  report.applicable = true;

  const Eigen::MatrixXd basis = svd.matrixV().rightCols(free_dims);
  const double mean_b = sys.levels().dot(p);

  // Projector onto the constraint null space in extended precision, so
  // perturbations keep sum and mean to ~1e-19 rather than ~1e-16.
  using MatrixL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using VectorL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  MatrixL a(2, k);
  a.row(0).setOnes();
  const auto levels_l = sys.levels().cast<long double>();
  a.row(1) = (levels_l.array() - levels_l.mean()).matrix().transpose();
  const MatrixL gram = a * a.transpose();
  const Eigen::CompleteOrthogonalDecomposition<MatrixL> gram_inv(gram);

  VectorL log_p(k);
  for (Index j = 0; j < k; ++j) log_p[j] = std::log(static_cast<long double>(p[j]));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit;

  VectorX<double> coeffs(free_dims);
  while (report.trials < trials) {
    for (Index i = 0; i < free_dims; ++i) coeffs[i] = normal(rng);
    VectorL d = (basis * coeffs).cast<long double>();
    d -= a.transpose() * gram_inv.solve(a * d);
    const long double norm = d.norm();
    if (!(norm > 0.0L)) continue;
    d /= norm;

    // Largest step keeping every probability nonnegative.
    long double t_max = std::numeric_limits<long double>::infinity();
    for (Index j = 0; j < k; ++j) {
      if (d[j] < 0.0L) t_max = std::min(t_max, static_cast<long double>(p[j]) / -d[j]);
    }
    if (!std::isfinite(t_max)) continue;
    const long double t = static_cast<long double>(1.0 - unit(rng)) * t_max;  // (0, t_max]

    ++report.trials;
    const VectorX<double> q = (p.cast<long double>() + t * d).cast<double>().cwiseMax(0.0);
    report.max_constraint_error =
        std::max({report.max_constraint_error, std::abs(q.sum() - 1.0),
                  std::abs(sys.levels().dot(q) - mean_b)});

    // H(p + s) - H(p) = -sum [p phi(s/p) + s (1 + ln p)], phi(x) = (1+x) ln(1+x) - x,
    // which avoids cancelling two nearly equal entropies.
    long double excess = 0.0L;
    for (Index j = 0; j < k; ++j) {
      const long double step = t * d[j];
      const long double pj = p[j];
      excess -= pj * relative_entropy_kernel(step / pj) + step * (1.0L + log_p[j]);
    }
    report.max_excess = std::max(report.max_excess, static_cast<double>(excess));
  }
  report.holds = report.max_excess <= 1e-12;
  return report;
}

}  // namespace hypex
