#pragma once

#include <cstdint>

#include "hypex/distribution.hpp"
#include "hypex/types.hpp"

namespace hypex {

// H1: samples ~ p1 versus H2: samples ~ p2, with prior weights.
class BinaryHypothesis {
 public:
  // Throws ValidationError on alphabet mismatch, D(p1||p2) = inf, or priors
  // that are not a positive pair summing to 1.
  BinaryHypothesis(Distribution p1, Distribution p2, double prior1 = 0.5, double prior2 = 0.5);

  const Distribution& p1() const { return p1_; }
  const Distribution& p2() const { return p2_; }
  double prior1() const { return prior1_; }
  double prior2() const { return prior2_; }
  Index alphabet_size() const { return p1_.size(); }

  // D(p1||p2) in bits.
  double divergence() const { return divergence_; }

  // Sum_a counts[a] log2(p1(a)/p2(a)): the log-likelihood ratio shared by
  // every sequence of the type. +inf / -inf on one-sided support, NaN when a
  // used symbol has probability zero under both.
  double log_likelihood_ratio(const EmpiricalType& t) const;

 private:
  Distribution p1_;
  Distribution p2_;
  double prior1_;
  double prior2_;
  double divergence_;
};

struct SteinReport {
  std::uint64_t n;
  double delta;
  double alpha_n;      // P1^n(A_n^c)
  double beta_n;       // P2^n(A_n)
  double log2_beta_n;  // kept separately: beta_n underflows for large n
  double exponent;     // -(1/n) log2 beta_n, bits; +inf when beta_n == 0
};

// True iff the per-symbol log-likelihood ratio of the type lies in
// [D - delta, D + delta]. Infinite ratios fall outside the band.
bool stein_region_membership(const EmpiricalType& t, const BinaryHypothesis& h, double delta);

// Exact type-class sums of both errors for the two-sided typical region.
SteinReport stein_errors(const BinaryHypothesis& h, std::uint64_t n, double delta,
                         std::uint64_t cap = kDefaultEnumerationCap);

// Minimal beta_n over randomized tests with alpha_n <= epsilon, 0 < epsilon < 1/2.
double neyman_pearson_min_beta(const BinaryHypothesis& h, std::uint64_t n, double epsilon,
                               std::uint64_t cap = kDefaultEnumerationCap);

// Same optimum, returned as log2 beta so that it survives large n.
double neyman_pearson_log2_min_beta(const BinaryHypothesis& h, std::uint64_t n, double epsilon,
                                    std::uint64_t cap = kDefaultEnumerationCap);

struct ChernoffReport {
  double lambda_star;
  double c_info;  // bits, max(d1, d2)
  double d1;      // D(P_lambda* || p1), bits
  double d2;      // D(P_lambda* || p2), bits
  int iterations;
};

inline constexpr double kDefaultChernoffTolerance = 1e-10;
inline constexpr int kMaxBisectionIterations = 200;

// Bisection on g(lambda) = D(P_lambda||p1) - D(P_lambda||p2), which runs from
// D(p2||p1) > 0 at lambda = 0 down to -D(p1||p2) < 0 at lambda = 1.
ChernoffReport chernoff_lambda_star(const BinaryHypothesis& h,
                                    double tol = kDefaultChernoffTolerance);

// Best achievable exponent of pi1 alpha_n + pi2 beta_n, in bits. It is the
// Chernoff information and does not depend on the priors or on n.
double bayesian_error_exponent(const BinaryHypothesis& h, std::uint64_t n);

// Exact minimal Bayes error pi1 alpha_n + pi2 beta_n at sample size n, as
// log2. The optimal test is the MAP rule, evaluated type by type.
double bayesian_log2_min_error(const BinaryHypothesis& h, std::uint64_t n,
                               std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace hypex
