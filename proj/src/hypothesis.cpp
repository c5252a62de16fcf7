#include "hypex/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "logspace.hpp"

namespace hypex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_n(std::uint64_t n) {
  if (n < 1) throw ValidationError("sample size must be positive");
}

struct TypeMasses {
  double llr;
  double log2_p1;
  double log2_p2;
};

}  // namespace

BinaryHypothesis::BinaryHypothesis(Distribution p1, Distribution p2, double prior1,
                                   double prior2)
    : p1_(std::move(p1)), p2_(std::move(p2)), prior1_(prior1), prior2_(prior2), divergence_(0) {
  require_same_alphabet(p1_, p2_);
  if (!(prior1_ > 0.0) || !(prior2_ > 0.0) || std::abs(prior1_ + prior2_ - 1.0) > 1e-12) {
    throw ValidationError("priors must be positive and sum to 1");
  }
  divergence_ = kl_divergence(p1_, p2_);
  if (!std::isfinite(divergence_)) {
    throw ValidationError("D(p1||p2) is infinite: p1 charges a symbol p2 never emits");
  }
}

double BinaryHypothesis::log_likelihood_ratio(const EmpiricalType& t) const {
  if (t.alphabet_size() != alphabet_size()) {
    throw ValidationError("type alphabet does not match the hypotheses");
  }
  double llr = 0.0;
  for (Index a = 0; a < t.alphabet_size(); ++a) {
    if (t[a] == 0) continue;
    const double r1 = p1_[a];
    const double r2 = p2_[a];
    if (r1 == 0.0 && r2 == 0.0) return std::numeric_limits<double>::quiet_NaN();
    llr += static_cast<double>(t[a]) * (std::log2(r1) - std::log2(r2));
  }
  return llr;
}

bool stein_region_membership(const EmpiricalType& t, const BinaryHypothesis& h, double delta) {
  if (!(delta > 0.0)) throw ValidationError("delta must be positive");
  const double per_symbol = h.log_likelihood_ratio(t) / static_cast<double>(t.n());
  if (!std::isfinite(per_symbol)) return false;
  return std::abs(per_symbol - h.divergence()) <= delta;
}

SteinReport stein_errors(const BinaryHypothesis& h, std::uint64_t n, double delta,
                         std::uint64_t cap) {
  require_n(n);
  if (!(delta > 0.0)) throw ValidationError("delta must be positive");
  detail::Log2Accumulator alpha;
  detail::Log2Accumulator beta;
  for_each_type(
      n, h.alphabet_size(),
      [&](const EmpiricalType& t) {
        if (stein_region_membership(t, h, delta)) {
          beta.add(type_class_log_prob(t, h.p2()));
        } else {
          alpha.add(type_class_log_prob(t, h.p1()));
        }
      },
      cap);
  SteinReport report{};
  report.n = n;
  report.delta = delta;
  report.alpha_n = std::min(1.0, alpha.sum());
  report.log2_beta_n = std::min(0.0, beta.log2_sum());
  report.beta_n = std::exp2(report.log2_beta_n);
  report.exponent = report.log2_beta_n == -kInf
                        ? kInf
                        : -report.log2_beta_n / static_cast<double>(n);
  return report;
}

double neyman_pearson_log2_min_beta(const BinaryHypothesis& h, std::uint64_t n, double epsilon,
                                    std::uint64_t cap) {
  require_n(n);
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw ValidationError("epsilon must lie in (0, 1/2)");

  std::vector<TypeMasses> classes;
  for_each_type(
      n, h.alphabet_size(),
      [&](const EmpiricalType& t) {
        const double llr = h.log_likelihood_ratio(t);
        if (std::isnan(llr)) return;  // impossible under both hypotheses
        classes.push_back({llr, type_class_log_prob(t, h.p1()), type_class_log_prob(t, h.p2())});
      },
      cap);
  // Most H1-favoring classes enter the acceptance region first; classes with
  // equal ratio are interchangeable, so the order among ties is irrelevant.
  std::stable_sort(classes.begin(), classes.end(),
                   [](const TypeMasses& a, const TypeMasses& b) { return a.llr > b.llr; });

  const double target = 1.0 - epsilon;
  double accepted = 0.0;
  detail::Log2Accumulator beta;
  for (const auto& c : classes) {
    const double mass1 = std::exp2(c.log2_p1);
    if (accepted + mass1 >= target) {
      // Randomize on the boundary class to hit alpha = epsilon exactly.
      const double gamma = std::clamp((target - accepted) / mass1, 0.0, 1.0);
      beta.add(c.log2_p2, gamma);
      return std::min(0.0, beta.log2_sum());
    }
    accepted += mass1;
    beta.add(c.log2_p2);
  }
  return std::min(0.0, beta.log2_sum());
}

double neyman_pearson_min_beta(const BinaryHypothesis& h, std::uint64_t n, double epsilon,
                               std::uint64_t cap) {
  return std::exp2(neyman_pearson_log2_min_beta(h, n, epsilon, cap));
}

ChernoffReport chernoff_lambda_star(const BinaryHypothesis& h, double tol) {
  if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
  const auto& p1 = h.p1();
  const auto& p2 = h.p2();
  if ((p1.probs() - p2.probs()).cwiseAbs().maxCoeff() < 1e-12) {
    throw DegenerateError("hypotheses coincide; Chernoff information is zero");
  }
  if (!std::isfinite(kl_divergence(p2, p1))) {
    throw NumericalError("D(p2||p1) is infinite: no sign change of the equalizer on [0, 1]");
  }

  const TiltedFamily<double> family(p1, p2);
  struct Eval {
    double g, d1, d2;
  };
  auto evaluate = [&](double lambda) {
    const auto p = tilted(family, lambda);
    const double d1 = kl_divergence(p, p1);
    const double d2 = kl_divergence(p, p2);
    return Eval{d1 - d2, d1, d2};
  };

  double lo = 0.0;
  double hi = 1.0;
  for (int it = 1; it <= kMaxBisectionIterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const Eval e = evaluate(mid);
    if (std::abs(e.g) <= tol) return {mid, std::max(e.d1, e.d2), e.d1, e.d2, it};
    if (e.g > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw NumericalError("Chernoff bisection did not reach the requested tolerance");
}

double bayesian_error_exponent(const BinaryHypothesis& h, std::uint64_t n) {
  require_n(n);
  return chernoff_lambda_star(h).c_info;
}

double bayesian_log2_min_error(const BinaryHypothesis& h, std::uint64_t n, std::uint64_t cap) {
  require_n(n);
  const double log2_prior1 = std::log2(h.prior1());
  const double log2_prior2 = std::log2(h.prior2());
  detail::Log2Accumulator err;
  for_each_type(
      n, h.alphabet_size(),
      [&](const EmpiricalType& t) {
        err.add(std::min(log2_prior1 + type_class_log_prob(t, h.p1()),
                         log2_prior2 + type_class_log_prob(t, h.p2())));
      },
      cap);
  return std::min(0.0, err.log2_sum());
}

}  // namespace hypex
