#pragma once

#include <Eigen/Core>

#include <cmath>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <utility>

#include "hypex/errors.hpp"

namespace hypex {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

// Information quantities are reported in bits; the Boltzmann module works in
// nats. This is the only place the two are related.
inline constexpr double kLn2 = 0.693147180559945309417232121458176568;

template <typename Scalar>
constexpr Scalar nats_to_bits(Scalar nats) {
  return nats / Scalar(kLn2);
}

// Absolute tolerance on the sum of a probability vector.
template <typename Scalar>
constexpr Scalar probability_sum_tolerance() {
  return Scalar(1e-12);
}

// Probability vector over the index alphabet {0, ..., size()-1}. The
// constructor validates and never renormalizes; use make_distribution() to
// normalize raw weights.
template <typename Scalar_ = double>
class DiscreteDistribution {
 public:
  using Scalar = Scalar_;
  using Vector = VectorX<Scalar>;

  explicit DiscreteDistribution(Vector probs) : probs_(std::move(probs)) {
    if (probs_.size() < 1) {
      throw ValidationError("distribution needs at least one symbol");
    }
    for (Index a = 0; a < probs_.size(); ++a) {
      if (!(probs_[a] >= Scalar(0)) || !std::isfinite(probs_[a])) {
        std::ostringstream msg;
        msg << "probability of symbol " << a << " is not a finite nonnegative value";
        throw ValidationError(msg.str());
      }
    }
    const Scalar total = probs_.sum();
    if (std::abs(total - Scalar(1)) > probability_sum_tolerance<Scalar>()) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "probabilities sum to " << total << ", not 1";
      throw ValidationError(msg.str());
    }
  }

  static DiscreteDistribution uniform(Index size) {
    if (size < 1) throw ValidationError("distribution needs at least one symbol");
    return DiscreteDistribution(Vector::Constant(size, Scalar(1) / Scalar(size)));
  }

  Index size() const { return probs_.size(); }
  Scalar operator[](Index a) const { return probs_[a]; }
  const Vector& probs() const { return probs_; }

  template <typename Other>
  DiscreteDistribution<Other> cast() const {
    return DiscreteDistribution<Other>(probs_.template cast<Other>());
  }

  friend bool operator==(const DiscreteDistribution& lhs, const DiscreteDistribution& rhs) {
    return lhs.probs_.size() == rhs.probs_.size() && lhs.probs_ == rhs.probs_;
  }

 private:
  Vector probs_;
};

using Distribution = DiscreteDistribution<double>;

// Normalizes nonnegative weights onto the simplex.
template <typename Derived>
DiscreteDistribution<typename Derived::Scalar> make_distribution(
    const Eigen::MatrixBase<Derived>& weights) {
  using Scalar = typename Derived::Scalar;
  if (weights.size() < 1) throw ValidationError("weights are empty");
  for (Index a = 0; a < weights.size(); ++a) {
    const Scalar w = weights.derived().coeff(a);
    if (!(w >= Scalar(0)) || !std::isfinite(w)) {
      throw ValidationError("weights must be finite and nonnegative");
    }
  }
  const Scalar total = weights.sum();
  if (!(total > Scalar(0))) throw ValidationError("weights must have positive total mass");
  VectorX<Scalar> probs = weights / total;
  return DiscreteDistribution<Scalar>(std::move(probs));
}

inline Distribution make_distribution(std::initializer_list<double> weights) {
  VectorX<double> w(static_cast<Index>(weights.size()));
  Index a = 0;
  for (double x : weights) w[a++] = x;
  return make_distribution(w);
}

template <typename Scalar>
void require_same_alphabet(const DiscreteDistribution<Scalar>& p,
                           const DiscreteDistribution<Scalar>& q) {
  if (p.size() != q.size()) {
    std::ostringstream msg;
    msg << "alphabet mismatch: " << p.size() << " vs " << q.size() << " symbols";
    throw ValidationError(msg.str());
  }
}

// Shannon entropy in bits, with 0 log 0 = 0.
template <typename Scalar>
Scalar entropy(const DiscreteDistribution<Scalar>& p) {
  Scalar h(0);
  for (Index a = 0; a < p.size(); ++a) {
    if (p[a] > Scalar(0)) h -= p[a] * std::log2(p[a]);
  }
  return h;
}

// D(p||q) in bits. Returns +infinity when p puts mass where q does not.
template <typename Scalar>
Scalar kl_divergence(const DiscreteDistribution<Scalar>& p,
                     const DiscreteDistribution<Scalar>& q) {
  require_same_alphabet(p, q);
  Scalar d(0);
  for (Index a = 0; a < p.size(); ++a) {
    if (p[a] == Scalar(0)) continue;
    if (q[a] == Scalar(0)) return std::numeric_limits<Scalar>::infinity();
    d += p[a] * std::log2(p[a] / q[a]);
  }
  // Rounding can leave a tiny negative value for p ~= q.
  return d < Scalar(0) ? Scalar(0) : d;
}

// The geometric family P_lambda ∝ p1^lambda p2^(1-lambda) joining two
// hypotheses: lambda = 1 is p1, lambda = 0 is p2.
template <typename Scalar_ = double>
class TiltedFamily {
 public:
  using Scalar = Scalar_;

  TiltedFamily(DiscreteDistribution<Scalar> p1, DiscreteDistribution<Scalar> p2)
      : p1_(std::move(p1)), p2_(std::move(p2)) {
    require_same_alphabet(p1_, p2_);
  }

  const DiscreteDistribution<Scalar>& p1() const { return p1_; }
  const DiscreteDistribution<Scalar>& p2() const { return p2_; }

 private:
  DiscreteDistribution<Scalar> p1_;
  DiscreteDistribution<Scalar> p2_;
};

// Symbols where both p1 and p2 vanish get weight zero and drop out of the
// normalizer. std::pow(0, 0) == 1 keeps the endpoints exact.
template <typename Scalar>
DiscreteDistribution<Scalar> tilted(const TiltedFamily<Scalar>& family, Scalar lambda) {
  if (!(lambda >= Scalar(0) && lambda <= Scalar(1))) {
    throw ValidationError("tilt parameter must lie in [0, 1]");
  }
  const auto& p1 = family.p1();
  const auto& p2 = family.p2();
  VectorX<Scalar> w(p1.size());
  for (Index a = 0; a < p1.size(); ++a) {
    if (p1[a] == Scalar(0) && p2[a] == Scalar(0)) {
      w[a] = Scalar(0);
    } else {
      w[a] = std::pow(p1[a], lambda) * std::pow(p2[a], Scalar(1) - lambda);
    }
  }
  const Scalar z = w.sum();
  if (!(z > Scalar(0))) {
    throw DegenerateError("tilted family has an empty support at this lambda");
  }
  w /= z;
  return DiscreteDistribution<Scalar>(std::move(w));
}

}  // namespace hypex
