#pragma once

#include <cmath>
#include <limits>

namespace hypex::detail {

// Streaming sum of 2^x terms kept relative to the running maximum exponent,
// so sums of type-class probabilities far below DBL_MIN stay representable.
class Log2Accumulator {
 public:
  void add(double log2_term) {
    if (log2_term == -std::numeric_limits<double>::infinity()) return;
    if (log2_term > max_) {
      scaled_ = scaled_ * std::exp2(max_ - log2_term) + 1.0;
      max_ = log2_term;
    } else {
      scaled_ += std::exp2(log2_term - max_);
    }
  }

  // Adds weight * 2^log2_term for weight in (0, 1].
  void add(double log2_term, double weight) {
    if (weight <= 0.0) return;
    add(log2_term + std::log2(weight));
  }

  double log2_sum() const {
    if (scaled_ == 0.0) return -std::numeric_limits<double>::infinity();
    return max_ + std::log2(scaled_);
  }

  double sum() const { return std::exp2(log2_sum()); }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double scaled_ = 0.0;
};

}  // namespace hypex::detail
