#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>

#include "hypex/errors.hpp"

namespace hypex {

namespace detail {

// Below this argument log_factorial reads a table built by compensated
// summation of ln k; above it the Stirling series takes over.
inline constexpr std::uint64_t kLogFactorialTableSize = 1024;

template <typename Scalar>
struct LogFactorialTable {
  std::array<Scalar, kLogFactorialTableSize> values{};

  LogFactorialTable() {
    // Neumaier summation keeps the table within an ulp of ln(k!).
    Scalar sum(0);
    Scalar carry(0);
    values[0] = Scalar(0);
    for (std::uint64_t k = 1; k < kLogFactorialTableSize; ++k) {
      const Scalar term = std::log(Scalar(k));
      const Scalar t = sum + term;
      if (std::abs(sum) >= std::abs(term)) {
        carry += (sum - t) + term;
      } else {
        carry += (term - t) + sum;
      }
      sum = t;
      values[k] = sum + carry;
    }
  }
};

template <typename Scalar>
const LogFactorialTable<Scalar>& log_factorial_table() {
  static const LogFactorialTable<Scalar> table;
  return table;
}

}  // namespace detail

// ln(k!).
template <typename Scalar = double>
Scalar log_factorial(std::uint64_t k) {
  if (k < detail::kLogFactorialTableSize) return detail::log_factorial_table<Scalar>().values[k];
  // ln Gamma(x+1) for x >= 1024; the first omitted term is below 1e-30.
  const Scalar x = Scalar(k);
  const Scalar inv = Scalar(1) / x;
  const Scalar inv2 = inv * inv;
  const Scalar series =
      inv * (Scalar(1) / 12 -
             inv2 * (Scalar(1) / 360 - inv2 * (Scalar(1) / 1260 - inv2 * (Scalar(1) / 1680))));
  const Scalar half_log_two_pi = Scalar(0.918938533204672741780329736405617639861L);
  return (x + Scalar(0.5)) * std::log(x) - x + half_log_two_pi + series;
}

// Exact C(n, k), or nullopt when it does not fit in 64 bits.
inline std::optional<std::uint64_t> binomial_exact(std::uint64_t n, std::uint64_t k) {
  if (k > n) return std::uint64_t{0};
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // r * (n - k + i) / i is always an integer: it equals C(n - k + i, i).
    r = r * (n - k + i);
    r /= i;
    if (r > UINT64_MAX) return std::nullopt;
  }
  return static_cast<std::uint64_t>(r);
}

// Exact n! / prod(counts[a]!) with n = sum(counts), or nullopt on overflow.
inline std::optional<std::uint64_t> multinomial_exact(std::span<const std::uint64_t> counts) {
  std::uint64_t running = 0;
  unsigned __int128 r = 1;
  for (std::uint64_t c : counts) {
    running += c;
    auto b = binomial_exact(running, c);
    if (!b) return std::nullopt;
    r *= *b;
    if (r > UINT64_MAX) return std::nullopt;
  }
  return static_cast<std::uint64_t>(r);
}

// ln(n! / prod(counts[a]!)).
template <typename Scalar = double>
Scalar log_multinomial(std::span<const std::uint64_t> counts) {
  std::uint64_t n = 0;
  Scalar denom(0);
  for (std::uint64_t c : counts) {
    n += c;
    denom += log_factorial<Scalar>(c);
  }
  return log_factorial<Scalar>(n) - denom;
}

}  // namespace hypex
