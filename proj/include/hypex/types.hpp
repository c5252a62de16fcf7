#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hypex/distribution.hpp"

namespace hypex {

using Counts = VectorX<std::uint64_t>;

// Occupancy counts of a length-n sequence. Holding counts rather than the
// normalized frequencies keeps every n-type exactly representable.
class EmpiricalType {
 public:
  explicit EmpiricalType(Counts counts);
  EmpiricalType(std::initializer_list<std::uint64_t> counts);

  const Counts& counts() const { return counts_; }
  std::uint64_t n() const { return n_; }
  Index alphabet_size() const { return counts_.size(); }
  std::uint64_t operator[](Index a) const { return counts_[a]; }
  std::span<const std::uint64_t> span() const { return {counts_.data(), static_cast<std::size_t>(counts_.size())}; }

  // The type as a probability vector, counts / n.
  Distribution to_distribution() const;

  friend bool operator==(const EmpiricalType& lhs, const EmpiricalType& rhs);
  // Lexicographic on the count vector.
  friend bool operator<(const EmpiricalType& lhs, const EmpiricalType& rhs);

 private:
  Counts counts_;
  std::uint64_t n_;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

EmpiricalType empirical_type(std::span<const std::uint64_t> sequence, Index alphabet_size);

// Number of n-types over the alphabet, C(n + |A| - 1, |A| - 1). Throws
// OverflowError when the count does not fit in 64 bits.
std::uint64_t count_types(std::uint64_t n, Index alphabet_size);

// Visits every n-type in ascending lexicographic order of the count vector.
// The visitor receives a reference to a scratch type that is reused between
// calls. Throws ResourceError when count_types exceeds the cap.
void for_each_type(std::uint64_t n, Index alphabet_size,
                   const std::function<void(const EmpiricalType&)>& visit,
                   std::uint64_t cap = kDefaultEnumerationCap);

std::vector<EmpiricalType> enumerate_types(std::uint64_t n, Index alphabet_size,
                                           std::uint64_t cap = kDefaultEnumerationCap);

struct TypeClassSize {
  double log2_size;
  std::optional<std::uint64_t> exact;  // set when |T(P)| fits in 64 bits
};

TypeClassSize type_class_size(const EmpiricalType& t);

struct Log2Bounds {
  double lower;
  double upper;
};

// Prefactor convention for the two-sided type-class bounds. `binomial` uses
// the exact number of n-types; `polynomial` uses the looser (n+1)^|A|.
enum class TypePrefactor { binomial, polynomial };

// log2 of the prefactor: log2 C(n+|A|-1, |A|-1) or |A| log2(n+1).
double log2_type_prefactor(std::uint64_t n, Index alphabet_size,
                           TypePrefactor form = TypePrefactor::binomial);

// (nH(P) - log2 prefactor, nH(P)) around log2 |T(P)|.
Log2Bounds type_class_size_bounds(const EmpiricalType& t,
                                  TypePrefactor form = TypePrefactor::binomial);

// log2 Q^n(T(P)) = log2|T(P)| - n(D(P||q) + H(P)); -infinity when the type
// uses a symbol that q never emits.
double type_class_log_prob(const EmpiricalType& t, const Distribution& q);

// (-nD(P||q) - log2 prefactor, -nD(P||q)) around log2 Q^n(T(P)).
Log2Bounds type_class_prob_bounds(const EmpiricalType& t, const Distribution& q,
                                  TypePrefactor form = TypePrefactor::binomial);

// Exact P(D(P_hat_n || p) >= delta) by summing type-class probabilities.
double deviation_probability_exact(std::uint64_t n, const Distribution& p, double delta,
                                   std::uint64_t cap = kDefaultEnumerationCap);

// A closed half-space on the mass of one symbol.
struct ConstraintSet {
  enum class Mode { lower_bound, upper_bound };

  Mode mode;
  Index symbol;
  double threshold;

  static ConstraintSet at_least(Index symbol, double threshold) {
    return {Mode::lower_bound, symbol, threshold};
  }
  static ConstraintSet at_most(Index symbol, double threshold) {
    return {Mode::upper_bound, symbol, threshold};
  }

  void validate(Index alphabet_size) const;
  bool contains(const EmpiricalType& t) const;
};

struct SanovResult {
  double d_star;  // bits
  EmpiricalType minimizer;
};

// min over n-types in Pi of D(Q||p); ties go to the lexicographically
// smallest count vector. Throws InfeasibleError when Pi holds no n-type.
SanovResult sanov_exponent(const ConstraintSet& pi, const Distribution& p, std::uint64_t n,
                           std::uint64_t cap = kDefaultEnumerationCap);

struct SanovProbability {
  double probability;
  double log2_probability;
};

// Exact P(P_hat_n in Pi).
SanovProbability sanov_exact_prob(const ConstraintSet& pi, const Distribution& p,
                                  std::uint64_t n, std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace hypex
