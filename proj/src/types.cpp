#include "hypex/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hypex/combinatorics.hpp"
#include "logspace.hpp"

namespace hypex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t sum_counts(const Counts& counts) {
  std::uint64_t n = 0;
  for (Index a = 0; a < counts.size(); ++a) n += counts[a];
  return n;
}

void require_alphabet(const EmpiricalType& t, const Distribution& q) {
  if (t.alphabet_size() != q.size()) {
    std::ostringstream msg;
    msg << "type over " << t.alphabet_size() << " symbols used with a distribution over "
        << q.size();
    throw ValidationError(msg.str());
  }
}

// n H(P_hat) in bits, straight from the counts.
double n_entropy(const EmpiricalType& t) {
  const double n = static_cast<double>(t.n());
  double acc = n * std::log2(n);
  for (Index a = 0; a < t.alphabet_size(); ++a) {
    const double c = static_cast<double>(t[a]);
    if (c > 0) acc -= c * std::log2(c);
  }
  return acc < 0 ? 0.0 : acc;
}

// D(P_hat || p) in bits.
double divergence(const EmpiricalType& t, const Distribution& p) {
  const double n = static_cast<double>(t.n());
  double d = 0.0;
  for (Index a = 0; a < t.alphabet_size(); ++a) {
    if (t[a] == 0) continue;
    if (p[a] == 0.0) return kInf;
    const double f = static_cast<double>(t[a]) / n;
    d += f * std::log2(f / p[a]);
  }
  return d < 0 ? 0.0 : d;
}

}  // namespace

EmpiricalType::EmpiricalType(Counts counts) : counts_(std::move(counts)), n_(sum_counts(counts_)) {
  if (counts_.size() < 1) throw ValidationError("type needs at least one symbol");
  if (n_ == 0) throw ValidationError("type needs a positive sequence length");
}

EmpiricalType::EmpiricalType(std::initializer_list<std::uint64_t> counts)
    : EmpiricalType([&] {
        Counts c(static_cast<Index>(counts.size()));
        std::copy(counts.begin(), counts.end(), c.data());
        return c;
      }()) {}

Distribution EmpiricalType::to_distribution() const {
  return Distribution(counts_.cast<double>() / static_cast<double>(n_));
}

bool operator==(const EmpiricalType& lhs, const EmpiricalType& rhs) {
  return lhs.counts_.size() == rhs.counts_.size() && lhs.counts_ == rhs.counts_;
}

bool operator<(const EmpiricalType& lhs, const EmpiricalType& rhs) {
  return std::lexicographical_compare(lhs.counts_.begin(), lhs.counts_.end(),
                                      rhs.counts_.begin(), rhs.counts_.end());
}

EmpiricalType empirical_type(std::span<const std::uint64_t> sequence, Index alphabet_size) {
  if (alphabet_size < 1) throw ValidationError("alphabet size must be positive");
  if (sequence.empty()) throw ValidationError("sequence is empty");
  Counts counts = Counts::Zero(alphabet_size);
  for (std::uint64_t x : sequence) {
    if (x >= static_cast<std::uint64_t>(alphabet_size)) {
      std::ostringstream msg;
      msg << "symbol " << x << " is outside the alphabet of size " << alphabet_size;
      throw ValidationError(msg.str());
    }
    ++counts[static_cast<Index>(x)];
  }
  return EmpiricalType(std::move(counts));
}

std::uint64_t count_types(std::uint64_t n, Index alphabet_size) {
  if (n < 1) throw ValidationError("sequence length must be positive");
  if (alphabet_size < 1) throw ValidationError("alphabet size must be positive");
  const auto k = static_cast<std::uint64_t>(alphabet_size - 1);
  if (n > UINT64_MAX - k) throw OverflowError("number of types overflows 64 bits");
  auto count = binomial_exact(n + k, k);
  if (!count) throw OverflowError("number of types overflows 64 bits");
  return *count;
}

void for_each_type(std::uint64_t n, Index alphabet_size,
                   const std::function<void(const EmpiricalType&)>& visit, std::uint64_t cap) {
  std::uint64_t total = 0;
  try {
    total = count_types(n, alphabet_size);
  } catch (const OverflowError&) {
    throw ResourceError("type enumeration exceeds the cap");
  }
  if (total > cap) {
    std::ostringstream msg;
    msg << total << " types exceed the enumeration cap of " << cap;
    throw ResourceError(msg.str());
  }

  const Index k = alphabet_size;
  Counts c = Counts::Zero(k);
  c[k - 1] = n;
  while (true) {
    visit(EmpiricalType(c));
    // Advance to the lexicographic successor: bump the rightmost coordinate
    // (excluding the last) that still has mass to its right.
    Index i = k - 2;
    std::uint64_t suffix = c[k - 1];
    while (i >= 0 && suffix == 0) {
      suffix += c[i];
      --i;
    }
    if (i < 0) break;
    ++c[i];
    --suffix;
    for (Index j = i + 1; j < k - 1; ++j) c[j] = 0;
    c[k - 1] = suffix;
  }
}

std::vector<EmpiricalType> enumerate_types(std::uint64_t n, Index alphabet_size,
                                           std::uint64_t cap) {
  std::vector<EmpiricalType> out;
  for_each_type(n, alphabet_size, [&](const EmpiricalType& t) { out.push_back(t); }, cap);
  return out;
}

TypeClassSize type_class_size(const EmpiricalType& t) {
  return {log_multinomial<double>(t.span()) / kLn2, multinomial_exact(t.span())};
}

double log2_type_prefactor(std::uint64_t n, Index alphabet_size, TypePrefactor form) {
  if (form == TypePrefactor::polynomial) {
    return static_cast<double>(alphabet_size) * std::log2(static_cast<double>(n) + 1.0);
  }
  const auto k = static_cast<std::uint64_t>(alphabet_size - 1);
  return (log_factorial<double>(n + k) - log_factorial<double>(n) - log_factorial<double>(k)) /
         kLn2;
}

Log2Bounds type_class_size_bounds(const EmpiricalType& t, TypePrefactor form) {
  const double upper = n_entropy(t);
  return {upper - log2_type_prefactor(t.n(), t.alphabet_size(), form), upper};
}

double type_class_log_prob(const EmpiricalType& t, const Distribution& q) {
  require_alphabet(t, q);
  // -n(D + H) = sum_a counts[a] log2 q(a).
  double log_seq = 0.0;
  for (Index a = 0; a < t.alphabet_size(); ++a) {
    if (t[a] == 0) continue;
    if (q[a] == 0.0) return -kInf;
    log_seq += static_cast<double>(t[a]) * std::log2(q[a]);
  }
  return type_class_size(t).log2_size + log_seq;
}

Log2Bounds type_class_prob_bounds(const EmpiricalType& t, const Distribution& q,
                                  TypePrefactor form) {
  require_alphabet(t, q);
  const double d = divergence(t, q);
  if (d == kInf) return {-kInf, -kInf};
  const double upper = -static_cast<double>(t.n()) * d;
  return {upper - log2_type_prefactor(t.n(), t.alphabet_size(), form), upper};
}

double deviation_probability_exact(std::uint64_t n, const Distribution& p, double delta,
                                   std::uint64_t cap) {
  if (!(delta > 0.0)) throw ValidationError("deviation threshold must be positive");
  detail::Log2Accumulator acc;
  for_each_type(
      n, p.size(),
      [&](const EmpiricalType& t) {
        if (divergence(t, p) >= delta) acc.add(type_class_log_prob(t, p));
      },
      cap);
  return acc.sum();
}

void ConstraintSet::validate(Index alphabet_size) const {
  if (symbol < 0 || symbol >= alphabet_size) {
    throw ValidationError("constraint symbol is outside the alphabet");
  }
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ValidationError("constraint threshold must lie in [0, 1]");
  }
}

bool ConstraintSet::contains(const EmpiricalType& t) const {
  const double n = static_cast<double>(t.n());
  const double mass = static_cast<double>(t[symbol]);
  // threshold * n is compared with a relative slack so decimal thresholds
  // such as 0.3 still admit the count that equals them exactly.
  const double bound = threshold * n;
  const double slack = 1e-9 * std::max(1.0, bound);
  return mode == Mode::lower_bound ? mass >= bound - slack : mass <= bound + slack;
}

SanovResult sanov_exponent(const ConstraintSet& pi, const Distribution& p, std::uint64_t n,
                           std::uint64_t cap) {
  pi.validate(p.size());
  std::optional<SanovResult> best;
  for_each_type(
      n, p.size(),
      [&](const EmpiricalType& t) {
        if (!pi.contains(t)) return;
        const double d = divergence(t, p);
        // Visiting order is lexicographic, so only a strict improvement
        // (beyond rounding) replaces the incumbent.
        if (!best || d < best->d_star - 1e-12 * std::max(1.0, best->d_star)) {
          best = SanovResult{d, t};
        }
      },
      cap);
  if (!best) throw InfeasibleError("constraint set contains no n-type");
  return *best;
}

SanovProbability sanov_exact_prob(const ConstraintSet& pi, const Distribution& p,
                                  std::uint64_t n, std::uint64_t cap) {
  pi.validate(p.size());
  detail::Log2Accumulator acc;
  for_each_type(
      n, p.size(),
      [&](const EmpiricalType& t) {
        if (pi.contains(t)) acc.add(type_class_log_prob(t, p));
      },
      cap);
  const double log2_prob = std::min(0.0, acc.log2_sum());
  return {std::exp2(log2_prob), log2_prob};
}

}  // namespace hypex
