#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "hypex/types.hpp"
#include "oracles.hpp"

using namespace hypex;
using doctest::Approx;

namespace {

Counts counts_of(std::initializer_list<std::uint64_t> c) { return EmpiricalType(c).counts(); }

}  // namespace

TEST_CASE("empirical_type tallies symbols") {
  const std::uint64_t a[] = {0, 1, 0};
  auto t = empirical_type(a, 2);
  CHECK(t.counts() == counts_of({2, 1}));
  CHECK(t.n() == 3);

  const std::uint64_t b[] = {1, 1, 1, 1};
  CHECK(empirical_type(b, 2).counts() == counts_of({0, 4}));

  const std::uint64_t c[] = {0, 1, 2, 1, 2, 2};
  CHECK(empirical_type(c, 3).counts() == counts_of({1, 2, 3}));

  const std::uint64_t bad[] = {0, 2};
  CHECK_THROWS_AS(empirical_type(bad, 2), ValidationError);
  CHECK_THROWS_AS(empirical_type(std::span<const std::uint64_t>{}, 2), ValidationError);
  CHECK(empirical_type(c, 3).to_distribution()[2] == Approx(0.5));
}

TEST_CASE("count_types") {
  CHECK(count_types(3, 2) == 4);
  CHECK(count_types(2, 3) == 6);
  CHECK(count_types(1, 1) == 1);
  CHECK_THROWS_AS(count_types(1'000'000, 40), OverflowError);
}

TEST_CASE("enumerate_types is lexicographic and complete") {
  const auto two = enumerate_types(2, 2);
  REQUIRE(two.size() == 3);
  CHECK(two[0].counts() == counts_of({0, 2}));
  CHECK(two[1].counts() == counts_of({1, 1}));
  CHECK(two[2].counts() == counts_of({2, 0}));

  CHECK(enumerate_types(3, 2).size() == 4);
  const auto three = enumerate_types(2, 3);
  CHECK(three.size() == 6);
  for (std::size_t i = 0; i < three.size(); ++i) {
    CHECK(three[i].n() == 2);
    if (i > 0) CHECK(three[i - 1] < three[i]);
  }
  CHECK(enumerate_types(5, 1).size() == 1);
  CHECK_THROWS_AS(enumerate_types(100, 4, 1000), ResourceError);
}

TEST_CASE("type_class_size") {
  auto s = type_class_size(EmpiricalType{2, 2});
  CHECK(*s.exact == 6);
  CHECK(s.log2_size == Approx(std::log2(6.0)));
  CHECK(*type_class_size(EmpiricalType{0, 3}).exact == 1);
  CHECK(*type_class_size(EmpiricalType{1, 2, 3}).exact == 60);
  auto big = type_class_size(EmpiricalType{500, 500});
  CHECK_FALSE(big.exact.has_value());
  CHECK(big.log2_size == Approx(689.46726156785118 / std::log(2.0)).epsilon(1e-13));
}

TEST_CASE("type_class_size_bounds") {
  auto b = type_class_size_bounds(EmpiricalType{2, 2});
  CHECK(b.upper == Approx(4.0));
  CHECK(b.lower == Approx(4.0 - std::log2(5.0)));
  CHECK(b.lower <= std::log2(6.0));
  CHECK(std::log2(6.0) <= b.upper);

  b = type_class_size_bounds(EmpiricalType{4, 0});
  CHECK(b.upper == 0.0);
  CHECK(b.lower == Approx(-std::log2(5.0)));

  b = type_class_size_bounds(EmpiricalType{2, 1});
  CHECK(b.upper == Approx(2.7548875021634687));
  CHECK(b.lower == Approx(0.7548875021634687));

  // The looser (n+1)^|A| prefactor.
  const auto loose = type_class_size_bounds(EmpiricalType{2, 2}, TypePrefactor::polynomial);
  CHECK(loose.lower == Approx(4.0 - 2.0 * std::log2(5.0)));
  CHECK(loose.lower <= b.lower + 4.0);
}

TEST_CASE("type_class_log_prob") {
  CHECK(type_class_log_prob(EmpiricalType{1, 1}, make_distribution({0.5, 0.5})) ==
        Approx(-1.0));
  CHECK(type_class_log_prob(EmpiricalType{2, 0}, make_distribution({1, 0})) == Approx(0.0));
  CHECK(type_class_log_prob(EmpiricalType{2, 1}, make_distribution({0.5, 0.5})) ==
        Approx(std::log2(3.0 / 8.0)));
  CHECK(type_class_log_prob(EmpiricalType{1, 1}, make_distribution({1, 0})) ==
        -std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(type_class_log_prob(EmpiricalType{1, 1}, Distribution::uniform(3)),
                  ValidationError);
}

TEST_CASE("property: type classes partition the sequence space") {
  std::mt19937_64 rng(11);
  for (Index k = 1; k <= 3; ++k) {
    for (std::uint64_t n = 1; n <= 12; ++n) {
      const auto q = oracle::random_distribution(rng, k);
      std::uint64_t total = 0;
      long double mass = 0.0L;
      for (const auto& t : enumerate_types(n, k)) {
        total += *type_class_size(t).exact;
        mass += std::exp2(static_cast<long double>(type_class_log_prob(t, q)));
      }
      CHECK(total == static_cast<std::uint64_t>(std::llround(std::pow(double(k), double(n)))));
      CHECK(std::abs(mass - 1.0L) < 1e-10L);
    }
  }
}

TEST_CASE("property: brute-force sequence enumeration reproduces type classes") {
  std::mt19937_64 rng(12);
  for (int k = 2; k <= 3; ++k) {
    for (int n = 1; n <= 8; ++n) {
      const auto q = oracle::random_distribution(rng, k);
      const auto brute = oracle::brute_type_classes(n, k, q);
      const auto types = enumerate_types(static_cast<std::uint64_t>(n), k);
      REQUIRE(brute.size() == types.size());
      for (const auto& t : types) {
        const auto& b = brute.at(std::vector<std::uint64_t>(t.counts().begin(), t.counts().end()));
        CHECK(*type_class_size(t).exact == b.size);
        CHECK(std::abs(std::exp2(type_class_log_prob(t, q)) - static_cast<double>(b.prob)) < 1e-10);
      }
    }
  }
}

TEST_CASE("deviation_probability_exact") {
  const auto fair = make_distribution({0.5, 0.5});
  CHECK(deviation_probability_exact(10, fair, 5.0) == 0.0);
  // (1/3, 2/3) is never a 10-type, so every type deviates by a positive amount.
  const auto third = make_distribution({1, 2});
  CHECK(deviation_probability_exact(10, third, 1e-15) == Approx(1.0).epsilon(1e-12));

  const double p = deviation_probability_exact(10, fair, 0.3);
  CHECK(p == Approx(0.021484375).epsilon(1e-12));  // k in {0,1,2,8,9,10}: 22/1024
  CHECK(p <= 11.0 * std::pow(2.0, -3.0));
  CHECK_THROWS_AS(deviation_probability_exact(10, fair, 0.0), ValidationError);
}

TEST_CASE("constraint sets") {
  const auto c = ConstraintSet::at_least(1, 0.75);
  CHECK(c.contains(EmpiricalType{5, 15}));
  CHECK_FALSE(c.contains(EmpiricalType{6, 14}));
  // 0.3 * 10 rounds above 3 in binary; the count 3 still qualifies.
  CHECK(ConstraintSet::at_least(0, 0.3).contains(EmpiricalType{3, 7}));
  CHECK(ConstraintSet::at_most(0, 0.3).contains(EmpiricalType{3, 7}));
  CHECK_THROWS_AS(ConstraintSet::at_least(2, 0.5).validate(2), ValidationError);
  CHECK_THROWS_AS(ConstraintSet::at_least(0, 1.5).validate(2), ValidationError);
}

TEST_CASE("sanov_exponent") {
  const auto fair = make_distribution({0.5, 0.5});
  auto r = sanov_exponent(ConstraintSet::at_least(1, 0.5), fair, 10);
  CHECK(r.d_star == Approx(0.0));
  CHECK(r.minimizer.counts() == counts_of({5, 5}));

  r = sanov_exponent(ConstraintSet::at_least(1, 0.75), fair, 20);
  CHECK(r.minimizer.counts() == counts_of({5, 15}));
  CHECK(r.d_star == Approx(0.18872187554086714).epsilon(1e-12));

  r = sanov_exponent(ConstraintSet::at_least(0, 1.0), fair, 4);
  CHECK(r.minimizer.counts() == counts_of({4, 0}));
  CHECK(r.d_star == Approx(1.0));

  // (1,2) and (2,1) are equally close to the fair coin; the smaller wins.
  r = sanov_exponent(ConstraintSet::at_least(0, 0.0), fair, 3);
  CHECK(r.minimizer.counts() == counts_of({1, 2}));
  CHECK(r.d_star == Approx(1.0 - 0.91829583405448956).epsilon(1e-12));
}

TEST_CASE("sanov_exponent rejects empty constraint sets") {
  // A single-symbol half-space always holds a vertex type unless the
  // alphabet has one symbol.
  const auto certain = make_distribution({1});
  CHECK_THROWS_AS(sanov_exponent(ConstraintSet::at_most(0, 0.5), certain, 3), InfeasibleError);
  CHECK(sanov_exact_prob(ConstraintSet::at_most(0, 0.5), certain, 3).probability == 0.0);
  CHECK_THROWS_AS(sanov_exponent(ConstraintSet::at_most(0, -0.1), make_distribution({1, 1}), 3),
                  ValidationError);
}

TEST_CASE("sanov_exact_prob") {
  const auto fair = make_distribution({0.5, 0.5});
  CHECK(sanov_exact_prob(ConstraintSet::at_least(0, 0.0), fair, 10).probability ==
        Approx(1.0).epsilon(1e-12));
  const auto at10 = sanov_exact_prob(ConstraintSet::at_least(1, 0.75), fair, 10);
  CHECK(at10.probability == Approx(56.0 / 1024.0).epsilon(1e-13));
  const auto at40 = sanov_exact_prob(ConstraintSet::at_least(1, 0.75), fair, 40);
  const double target = 0.18872187554086714;
  CHECK(std::abs(-at40.log2_probability / 40 - target) <
        std::abs(-at10.log2_probability / 10 - target));
}

TEST_CASE("property: type class, deviation and Sanov sandwiches") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<Index> size(2, 4);
  std::uniform_int_distribution<std::uint64_t> length(1, 30);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double slack = 1e-9;
  for (int i = 0; i < 60; ++i) {
    const Index k = size(rng);
    const std::uint64_t n = length(rng);
    const auto p = oracle::random_distribution(rng, k, 1e-3);
    const double log2_c = log2_type_prefactor(n, k);
    for (const auto& t : enumerate_types(n, k)) {
      const auto sb = type_class_size_bounds(t);
      const double ls = type_class_size(t).log2_size;
      CHECK(sb.lower <= ls + slack);
      CHECK(ls <= sb.upper + slack);
      const auto pb = type_class_prob_bounds(t, p);
      const double lp = type_class_log_prob(t, p);
      CHECK(pb.lower <= lp + slack);
      CHECK(lp <= pb.upper + slack);
    }
    const double delta = 0.5 * unit(rng);
    if (delta > 0.0) {
      CHECK(std::log2(deviation_probability_exact(n, p, delta)) <=
            log2_c - static_cast<double>(n) * delta + slack);
    }
    const auto pi = unit(rng) < 0.5 ? ConstraintSet::at_least(0, unit(rng))
                                    : ConstraintSet::at_most(0, unit(rng));
    try {
      const auto best = sanov_exponent(pi, p, n);
      const auto prob = sanov_exact_prob(pi, p, n);
      const double nd = static_cast<double>(n) * best.d_star;
      CHECK(prob.log2_probability <= -nd + log2_c + slack);
      CHECK(prob.log2_probability >= -nd - log2_c - slack);
    } catch (const InfeasibleError&) {
      CHECK(sanov_exact_prob(pi, p, n).probability == 0.0);
    }
  }
}
