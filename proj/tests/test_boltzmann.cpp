#include <doctest.h>

#include <cmath>
#include <random>

#include "hypex/boltzmann.hpp"
#include "oracles.hpp"

using namespace hypex;
using doctest::Approx;

namespace {

VectorX<double> levels_of(std::initializer_list<double> e) {
  VectorX<double> v(static_cast<Index>(e.size()));
  Index j = 0;
  for (double x : e) v[j++] = x;
  return v;
}

// Ground level at zero and the rest spread over (0, spread]: energies
// measured from the ground state.
EnergySystem random_system(std::mt19937_64& rng, double max_beta) {
  std::uniform_int_distribution<Index> count(2, 6);
  std::uniform_real_distribution<double> energy(0.05, 2.0);
  std::uniform_real_distribution<double> beta(0.0, max_beta);
  VectorX<double> levels(count(rng));
  levels[0] = 0.0;
  for (Index j = 1; j < levels.size(); ++j) levels[j] = energy(rng);
  return EnergySystem(levels, beta(rng));
}

}  // namespace

TEST_CASE("energy system validation") {
  CHECK_THROWS_AS(EnergySystem(levels_of({1.0}), 1.0), ValidationError);
  CHECK_THROWS_AS(EnergySystem(levels_of({0, 1}), -0.5), ValidationError);
  CHECK_THROWS_AS(EnergySystem(levels_of({0, INFINITY}), 1.0), ValidationError);
}

TEST_CASE("partition function") {
  CHECK(partition_function(EnergySystem(levels_of({0, 0}), 3.0)) == 2.0);
  CHECK(partition_function(EnergySystem(levels_of({0, 1}), std::log(2.0))) == Approx(1.5));
  CHECK(partition_function(EnergySystem(levels_of({0, 1, 2}), 0.0)) == 3.0);
  // Shifted levels scale Z by exp(-beta * shift).
  CHECK(partition_function(EnergySystem(levels_of({5, 6}), std::log(2.0))) ==
        Approx(1.5 / 32.0));
  CHECK(log_partition_function(EnergySystem(levels_of({-1000, -999}), 2.0)) ==
        Approx(2000.0 + std::log(1.0 + std::exp(-2.0))));
}

TEST_CASE("boltzmann distribution") {
  const auto u = boltzmann_distribution(EnergySystem(levels_of({0, 3, 7}), 0.0));
  for (Index j = 0; j < 3; ++j) CHECK(u[j] == Approx(1.0 / 3.0).epsilon(1e-15));

  const auto two = boltzmann_distribution(EnergySystem(levels_of({0, 1}), std::log(2.0)));
  CHECK(two[0] == Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(two[1] == Approx(1.0 / 3.0).epsilon(1e-15));

  const auto cold = boltzmann_distribution(EnergySystem(levels_of({0, 1, 2}), 50.0));
  CHECK(cold[0] == Approx(1.0));
  CHECK(cold[1] < 1e-20);

  // Degenerate levels split mass evenly.
  const auto deg = boltzmann_distribution(EnergySystem(levels_of({0, 0, 1}), 1.0));
  CHECK(deg[0] == deg[1]);
}

TEST_CASE("property: normalization, monotone mean and limits") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 1000; ++i) {
    const auto sys = random_system(rng, 20.0);
    const auto p = boltzmann_distribution(sys);
    CHECK(std::abs(p.probs().sum() - 1.0) < 1e-12);
    CHECK(p.probs().minCoeff() > 0.0);
  }
  for (int i = 0; i < 50; ++i) {
    const auto base = random_system(rng, 1.0);
    double previous = INFINITY;
    for (double beta = 0.0; beta <= 10.0; beta += 0.25) {
      const double m = mean_energy(EnergySystem(base.levels(), beta));
      CHECK(m < previous);
      previous = m;
    }
    const auto hot = boltzmann_distribution(EnergySystem(base.levels(), 0.0));
    CHECK((hot.probs().array() - 1.0 / static_cast<double>(base.size())).abs().maxCoeff() < 1e-12);

    const double spread = base.levels().maxCoeff() - base.levels().minCoeff();
    const double ground = base.levels().minCoeff();
    const auto cold = boltzmann_distribution(EnergySystem(base.levels(), 51.0 / spread));
    double ground_mass = 0.0;
    for (Index j = 0; j < base.size(); ++j) {
      if (base.levels()[j] == ground) ground_mass += cold[j];
    }
    // Only meaningful when the first excited level is spread-sized away.
    VectorX<double> excited = base.levels();
    for (Index j = 0; j < excited.size(); ++j) {
      if (excited[j] == ground) excited[j] = INFINITY;
    }
    if (excited.minCoeff() - ground >= 0.5 * spread) CHECK(ground_mass >= 1.0 - 1e-9);
  }
}

TEST_CASE("solve_beta") {
  CHECK(solve_beta(levels_of({0, 1}), 0.5) == 0.0);
  CHECK(solve_beta(levels_of({0, 1}), 1.0 / 3.0) == Approx(std::log(2.0)).epsilon(1e-12));
  const double beta = solve_beta(levels_of({0, 1, 2}), 0.1, 1e-12);
  CHECK(beta > 2.0);
  CHECK(mean_energy(EnergySystem(levels_of({0, 1, 2}), beta)) == Approx(0.1).epsilon(1e-12));

  CHECK_THROWS_AS(solve_beta(levels_of({0, 1}), 0.6), InfeasibleError);
  CHECK_THROWS_AS(solve_beta(levels_of({0, 1}), 0.0), InfeasibleError);
  CHECK_THROWS_AS(solve_beta(levels_of({0, 1}), -1.0), InfeasibleError);
  CHECK_THROWS_AS(solve_beta(levels_of({2, 2}), 2.0), InfeasibleError);
}

TEST_CASE("property: beta round trip") {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 500; ++i) {
    const auto sys = random_system(rng, 20.0);
    const double recovered = solve_beta(sys.levels(), mean_energy(sys));
    CHECK(std::abs(recovered - sys.beta()) < 1e-8);
  }
}

TEST_CASE("multiplicities") {
  CHECK(log_multiplicity_exact(Occupancy{7, 0, 0}) == 0.0);
  CHECK(log_multiplicity_exact(Occupancy{2, 2}) == Approx(std::log(6.0)));
  CHECK(log_multiplicity_exact(Occupancy{1, 2, 3}) == Approx(std::log(60.0)));

  CHECK(log_multiplicity_stirling(Occupancy{7, 0}) == 0.0);
  const double stirling = log_multiplicity_stirling(Occupancy{500, 500});
  const double exact = log_multiplicity_exact(Occupancy{500, 500});
  CHECK(stirling == Approx(1000.0 * std::log(2.0)));
  CHECK(exact == Approx(689.46726156785118).epsilon(1e-13));
  CHECK((stirling - exact) / exact < 0.01);

  const double s3 = log_multiplicity_stirling(Occupancy{100, 200, 300});
  const double e3 = log_multiplicity_exact(Occupancy{100, 200, 300});
  CHECK(std::abs(s3 - e3) / e3 < 0.02);
}

TEST_CASE("stirling relative error exceeds 1% for small balanced occupancies") {
  // ln C(200, 100) = 135.7532..., Stirling gives 200 ln 2 = 138.6294...
  const double exact = log_multiplicity_exact(Occupancy{100, 100});
  const double stirling = log_multiplicity_stirling(Occupancy{100, 100});
  CHECK(exact == Approx(135.75323608127849).epsilon(1e-13));
  CHECK((stirling - exact) / exact == Approx(0.021186972139570386).epsilon(1e-9));
}

TEST_CASE("maxent verification") {
  const auto two = maxent_verify(EnergySystem(levels_of({0, 1}), 1.0), 100, 1);
  CHECK_FALSE(two.applicable);
  CHECK(two.holds);

  const auto three = maxent_verify(EnergySystem(levels_of({0, 1, 2}), 1.0), 10000, 2);
  CHECK(three.applicable);
  CHECK(three.holds);
  CHECK(three.trials == 10000);
  CHECK(three.max_excess <= 0.0);
  CHECK(three.max_constraint_error < 1e-12);

  const auto four = maxent_verify(EnergySystem(levels_of({0, 1, 2, 3}), 0.5), 10000, 3);
  CHECK(four.holds);
  CHECK(four.max_excess <= 0.0);

  // Identical levels: only normalization binds, so the uniform law is the
  // unconstrained entropy maximum.
  const auto flat = maxent_verify(EnergySystem(levels_of({1, 1, 1}), 2.0), 1000, 4);
  CHECK(flat.applicable);
  CHECK(flat.holds);

  const auto again = maxent_verify(EnergySystem(levels_of({0, 1, 2}), 1.0), 10000, 2);
  CHECK(again.max_excess == three.max_excess);
  CHECK_THROWS_AS(maxent_verify(EnergySystem(levels_of({0, 1, 2}), 1.0), 0, 2), ValidationError);
}
