#pragma once

#include <cstdint>

#include "hypex/distribution.hpp"
#include "hypex/types.hpp"

// Everything in this header works in natural-log units.
namespace hypex {

// Discrete energy levels at inverse temperature beta = 1/(k_B T). Energies
// are in a caller-chosen unit and beta in its inverse; k_B is never stored.
class EnergySystem {
 public:
  EnergySystem(VectorX<double> levels, double beta);

  const VectorX<double>& levels() const { return levels_; }
  double beta() const { return beta_; }
  Index size() const { return levels_.size(); }

 private:
  VectorX<double> levels_;
  double beta_;
};

// sum_j exp(-beta eps_j). Evaluated relative to the ground level; may
// overflow to +inf for very negative energies at large beta, in which case
// log_partition_function() is the usable form.
double partition_function(const EnergySystem& sys);
double log_partition_function(const EnergySystem& sys);

// P_j = exp(-beta eps_j) / Z.
Distribution boltzmann_distribution(const EnergySystem& sys);

// sum_j eps_j P_j.
double mean_energy(const EnergySystem& sys);

// Natural-log Shannon entropy, -sum p ln p.
double entropy_nats(const Distribution& p);

// beta >= 0 whose Boltzmann mean energy equals target_mean within tol.
// Throws InfeasibleError unless min(levels) < target_mean <= mean(levels).
double solve_beta(const VectorX<double>& levels, double target_mean, double tol = 1e-12);

// Particle counts N_j per level; the total N is n().
using Occupancy = EmpiricalType;

// ln of the number of microstates N! / prod N_j!.
double log_multiplicity_exact(const Occupancy& occupancy);

// Stirling form N ln N - sum N_j ln N_j, with 0 ln 0 = 0.
double log_multiplicity_stirling(const Occupancy& occupancy);

struct MaxEntReport {
  bool applicable;      // false when the mean pins the distribution
  bool holds;           // no perturbation beat the Boltzmann entropy
  double max_excess;    // max over draws of H(q) - H(P_B), nats
  std::uint64_t trials;
  double max_constraint_error;  // worst |sum q - 1| or |mean(q) - mean(P_B)|
};

// Samples random distributions with the same normalization and mean energy
// as the Boltzmann solution and compares their entropy against it.
MaxEntReport maxent_verify(const EnergySystem& sys, std::uint64_t trials, std::uint64_t seed);

}  // namespace hypex
