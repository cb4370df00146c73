#pragma once

// Finite functional representation of an ordered space with order unit: the
// states are the normalized extreme rays of K', the embedding evaluates x on
// each state, and positive functionals become nonnegative weights on states.
//
// In finite dimension the embedding is bipositive and injective; the order
// density of the image in C(Omega) is an infinite-dimensional property that is
// not modelled here.

#include "conesemi/cone.hpp"

namespace conesemi {

struct StateSpace {
  /// Extreme rays omega of K' scaled so that <u, omega> = 1.
  std::vector<DualVector> states;
  Vector unit;

  std::size_t size() const { return states.size(); }
};

struct Measure {
  std::vector<double> weights;  // aligned with StateSpace::states, all >= 0

  double total_mass() const;
};

/// Throws NotOrderUnit unless u is interior to K.
StateSpace build_states(const PolyCone& cone, const Vector& u);

/// (<x, omega>) over the states.
Vector embed(const StateSpace& s, const Vector& x);

/// mu >= 0 with sum mu_omega omega = phi, minimizing total mass (LP).
/// Throws NotPositive for an uncertified phi and NotRepresentable when the
/// reproduction residual exceeds 1e-9.
Measure represent_functional(const StateSpace& s, const DualVector& phi);

/// phi reconstructed from the measure: sum mu_omega omega.
Vector integrate(const StateSpace& s, const Measure& mu);

}  // namespace conesemi
