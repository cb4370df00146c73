#include "conesemi/representation.hpp"

#include <cmath>
#include <numeric>

namespace conesemi {

double Measure::total_mass() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

StateSpace build_states(const PolyCone& cone, const Vector& u) {
  if (!is_order_unit(cone, u)) throw Error(ErrorCode::NotOrderUnit, "u is not an order unit (interior point) of K");
  StateSpace s;
  s.unit = u;
  for (const auto& f : cone.facets()) s.states.push_back({f / u.dot(f), true});
  return s;
}

Vector embed(const StateSpace& s, const Vector& x) {
  if (x.size() != s.unit.size()) throw Error(ErrorCode::DimensionMismatch, "vector does not match the state space");
  Vector out(static_cast<Eigen::Index>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i) out(static_cast<Eigen::Index>(i)) = x.dot(s.states[i].coords);
  return out;
}

Vector integrate(const StateSpace& s, const Measure& mu) {
  Vector phi = Vector::Zero(s.unit.size());
  for (std::size_t i = 0; i < s.size(); ++i) phi += mu.weights[i] * s.states[i].coords;
  return phi;
}

Measure represent_functional(const StateSpace& s, const DualVector& phi) {
  const auto n = s.unit.size();
  if (phi.coords.size() != n) throw Error(ErrorCode::DimensionMismatch, "functional does not match the state space");
  if (!phi.certified_positive) throw Error(ErrorCode::NotPositive, "only positive functionals have a representing measure");

  const auto k = s.size();
  LpBuilder lp(k);
  Matrix omega(n, static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < k; ++i) omega.col(static_cast<Eigen::Index>(i)) = s.states[i].coords;
  lp.add_eq_block(omega, 0, phi.coords);
  lp.add_ge_block(Matrix::Identity(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)), 0,
                  Vector::Zero(static_cast<Eigen::Index>(k)));
  const auto res = solve_lp(lp.build(Vector::Ones(static_cast<Eigen::Index>(k)), Sense::Minimize));
  if (!res.optimal()) throw Error(ErrorCode::NotRepresentable, "no nonnegative measure reproduces phi");

  Measure mu;
  for (std::size_t i = 0; i < k; ++i) {
    const double w = (*res.point)(static_cast<Eigen::Index>(i));
    mu.weights.push_back(w < 0.0 && w >= -1e-12 ? 0.0 : w);
  }
  for (const double w : mu.weights) {
    if (w < 0.0) throw Error(ErrorCode::NotRepresentable, "negative weight beyond tolerance");
  }
  if ((integrate(s, mu) - phi.coords).cwiseAbs().maxCoeff() > 1e-9) {
    throw Error(ErrorCode::NotRepresentable, "reproduction residual exceeds 1e-9");
  }
  return mu;
}

}  // namespace conesemi
