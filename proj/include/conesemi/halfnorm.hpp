#pragma once

// Sublinear functions on an ordered space and their subdifferentials, all
// evaluated as linear programs over a PolyCone (or in closed form).

#include <optional>
#include <string_view>
#include <variant>

#include "conesemi/cone.hpp"

namespace conesemi {

enum class NormKind { WeightedL1, WeightedLInf };

/// Ambient norm: sum w_i |x_i| or max w_i |x_i| with w > 0.
struct NormSpec {
  NormKind kind = NormKind::WeightedLInf;
  Vector weights;

  static NormSpec l1(std::size_t n) { return {NormKind::WeightedL1, Vector::Ones(static_cast<Eigen::Index>(n))}; }
  static NormSpec linf(std::size_t n) { return {NormKind::WeightedLInf, Vector::Ones(static_cast<Eigen::Index>(n))}; }

  double operator()(const Vector& x) const;
  double dual(const Vector& u) const;
  void validate(std::size_t dim) const;
};

/// inf{ |y| : y >= x }.
struct CanonicalGauge { NormSpec norm; };
/// inf{ |y|_r : y >= 0, y >= x } with |.|_r the regularization of the norm.
struct RegularGauge { NormSpec norm; };
/// inf{ <y, phi> : y >= 0, y >= x } for a positive functional phi.
struct PhiGauge { Vector phi; };
/// inf{ lambda >= 0 : x <= lambda u } for an order unit u.
struct OrderUnitGauge { Vector unit; };
/// |x^+| on a lattice cone.
struct PositivePartNorm { NormSpec norm; };
/// The plain Euclidean norm, used as the p of the two-matrix counterexample.
struct EuclideanNorm {};

using HalfNormVariant =
    std::variant<CanonicalGauge, RegularGauge, PhiGauge, OrderUnitGauge, PositivePartNorm, EuclideanNorm>;

/// A sublinear function bound to the cone that orders the space. Factories
/// check each variant's precondition, so a constructed HalfNorm is always valid.
class HalfNorm {
public:
  static HalfNorm canonical(PolyCone cone, NormSpec norm);
  static HalfNorm regular_gauge(PolyCone cone, NormSpec norm);
  /// Throws NotPositive unless phi lies in K'.
  static HalfNorm phi(PolyCone cone, Vector phi);
  /// Throws NotOrderUnit unless u is interior to K.
  static HalfNorm order_unit(PolyCone cone, Vector unit);
  /// Throws VariantPreconditionFailed unless the cone is a lattice.
  static HalfNorm positive_part_norm(PolyCone cone, NormSpec norm);
  static HalfNorm euclidean(PolyCone cone);

  const PolyCone& cone() const { return cone_; }
  const HalfNormVariant& variant() const { return variant_; }
  std::size_t dim() const { return cone_.dim(); }
  std::string_view kind_name() const;

private:
  HalfNorm(PolyCone cone, HalfNormVariant v) : cone_(std::move(cone)), variant_(std::move(v)) {}

  PolyCone cone_;
  HalfNormVariant variant_;
};

/// p(x). Returns exactly 0 when -x lies in K for the gauge variants.
double eval(const HalfNorm& p, const Vector& x);

/// |x|_r = inf{ |z| : -z <= x <= z }.
double regularized_norm(const PolyCone& cone, const NormSpec& norm, const Vector& x);

/// A constraint description of dp(x).
struct SubdiffDesc {
  enum class Kind { Polyhedral, Singleton, AnalyticBall };

  Kind kind = Kind::Singleton;
  std::size_t dim = 0;

  /// Polyhedral: the first `dim` variables are u, the rest are auxiliary.
  LpProblem constraints;
  /// Singleton.
  Vector point;
  /// AnalyticBall: { u : |u|_2 <= radius, u in restriction } (centred at 0,
  /// which is where it arises: the Euclidean norm at x = 0).
  double radius = 0.0;
  std::optional<PolyCone> restriction;
};

/// Throws VariantUnsupported for RegularGauge and EmptySubdifferential when
/// the set is empty (possible for Euclidean and PositivePartNorm off the cone).
SubdiffDesc subdifferential(const HalfNorm& p, const Vector& x);

struct SubdiffOptimum {
  double value = 0.0;
  Vector point;
};

/// Optimizes <c, u> over the subdifferential: an LP for the polyhedral kind,
/// closed forms otherwise.
SubdiffOptimum optimize_over_subdiff(const SubdiffDesc& d, const Vector& c, Sense sense);

/// Vertices of a polyhedral subdifferential (projected onto u). Brute force,
/// dimension-guarded; the other kinds return their single point or throw.
std::vector<Vector> subdiff_vertices(const SubdiffDesc& d);

/// Euclidean projection of v onto the cone spanned by `rays` (exhaustive
/// active-set search; intended for a handful of rays).
Vector project_onto_cone(const std::vector<Vector>& rays, const Vector& v);

}  // namespace conesemi
