#pragma once

// Polyhedral cones and the order they induce.

#include <span>
#include <vector>

#include "conesemi/numerics.hpp"
#include "conesemi/report.hpp"

namespace conesemi {

/// Membership tolerance; every other check composes it.
inline constexpr double kConeTol = 1e-10;

/// A pointed, full-dimensional polyhedral cone carried in both descriptions:
/// K = cone(generators) = {x : <x, f> >= 0 for every facet normal f}.
/// Generators are the extreme rays (proportional or redundant input rays are
/// dropped); facet normals are scaled to unit max-norm and sorted.
class PolyCone {
public:
  /// Computes the facet description by enumerating (dim-1)-subsets of rays.
  static PolyCone from_generators(std::vector<Vector> rays);
  /// The nonnegative orthant with the coordinate vectors as rays and facets.
  static PolyCone orthant(std::size_t n);

  std::size_t dim() const { return dim_; }
  const std::vector<Vector>& generators() const { return generators_; }
  const std::vector<Vector>& facets() const { return facets_; }
  /// Generators as columns.
  Matrix generator_matrix() const;
  /// Facet normals as rows.
  Matrix facet_matrix() const;

  /// K' realized with the facet normals as generators and the generators as facets.
  PolyCone dual() const;

private:
  PolyCone(std::size_t dim, std::vector<Vector> generators, std::vector<Vector> facets)
      : dim_(dim), generators_(std::move(generators)), facets_(std::move(facets)) {}

  std::size_t dim_;
  std::vector<Vector> generators_;
  std::vector<Vector> facets_;
};

/// A linear functional together with whether it was checked to lie in K'.
struct DualVector {
  Vector coords;
  bool certified_positive = false;

  /// Checks <g, coords> >= -kConeTol on the generators of `cone`.
  static DualVector certify(const PolyCone& cone, Vector coords);
};

bool contains(const PolyCone& cone, const Vector& x);
/// x <= y in the cone order.
bool leq(const PolyCone& cone, const Vector& x, const Vector& y);
/// Simplicial cones (dim independent extreme rays) are exactly the lattice cones.
bool is_lattice(const PolyCone& cone);
/// Least y with y >= 0 and y >= x. Throws NotLattice on non-simplicial cones.
Vector positive_part(const PolyCone& cone, const Vector& x);
bool is_order_unit(const PolyCone& cone, const Vector& u);

/// Decides whether {x : <x, phi> >= 0 for all phi} is contained in K by one LP
/// per facet over the box |x|_inf <= 1. A failure carries the LP minimizer.
Report is_total(const PolyCone& cone, std::span<const DualVector> phis);

}  // namespace conesemi
