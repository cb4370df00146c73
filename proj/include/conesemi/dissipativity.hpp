#pragma once

// p-dissipativity and the positive off-diagonal property of operators with
// (optionally) restricted polyhedral domains.

#include <cstdint>
#include <optional>

#include "conesemi/halfnorm.hpp"

namespace conesemi {

inline constexpr double kDissipativityTol = 1e-9;

/// {x : G x >= h, E x = d}.
struct Domain {
  Inequalities ineq;
  Equalities eq;
};

/// A square matrix acting on an optional polyhedral domain.
class LinOp {
public:
  explicit LinOp(Matrix matrix);
  /// Throws EmptyDomain if the domain has no point.
  LinOp(Matrix matrix, Domain domain);

  const Matrix& matrix() const { return matrix_; }
  const std::optional<Domain>& domain() const { return domain_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }

  bool in_domain(const Vector& x, double tol = kFeasibilityTol) const;
  Vector apply(const Vector& x) const;

private:
  Matrix matrix_;
  std::optional<Domain> domain_;
};

struct PointCheck {
  bool ok = false;
  /// min (or max, for the strict test) of <Ax, u> over u in dp(x).
  double margin = 0.0;
  /// The optimizing u.
  Vector functional;
};

/// Exact test of "some u in dp(x) has <Ax, u> <= 0". Throws NotInDomain.
PointCheck is_dissipative_at(const LinOp& a, const HalfNorm& p, const Vector& x);
/// Exact test of "every u in dp(x) has <Ax, u> <= 0".
PointCheck is_strictly_dissipative_at(const LinOp& a, const HalfNorm& p, const Vector& x);

/// Tests the cone generators, structural domain points (vertices of the
/// domain cut by the unit box) and `n_samples` seeded random domain points.
/// A violation yields Fails with witnesses; otherwise the verdict is
/// Inconclusive because sampling cannot prove a universal statement.
Report certify_dissipative(const LinOp& a, const HalfNorm& p, std::size_t n_samples, std::uint64_t seed);

/// Positive off-diagonal property via extreme pairs (g, f): g an extreme ray of
/// K, f an extreme ray of K' with <g, f> = 0, requiring <A g, f> >= 0. If
/// the domain does not contain all of K only in-domain rays are checked and
/// the verdict is at best Inconclusive.
Report has_pod(const LinOp& a, const PolyCone& cone);

/// Metzler sign pattern: off-diagonal entries >= -1e-12.
bool pod_matrix_characterization(const Matrix& a);

/// Seeded points of the operator's domain (uniform box samples when the
/// domain is the whole space). Shared by the sampling-based checks.
std::vector<Vector> sample_domain(const LinOp& a, std::size_t n_samples, std::uint64_t seed);

}  // namespace conesemi
