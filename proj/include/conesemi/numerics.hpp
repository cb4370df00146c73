#pragma once

// Dense linear algebra and linear programming kernel.

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <vector>

#include "conesemi/error.hpp"

namespace conesemi {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kFeasibilityTol = 1e-9;
inline constexpr double kPivotTol = 1e-12;
inline constexpr double kExpmNormGuard = 1e7;
inline constexpr std::size_t kVertexEnumMaxDim = 10;

bool all_finite(const Vector& v);
bool all_finite(const Matrix& m);
double inf_norm(const Vector& v);
/// Induced infinity norm (max absolute row sum).
double inf_norm(const Matrix& m);

enum class Sense { Minimize, Maximize };

/// Linear constraints G x >= h.
struct Inequalities {
  Matrix lhs;
  Vector rhs;
};

/// Linear constraints E x = d.
struct Equalities {
  Matrix lhs;
  Vector rhs;
};

/// Variables are free; bounds are expressed as inequality rows.
struct LpProblem {
  Vector objective;
  Equalities eq;
  Inequalities ineq;
  Sense sense = Sense::Minimize;

  std::size_t num_vars() const { return static_cast<std::size_t>(objective.size()); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;
  std::optional<Vector> point;

  bool optimal() const { return status == LpStatus::Optimal; }
};

/// Two-phase dense simplex with Bland's rule. The final basis is re-solved
/// against the original data so the returned point is as accurate as the
/// basis conditioning allows.
LpResult solve_lp(const LpProblem& p);

/// Incremental construction of LpProblem rows; row coefficients are given densely.
class LpBuilder {
public:
  explicit LpBuilder(std::size_t num_vars);

  /// Appends `count` new variables and returns the index of the first one.
  std::size_t add_vars(std::size_t count);
  std::size_t num_vars() const { return num_vars_; }

  void add_ge(const Vector& row, double rhs);
  void add_le(const Vector& row, double rhs);
  void add_eq(const Vector& row, double rhs);
  /// Adds  block * x[offset .. offset+block.cols()) >= rhs  row by row.
  void add_ge_block(const Matrix& block, std::size_t offset, const Vector& rhs);
  void add_eq_block(const Matrix& block, std::size_t offset, const Vector& rhs);

  Vector zero_row() const { return Vector::Zero(static_cast<Eigen::Index>(num_vars_)); }

  LpProblem build(const Vector& objective, Sense sense) const;

private:
  std::size_t num_vars_;
  std::vector<std::pair<Vector, double>> ge_;
  std::vector<std::pair<Vector, double>> eq_;
};

struct VertexSet {
  std::vector<Vector> vertices;
  /// False when the constraint matrix has rank below the dimension: the
  /// polyhedron contains a line and has no vertex at all.
  bool pointed = true;
};

/// Brute-force enumeration over all n-subsets of active constraints. Only meant
/// as an oracle for small problems.
VertexSet enumerate_vertices(const Inequalities& ineq);

/// Solves A x = b with partial pivoting. Throws Singular when a pivot falls
/// below kPivotTol relative to the largest entry of A.
Vector linear_solve(const Matrix& a, const Vector& b);

/// LU factorization that can be reused for many right-hand sides.
class LuSolver {
public:
  explicit LuSolver(const Matrix& a);
  Vector solve(const Vector& b) const;
  Matrix solve(const Matrix& b) const;

private:
  Eigen::PartialPivLU<Matrix> lu_;
};

/// e^{tA} by scaling and squaring with a diagonal (6,6) Padé approximant.
Matrix matrix_exp(const Matrix& a, double t = 1.0);

}  // namespace conesemi
