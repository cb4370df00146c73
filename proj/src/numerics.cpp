#include "conesemi/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace conesemi {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedProblem: return "MalformedProblem";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::NormTooLarge: return "NormTooLarge";
    case ErrorCode::NotPointed: return "NotPointed";
    case ErrorCode::NotFullDimensional: return "NotFullDimensional";
    case ErrorCode::NotLattice: return "NotLattice";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::EmptyPhi: return "EmptyPhi";
    case ErrorCode::NotGenerating: return "NotGenerating";
    case ErrorCode::VariantPreconditionFailed: return "VariantPreconditionFailed";
    case ErrorCode::VariantUnsupported: return "VariantUnsupported";
    case ErrorCode::Unbounded: return "Unbounded";
    case ErrorCode::EmptySubdifferential: return "EmptySubdifferential";
    case ErrorCode::NotInDomain: return "NotInDomain";
    case ErrorCode::EmptyDomain: return "EmptyDomain";
    case ErrorCode::NotOrderUnit: return "NotOrderUnit";
    case ErrorCode::NotRepresentable: return "NotRepresentable";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

bool all_finite(const Vector& v) { return v.allFinite(); }
bool all_finite(const Matrix& m) { return m.allFinite(); }

double inf_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

double inf_norm(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().rowwise().sum().maxCoeff();
}

// ---------------------------------------------------------------------------
// Simplex
// ---------------------------------------------------------------------------

namespace {

constexpr double kReducedCostTol = 1e-10;
constexpr double kRatioPivotTol = 1e-9;

// Dense tableau for  min c x  s.t.  A x = b, x >= 0, b >= 0.
// Columns: [structural | artificial | rhs]; the last row holds reduced costs
// and minus the objective value in the rhs slot.
class Tableau {
public:
  Tableau(const Matrix& a, const Vector& b)
      : m_(static_cast<std::size_t>(a.rows())),
        n_(static_cast<std::size_t>(a.cols())),
        width_(n_ + m_ + 1),
        data_((m_ + 1) * width_, 0.0),
        basis_(m_),
        active_(m_, true) {
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) at(i, j) = a(i, j);
      at(i, n_ + i) = 1.0;
      at(i, rhs()) = b(i);
      basis_[i] = n_ + i;
    }
  }

  double& at(std::size_t r, std::size_t c) { return data_[r * width_ + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * width_ + c]; }
  std::size_t rhs() const { return width_ - 1; }
  std::size_t obj() const { return m_; }

  void set_objective(const Vector& cost_full) {
    // cost_full has n_ + m_ entries (structural + artificial).
    for (std::size_t j = 0; j < width_; ++j) at(obj(), j) = 0.0;
    for (std::size_t j = 0; j < n_ + m_; ++j) at(obj(), j) = cost_full(j);
    for (std::size_t i = 0; i < m_; ++i) {
      if (!active_[i]) continue;
      const double cb = cost_full(basis_[i]);
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j < width_; ++j) at(obj(), j) -= cb * at(i, j);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    const double p = at(r, c);
    for (std::size_t j = 0; j < width_; ++j) at(r, j) /= p;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const double f = at(i, c);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width_; ++j) at(i, j) -= f * at(r, j);
      at(i, c) = 0.0;
    }
    basis_[r] = c;
  }

  enum class Outcome { Optimal, Unbounded };

  // Bland's rule: lowest-index entering column, ties in the ratio test go to
  // the lowest-index basic variable.
  Outcome run(std::size_t allowed_cols, std::size_t& iterations, std::size_t cap) {
    while (true) {
      if (++iterations > cap) {
        throw Error(ErrorCode::NumericalFailure, "simplex iteration cap exceeded");
      }
      std::size_t enter = allowed_cols;
      for (std::size_t j = 0; j < allowed_cols; ++j) {
        if (at(obj(), j) < -kReducedCostTol) {
          enter = j;
          break;
        }
      }
      if (enter == allowed_cols) return Outcome::Optimal;

      // Ratio test: minimal ratio first, then among near-ties the rows whose
      // pivot is within a factor 10 of the largest, lowest basis index first.
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        if (!active_[i] || at(i, enter) <= kRatioPivotTol) continue;
        best = std::min(best, std::max(at(i, rhs()), 0.0) / at(i, enter));
      }
      std::size_t leave = m_;
      if (std::isfinite(best)) {
        const double cutoff = best + 1e-12 * (1.0 + best);
        double max_pivot = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
          if (!active_[i] || at(i, enter) <= kRatioPivotTol) continue;
          if (std::max(at(i, rhs()), 0.0) / at(i, enter) <= cutoff) max_pivot = std::max(max_pivot, at(i, enter));
        }
        for (std::size_t i = 0; i < m_; ++i) {
          const double coef = at(i, enter);
          if (!active_[i] || coef < 0.1 * max_pivot || coef <= kRatioPivotTol) continue;
          if (std::max(at(i, rhs()), 0.0) / coef > cutoff) continue;
          if (leave == m_ || basis_[i] < basis_[leave]) leave = i;
        }
      }
      if (leave == m_) return Outcome::Unbounded;
      pivot(leave, enter);
    }
  }

  // After phase 1: pivot artificials out of the basis or drop their rows.
  void expel_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (!active_[i] || basis_[i] < n_) continue;
      std::size_t best_col = n_;
      double best_mag = 1e-9;
      for (std::size_t j = 0; j < n_; ++j) {
        const double mag = std::abs(at(i, j));
        if (mag > best_mag) {
          best_mag = mag;
          best_col = j;
        }
      }
      if (best_col == n_) {
        active_[i] = false;  // redundant equality
      } else {
        pivot(i, best_col);
      }
    }
  }

  std::size_t rows() const { return m_; }
  std::size_t structural() const { return n_; }
  const std::vector<std::size_t>& basis() const { return basis_; }
  bool active(std::size_t i) const { return active_[i]; }

private:
  std::size_t m_;
  std::size_t n_;
  std::size_t width_;
  std::vector<double> data_;
  std::vector<std::size_t> basis_;
  std::vector<bool> active_;
};

void check_dimensions(const LpProblem& p) {
  const auto n = p.objective.size();
  if (n == 0) throw Error(ErrorCode::MalformedProblem, "LP has no variables");
  auto bad = [&](const Matrix& a, const Vector& b, const char* what) {
    if ((a.rows() > 0 && a.cols() != n) || a.rows() != b.size()) {
      std::ostringstream os;
      os << what << " constraints are " << a.rows() << "x" << a.cols() << " with rhs " << b.size()
         << " for " << n << " variables";
      throw Error(ErrorCode::MalformedProblem, os.str());
    }
  };
  bad(p.eq.lhs, p.eq.rhs, "equality");
  bad(p.ineq.lhs, p.ineq.rhs, "inequality");
  if (!p.objective.allFinite() || !p.eq.lhs.allFinite() || !p.eq.rhs.allFinite() ||
      !p.ineq.lhs.allFinite() || !p.ineq.rhs.allFinite()) {
    throw Error(ErrorCode::MalformedProblem, "LP data contains non-finite entries");
  }
}

double max_violation(const LpProblem& p, const Vector& x) {
  double v = 0.0;
  if (p.eq.lhs.rows() > 0) {
    const Vector r = p.eq.lhs * x - p.eq.rhs;
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      v = std::max(v, std::abs(r(i)) / (1.0 + std::abs(p.eq.rhs(i))));
    }
  }
  if (p.ineq.lhs.rows() > 0) {
    const Vector r = p.ineq.lhs * x - p.ineq.rhs;
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      v = std::max(v, -r(i) / (1.0 + std::abs(p.ineq.rhs(i))));
    }
  }
  return v;
}

}  // namespace

LpResult solve_lp(const LpProblem& p) {
  check_dimensions(p);
  const auto n = p.objective.size();
  const auto me = p.eq.lhs.rows();
  const auto mi = p.ineq.lhs.rows();
  const auto m = me + mi;
  const auto n_std = 2 * n + mi;  // x+ , x- , surplus

  if (m == 0) {
    if (p.objective.cwiseAbs().maxCoeff() > 0.0) return {LpStatus::Unbounded, 0.0, std::nullopt};
    return {LpStatus::Optimal, 0.0, Vector::Zero(n)};
  }

  Matrix a = Matrix::Zero(m, n_std);
  Vector b(m);
  if (me > 0) {
    a.block(0, 0, me, n) = p.eq.lhs;
    a.block(0, n, me, n) = -p.eq.lhs;
    b.head(me) = p.eq.rhs;
  }
  if (mi > 0) {
    a.block(me, 0, mi, n) = p.ineq.lhs;
    a.block(me, n, mi, n) = -p.ineq.lhs;
    a.block(me, 2 * n, mi, mi) = -Matrix::Identity(mi, mi);
    b.tail(mi) = p.ineq.rhs;
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    if (b(i) < 0.0) {
      a.row(i) *= -1.0;
      b(i) = -b(i);
    }
  }

  Tableau tab(a, b);
  const auto n_std_u = static_cast<std::size_t>(n_std);
  const auto m_u = static_cast<std::size_t>(m);
  std::size_t iterations = 0;
  const std::size_t cap = 200 * (n_std_u + m_u) + 1000;

  Vector phase1_cost = Vector::Zero(n_std + m);
  phase1_cost.tail(m).setOnes();
  tab.set_objective(phase1_cost);
  tab.run(n_std_u + m_u, iterations, cap);
  const double infeas = -tab.at(tab.obj(), tab.rhs());
  if (infeas > kFeasibilityTol * (1.0 + b.maxCoeff())) {
    return {LpStatus::Infeasible, 0.0, std::nullopt};
  }
  tab.expel_artificials();

  const double sign = p.sense == Sense::Maximize ? -1.0 : 1.0;
  Vector cost = Vector::Zero(n_std + m);
  cost.head(n) = sign * p.objective;
  cost.segment(n, n) = -sign * p.objective;
  tab.set_objective(cost);
  if (tab.run(n_std_u, iterations, cap) == Tableau::Outcome::Unbounded) {
    return {LpStatus::Unbounded, 0.0, std::nullopt};
  }

  // Basic solution straight from the tableau.
  Vector z = Vector::Zero(n_std);
  std::vector<Eigen::Index> rows;
  std::vector<Eigen::Index> cols;
  for (std::size_t i = 0; i < m_u; ++i) {
    if (!tab.active(i)) continue;
    const auto col = tab.basis()[i];
    if (col >= n_std_u) continue;  // artificial at zero level in a degenerate row
    z(static_cast<Eigen::Index>(col)) = std::max(tab.at(i, tab.rhs()), 0.0);
    rows.push_back(static_cast<Eigen::Index>(i));
    cols.push_back(static_cast<Eigen::Index>(col));
  }
  Vector x = z.head(n) - z.segment(n, n);

  // Polish: re-solve the basis system against the original data.
  if (!rows.empty() && rows.size() == cols.size()) {
    const auto k = static_cast<Eigen::Index>(rows.size());
    Matrix basis_matrix(k, k);
    Vector basis_rhs(k);
    for (Eigen::Index r = 0; r < k; ++r) {
      for (Eigen::Index c = 0; c < k; ++c) basis_matrix(r, c) = a(rows[r], cols[c]);
      basis_rhs(r) = b(rows[r]);
    }
    Eigen::FullPivLU<Matrix> lu(basis_matrix);
    if (lu.isInvertible()) {
      const Vector zb = lu.solve(basis_rhs);
      Vector z2 = Vector::Zero(n_std);
      bool nonneg = true;
      for (Eigen::Index c = 0; c < k; ++c) {
        if (zb(c) < -kFeasibilityTol) nonneg = false;
        z2(cols[c]) = std::max(zb(c), 0.0);
      }
      const Vector x2 = z2.head(n) - z2.segment(n, n);
      if (nonneg && max_violation(p, x2) <= max_violation(p, x) + 1e-15) x = x2;
    }
  }
  if (max_violation(p, x) > 1e-7) {
    throw Error(ErrorCode::NumericalFailure, "simplex returned a point violating the constraints");
  }
  return {LpStatus::Optimal, p.objective.dot(x), x};
}

// ---------------------------------------------------------------------------
// LpBuilder
// ---------------------------------------------------------------------------

LpBuilder::LpBuilder(std::size_t num_vars) : num_vars_(num_vars) {}

std::size_t LpBuilder::add_vars(std::size_t count) {
  const std::size_t first = num_vars_;
  num_vars_ += count;
  return first;
}

void LpBuilder::add_ge(const Vector& row, double rhs) { ge_.emplace_back(row, rhs); }
void LpBuilder::add_le(const Vector& row, double rhs) { ge_.emplace_back(-row, -rhs); }
void LpBuilder::add_eq(const Vector& row, double rhs) { eq_.emplace_back(row, rhs); }

void LpBuilder::add_ge_block(const Matrix& block, std::size_t offset, const Vector& rhs) {
  for (Eigen::Index r = 0; r < block.rows(); ++r) {
    Vector row = zero_row();
    row.segment(static_cast<Eigen::Index>(offset), block.cols()) = block.row(r).transpose();
    add_ge(row, rhs(r));
  }
}

void LpBuilder::add_eq_block(const Matrix& block, std::size_t offset, const Vector& rhs) {
  for (Eigen::Index r = 0; r < block.rows(); ++r) {
    Vector row = zero_row();
    row.segment(static_cast<Eigen::Index>(offset), block.cols()) = block.row(r).transpose();
    add_eq(row, rhs(r));
  }
}

LpProblem LpBuilder::build(const Vector& objective, Sense sense) const {
  const auto n = static_cast<Eigen::Index>(num_vars_);
  LpProblem p;
  p.objective = Vector::Zero(n);
  p.objective.head(objective.size()) = objective;
  p.sense = sense;
  auto fill = [n](const std::vector<std::pair<Vector, double>>& rows, Matrix& lhs, Vector& rhs) {
    lhs = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), n);
    rhs = Vector::Zero(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      lhs.row(r).head(rows[i].first.size()) = rows[i].first.transpose();
      rhs(r) = rows[i].second;
    }
  };
  fill(ge_, p.ineq.lhs, p.ineq.rhs);
  fill(eq_, p.eq.lhs, p.eq.rhs);
  return p;
}

// ---------------------------------------------------------------------------
// Vertex enumeration
// ---------------------------------------------------------------------------

VertexSet enumerate_vertices(const Inequalities& ineq) {
  const auto n = ineq.lhs.cols();
  const auto m = ineq.lhs.rows();
  if (n <= 0) throw Error(ErrorCode::MalformedProblem, "polyhedron has dimension 0");
  if (static_cast<std::size_t>(n) > kVertexEnumMaxDim) {
    throw Error(ErrorCode::DimensionTooLarge, "vertex enumeration is limited to dimension 10");
  }
  if (ineq.rhs.size() != m) throw Error(ErrorCode::MalformedProblem, "rhs length mismatch");

  VertexSet out;
  if (m < n || Eigen::FullPivLU<Matrix>(ineq.lhs).rank() < n) {
    out.pointed = false;
    return out;
  }

  double combos = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) combos = combos * static_cast<double>(m - i) / static_cast<double>(i + 1);
  if (combos > 5e7) throw Error(ErrorCode::DimensionTooLarge, "too many active-set combinations");

  const double scale = std::max(1.0, ineq.lhs.cwiseAbs().maxCoeff());
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  Matrix sub(n, n);
  Vector rhs(n);
  while (true) {
    for (Eigen::Index r = 0; r < n; ++r) {
      sub.row(r) = ineq.lhs.row(idx[static_cast<std::size_t>(r)]);
      rhs(r) = ineq.rhs(idx[static_cast<std::size_t>(r)]);
    }
    Eigen::PartialPivLU<Matrix> lu(sub);
    const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (min_pivot > 1e-10 * scale) {
      const Vector x = lu.solve(rhs);
      const Vector slack = ineq.lhs * x - ineq.rhs;
      bool feasible = x.allFinite();
      for (Eigen::Index i = 0; feasible && i < m; ++i) {
        if (slack(i) < -kFeasibilityTol * (1.0 + std::abs(ineq.rhs(i)))) feasible = false;
      }
      if (feasible) {
        const bool dup = std::any_of(out.vertices.begin(), out.vertices.end(), [&](const Vector& v) {
          return (v - x).cwiseAbs().maxCoeff() <= kFeasibilityTol * (1.0 + inf_norm(x));
        });
        if (!dup) out.vertices.push_back(x);
      }
    }
    // next combination
    Eigen::Index k = n - 1;
    while (k >= 0 && idx[static_cast<std::size_t>(k)] == m - n + k) --k;
    if (k < 0) break;
    ++idx[static_cast<std::size_t>(k)];
    for (Eigen::Index j = k + 1; j < n; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Linear solves and the matrix exponential
// ---------------------------------------------------------------------------

LuSolver::LuSolver(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "linear_solve needs a nonempty square matrix");
  }
  if (!a.allFinite()) throw Error(ErrorCode::InvalidArgument, "matrix has non-finite entries");
  lu_.compute(a);
  const double scale = a.cwiseAbs().maxCoeff();
  const double min_pivot = lu_.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (scale == 0.0 || min_pivot < kPivotTol * scale) {
    std::ostringstream os;
    os << "pivot " << min_pivot << " below relative threshold " << kPivotTol;
    throw Error(ErrorCode::Singular, os.str());
  }
}

Vector LuSolver::solve(const Vector& b) const {
  if (b.size() != lu_.rows()) throw Error(ErrorCode::DimensionMismatch, "rhs length mismatch");
  return lu_.solve(b);
}

Matrix LuSolver::solve(const Matrix& b) const {
  if (b.rows() != lu_.rows()) throw Error(ErrorCode::DimensionMismatch, "rhs rows mismatch");
  return lu_.solve(b);
}

Vector linear_solve(const Matrix& a, const Vector& b) { return LuSolver(a).solve(b); }

Matrix matrix_exp(const Matrix& a, double t) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "matrix_exp needs a nonempty square matrix");
  }
  if (!(t >= 0.0) || !std::isfinite(t)) throw Error(ErrorCode::InvalidArgument, "matrix_exp needs t >= 0");
  if (!a.allFinite()) throw Error(ErrorCode::InvalidArgument, "matrix has non-finite entries");

  const auto n = a.rows();
  const Matrix ta = t * a;
  const double norm = inf_norm(ta);
  if (norm > kExpmNormGuard) {
    std::ostringstream os;
    os << "|tA|_inf = " << norm << " exceeds " << kExpmNormGuard;
    throw Error(ErrorCode::NormTooLarge, os.str());
  }
  int squarings = 0;
  while (std::ldexp(norm, -squarings) > 0.5) ++squarings;
  const Matrix b = std::ldexp(1.0, -squarings) * ta;

  // (6,6) Padé coefficients c_j = (12-j)! 6! / (12! j! (6-j)!).
  constexpr double c[] = {1.0, 1.0 / 2.0, 5.0 / 44.0, 1.0 / 66.0, 1.0 / 792.0, 1.0 / 15840.0, 1.0 / 665280.0};
  const Matrix id = Matrix::Identity(n, n);
  const Matrix b2 = b * b;
  const Matrix b4 = b2 * b2;
  const Matrix b6 = b4 * b2;
  const Matrix u = b * (c[1] * id + c[3] * b2 + c[5] * b4);
  const Matrix v = c[0] * id + c[2] * b2 + c[4] * b4 + c[6] * b6;
  Matrix r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) r = r * r;
  return r;
}

}  // namespace conesemi
