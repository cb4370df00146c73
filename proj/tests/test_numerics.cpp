#include <doctest.h>

#include <cmath>
#include <limits>

#include "conesemi/error.hpp"
#include "conesemi/numerics.hpp"
#include "support.hpp"

using namespace conesemi;
using testing::Gen;

namespace {

LpProblem min_problem(const Vector& c, Inequalities ineq) {
  LpProblem p;
  p.objective = c;
  p.ineq = std::move(ineq);
  p.eq = {Matrix(0, c.size()), Vector(0)};
  p.sense = Sense::Minimize;
  return p;
}

Inequalities box(Eigen::Index n) {
  Inequalities b{Matrix::Zero(2 * n, n), Vector::Constant(2 * n, -1.0)};
  for (Eigen::Index i = 0; i < n; ++i) {
    b.lhs(2 * i, i) = 1.0;
    b.lhs(2 * i + 1, i) = -1.0;
  }
  return b;
}

Inequalities stack(const Inequalities& a, const Inequalities& b) {
  Inequalities s{Matrix(a.lhs.rows() + b.lhs.rows(), a.lhs.cols()), Vector(a.rhs.size() + b.rhs.size())};
  s.lhs << a.lhs, b.lhs;
  s.rhs << a.rhs, b.rhs;
  return s;
}

// 2x2 rotation by angle a.
Matrix rotation(double a) { return testing::m2(std::cos(a), std::sin(a), -std::sin(a), std::cos(a)); }

}  // namespace

TEST_CASE("solve_lp: single bound") {
  Matrix g(1, 1);
  g << 1.0;
  Vector h(1);
  h << 3.0;
  const auto r = solve_lp(min_problem(Vector::Ones(1), {g, h}));
  REQUIRE(r.optimal());
  CHECK(r.value == doctest::Approx(3.0).epsilon(1e-12));
  CHECK((*r.point)(0) == doctest::Approx(3.0));
}

TEST_CASE("solve_lp: origin optimal") {
  Matrix g(3, 2);
  g << 1, 0, 0, 1, 1, 1;
  const auto r = solve_lp(min_problem(Vector::Ones(2), {g, Vector::Zero(3)}));
  REQUIRE(r.optimal());
  CHECK(std::abs(r.value) <= 1e-12);
  CHECK(r.point->cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("solve_lp: contradictory bounds are infeasible") {
  Matrix g(2, 1);
  g << -1, 1;
  Vector h(2);
  h << 1, 0;
  const auto r = solve_lp(min_problem(Vector::Ones(1), {g, h}));
  CHECK(r.status == LpStatus::Infeasible);
  CHECK_FALSE(r.point.has_value());
}

TEST_CASE("solve_lp: unbounded, maximize and equalities") {
  Matrix g(1, 1);
  g << 1.0;
  Vector h(1);
  h << 0.0;
  auto p = min_problem(Vector::Ones(1), {g, h});
  p.sense = Sense::Maximize;
  CHECK(solve_lp(p).status == LpStatus::Unbounded);

  LpBuilder b(2);
  b.add_eq(testing::v2(1, 1), 3);
  b.add_eq(testing::v2(1, -1), 1);
  const auto r = solve_lp(b.build(testing::v2(1, 0), Sense::Minimize));
  REQUIRE(r.optimal());
  CHECK((*r.point - testing::v2(2, 1)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("solve_lp: malformed problems") {
  LpProblem p;
  p.objective = Vector::Ones(2);
  p.ineq = {Matrix::Ones(1, 3), Vector::Ones(1)};
  p.eq = {Matrix(0, 2), Vector(0)};
  CHECK_THROWS_AS(solve_lp(p), Error);
  try {
    solve_lp(p);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MalformedProblem);
  }
  p.ineq = {Matrix::Ones(1, 2), Vector::Constant(1, std::numeric_limits<double>::quiet_NaN())};
  CHECK_THROWS_AS(solve_lp(p), Error);
}

TEST_CASE("solve_lp: degenerate redundant equalities") {
  LpBuilder b(3);
  b.add_eq(testing::v3(1, 1, 1), 1);
  b.add_eq(testing::v3(2, 2, 2), 2);
  b.add_ge_block(Matrix::Identity(3, 3), 0, Vector::Zero(3));
  const auto r = solve_lp(b.build(testing::v3(1, 2, 3), Sense::Minimize));
  REQUIRE(r.optimal());
  CHECK(r.value == doctest::Approx(1.0));
}

TEST_CASE("solve_lp is deterministic") {
  Gen gen(5);
  const Inequalities ineq = stack(box(3), {gen.mat(4, 3), gen.vec(4, -1.0, 0.0)});
  const Vector c = gen.vec(3);
  const auto a = solve_lp(min_problem(c, ineq));
  const auto b = solve_lp(min_problem(c, ineq));
  REQUIRE(a.optimal());
  CHECK(a.value == b.value);
  CHECK(*a.point == *b.point);
}

TEST_CASE("property: LP optimum equals the best vertex (dim <= 4, <= 8 constraints)") {
  Gen gen(11);
  int bounded = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Eigen::Index n = gen.integer(1, 4);
    const Eigen::Index m = gen.integer(static_cast<int>(n) + 1, 8);
    Inequalities ineq{gen.mat(m, n), Vector(m)};
    // Keep a known interior-ish point feasible half of the time.
    const Vector x0 = gen.vec(n);
    for (Eigen::Index i = 0; i < m; ++i) {
      ineq.rhs(i) = ineq.lhs.row(i).dot(x0) - (trial % 2 == 0 ? gen.uniform(0.0, 1.0) : gen.uniform(-1.0, 1.0));
    }
    const Vector c = gen.vec(n);
    const auto lp = solve_lp(min_problem(c, ineq));
    const auto vs = enumerate_vertices(ineq);
    if (lp.status == LpStatus::Infeasible) {
      CHECK(vs.vertices.empty());
      continue;
    }
    if (lp.status == LpStatus::Unbounded || !vs.pointed) continue;
    ++bounded;
    REQUIRE(!vs.vertices.empty());
    double best = std::numeric_limits<double>::infinity();
    for (const auto& v : vs.vertices) best = std::min(best, c.dot(v));
    CHECK(std::abs(lp.value - best) <= 1e-8);
    // Feasibility of the returned point.
    CHECK((ineq.lhs * *lp.point - ineq.rhs).minCoeff() >= -1e-9);
  }
  CHECK(bounded > 50);
}

TEST_CASE("enumerate_vertices examples") {
  CHECK(enumerate_vertices(box(2)).vertices.size() == 4);

  Inequalities simplex{Matrix::Zero(4, 3), Vector::Zero(4)};
  simplex.lhs.topRows(3) = Matrix::Identity(3, 3);
  simplex.lhs.row(3) = -Vector::Ones(3).transpose();
  simplex.rhs(3) = -1.0;
  CHECK(enumerate_vertices(simplex).vertices.size() == 4);

  Inequalities half{Matrix::Zero(1, 2), Vector::Zero(1)};
  half.lhs(0, 0) = 1.0;
  const auto vs = enumerate_vertices(half);
  CHECK(vs.vertices.empty());
  CHECK_FALSE(vs.pointed);

  CHECK_THROWS_AS(enumerate_vertices(box(11)), Error);
}

TEST_CASE("linear_solve examples and residual property") {
  const Vector b = testing::v3(1, -2, 3);
  CHECK(linear_solve(Matrix::Identity(3, 3), b) == b);
  CHECK((linear_solve(testing::m2(2, 0, 0, 4), testing::v2(2, 4)) - testing::v2(1, 1)).cwiseAbs().maxCoeff() <= 1e-15);

  Gen gen(3);
  for (int k = 0; k < 100; ++k) {
    const Matrix a = Matrix::Identity(5, 5) * 3.0 + gen.mat(5, 5);
    const Vector rhs = gen.vec(5, -10, 10);
    const Vector x = linear_solve(a, rhs);
    CHECK((a * x - rhs).cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + rhs.cwiseAbs().maxCoeff()));
  }

  try {
    linear_solve(testing::m2(1, 2, 2, 4), testing::v2(1, 1));
    FAIL("expected Singular");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Singular);
  }
}

TEST_CASE("matrix_exp examples") {
  CHECK((matrix_exp(Matrix::Zero(3, 3), 1.0) - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
  Matrix d(1, 1);
  d << -1.0;
  CHECK(matrix_exp(d, 1.0)(0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  const double pi = std::acos(-1.0);
  const Matrix r = matrix_exp(testing::m2(0, 1, -1, 0), pi / 2);
  CHECK((r - rotation(pi / 2)).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK_THROWS_AS(matrix_exp(Matrix::Identity(2, 2) * 1e8, 1.0), Error);
}

TEST_CASE("matrix_exp against the eigen-decomposition oracle") {
  Gen gen(21);
  for (int k = 0; k < 50; ++k) {
    // Symmetric A = Q diag(l) Q^T, so e^{tA} = Q diag(e^{t l}) Q^T.
    const Matrix q = Eigen::HouseholderQR<Matrix>(gen.mat(4, 4)).householderQ();
    const Vector l = gen.vec(4, -10.0, 2.0);
    const Matrix a = q * l.asDiagonal() * q.transpose();
    const double t = gen.uniform(0.0, 2.0);
    const Matrix oracle = q * (t * l).array().exp().matrix().asDiagonal() * q.transpose();
    const Matrix e = matrix_exp(a, t);
    CHECK((e - oracle).cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, oracle.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("property: matrix_exp semigroup law") {
  Gen gen(8);
  for (int k = 0; k < 100; ++k) {
    const Eigen::Index n = gen.integer(1, 6);
    Matrix a = gen.mat(n, n);
    const double s = gen.uniform(0.0, 1.0);
    const double t = gen.uniform(0.0, 1.0);
    a *= gen.uniform(0.5, 20.0) / ((s + t) * inf_norm(a));
    const Matrix lhs = matrix_exp(a, s + t);
    const Matrix rhs = matrix_exp(a, s) * matrix_exp(a, t);
    INFO("norm of e^{(s+t)A}: " << inf_norm(lhs));
    CHECK(inf_norm(Matrix(lhs - rhs)) <= 1e-8 * std::max(1.0, inf_norm(lhs)));
  }
}
