#include <doctest.h>

#include <functional>

#include "conesemi/dissipativity.hpp"
#include "conesemi/error.hpp"
#include "support.hpp"

using namespace conesemi;
using testing::Gen;
using testing::m2;
using testing::v2;

namespace {

const PolyCone kOrth2 = PolyCone::orthant(2);
const Matrix kA1 = m2(1, 1, 1, 1);
const Matrix kA2 = m2(-1, -1, 1, 1);

Domain example_domain() {
  Domain d;
  d.ineq = {Matrix(1, 2), Vector(1)};
  d.ineq.lhs << 1, 0;
  d.ineq.rhs << 0;
  d.eq = {Matrix(1, 2), Vector(1)};
  d.eq.lhs << 0, 1;
  d.eq.rhs << 0;
  return d;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

// min <A x, phi> over phi in K' with <x, phi> = 0 and sum_g <g, phi> <= 1.
double face_minimum(const PolyCone& k, const Matrix& a, const Vector& x) {
  const auto n = static_cast<std::size_t>(k.dim());
  LpBuilder lp(n);
  const Matrix gt = k.generator_matrix().transpose();
  lp.add_ge_block(gt, 0, Vector::Zero(gt.rows()));
  lp.add_eq(x, 0.0);
  lp.add_le(gt.colwise().sum().transpose(), 1.0);
  const auto r = solve_lp(lp.build(a * x, Sense::Minimize));
  REQUIRE(r.optimal());
  return r.value;
}

// A random point of K on the face cut out by a random facet.
Vector boundary_point(Gen& gen, const PolyCone& k) {
  const auto& f = k.facets()[static_cast<std::size_t>(gen.integer(0, static_cast<int>(k.facets().size()) - 1))];
  Vector x = Vector::Zero(static_cast<Eigen::Index>(k.dim()));
  for (const auto& g : k.generators()) {
    if (std::abs(g.dot(f)) <= 1e-10 && gen.integer(0, 3) > 0) x += gen.uniform(0.0, 1.0) * g;
  }
  return x;
}

}  // namespace

TEST_CASE("LinOp construction") {
  CHECK(code_of([] { LinOp(Matrix::Ones(2, 3)); }) == ErrorCode::DimensionMismatch);
  Domain empty;
  empty.ineq = {Matrix(2, 2), Vector(2)};
  empty.ineq.lhs << 1, 0, -1, 0;
  empty.ineq.rhs << 1, 0;  // x1 >= 1 and -x1 >= 0
  empty.eq = {Matrix(0, 2), Vector(0)};
  CHECK(code_of([&] { LinOp(kA1, empty); }) == ErrorCode::EmptyDomain);
  const LinOp a(kA2, example_domain());
  CHECK(a.in_domain(v2(2, 0)));
  CHECK_FALSE(a.in_domain(v2(2, 1)));
  CHECK_FALSE(a.in_domain(v2(-1, 0)));
}

TEST_CASE("is_dissipative_at examples") {
  const auto euclid = HalfNorm::euclidean(kOrth2);
  const auto c1 = is_dissipative_at(LinOp(kA1), euclid, v2(1, 0));
  CHECK_FALSE(c1.ok);
  CHECK(std::abs(c1.margin - 1.0) <= 1e-9);
  CHECK((c1.functional - v2(1, 0)).norm() <= 1e-12);

  const LinOp a2(kA2, example_domain());
  const auto c2 = is_dissipative_at(a2, euclid, v2(2, 0));
  CHECK(c2.ok);
  CHECK(std::abs(c2.margin + 2.0) <= 1e-9);
  CHECK(code_of([&] { is_dissipative_at(a2, euclid, v2(0, 1)); }) == ErrorCode::NotInDomain);

  const Vector phi = v2(0.3, 2.0);
  const auto c3 = is_dissipative_at(LinOp(-Matrix::Identity(2, 2)), HalfNorm::phi(kOrth2, phi), v2(1, 1));
  CHECK(c3.ok);
  CHECK(std::abs(c3.margin + v2(1, 1).dot(phi)) <= 1e-9);
}

TEST_CASE("is_strictly_dissipative_at examples") {
  CHECK(is_strictly_dissipative_at(LinOp(-Matrix::Identity(2, 2)), HalfNorm::phi(kOrth2, v2(1, 1)), v2(1, 1)).ok);
  CHECK_FALSE(is_strictly_dissipative_at(LinOp(kA1), HalfNorm::euclidean(kOrth2), v2(1, 0)).ok);
  const auto c = is_strictly_dissipative_at(LinOp(m2(0, 1, 0, 0)), HalfNorm::phi(kOrth2, v2(1, 1)), v2(1, -2));
  CHECK(c.ok);
  CHECK(std::abs(c.margin + 2.0) <= 1e-9);
}

TEST_CASE("dissipativity at x = 0 holds by convention") {
  const auto c = is_dissipative_at(LinOp(kA1), HalfNorm::phi(kOrth2, v2(1, 1)), v2(0, 0));
  CHECK(c.ok);
  CHECK(c.margin == 0.0);
  CHECK(is_dissipative_at(LinOp(kA1), HalfNorm::euclidean(kOrth2), v2(0, 0)).ok);
}

TEST_CASE("certify_dissipative examples") {
  const auto r = certify_dissipative(LinOp(-Matrix::Identity(2, 2)), HalfNorm::phi(kOrth2, v2(1, 1)), 100, 1);
  CHECK(r.verdict == Verdict::Inconclusive);
  CHECK(r.witnesses.empty());
  CHECK_FALSE(r.notes.empty());

  const auto f = certify_dissipative(LinOp(kA1), HalfNorm::euclidean(kOrth2), 100, 1);
  CHECK(f.verdict == Verdict::Fails);
  REQUIRE_FALSE(f.witnesses.empty());
  bool near = false;
  for (const auto& w : f.witnesses) near = near || (w.point - v2(1, 0)).norm() <= 1e-9;
  CHECK(near);
  for (const auto& w : f.witnesses) CHECK(w.margin > 1e-9);
}

TEST_CASE("POD and p-dissipativity are independent") {
  const auto euclid = HalfNorm::euclidean(kOrth2);
  // A1: POD holds, not p-dissipative.
  CHECK(has_pod(LinOp(kA1), kOrth2).verdict == Verdict::Holds);
  CHECK(certify_dissipative(LinOp(kA1), euclid, 50, 3).failed());
  // A2 on the whole space: POD fails at x = e2, f = e1.
  const auto pod = has_pod(LinOp(kA2), kOrth2);
  CHECK(pod.verdict == Verdict::Fails);
  REQUIRE(pod.witnesses.size() == 1);
  CHECK((pod.witnesses.front().point - v2(0, 1)).norm() == 0.0);
  CHECK((pod.witnesses.front().functional - v2(1, 0)).norm() == 0.0);
  CHECK(std::abs(pod.witnesses.front().margin + 1.0) <= 1e-9);
  // A2 on its domain: p-dissipative on every tested point.
  const LinOp a2(kA2, example_domain());
  const auto diss = certify_dissipative(a2, euclid, 200, 3);
  CHECK(diss.verdict == Verdict::Inconclusive);
  CHECK(diss.samples_used > 100);
  // Restricted to the domain, the only positive ray is (1,0), and there the
  // property holds; the report says the check is partial.
  const auto dom_pod = has_pod(a2, kOrth2);
  CHECK(dom_pod.verdict == Verdict::Inconclusive);
  CHECK(dom_pod.witnesses.empty());
}

TEST_CASE("has_pod and pod_matrix_characterization examples") {
  CHECK(has_pod(LinOp(m2(-5, 2, 3, -1)), kOrth2).verdict == Verdict::Holds);
  CHECK(pod_matrix_characterization(kA1));
  CHECK_FALSE(pod_matrix_characterization(kA2));
  Matrix d = Matrix::Zero(2, 2);
  d.diagonal() << -7, -3;
  CHECK(pod_matrix_characterization(d));
}

TEST_CASE("property: Metzler equivalence on the orthant") {
  Gen gen(31);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = gen.integer(2, 5);
    Matrix a = gen.mat(n, n);
    // Make exact zeros and tiny negatives appear.
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const int r = gen.integer(0, 5);
        if (r == 0) a(i, j) = 0.0;
        if (r == 1) a(i, j) = std::abs(a(i, j));
      }
    }
    const bool pod = has_pod(LinOp(a), PolyCone::orthant(static_cast<std::size_t>(n))).verdict == Verdict::Holds;
    CHECK(pod == pod_matrix_characterization(a));
  }
}

TEST_CASE("property: extreme-pair reduction agrees with the face LP oracle") {
  Gen gen(32);
  int holds = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const PolyCone k = trial % 3 == 0   ? gen.simplicial_cone(gen.integer(2, 4))
                       : trial % 3 == 1 ? testing::pyramid()
                                        : gen.polygon_cone(gen.integer(4, 6));
    const auto n = static_cast<Eigen::Index>(k.dim());
    // Half of the operators are built to have the property: A = M - c I with
    // M mapping K into K.
    Matrix a = gen.mat(n, n);
    if (trial % 2 == 0) {
      Matrix m = Matrix::Zero(n, n);
      for (const auto& f : k.facets()) m += gen.in_cone(k) * f.transpose();
      a = m - 3.0 * Matrix::Identity(n, n);
    }
    const Report pod = has_pod(LinOp(a), k);
    double oracle_min = 0.0;
    for (int s = 0; s < 40; ++s) {
      const Vector x = boundary_point(gen, k);
      if (x.norm() == 0.0) continue;
      oracle_min = std::min(oracle_min, face_minimum(k, a, x));
    }
    for (const auto& g : k.generators()) oracle_min = std::min(oracle_min, face_minimum(k, a, g));
    if (pod.verdict == Verdict::Holds) {
      ++holds;
      CHECK(oracle_min >= -1e-9);
    } else {
      CHECK(oracle_min < -1e-9);
      for (const auto& w : pod.witnesses) {
        CHECK(contains(k, w.point));
        CHECK(DualVector::certify(k, w.functional).certified_positive);
        CHECK(std::abs(w.point.dot(w.functional)) <= 1e-10);
        CHECK((a * w.point).dot(w.functional) < -1e-9);
      }
    }
  }
  CHECK(holds >= 30);
  CHECK(holds <= 60);
}

TEST_CASE("property: diagonal shifts do not change POD") {
  Gen gen(33);
  for (int trial = 0; trial < 100; ++trial) {
    const PolyCone k = trial % 2 == 0 ? gen.simplicial_cone(3) : testing::pyramid();
    const Matrix a = gen.mat(3, 3);
    const double c = gen.uniform(-10, 10);
    CHECK(has_pod(LinOp(a), k).verdict == has_pod(LinOp(a + c * Matrix::Identity(3, 3)), k).verdict);
  }
}

TEST_CASE("certify_dissipative is deterministic for a fixed seed") {
  Gen gen(34);
  const Matrix a = gen.mat(3, 3);
  const auto p = HalfNorm::canonical(PolyCone::orthant(3), NormSpec::linf(3));
  const auto r1 = certify_dissipative(LinOp(a), p, 80, 99);
  const auto r2 = certify_dissipative(LinOp(a), p, 80, 99);
  CHECK(r1.verdict == r2.verdict);
  CHECK(r1.samples_used == r2.samples_used);
  CHECK(r1.worst_margin == r2.worst_margin);
  REQUIRE(r1.witnesses.size() == r2.witnesses.size());
  for (std::size_t i = 0; i < r1.witnesses.size(); ++i) CHECK(r1.witnesses[i].point == r2.witnesses[i].point);
}

TEST_CASE("sample_domain stays inside the domain and is seeded") {
  const LinOp a2(kA2, example_domain());
  const auto s1 = sample_domain(a2, 50, 4);
  const auto s2 = sample_domain(a2, 50, 4);
  REQUIRE(s1.size() == 50);
  for (std::size_t i = 0; i < s1.size(); ++i) {
    CHECK(a2.in_domain(s1[i]));
    CHECK(s1[i] == s2[i]);
  }
}

TEST_CASE("Metzler operators with phi^T A <= 0 are p_phi-dissipative on the orthant") {
  Gen gen(35);
  for (int trial = 0; trial < 30; ++trial) {
    const auto n = gen.integer(2, 4);
    const Vector phi = gen.vec(n, 0.5, 2.0);
    Matrix a = gen.mat(n, n, 0.0, 1.0);
    for (Eigen::Index j = 0; j < n; ++j) {
      double s = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (i != j) s += phi(i) * a(i, j);
      }
      a(j, j) = -s / phi(j) - gen.uniform(0.0, 0.5);
    }
    const auto p = HalfNorm::phi(PolyCone::orthant(static_cast<std::size_t>(n)), phi);
    CHECK(certify_dissipative(LinOp(a), p, 100, static_cast<std::uint64_t>(trial)).verdict == Verdict::Inconclusive);
  }
}
