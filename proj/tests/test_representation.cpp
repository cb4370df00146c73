#include <doctest.h>

#include <algorithm>
#include <functional>

#include "conesemi/error.hpp"
#include "conesemi/representation.hpp"
#include "support.hpp"

using namespace conesemi;
using testing::Gen;
using testing::v2;
using testing::v3;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

bool has_state(const StateSpace& s, const Vector& w) {
  return std::any_of(s.states.begin(), s.states.end(),
                     [&](const DualVector& d) { return (d.coords - w).cwiseAbs().maxCoeff() < 1e-12; });
}

// A random point of the cone interior: a strictly positive combination of generators.
Vector interior_point(Gen& gen, const PolyCone& k) {
  Vector u = Vector::Zero(static_cast<Eigen::Index>(k.dim()));
  for (const auto& g : k.generators()) u += gen.uniform(0.2, 1.0) * g;
  return u;
}

// A positive functional: a random nonnegative combination of the facet normals.
Vector positive_functional(Gen& gen, const PolyCone& k) {
  Vector phi = Vector::Zero(static_cast<Eigen::Index>(k.dim()));
  for (const auto& f : k.facets()) phi += gen.uniform(0.0, 1.0) * f;
  return phi;
}

PolyCone random_cone(Gen& gen, int trial) {
  switch (trial % 3) {
    case 0: return PolyCone::orthant(static_cast<std::size_t>(gen.integer(2, 4)));
    case 1: return gen.simplicial_cone(gen.integer(2, 4));
    default: return gen.polygon_cone(gen.integer(4, 7));
  }
}

}  // namespace

TEST_CASE("build_states examples") {
  const StateSpace o = build_states(PolyCone::orthant(2), v2(1, 1));
  CHECK(o.size() == 2);
  CHECK(has_state(o, v2(1, 0)));
  CHECK(has_state(o, v2(0, 1)));

  const StateSpace d = build_states(testing::diamond(), v2(1, 0));
  CHECK(d.size() == 2);
  CHECK(has_state(d, v2(1, 1)));
  CHECK(has_state(d, v2(1, -1)));

  const StateSpace r3 = build_states(PolyCone::orthant(3), v3(2, 1, 1));
  CHECK(r3.size() == 3);
  CHECK(has_state(r3, v3(0.5, 0, 0)));
  CHECK(has_state(r3, v3(0, 1, 0)));
  CHECK(has_state(r3, v3(0, 0, 1)));

  const StateSpace pyr = build_states(testing::pyramid(), v3(0, 0, 1));
  CHECK(pyr.size() == 4);
  for (const auto& w : pyr.states) CHECK(w.coords.dot(v3(0, 0, 1)) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(code_of([] { build_states(PolyCone::orthant(2), v2(1, 0)); }) == ErrorCode::NotOrderUnit);
  CHECK(code_of([] { build_states(PolyCone::orthant(2), v2(-1, 1)); }) == ErrorCode::NotOrderUnit);
  CHECK(code_of([] { build_states(testing::diamond(), v2(0, 1)); }) == ErrorCode::NotOrderUnit);
}

TEST_CASE("embed examples") {
  const StateSpace o = build_states(PolyCone::orthant(2), v2(1, 1));
  const Vector eu = embed(o, v2(1, 1));
  CHECK((eu - Vector::Ones(2)).norm() < 1e-15);

  const Vector e = embed(o, v2(1, -2));
  CHECK(e.size() == 2);
  CHECK(std::min(e(0), e(1)) == doctest::Approx(-2.0));
  CHECK(std::max(e(0), e(1)) == doctest::Approx(1.0));

  const StateSpace d = build_states(testing::diamond(), v2(1, 0));
  const Vector ed = embed(d, v2(0, 1));
  CHECK(ed.minCoeff() == doctest::Approx(-1.0));
  CHECK(ed.maxCoeff() == doctest::Approx(1.0));
  CHECK((embed(d, v2(1, 0)) - Vector::Ones(2)).norm() < 1e-15);

  CHECK(code_of([&] { embed(d, v3(1, 0, 0)); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("represent_functional examples") {
  SUBCASE("orthant") {
    const StateSpace s = build_states(PolyCone::orthant(2), v2(1, 1));
    const Measure mu = represent_functional(s, DualVector::certify(PolyCone::orthant(2), v2(2, 3)));
    CHECK(mu.total_mass() == doctest::Approx(5.0));
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double expected = s.states[i].coords(0) > 0.5 ? 2.0 : 3.0;
      CHECK(mu.weights[i] == doctest::Approx(expected));
    }
  }
  SUBCASE("diamond") {
    const StateSpace s = build_states(testing::diamond(), v2(1, 0));
    const Measure mu = represent_functional(s, DualVector::certify(testing::diamond(), v2(3, 1)));
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double expected = s.states[i].coords(1) > 0.0 ? 2.0 : 1.0;
      CHECK(mu.weights[i] == doctest::Approx(expected));
    }
    CHECK((integrate(s, mu) - v2(3, 1)).cwiseAbs().maxCoeff() < 1e-9);
  }
  SUBCASE("zero functional") {
    const StateSpace s = build_states(testing::pyramid(), v3(0, 0, 1));
    const Measure mu = represent_functional(s, DualVector::certify(testing::pyramid(), Vector::Zero(3)));
    for (const double w : mu.weights) CHECK(w == 0.0);
  }
  SUBCASE("a functional that is not positive") {
    const StateSpace s = build_states(PolyCone::orthant(2), v2(1, 1));
    const DualVector phi = DualVector::certify(PolyCone::orthant(2), v2(1, -1));
    CHECK(!phi.certified_positive);
    CHECK(code_of([&] { represent_functional(s, phi); }) == ErrorCode::NotPositive);
  }
}

TEST_CASE("property: reproduction and unit mass") {
  Gen gen(61);
  for (int trial = 0; trial < 21; ++trial) {
    const PolyCone k = random_cone(gen, trial);
    const Vector u = interior_point(gen, k);
    const StateSpace s = build_states(k, u);
    for (const auto& w : s.states) CHECK(u.dot(w.coords) == doctest::Approx(1.0).epsilon(1e-10));
    for (int rep = 0; rep < 100; ++rep) {
      const Vector phi = positive_functional(gen, k);
      const Measure mu = represent_functional(s, DualVector::certify(k, phi));
      REQUIRE(mu.weights.size() == s.size());
      for (const double w : mu.weights) CHECK(w >= 0.0);
      double worst = 0.0;
      for (Eigen::Index i = 0; i < phi.size(); ++i) {
        const Vector e = Vector::Unit(phi.size(), i);
        double sum = 0.0;
        for (std::size_t j = 0; j < s.size(); ++j) sum += mu.weights[j] * e.dot(s.states[j].coords);
        worst = std::max(worst, std::abs(phi(i) - sum));
      }
      CHECK(worst <= 1e-9);
      CHECK(std::abs(mu.total_mass() - phi.dot(u)) <= 1e-9);
    }
  }
}

TEST_CASE("property: the embedding is bipositive") {
  Gen gen(62);
  for (int trial = 0; trial < 10; ++trial) {
    const PolyCone k = random_cone(gen, trial);
    const StateSpace s = build_states(k, interior_point(gen, k));
    const auto n = static_cast<Eigen::Index>(k.dim());
    int inside = 0;
    for (int i = 0; i < 500; ++i) {
      // Half the points are drawn from K so both directions are exercised.
      const Vector x = i % 2 == 0 ? gen.in_cone(k) : gen.vec(n);
      const bool in = contains(k, x);
      inside += in;
      CHECK(in == (embed(s, x).minCoeff() >= -1e-10));
    }
    CHECK(inside >= 250);
  }
}

TEST_CASE("property: the embedding is injective") {
  Gen gen(63);
  for (int trial = 0; trial < 20; ++trial) {
    const PolyCone k = random_cone(gen, trial);
    const StateSpace s = build_states(k, interior_point(gen, k));
    Matrix rows(static_cast<Eigen::Index>(s.size()), static_cast<Eigen::Index>(k.dim()));
    for (std::size_t j = 0; j < s.size(); ++j) rows.row(static_cast<Eigen::Index>(j)) = s.states[j].coords.transpose();
    CHECK(Eigen::FullPivLU<Matrix>(rows).rank() == static_cast<Eigen::Index>(k.dim()));
  }
}
