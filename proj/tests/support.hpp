#pragma once

// Seeded generators and small helpers shared by the test binaries.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "conesemi/cone.hpp"

namespace testing {

using conesemi::Matrix;
using conesemi::Vector;

class Gen {
public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  Vector vec(Eigen::Index n, double lo = -1.0, double hi = 1.0) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = uniform(lo, hi);
    return v;
  }
  Matrix mat(Eigen::Index r, Eigen::Index c, double lo = -1.0, double hi = 1.0) {
    Matrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
      for (Eigen::Index j = 0; j < c; ++j) m(i, j) = uniform(lo, hi);
    }
    return m;
  }

  /// Simplicial cone: n random rays with a comfortably invertible matrix.
  conesemi::PolyCone simplicial_cone(Eigen::Index n) {
    while (true) {
      const Matrix g = Matrix::Identity(n, n) + mat(n, n, -0.4, 0.4);
      if (std::abs(g.determinant()) < 0.2) continue;
      std::vector<Vector> rays;
      for (Eigen::Index j = 0; j < n; ++j) rays.push_back(g.col(j));
      return conesemi::PolyCone::from_generators(rays);
    }
  }

  /// Cone over a random convex polygon in the slice x_n = 1 (dim 3 for
  /// k rays), or a simplicial cone in other dimensions.
  conesemi::PolyCone polygon_cone(int k) {
    std::vector<Vector> rays;
    const double offset = uniform(0.0, 6.28);
    for (int i = 0; i < k; ++i) {
      const double a = offset + 6.283185307179586 * (i + uniform(0.1, 0.4)) / k;
      Vector r(3);
      r << std::cos(a), std::sin(a), 1.0;
      rays.push_back(r);
    }
    return conesemi::PolyCone::from_generators(rays);
  }

  /// A point of K: a random nonnegative combination of its generators.
  Vector in_cone(const conesemi::PolyCone& k) {
    Vector x = Vector::Zero(static_cast<Eigen::Index>(k.dim()));
    for (const auto& g : k.generators()) x += uniform(0.0, 1.0) * g;
    return x;
  }

  std::mt19937_64& engine() { return rng_; }

private:
  std::mt19937_64 rng_;
};

inline conesemi::PolyCone diamond() {
  Vector a(2), b(2);
  a << 1, 1;
  b << 1, -1;
  return conesemi::PolyCone::from_generators({a, b});
}

inline Vector v2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

inline Vector v3(double a, double b, double c) {
  Vector v(3);
  v << a, b, c;
  return v;
}

inline Matrix m2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

/// Square pyramid cone in R^3: four extreme rays, not a lattice.
inline conesemi::PolyCone pyramid() {
  return conesemi::PolyCone::from_generators({v3(1, 1, 1), v3(1, -1, 1), v3(-1, 1, 1), v3(-1, -1, 1)});
}

}  // namespace testing
