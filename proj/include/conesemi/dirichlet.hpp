#pragma once

// Second derivative with Dirichlet boundary conditions on [0,1], discretized
// on a uniform grid of interior nodes. The order is pointwise on nodes (an
// orthant, hence a lattice); the non-lattice order of C^1[0,1] is outside
// this discrete model.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>

#include "conesemi/semigroup.hpp"

namespace conesemi {

struct Grid {
  std::size_t n_interior = 0;
  double h = 0.0;

  /// Throws InvalidArgument for N < 2.
  static Grid make(std::size_t n_interior);
  /// t_j = j h, j = 0 .. N+1 (0 and N+1 are the boundary).
  double node(std::size_t j) const { return static_cast<double>(j) * h; }
};

/// Values at the interior nodes; boundary values are implicitly 0.
struct GridFunction {
  Vector values;
};

/// (1/h^2) tridiag(1, -2, 1) on the full space.
LinOp build_laplacian(const Grid& g);

/// Solution of (I - A_h) x = y.
GridFunction fd_resolvent(const Grid& g, const GridFunction& y);

/// Continuum solution of x - x'' = y, x(0) = x(1) = 0, at the interior nodes:
/// x = x0 + m e^t + n e^{-t} with
///   x0(t) = 1/2 [ e^t int_t^1 e^{-s} y(s) ds - e^{-t} int_t^1 e^s y(s) ds ]
/// (composite trapezoid on the grid) and (m, n) fixed by the boundary values.
/// This overload extends y by 0 at both endpoints.
GridFunction resolvent_closed_form(const Grid& g, const GridFunction& y);
/// Same, with the source sampled at every node including the endpoints. Use
/// this for sources that do not vanish at the boundary; zero extension would
/// make the quadrature first order there.
GridFunction resolvent_closed_form(const Grid& g, const std::function<double(double)>& y);

struct ConvergenceRow {
  std::size_t n_interior = 0;
  double h = 0.0;
  double sup_error = 0.0;
  /// error(previous row) / error(this row); absent on the first row.
  std::optional<double> ratio;
};

struct ConvergenceTable {
  std::string source;
  std::vector<ConvergenceRow> rows;

  std::string to_text() const;
  std::string to_csv() const;
};

/// Sup-norm gap between the FD resolvent and the closed form for each N.
ConvergenceTable convergence_study(std::span<const std::size_t> ns, const std::function<double(double)>& source,
                                   std::string source_name);

/// Runs the worked-example pipeline on one grid: (a) POD of A_h, (b) the
/// maximum-principle dissipativity check at a maximizing index on samples,
/// (c) FD-vs-closed-form resolvent gap for y = 1 against h^2, (d) positivity
/// of T(t) on the grid, (e) |(T(t)x)^+|_inf <= |x^+|_inf + 1e-8 on samples.
Report verify_example(const Grid& g, const SemigroupConfig& cfg, std::uint64_t seed, std::size_t n_samples = 200);

}  // namespace conesemi
