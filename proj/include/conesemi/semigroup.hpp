#pragma once

// Matrix semigroups built from a generator through resolvents (backward-Euler
// exponential formula) or the dense exponential, and the theorem pipelines
// that tie dissipativity of the generator to contractivity and positivity.

#include <cstdint>
#include <span>
#include <vector>

#include "conesemi/dissipativity.hpp"

namespace conesemi {

inline constexpr double kContractivityTol = 1e-8;

enum class SemigroupMethod { Euler, Expm, Both };

struct SemigroupConfig {
  std::vector<double> t_grid{0.1, 0.5, 1.0, 2.0, 5.0};
  std::size_t euler_steps = 64;
  SemigroupMethod method = SemigroupMethod::Both;

  /// Throws InvalidArgument: t_grid must be nonempty, sorted and nonnegative.
  void validate() const;
};

/// x solving (I - lambda A) x = y.
Vector resolvent_apply(const LinOp& a, double lambda, const Vector& y);
/// (I - lambda A)^{-1}.
Matrix resolvent(const LinOp& a, double lambda);

/// (I - (t/n) A)^{-n} x with a single factorization reused for all n steps.
Vector euler_power(const LinOp& a, double t, std::size_t n, const Vector& x);
/// Matrix form of euler_power.
Matrix euler_semigroup(const LinOp& a, double t, std::size_t n);

/// T(t) by the requested method (Both is not accepted here).
Matrix semigroup_at(const LinOp& a, double t, SemigroupMethod method, std::size_t euler_steps);

/// Exact: T maps every extreme ray of K into K, i.e. <T g, f> >= -tol for
/// every generator g and facet f.
Report is_positive_operator(const Matrix& t, const PolyCone& cone, double tol = kConeTol);

/// Checks p(T x) <= p(x) + 1e-8 on the generators, their negatives and
/// seeded samples from [-1,1]^n. A pass is Inconclusive.
Report is_p_contractive(const Matrix& t, const HalfNorm& p, std::size_t n_samples, std::uint64_t seed);

/// Hypothesis: A is p_phi-dissipative (sampled). Conclusion: (I - lambda A)^{-1}
/// is p_phi-contractive (sampled). Verdict is Vacuous when the hypothesis fails.
Report check_theorem_contra(const LinOp& a, const PolyCone& cone, const DualVector& phi, double lambda,
                            std::size_t n_samples, std::uint64_t seed);

/// Hypotheses: `phis` is total and A is p_phi-dissipative for each phi.
/// Conclusion: T(t) is positive for each t in the grid, by the configured
/// method(s). Vacuous when a hypothesis fails; the conclusion parts are
/// computed regardless.
Report check_positivity_via_total_set(const LinOp& a, std::span<const DualVector> phis, const PolyCone& cone,
                                      const SemigroupConfig& cfg, std::size_t n_samples, std::uint64_t seed);

}  // namespace conesemi
