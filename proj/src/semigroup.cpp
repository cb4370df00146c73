#include "conesemi/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace conesemi {

namespace {

Matrix shifted_identity(const LinOp& a, double lambda) {
  const auto n = static_cast<Eigen::Index>(a.dim());
  return Matrix::Identity(n, n) - lambda * a.matrix();
}

void require_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::InvalidArgument, "resolvent parameter lambda must be > 0");
  }
}

LuSolver factor_resolvent(const LinOp& a, double lambda) {
  try {
    return LuSolver(shifted_identity(a, lambda));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Singular) throw;
    std::ostringstream os;
    os << "I - lambda A is not invertible at lambda = " << lambda << " (" << e.what() << ")";
    throw Error(ErrorCode::Singular, os.str());
  }
}

std::string method_name(SemigroupMethod m) {
  switch (m) {
    case SemigroupMethod::Euler: return "euler";
    case SemigroupMethod::Expm: return "expm";
    case SemigroupMethod::Both: return "both";
  }
  return "?";
}

}  // namespace

void SemigroupConfig::validate() const {
  if (t_grid.empty()) throw Error(ErrorCode::InvalidArgument, "t_grid is empty");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!std::isfinite(t_grid[i]) || t_grid[i] < 0.0) {
      throw Error(ErrorCode::InvalidArgument, "t_grid entries must be finite and >= 0");
    }
    if (i > 0 && t_grid[i] < t_grid[i - 1]) throw Error(ErrorCode::InvalidArgument, "t_grid must be sorted");
  }
  if (euler_steps < 1) throw Error(ErrorCode::InvalidArgument, "euler_steps must be >= 1");
}

Vector resolvent_apply(const LinOp& a, double lambda, const Vector& y) {
  require_lambda(lambda);
  return factor_resolvent(a, lambda).solve(y);
}

Matrix resolvent(const LinOp& a, double lambda) {
  require_lambda(lambda);
  const auto n = static_cast<Eigen::Index>(a.dim());
  return factor_resolvent(a, lambda).solve(Matrix(Matrix::Identity(n, n)));
}

Vector euler_power(const LinOp& a, double t, std::size_t n, const Vector& x) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw Error(ErrorCode::InvalidArgument, "t must be >= 0");
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "euler steps must be >= 1");
  if (static_cast<std::size_t>(x.size()) != a.dim()) throw Error(ErrorCode::DimensionMismatch, "operand length");
  if (t == 0.0) return x;
  const LuSolver lu = factor_resolvent(a, t / static_cast<double>(n));
  Vector v = x;
  for (std::size_t k = 0; k < n; ++k) v = lu.solve(v);
  return v;
}

Matrix euler_semigroup(const LinOp& a, double t, std::size_t n) {
  const auto d = static_cast<Eigen::Index>(a.dim());
  if (!(t >= 0.0) || !std::isfinite(t)) throw Error(ErrorCode::InvalidArgument, "t must be >= 0");
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "euler steps must be >= 1");
  Matrix m = Matrix::Identity(d, d);
  if (t == 0.0) return m;
  const LuSolver lu = factor_resolvent(a, t / static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) m = lu.solve(m);
  return m;
}

Matrix semigroup_at(const LinOp& a, double t, SemigroupMethod method, std::size_t euler_steps) {
  switch (method) {
    case SemigroupMethod::Euler: return euler_semigroup(a, t, euler_steps);
    case SemigroupMethod::Expm: return matrix_exp(a.matrix(), t);
    case SemigroupMethod::Both: break;
  }
  throw Error(ErrorCode::InvalidArgument, "semigroup_at needs a single method");
}

Report is_positive_operator(const Matrix& t, const PolyCone& cone, double tol) {
  if (t.rows() != t.cols() || static_cast<std::size_t>(t.rows()) != cone.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "operator must be square and match the cone");
  }
  Report rep;
  rep.subject = "positive operator";
  rep.tolerance = tol;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (const auto& g0 : cone.generators()) {
    const Vector g = g0 / g0.cwiseAbs().maxCoeff();
    const Vector tg = t * g;
    for (const auto& f : cone.facets()) {
      ++rep.samples_used;
      const double m = tg.dot(f);
      rep.worst_margin = std::min(rep.worst_margin, m);
      if (m < -tol) rep.witnesses.push_back({g, f, m, "T g leaves K across facet f"});
    }
  }
  std::stable_sort(rep.witnesses.begin(), rep.witnesses.end(),
                   [](const Witness& a, const Witness& b) { return a.margin < b.margin; });
  if (rep.witnesses.size() > 16) rep.witnesses.resize(16);
  rep.verdict = rep.witnesses.empty() ? Verdict::Holds : Verdict::Fails;
  return rep;
}

Report is_p_contractive(const Matrix& t, const HalfNorm& p, std::size_t n_samples, std::uint64_t seed) {
  const auto n = static_cast<Eigen::Index>(p.dim());
  if (t.rows() != n || t.cols() != n) throw Error(ErrorCode::DimensionMismatch, "operator and half-norm dimensions");
  std::vector<std::pair<Vector, std::string>> points;
  for (const auto& g : p.cone().generators()) {
    points.emplace_back(g, "generator");
    points.emplace_back(-g, "negated generator");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (std::size_t s = 0; s < n_samples; ++s) {
    Vector x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = unif(rng);
    points.emplace_back(std::move(x), "sample");
  }

  Report rep;
  rep.subject = std::string("p-contractivity (") + std::string(p.kind_name()) + ")";
  rep.tolerance = kContractivityTol;
  rep.worst_margin = -std::numeric_limits<double>::infinity();
  for (const auto& [x, label] : points) {
    const double m = eval(p, t * x) - eval(p, x);
    ++rep.samples_used;
    rep.worst_margin = std::max(rep.worst_margin, m);
    if (m > kContractivityTol) rep.witnesses.push_back({x, Vector(), m, label});
  }
  std::stable_sort(rep.witnesses.begin(), rep.witnesses.end(),
                   [](const Witness& a, const Witness& b) { return a.margin > b.margin; });
  if (rep.witnesses.size() > 16) rep.witnesses.resize(16);
  rep.verdict = rep.witnesses.empty() ? Verdict::Inconclusive : Verdict::Fails;
  if (rep.verdict == Verdict::Inconclusive) {
    rep.notes.push_back("no violation on tested points; sampling does not prove contractivity");
  }
  return rep;
}

Report check_theorem_contra(const LinOp& a, const PolyCone& cone, const DualVector& phi, double lambda,
                            std::size_t n_samples, std::uint64_t seed) {
  require_lambda(lambda);
  const HalfNorm p = HalfNorm::phi(cone, phi.coords);
  Report hyp = certify_dissipative(a, p, n_samples, seed);
  hyp.subject = "hypothesis: A is p_phi-dissipative";
  Report concl = is_p_contractive(resolvent(a, lambda), p, n_samples, seed + 1);
  std::ostringstream os;
  os << "conclusion: (I - " << lambda << " A)^-1 is p_phi-contractive";
  concl.subject = os.str();

  Report rep;
  rep.subject = "resolvent contractivity from dissipativity";
  rep.tolerance = kContractivityTol;
  rep.samples_used = hyp.samples_used + concl.samples_used;
  rep.worst_margin = concl.worst_margin;
  if (hyp.failed()) {
    rep.verdict = Verdict::Vacuous;
    rep.notes.push_back("hypothesis fails (dissipativity witness found); the conclusion is not implied");
  } else {
    rep.verdict = concl.verdict;
    rep.witnesses = concl.witnesses;
  }
  rep.parts.push_back(std::move(hyp));
  rep.parts.push_back(std::move(concl));
  return rep;
}

Report check_positivity_via_total_set(const LinOp& a, std::span<const DualVector> phis, const PolyCone& cone,
                                      const SemigroupConfig& cfg, std::size_t n_samples, std::uint64_t seed) {
  cfg.validate();
  Report rep;
  rep.subject = "semigroup positivity from dissipativity on a total set";
  rep.tolerance = kConeTol;

  Report total = is_total(cone, phis);
  total.subject = "hypothesis: Phi is total";
  bool hypotheses_hold = total.verdict == Verdict::Holds;
  rep.parts.push_back(std::move(total));

  for (std::size_t i = 0; i < phis.size(); ++i) {
    Report hyp = certify_dissipative(a, HalfNorm::phi(cone, phis[i].coords), n_samples, seed + i);
    std::ostringstream os;
    os << "hypothesis: A is p_phi-dissipative for phi #" << i;
    hyp.subject = os.str();
    if (hyp.failed()) hypotheses_hold = false;
    rep.samples_used += hyp.samples_used;
    rep.parts.push_back(std::move(hyp));
  }

  std::vector<SemigroupMethod> methods;
  if (cfg.method != SemigroupMethod::Expm) methods.push_back(SemigroupMethod::Euler);
  if (cfg.method != SemigroupMethod::Euler) methods.push_back(SemigroupMethod::Expm);
  bool conclusion_holds = true;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (const double t : cfg.t_grid) {
    for (const auto m : methods) {
      Report pos = is_positive_operator(semigroup_at(a, t, m, cfg.euler_steps), cone);
      std::ostringstream os;
      os << "conclusion: T(" << t << ") positive [" << method_name(m) << "]";
      pos.subject = os.str();
      rep.worst_margin = std::min(rep.worst_margin, pos.worst_margin);
      if (pos.failed()) {
        if (conclusion_holds) rep.witnesses = pos.witnesses;
        conclusion_holds = false;
      }
      rep.parts.push_back(std::move(pos));
    }
  }

  if (!hypotheses_hold) {
    rep.verdict = Verdict::Vacuous;
    rep.notes.push_back("a hypothesis fails; positivity of T(t) is not implied");
  } else {
    rep.verdict = conclusion_holds ? Verdict::Holds : Verdict::Fails;
  }
  return rep;
}

}  // namespace conesemi
