#include "conesemi/dissipativity.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace conesemi {

namespace {

constexpr std::size_t kMaxWitnesses = 16;
constexpr std::size_t kBoxVertexEnumDim = 6;

// Domain cut by the box [-1,1]^n as a single inequality system.
Inequalities boxed_domain(const Domain& d, std::size_t n) {
  const auto nn = static_cast<Eigen::Index>(n);
  const auto mi = d.ineq.lhs.rows();
  const auto me = d.eq.lhs.rows();
  Inequalities out{Matrix::Zero(mi + 2 * me + 2 * nn, nn), Vector::Zero(mi + 2 * me + 2 * nn)};
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < mi; ++i, ++r) {
    out.lhs.row(r) = d.ineq.lhs.row(i);
    out.rhs(r) = d.ineq.rhs(i);
  }
  for (Eigen::Index i = 0; i < me; ++i) {
    out.lhs.row(r) = d.eq.lhs.row(i);
    out.rhs(r++) = d.eq.rhs(i);
    out.lhs.row(r) = -d.eq.lhs.row(i);
    out.rhs(r++) = -d.eq.rhs(i);
  }
  for (Eigen::Index i = 0; i < nn; ++i) {
    out.lhs(r, i) = 1.0;
    out.rhs(r++) = -1.0;
    out.lhs(r, i) = -1.0;
    out.rhs(r++) = -1.0;
  }
  return out;
}

void keep_worst(std::vector<Witness>& w, bool larger_is_worse) {
  std::stable_sort(w.begin(), w.end(), [&](const Witness& a, const Witness& b) {
    return larger_is_worse ? a.margin > b.margin : a.margin < b.margin;
  });
  if (w.size() > kMaxWitnesses) w.resize(kMaxWitnesses);
}

PointCheck point_check(const LinOp& a, const HalfNorm& p, const Vector& x, Sense sense) {
  if (static_cast<std::size_t>(x.size()) != a.dim() || p.dim() != a.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "operator, half-norm and point dimensions differ");
  }
  if (!a.in_domain(x)) throw Error(ErrorCode::NotInDomain, "x is not in the operator's domain");
  const SubdiffDesc d = subdifferential(p, x);
  const auto opt = optimize_over_subdiff(d, a.apply(x), sense);
  return {opt.value <= kDissipativityTol, opt.value, opt.point};
}

}  // namespace

// ---------------------------------------------------------------------------
// LinOp
// ---------------------------------------------------------------------------

LinOp::LinOp(Matrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "operator matrix must be square and nonempty");
  }
  if (!matrix_.allFinite()) throw Error(ErrorCode::InvalidArgument, "operator matrix has non-finite entries");
}

LinOp::LinOp(Matrix matrix, Domain domain) : LinOp(std::move(matrix)) {
  const auto n = matrix_.cols();
  auto check = [&](const Matrix& lhs, const Vector& rhs, const char* what) {
    if (lhs.rows() != rhs.size() || (lhs.rows() > 0 && lhs.cols() != n)) {
      std::ostringstream os;
      os << what << " domain constraints are " << lhs.rows() << "x" << lhs.cols() << " with " << rhs.size()
         << " right-hand sides for dimension " << n;
      throw Error(ErrorCode::DimensionMismatch, os.str());
    }
  };
  check(domain.ineq.lhs, domain.ineq.rhs, "inequality");
  check(domain.eq.lhs, domain.eq.rhs, "equality");
  if (domain.ineq.lhs.rows() == 0) domain.ineq = {Matrix::Zero(0, n), Vector::Zero(0)};
  if (domain.eq.lhs.rows() == 0) domain.eq = {Matrix::Zero(0, n), Vector::Zero(0)};
  LpProblem lp{Vector::Zero(n), domain.eq, domain.ineq, Sense::Minimize};
  if (!solve_lp(lp).optimal()) throw Error(ErrorCode::EmptyDomain, "the operator's domain is empty");
  domain_ = std::move(domain);
}

bool LinOp::in_domain(const Vector& x, double tol) const {
  if (static_cast<std::size_t>(x.size()) != dim()) return false;
  if (!domain_) return true;
  const auto& d = *domain_;
  for (Eigen::Index i = 0; i < d.ineq.lhs.rows(); ++i) {
    if (d.ineq.lhs.row(i).dot(x) < d.ineq.rhs(i) - tol * (1.0 + std::abs(d.ineq.rhs(i)))) return false;
  }
  for (Eigen::Index i = 0; i < d.eq.lhs.rows(); ++i) {
    if (std::abs(d.eq.lhs.row(i).dot(x) - d.eq.rhs(i)) > tol * (1.0 + std::abs(d.eq.rhs(i)))) return false;
  }
  return true;
}

Vector LinOp::apply(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != dim()) throw Error(ErrorCode::DimensionMismatch, "operand length");
  return matrix_ * x;
}

// ---------------------------------------------------------------------------
// Dissipativity
// ---------------------------------------------------------------------------

PointCheck is_dissipative_at(const LinOp& a, const HalfNorm& p, const Vector& x) {
  return point_check(a, p, x, Sense::Minimize);
}

PointCheck is_strictly_dissipative_at(const LinOp& a, const HalfNorm& p, const Vector& x) {
  return point_check(a, p, x, Sense::Maximize);
}

std::vector<Vector> sample_domain(const LinOp& a, std::size_t n_samples, std::uint64_t seed) {
  const auto n = a.dim();
  const auto nn = static_cast<Eigen::Index>(n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<Vector> out;
  out.reserve(n_samples);
  if (!a.domain()) {
    for (std::size_t s = 0; s < n_samples; ++s) {
      Vector x(nn);
      for (Eigen::Index i = 0; i < nn; ++i) x(i) = unif(rng);
      out.push_back(std::move(x));
    }
    return out;
  }

  // Anchor points: optima of random linear objectives over domain ∩ box.
  const Inequalities boxed = boxed_domain(*a.domain(), n);
  std::vector<Vector> anchors;
  const std::size_t n_anchor = 2 * n + 4;
  for (std::size_t k = 0; k < n_anchor; ++k) {
    Vector c(nn);
    for (Eigen::Index i = 0; i < nn; ++i) c(i) = unif(rng);
    const auto res = solve_lp(LpProblem{c, {Matrix::Zero(0, nn), Vector::Zero(0)}, boxed, Sense::Minimize});
    if (res.optimal()) anchors.push_back(*res.point);
  }
  if (anchors.empty()) return out;
  std::exponential_distribution<double> expo(1.0);
  std::uniform_int_distribution<std::size_t> pick(0, anchors.size() - 1);
  for (std::size_t s = 0; s < n_samples; ++s) {
    const std::size_t terms = 1 + s % 3;
    Vector x = Vector::Zero(nn);
    double total = 0.0;
    for (std::size_t t = 0; t < terms; ++t) {
      const double w = expo(rng);
      x += w * anchors[pick(rng)];
      total += w;
    }
    out.push_back(x / total);
  }
  return out;
}

Report certify_dissipative(const LinOp& a, const HalfNorm& p, std::size_t n_samples, std::uint64_t seed) {
  if (p.dim() != a.dim()) throw Error(ErrorCode::DimensionMismatch, "operator and half-norm dimensions differ");
  const auto n = a.dim();

  std::vector<std::pair<Vector, std::string>> points;
  for (const auto& g : p.cone().generators()) {
    if (a.in_domain(g)) points.emplace_back(g, "generator");
    if (a.in_domain(-g)) points.emplace_back(-g, "negated generator");
  }
  // Probes slightly inside one ray and far out along another: they hit the
  // off-diagonal couplings that random samples reach only rarely.
  const auto& gens = p.cone().generators();
  if (gens.size() <= 12) {
    for (std::size_t i = 0; i < gens.size(); ++i) {
      for (std::size_t j = 0; j < gens.size(); ++j) {
        if (i == j) continue;
        Vector x = gens[i] / 8.0 - gens[j];
        if (a.in_domain(x)) points.emplace_back(std::move(x), "pair probe");
      }
    }
  }
  if (a.domain()) {
    if (n <= kBoxVertexEnumDim) {
      for (auto& v : enumerate_vertices(boxed_domain(*a.domain(), n)).vertices) {
        points.emplace_back(std::move(v), "domain vertex or normalized ray");
      }
    }
  }
  for (auto& x : sample_domain(a, n_samples, seed)) points.emplace_back(std::move(x), "sample");

  Report rep;
  rep.subject = std::string("p-dissipativity (") + std::string(p.kind_name()) + ")";
  rep.tolerance = kDissipativityTol;
  rep.worst_margin = -std::numeric_limits<double>::infinity();
  std::size_t skipped = 0;
  for (const auto& [x, label] : points) {
    if (!a.in_domain(x)) continue;
    PointCheck chk;
    try {
      chk = is_dissipative_at(a, p, x);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::EmptySubdifferential) throw;
      ++skipped;
      continue;
    }
    ++rep.samples_used;
    rep.worst_margin = std::max(rep.worst_margin, chk.margin);
    if (!chk.ok) rep.witnesses.push_back({x, chk.functional, chk.margin, label});
  }
  // Witnesses at generators come first: they are the reproducible ones.
  const auto at_generator = [](const Witness& w) { return w.label == "generator" || w.label == "negated generator"; };
  const auto n_gen = std::stable_partition(rep.witnesses.begin(), rep.witnesses.end(), at_generator) -
                     rep.witnesses.begin();
  std::vector<Witness> rest(rep.witnesses.begin() + n_gen, rep.witnesses.end());
  rep.witnesses.resize(static_cast<std::size_t>(n_gen));
  keep_worst(rep.witnesses, true);
  keep_worst(rest, true);
  for (auto& w : rest) {
    if (rep.witnesses.size() >= kMaxWitnesses) break;
    rep.witnesses.push_back(std::move(w));
  }
  rep.verdict = rep.witnesses.empty() ? Verdict::Inconclusive : Verdict::Fails;
  if (rep.verdict == Verdict::Inconclusive) {
    rep.notes.push_back("no violation on tested points; sampling does not prove dissipativity on the whole domain");
  }
  if (skipped > 0) {
    std::ostringstream os;
    os << skipped << " point(s) skipped: empty subdifferential";
    rep.notes.push_back(os.str());
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Positive off-diagonal property
// ---------------------------------------------------------------------------

Report has_pod(const LinOp& a, const PolyCone& cone) {
  if (cone.dim() != a.dim()) throw Error(ErrorCode::DimensionMismatch, "operator and cone dimensions differ");
  Report rep;
  rep.subject = "positive off-diagonal property";
  rep.tolerance = kDissipativityTol;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  bool partial = false;
  for (const auto& g0 : cone.generators()) {
    const Vector g = g0 / g0.cwiseAbs().maxCoeff();
    if (!a.in_domain(g)) {
      partial = true;
      continue;
    }
    const Vector ag = a.apply(g);
    for (const auto& f : cone.facets()) {
      if (std::abs(g.dot(f)) > kConeTol) continue;
      ++rep.samples_used;
      const double m = ag.dot(f);
      rep.worst_margin = std::min(rep.worst_margin, m);
      if (m < -kDissipativityTol) rep.witnesses.push_back({g, f, m, "x = extreme ray, phi = dual extreme ray"});
    }
  }
  keep_worst(rep.witnesses, false);
  if (!rep.witnesses.empty()) {
    rep.verdict = Verdict::Fails;
  } else if (partial) {
    rep.verdict = Verdict::Inconclusive;
    rep.notes.push_back("the domain does not contain every extreme ray of K; only in-domain rays were checked");
  } else {
    rep.verdict = Verdict::Holds;
  }
  if (rep.samples_used == 0) rep.worst_margin = 0.0;
  return rep;
}

bool pod_matrix_characterization(const Matrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::DimensionMismatch, "matrix must be square");
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (i != j && a(i, j) < -1e-12) return false;
    }
  }
  return true;
}

}  // namespace conesemi
