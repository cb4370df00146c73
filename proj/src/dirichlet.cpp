#include "conesemi/dirichlet.hpp"

#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

namespace conesemi {

namespace {

constexpr double kPositivityTol = 1e-12;

GridFunction closed_form_from_nodes(const Grid& g, const Vector& y_all) {
  const auto n = g.n_interior;
  const auto last = n + 1;
  const double h = g.h;
  // Right-to-left cumulative trapezoid sums of e^{-s} y(s) and e^{s} y(s).
  std::vector<double> i_minus(last + 1, 0.0);
  std::vector<double> i_plus(last + 1, 0.0);
  for (std::size_t k = last; k-- > 0;) {
    const double a = g.node(k);
    const double b = g.node(k + 1);
    const auto ka = static_cast<Eigen::Index>(k);
    i_minus[k] = i_minus[k + 1] + 0.5 * h * (std::exp(-a) * y_all(ka) + std::exp(-b) * y_all(ka + 1));
    i_plus[k] = i_plus[k + 1] + 0.5 * h * (std::exp(a) * y_all(ka) + std::exp(b) * y_all(ka + 1));
  }
  auto x0 = [&](std::size_t k) {
    const double t = g.node(k);
    return 0.5 * (std::exp(t) * i_minus[k] - std::exp(-t) * i_plus[k]);
  };
  // x(0) = x0(0) + m + n = 0,  x(1) = x0(1) + m e + n / e = 0.
  const double e = std::exp(1.0);
  Matrix sys(2, 2);
  sys << 1.0, 1.0, e, 1.0 / e;
  Vector rhs(2);
  rhs << -x0(0), -x0(last);
  const Vector mn = linear_solve(sys, rhs);

  GridFunction x{Vector(static_cast<Eigen::Index>(n))};
  for (std::size_t j = 1; j <= n; ++j) {
    const double t = g.node(j);
    x.values(static_cast<Eigen::Index>(j - 1)) = x0(j) + mn(0) * std::exp(t) + mn(1) * std::exp(-t);
  }
  return x;
}

Verdict combine(const std::vector<Report>& parts) {
  bool any_inconclusive = false;
  for (const auto& p : parts) {
    if (p.verdict == Verdict::Fails) return Verdict::Fails;
    if (p.verdict != Verdict::Holds) any_inconclusive = true;
  }
  return any_inconclusive ? Verdict::Inconclusive : Verdict::Holds;
}

double positive_sup(const Vector& x) { return std::max(0.0, x.maxCoeff()); }

}  // namespace

Grid Grid::make(std::size_t n_interior) {
  if (n_interior < 2) throw Error(ErrorCode::InvalidArgument, "the grid needs at least 2 interior nodes");
  return Grid{n_interior, 1.0 / static_cast<double>(n_interior + 1)};
}

LinOp build_laplacian(const Grid& g) {
  const auto n = static_cast<Eigen::Index>(g.n_interior);
  const double s = 1.0 / (g.h * g.h);
  Matrix a = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, i) = -2.0 * s;
    if (i > 0) a(i, i - 1) = s;
    if (i + 1 < n) a(i, i + 1) = s;
  }
  return LinOp(std::move(a));
}

GridFunction fd_resolvent(const Grid& g, const GridFunction& y) {
  if (static_cast<std::size_t>(y.values.size()) != g.n_interior) {
    throw Error(ErrorCode::DimensionMismatch, "grid function length differs from the grid");
  }
  return {resolvent_apply(build_laplacian(g), 1.0, y.values)};
}

GridFunction resolvent_closed_form(const Grid& g, const GridFunction& y) {
  if (static_cast<std::size_t>(y.values.size()) != g.n_interior) {
    throw Error(ErrorCode::DimensionMismatch, "grid function length differs from the grid");
  }
  Vector all = Vector::Zero(static_cast<Eigen::Index>(g.n_interior + 2));
  all.segment(1, static_cast<Eigen::Index>(g.n_interior)) = y.values;
  return closed_form_from_nodes(g, all);
}

GridFunction resolvent_closed_form(const Grid& g, const std::function<double(double)>& y) {
  Vector all(static_cast<Eigen::Index>(g.n_interior + 2));
  for (std::size_t k = 0; k < g.n_interior + 2; ++k) all(static_cast<Eigen::Index>(k)) = y(g.node(k));
  return closed_form_from_nodes(g, all);
}

std::string ConvergenceTable::to_text() const {
  std::ostringstream os;
  os << "source: " << source << "\n";
  os << std::setw(6) << "N" << std::setw(14) << "h" << std::setw(16) << "sup-error" << std::setw(10) << "ratio" << "\n";
  for (const auto& r : rows) {
    os << std::setw(6) << r.n_interior << std::setw(14) << std::setprecision(6) << r.h << std::setw(16)
       << std::scientific << std::setprecision(6) << r.sup_error << std::defaultfloat;
    if (r.ratio) {
      os << std::setw(10) << std::fixed << std::setprecision(4) << *r.ratio << std::defaultfloat;
    } else {
      os << std::setw(10) << "-";
    }
    os << "\n";
  }
  return os.str();
}

std::string ConvergenceTable::to_csv() const {
  std::ostringstream os;
  os << std::setprecision(17) << "source,N,h,sup_error,ratio\n";
  for (const auto& r : rows) {
    os << source << "," << r.n_interior << "," << r.h << "," << r.sup_error << ",";
    if (r.ratio) os << *r.ratio;
    os << "\n";
  }
  return os.str();
}

ConvergenceTable convergence_study(std::span<const std::size_t> ns, const std::function<double(double)>& source,
                                   std::string source_name) {
  ConvergenceTable table{std::move(source_name), {}};
  for (const auto n : ns) {
    const Grid g = Grid::make(n);
    GridFunction y{Vector(static_cast<Eigen::Index>(n))};
    for (std::size_t j = 1; j <= n; ++j) y.values(static_cast<Eigen::Index>(j - 1)) = source(g.node(j));
    const double err = (fd_resolvent(g, y).values - resolvent_closed_form(g, source).values).cwiseAbs().maxCoeff();
    ConvergenceRow row{n, g.h, err, std::nullopt};
    if (!table.rows.empty() && err > 0.0) row.ratio = table.rows.back().sup_error / err;
    table.rows.push_back(row);
  }
  return table;
}

Report verify_example(const Grid& g, const SemigroupConfig& cfg, std::uint64_t seed, std::size_t n_samples) {
  cfg.validate();
  const auto n = static_cast<Eigen::Index>(g.n_interior);
  const LinOp a = build_laplacian(g);
  const PolyCone orthant = PolyCone::orthant(g.n_interior);
  std::vector<Report> parts;

  // (a)
  Report pod = has_pod(a, orthant);
  pod.subject = "(a) A_h has the positive off-diagonal property";
  parts.push_back(std::move(pod));

  // Random grid functions plus hat functions at every node.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<Vector> samples;
  for (std::size_t s = 0; s < n_samples; ++s) {
    Vector x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = unif(rng);
    samples.push_back(std::move(x));
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    Vector hat(n);
    for (Eigen::Index i = 0; i < n; ++i) hat(i) = std::max(0.0, 1.0 - std::abs(static_cast<double>(i - j)) / 3.0);
    samples.push_back(std::move(hat));
  }

  // (b) at a maximizing index j with x_j >= 0: delta_j is in dN+(x) for the
  // sup norm and <Ax, delta_j> = (Ax)_j must be <= 0.
  {
    Report r;
    r.subject = "(b) maximum principle: (A x)_j <= 0 at a nonnegative maximum j";
    r.tolerance = kDissipativityTol;
    r.worst_margin = -std::numeric_limits<double>::infinity();
    for (const auto& x : samples) {
      Eigen::Index j = 0;
      const double mx = x.maxCoeff(&j);
      if (mx < 0.0) continue;
      const double m = (a.matrix().row(j) * x)(0);
      ++r.samples_used;
      r.worst_margin = std::max(r.worst_margin, m);
      if (m > kDissipativityTol) r.witnesses.push_back({x, Vector::Unit(n, j), m, "maximizing index"});
    }
    r.verdict = r.witnesses.empty() ? Verdict::Inconclusive : Verdict::Fails;
    r.notes.push_back("sampled; the discrete maximum principle makes this exact in exact arithmetic");
    parts.push_back(std::move(r));
  }

  // (c)
  {
    Report r;
    r.subject = "(c) FD resolvent vs closed form for y = 1, gap <= h^2";
    r.tolerance = g.h * g.h;
    const GridFunction fd = fd_resolvent(g, GridFunction{Vector::Ones(n)});
    const GridFunction cf = resolvent_closed_form(g, [](double) { return 1.0; });
    r.worst_margin = (fd.values - cf.values).cwiseAbs().maxCoeff();
    r.samples_used = 1;
    r.verdict = r.worst_margin <= r.tolerance ? Verdict::Holds : Verdict::Fails;
    if (r.failed()) r.witnesses.push_back({fd.values, Vector(), r.worst_margin, "FD solution"});
    parts.push_back(std::move(r));
  }

  // (d) and (e)
  std::vector<SemigroupMethod> methods;
  if (cfg.method != SemigroupMethod::Expm) methods.push_back(SemigroupMethod::Euler);
  if (cfg.method != SemigroupMethod::Euler) methods.push_back(SemigroupMethod::Expm);
  Report contr;
  contr.subject = "(e) |(T(t)x)^+|_inf <= |x^+|_inf";
  contr.tolerance = kContractivityTol;
  contr.worst_margin = -std::numeric_limits<double>::infinity();
  for (const double t : cfg.t_grid) {
    for (const auto m : methods) {
      const Matrix tt = semigroup_at(a, t, m, cfg.euler_steps);
      Report pos = is_positive_operator(tt, orthant, kPositivityTol);
      std::ostringstream os;
      os << "(d) T(" << t << ") entrywise >= -1e-12 [" << (m == SemigroupMethod::Euler ? "euler" : "expm") << "]";
      pos.subject = os.str();
      parts.push_back(std::move(pos));
      for (const auto& x : samples) {
        const double margin = positive_sup(tt * x) - positive_sup(x);
        ++contr.samples_used;
        contr.worst_margin = std::max(contr.worst_margin, margin);
        if (margin > kContractivityTol && contr.witnesses.size() < 16) {
          contr.witnesses.push_back({x, Vector(), margin, "t = " + std::to_string(t)});
        }
      }
    }
  }
  contr.verdict = contr.witnesses.empty() ? Verdict::Inconclusive : Verdict::Fails;
  parts.push_back(std::move(contr));

  Report rep;
  std::ostringstream os;
  os << "Dirichlet second derivative, N = " << g.n_interior;
  rep.subject = os.str();
  rep.verdict = combine(parts);
  rep.tolerance = kContractivityTol;
  for (const auto& p : parts) rep.samples_used += p.samples_used;
  rep.parts = std::move(parts);
  return rep;
}

}  // namespace conesemi
