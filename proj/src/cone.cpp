#include "conesemi/cone.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace conesemi {

namespace {

void require_dim(const PolyCone& cone, const Vector& x, const char* what) {
  if (static_cast<std::size_t>(x.size()) != cone.dim()) {
    std::ostringstream os;
    os << what << " has length " << x.size() << " but the cone lives in dimension " << cone.dim();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
}

Vector unit_max_norm(const Vector& v) { return v / v.cwiseAbs().maxCoeff(); }

bool lex_greater(const Vector& a, const Vector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) > b(i) + 1e-12) return true;
    if (a(i) < b(i) - 1e-12) return false;
  }
  return false;
}

bool same_direction(const Vector& a, const Vector& b) {
  return (unit_max_norm(a) - unit_max_norm(b)).cwiseAbs().maxCoeff() <= kConeTol;
}

// max sum(lambda) s.t. sum lambda_i g_i = 0, 0 <= lambda <= 1; positive iff
// some nontrivial conic combination vanishes, i.e. the cone contains a line.
bool has_line(const std::vector<Vector>& rays, std::size_t dim) {
  const auto k = rays.size();
  LpBuilder lp(k);
  Matrix g(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < k; ++i) g.col(static_cast<Eigen::Index>(i)) = unit_max_norm(rays[i]);
  lp.add_eq_block(g, 0, Vector::Zero(static_cast<Eigen::Index>(dim)));
  for (std::size_t i = 0; i < k; ++i) {
    Vector row = lp.zero_row();
    row(static_cast<Eigen::Index>(i)) = 1.0;
    lp.add_ge(row, 0.0);
    lp.add_le(row, 1.0);
  }
  const auto res = solve_lp(lp.build(Vector::Ones(static_cast<Eigen::Index>(k)), Sense::Maximize));
  return res.optimal() && res.value > kFeasibilityTol;
}

template <typename F>
void for_each_subset(std::size_t n, std::size_t k, F&& f) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    f(idx);
    if (k == 0) return;
    std::size_t j = k;
    while (j > 0 && idx[j - 1] == n - k + (j - 1)) --j;
    if (j == 0) return;
    ++idx[j - 1];
    for (std::size_t l = j; l < k; ++l) idx[l] = idx[l - 1] + 1;
  }
}

}  // namespace

PolyCone PolyCone::from_generators(std::vector<Vector> rays) {
  if (rays.empty()) throw Error(ErrorCode::InvalidArgument, "a cone needs at least one generator");
  const auto dim = static_cast<std::size_t>(rays.front().size());
  if (dim == 0) throw Error(ErrorCode::InvalidArgument, "generators must have dimension >= 1");
  if (dim > kVertexEnumMaxDim) {
    throw Error(ErrorCode::DimensionTooLarge, "facet enumeration is limited to dimension 10");
  }
  for (const auto& r : rays) {
    if (static_cast<std::size_t>(r.size()) != dim) {
      throw Error(ErrorCode::DimensionMismatch, "generators have different lengths");
    }
    if (!r.allFinite()) throw Error(ErrorCode::InvalidArgument, "generator has non-finite entries");
    if (r.cwiseAbs().maxCoeff() == 0.0) throw Error(ErrorCode::InvalidArgument, "generator is zero");
  }
  if (has_line(rays, dim)) {
    throw Error(ErrorCode::NotPointed, "some nonzero x and -x are both conic combinations of the rays");
  }

  std::vector<Vector> distinct;
  for (auto& r : rays) {
    const bool dup = std::any_of(distinct.begin(), distinct.end(),
                                 [&](const Vector& d) { return same_direction(d, r); });
    if (!dup) distinct.push_back(std::move(r));
  }
  Matrix all(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(distinct.size()));
  for (std::size_t i = 0; i < distinct.size(); ++i) all.col(static_cast<Eigen::Index>(i)) = distinct[i];
  if (static_cast<std::size_t>(Eigen::FullPivLU<Matrix>(all).rank()) < dim) {
    throw Error(ErrorCode::NotFullDimensional, "generators do not span the space");
  }

  std::vector<Vector> normalized;
  normalized.reserve(distinct.size());
  for (const auto& r : distinct) normalized.push_back(unit_max_norm(r));

  std::vector<Vector> facets;
  auto consider = [&](Vector f) {
    double lo = 0.0;
    double hi = 0.0;
    for (const auto& g : normalized) {
      const double s = g.dot(f);
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    if (lo < -kConeTol && hi > kConeTol) return;
    if (lo < -kConeTol) f = -f;
    f = unit_max_norm(f);
    for (Eigen::Index i = 0; i < f.size(); ++i) {
      if (std::abs(f(i)) < 1e-14) f(i) = 0.0;
    }
    const bool dup = std::any_of(facets.begin(), facets.end(),
                                 [&](const Vector& h) { return (h - f).cwiseAbs().maxCoeff() <= kConeTol; });
    if (!dup) facets.push_back(std::move(f));
  };

  if (dim == 1) {
    consider(Vector::Ones(1));
  } else {
    for_each_subset(normalized.size(), dim - 1, [&](const std::vector<std::size_t>& idx) {
      Matrix s(static_cast<Eigen::Index>(dim - 1), static_cast<Eigen::Index>(dim));
      for (std::size_t r = 0; r < idx.size(); ++r) s.row(static_cast<Eigen::Index>(r)) = normalized[idx[r]].transpose();
      Eigen::FullPivLU<Matrix> lu(s);
      if (static_cast<std::size_t>(lu.rank()) != dim - 1) return;
      consider(lu.kernel().col(0));
    });
  }
  std::sort(facets.begin(), facets.end(), lex_greater);

  // Keep only extreme rays: those lying on dim-1 independent facets.
  std::vector<Vector> extreme;
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    std::vector<Vector> tight;
    for (const auto& f : facets) {
      if (std::abs(normalized[i].dot(f)) <= kConeTol) tight.push_back(f);
    }
    std::size_t rank = 0;
    if (!tight.empty()) {
      Matrix t(static_cast<Eigen::Index>(tight.size()), static_cast<Eigen::Index>(dim));
      for (std::size_t r = 0; r < tight.size(); ++r) t.row(static_cast<Eigen::Index>(r)) = tight[r].transpose();
      rank = static_cast<std::size_t>(Eigen::FullPivLU<Matrix>(t).rank());
    }
    if (rank + 1 >= dim) extreme.push_back(distinct[i]);
  }
  return PolyCone(dim, std::move(extreme), std::move(facets));
}

PolyCone PolyCone::orthant(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "orthant dimension must be >= 1");
  std::vector<Vector> basis;
  for (std::size_t i = 0; i < n; ++i) basis.push_back(Vector::Unit(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(i)));
  return PolyCone(n, basis, basis);
}

Matrix PolyCone::generator_matrix() const {
  Matrix g(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(generators_.size()));
  for (std::size_t i = 0; i < generators_.size(); ++i) g.col(static_cast<Eigen::Index>(i)) = generators_[i];
  return g;
}

Matrix PolyCone::facet_matrix() const {
  Matrix f(static_cast<Eigen::Index>(facets_.size()), static_cast<Eigen::Index>(dim_));
  for (std::size_t i = 0; i < facets_.size(); ++i) f.row(static_cast<Eigen::Index>(i)) = facets_[i].transpose();
  return f;
}

PolyCone PolyCone::dual() const { return PolyCone(dim_, facets_, generators_); }

DualVector DualVector::certify(const PolyCone& cone, Vector coords) {
  require_dim(cone, coords, "functional");
  bool ok = coords.allFinite();
  for (const auto& g : cone.generators()) {
    if (g.dot(coords) < -kConeTol) ok = false;
  }
  return DualVector{std::move(coords), ok};
}

bool contains(const PolyCone& cone, const Vector& x) {
  require_dim(cone, x, "vector");
  return std::all_of(cone.facets().begin(), cone.facets().end(),
                     [&](const Vector& f) { return x.dot(f) >= -kConeTol; });
}

bool leq(const PolyCone& cone, const Vector& x, const Vector& y) {
  require_dim(cone, x, "left operand");
  require_dim(cone, y, "right operand");
  return contains(cone, y - x);
}

bool is_lattice(const PolyCone& cone) { return cone.generators().size() == cone.dim(); }

Vector positive_part(const PolyCone& cone, const Vector& x) {
  require_dim(cone, x, "vector");
  if (!is_lattice(cone)) {
    throw Error(ErrorCode::NotLattice, "positive parts need a simplicial cone");
  }
  const Matrix g = cone.generator_matrix();
  const Vector coords = linear_solve(g, x).cwiseMax(0.0);
  return g * coords;
}

bool is_order_unit(const PolyCone& cone, const Vector& u) {
  require_dim(cone, u, "order unit");
  return std::all_of(cone.facets().begin(), cone.facets().end(),
                     [&](const Vector& f) { return u.dot(f) > kConeTol; });
}

Report is_total(const PolyCone& cone, std::span<const DualVector> phis) {
  if (phis.empty()) throw Error(ErrorCode::EmptyPhi, "a total set must be nonempty");
  for (const auto& phi : phis) {
    require_dim(cone, phi.coords, "functional");
    if (!phi.certified_positive || !DualVector::certify(cone, phi.coords).certified_positive) {
      throw Error(ErrorCode::NotPositive, "total-set functionals must lie in the dual cone");
    }
  }
  const auto n = static_cast<Eigen::Index>(cone.dim());

  Report rep;
  rep.subject = "total set";
  rep.tolerance = kFeasibilityTol;
  rep.verdict = Verdict::Holds;
  rep.worst_margin = std::numeric_limits<double>::infinity();

  LpBuilder lp(cone.dim());
  for (const auto& phi : phis) lp.add_ge(phi.coords, 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector e = Vector::Unit(n, i);
    lp.add_ge(e, -1.0);
    lp.add_le(e, 1.0);
  }
  for (const auto& f : cone.facets()) {
    const auto res = solve_lp(lp.build(f, Sense::Minimize));
    if (!res.optimal()) throw Error(ErrorCode::NumericalFailure, "total-set LP over a box was not solved");
    rep.worst_margin = std::min(rep.worst_margin, res.value);
    if (res.value < -kFeasibilityTol) {
      rep.verdict = Verdict::Fails;
      rep.witnesses.push_back({*res.point, f, res.value, "x with <x,phi> >= 0 for all phi but <x,f> < 0"});
    }
  }
  return rep;
}

}  // namespace conesemi
