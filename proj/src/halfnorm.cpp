#include "conesemi/halfnorm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace conesemi {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_dim(std::size_t dim, const Vector& x) {
  if (static_cast<std::size_t>(x.size()) != dim) {
    std::ostringstream os;
    os << "vector has length " << x.size() << ", expected " << dim;
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  if (!x.allFinite()) throw Error(ErrorCode::InvalidArgument, "vector has non-finite entries");
}

// Adds the epigraph of |v| for v = vars[offset .. offset+n) and returns the
// objective row (over the variables present after the call) that measures it.
Vector add_norm_epigraph(LpBuilder& lp, const NormSpec& norm, std::size_t offset) {
  const auto n = static_cast<Eigen::Index>(norm.weights.size());
  const auto off = static_cast<Eigen::Index>(offset);
  if (norm.kind == NormKind::WeightedLInf) {
    const auto t = static_cast<Eigen::Index>(lp.add_vars(1));
    for (Eigen::Index i = 0; i < n; ++i) {
      for (const double sgn : {1.0, -1.0}) {
        Vector row = lp.zero_row();
        row(t) = 1.0;
        row(off + i) = -sgn * norm.weights(i);
        lp.add_ge(row, 0.0);
      }
    }
    Vector obj = lp.zero_row();
    obj(t) = 1.0;
    return obj;
  }
  const auto s = static_cast<Eigen::Index>(lp.add_vars(static_cast<std::size_t>(n)));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (const double sgn : {1.0, -1.0}) {
      Vector row = lp.zero_row();
      row(s + i) = 1.0;
      row(off + i) = -sgn * norm.weights(i);
      lp.add_ge(row, 0.0);
    }
  }
  Vector obj = lp.zero_row();
  obj.segment(s, n).setOnes();
  return obj;
}

// Rows enforcing  vars[a] - vars[b] in K  (b may be absent) with an optional
// constant shift:  F (y_a + sign_b * y_b) >= F shift.
void add_cone_membership(LpBuilder& lp, const Matrix& facets, std::size_t a, std::optional<std::size_t> b,
                         double sign_b, const Vector& shift) {
  const auto n = facets.cols();
  const Vector rhs = facets * shift;
  for (Eigen::Index r = 0; r < facets.rows(); ++r) {
    Vector row = lp.zero_row();
    row.segment(static_cast<Eigen::Index>(a), n) += facets.row(r).transpose();
    if (b) row.segment(static_cast<Eigen::Index>(*b), n) += sign_b * facets.row(r).transpose();
    lp.add_ge(row, rhs(r));
  }
}

double solve_gauge(const LpProblem& lp) {
  const auto res = solve_lp(lp);
  if (res.status == LpStatus::Infeasible) {
    throw Error(ErrorCode::NotGenerating, "no majorant exists; the cone does not generate the space");
  }
  if (res.status == LpStatus::Unbounded) {
    throw Error(ErrorCode::NumericalFailure, "half-norm LP reported unbounded");
  }
  return std::max(res.value, 0.0);
}

// u in K': <g, u> >= 0 for each generator g of K, u = vars[0..n).
void add_dual_cone(LpBuilder& lp, const PolyCone& cone) {
  lp.add_ge_block(cone.generator_matrix().transpose(), 0, Vector::Zero(static_cast<Eigen::Index>(cone.generators().size())));
}

// |u|_* <= 1 for the dual of `norm`, u = vars[0..n).
void add_dual_norm_ball(LpBuilder& lp, const NormSpec& norm) {
  const auto n = static_cast<Eigen::Index>(norm.weights.size());
  if (norm.kind == NormKind::WeightedL1) {
    // dual: max |u_i| / w_i
    for (Eigen::Index i = 0; i < n; ++i) {
      Vector row = lp.zero_row();
      row(i) = 1.0;
      lp.add_le(row, norm.weights(i));
      lp.add_ge(row, -norm.weights(i));
    }
    return;
  }
  // dual: sum |u_i| / w_i, via s_i >= |u_i|
  const auto s = static_cast<Eigen::Index>(lp.add_vars(static_cast<std::size_t>(n)));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (const double sgn : {1.0, -1.0}) {
      Vector row = lp.zero_row();
      row(s + i) = 1.0;
      row(i) = -sgn;
      lp.add_ge(row, 0.0);
    }
  }
  Vector row = lp.zero_row();
  for (Eigen::Index i = 0; i < n; ++i) row(s + i) = 1.0 / norm.weights(i);
  lp.add_le(row, 1.0);
}

SubdiffDesc polyhedral(std::size_t dim, LpBuilder& lp) {
  SubdiffDesc d;
  d.kind = SubdiffDesc::Kind::Polyhedral;
  d.dim = dim;
  d.constraints = lp.build(Vector::Zero(0), Sense::Minimize);
  const auto feas = solve_lp(d.constraints);
  if (!feas.optimal()) {
    throw Error(ErrorCode::EmptySubdifferential, "the subdifferential constraints are infeasible");
  }
  return d;
}

}  // namespace

// ---------------------------------------------------------------------------
// NormSpec
// ---------------------------------------------------------------------------

double NormSpec::operator()(const Vector& x) const {
  const Vector wx = weights.cwiseProduct(x).cwiseAbs();
  return kind == NormKind::WeightedL1 ? wx.sum() : wx.maxCoeff();
}

double NormSpec::dual(const Vector& u) const {
  const Vector q = u.cwiseAbs().cwiseQuotient(weights);
  return kind == NormKind::WeightedL1 ? q.maxCoeff() : q.sum();
}

void NormSpec::validate(std::size_t dim) const {
  if (static_cast<std::size_t>(weights.size()) != dim) {
    throw Error(ErrorCode::DimensionMismatch, "norm weights do not match the dimension");
  }
  if (!weights.allFinite() || (weights.array() <= 0.0).any()) {
    throw Error(ErrorCode::InvalidArgument, "norm weights must be finite and strictly positive");
  }
}

// ---------------------------------------------------------------------------
// HalfNorm
// ---------------------------------------------------------------------------

HalfNorm HalfNorm::canonical(PolyCone cone, NormSpec norm) {
  norm.validate(cone.dim());
  return HalfNorm(std::move(cone), CanonicalGauge{std::move(norm)});
}

HalfNorm HalfNorm::regular_gauge(PolyCone cone, NormSpec norm) {
  norm.validate(cone.dim());
  return HalfNorm(std::move(cone), RegularGauge{std::move(norm)});
}

HalfNorm HalfNorm::phi(PolyCone cone, Vector phi) {
  if (!DualVector::certify(cone, phi).certified_positive) {
    throw Error(ErrorCode::NotPositive, "phi must be a positive functional (an element of K')");
  }
  return HalfNorm(std::move(cone), PhiGauge{std::move(phi)});
}

HalfNorm HalfNorm::order_unit(PolyCone cone, Vector unit) {
  if (!is_order_unit(cone, unit)) throw Error(ErrorCode::NotOrderUnit, "u is not interior to the cone");
  return HalfNorm(std::move(cone), OrderUnitGauge{std::move(unit)});
}

HalfNorm HalfNorm::positive_part_norm(PolyCone cone, NormSpec norm) {
  norm.validate(cone.dim());
  if (!is_lattice(cone)) {
    throw Error(ErrorCode::VariantPreconditionFailed, "N+ needs a lattice (simplicial) cone");
  }
  return HalfNorm(std::move(cone), PositivePartNorm{std::move(norm)});
}

HalfNorm HalfNorm::euclidean(PolyCone cone) { return HalfNorm(std::move(cone), EuclideanNorm{}); }

std::string_view HalfNorm::kind_name() const {
  return std::visit(overloaded{
                        [](const CanonicalGauge&) { return std::string_view("canonical"); },
                        [](const RegularGauge&) { return std::string_view("regular_gauge"); },
                        [](const PhiGauge&) { return std::string_view("phi"); },
                        [](const OrderUnitGauge&) { return std::string_view("order_unit"); },
                        [](const PositivePartNorm&) { return std::string_view("nplus"); },
                        [](const EuclideanNorm&) { return std::string_view("euclidean"); },
                    },
                    variant_);
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

double regularized_norm(const PolyCone& cone, const NormSpec& norm, const Vector& x) {
  require_dim(cone.dim(), x);
  norm.validate(cone.dim());
  const Matrix f = cone.facet_matrix();
  LpBuilder lp(cone.dim());
  add_cone_membership(lp, f, 0, std::nullopt, 0.0, x);   // z - x in K
  add_cone_membership(lp, f, 0, std::nullopt, 0.0, -x);  // z + x in K
  const Vector obj = add_norm_epigraph(lp, norm, 0);
  return solve_gauge(lp.build(obj, Sense::Minimize));
}

double eval(const HalfNorm& p, const Vector& x) {
  const auto n = p.dim();
  require_dim(n, x);
  const PolyCone& cone = p.cone();
  const bool below_zero = contains(cone, -x);

  return std::visit(
      overloaded{
          [&](const CanonicalGauge& g) -> double {
            if (below_zero) return 0.0;
            LpBuilder lp(n);
            add_cone_membership(lp, cone.facet_matrix(), 0, std::nullopt, 0.0, x);
            const Vector obj = add_norm_epigraph(lp, g.norm, 0);
            return solve_gauge(lp.build(obj, Sense::Minimize));
          },
          [&](const RegularGauge& g) -> double {
            if (below_zero) return 0.0;
            // variables y (majorant) then z (symmetric bound of y)
            const Matrix f = cone.facet_matrix();
            LpBuilder lp(2 * n);
            const Vector zero = Vector::Zero(static_cast<Eigen::Index>(n));
            add_cone_membership(lp, f, 0, std::nullopt, 0.0, zero);  // y >= 0
            add_cone_membership(lp, f, 0, std::nullopt, 0.0, x);     // y >= x
            add_cone_membership(lp, f, n, 0, -1.0, zero);            // z - y >= 0
            add_cone_membership(lp, f, n, 0, 1.0, zero);             // z + y >= 0
            const Vector obj = add_norm_epigraph(lp, g.norm, n);
            return solve_gauge(lp.build(obj, Sense::Minimize));
          },
          [&](const PhiGauge& g) -> double {
            if (below_zero) return 0.0;
            const Matrix f = cone.facet_matrix();
            LpBuilder lp(n);
            add_cone_membership(lp, f, 0, std::nullopt, 0.0, Vector::Zero(static_cast<Eigen::Index>(n)));
            add_cone_membership(lp, f, 0, std::nullopt, 0.0, x);
            return solve_gauge(lp.build(g.phi, Sense::Minimize));
          },
          [&](const OrderUnitGauge& g) -> double {
            double best = 0.0;
            for (const auto& f : cone.facets()) best = std::max(best, x.dot(f) / g.unit.dot(f));
            return best;
          },
          [&](const PositivePartNorm& g) -> double {
            if (below_zero) return 0.0;
            return g.norm(positive_part(cone, x));
          },
          [&](const EuclideanNorm&) -> double { return x.norm(); },
      },
      p.variant());
}

// ---------------------------------------------------------------------------
// Subdifferentials
// ---------------------------------------------------------------------------

SubdiffDesc subdifferential(const HalfNorm& p, const Vector& x) {
  const auto n = p.dim();
  require_dim(n, x);
  const PolyCone& cone = p.cone();

  auto exact_at_x = [&](LpBuilder& lp, double value) {
    Vector row = lp.zero_row();
    row.head(static_cast<Eigen::Index>(n)) = x;
    lp.add_eq(row, value);
  };

  return std::visit(
      overloaded{
          [&](const CanonicalGauge& g) -> SubdiffDesc {
            LpBuilder lp(n);
            add_dual_cone(lp, cone);
            add_dual_norm_ball(lp, g.norm);
            exact_at_x(lp, eval(p, x));
            return polyhedral(n, lp);
          },
          [&](const RegularGauge&) -> SubdiffDesc {
            throw Error(ErrorCode::VariantUnsupported, "no dual description implemented for the regular gauge");
          },
          [&](const PhiGauge& g) -> SubdiffDesc {
            // dp_phi(x) = { u in K' : phi - u in K', <x,u> = p_phi(x) }
            LpBuilder lp(n);
            add_dual_cone(lp, cone);
            const Matrix gt = cone.generator_matrix().transpose();
            lp.add_ge_block(-gt, 0, -gt * g.phi);
            exact_at_x(lp, eval(p, x));
            return polyhedral(n, lp);
          },
          [&](const OrderUnitGauge& g) -> SubdiffDesc {
            LpBuilder lp(n);
            add_dual_cone(lp, cone);
            Vector row = lp.zero_row();
            row.head(static_cast<Eigen::Index>(n)) = g.unit;
            lp.add_le(row, 1.0);
            exact_at_x(lp, eval(p, x));
            return polyhedral(n, lp);
          },
          [&](const PositivePartNorm& g) -> SubdiffDesc {
            LpBuilder lp(n);
            add_dual_cone(lp, cone);
            add_dual_norm_ball(lp, g.norm);
            exact_at_x(lp, eval(p, x));
            return polyhedral(n, lp);
          },
          [&](const EuclideanNorm&) -> SubdiffDesc {
            SubdiffDesc d;
            d.dim = n;
            const double r = x.norm();
            if (r == 0.0) {
              d.kind = SubdiffDesc::Kind::AnalyticBall;
              d.radius = 1.0;
              d.restriction = cone.dual();
              return d;
            }
            const Vector u = x / r;
            if (!DualVector::certify(cone, u).certified_positive) {
              throw Error(ErrorCode::EmptySubdifferential, "x/|x| is not a positive functional");
            }
            d.kind = SubdiffDesc::Kind::Singleton;
            d.point = u;
            return d;
          },
      },
      p.variant());
}

Vector project_onto_cone(const std::vector<Vector>& rays, const Vector& v) {
  const auto k = rays.size();
  if (k > 16) throw Error(ErrorCode::DimensionTooLarge, "cone projection enumerates at most 16 rays");
  Vector best = Vector::Zero(v.size());
  double best_dist = v.squaredNorm();
  for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < k; ++i) {
      if (mask & (std::size_t{1} << i)) idx.push_back(i);
    }
    if (idx.size() > static_cast<std::size_t>(v.size())) continue;
    Matrix r(v.size(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t c = 0; c < idx.size(); ++c) r.col(static_cast<Eigen::Index>(c)) = rays[idx[c]];
    Eigen::ColPivHouseholderQR<Matrix> qr(r);
    if (qr.rank() < r.cols()) continue;
    const Vector coef = qr.solve(v);
    if ((coef.array() < 0.0).any()) continue;
    const Vector proj = r * coef;
    const double dist = (v - proj).squaredNorm();
    if (dist < best_dist) {
      best_dist = dist;
      best = proj;
    }
  }
  return best;
}

SubdiffOptimum optimize_over_subdiff(const SubdiffDesc& d, const Vector& c, Sense sense) {
  require_dim(d.dim, c);
  switch (d.kind) {
    case SubdiffDesc::Kind::Singleton:
      return {c.dot(d.point), d.point};
    case SubdiffDesc::Kind::AnalyticBall: {
      // max over {|u| <= r} ∩ C of <v,u> is r |proj_C(v)|, attained at r proj/|proj|.
      const Vector v = sense == Sense::Maximize ? c : Vector(-c);
      const Vector proj = d.restriction ? project_onto_cone(d.restriction->generators(), v) : v;
      const double len = proj.norm();
      const Vector u = len > 0.0 ? Vector(d.radius * proj / len) : Vector::Zero(c.size());
      const double best = d.radius * len;
      return {sense == Sense::Maximize ? best : -best, u};
    }
    case SubdiffDesc::Kind::Polyhedral: {
      LpProblem lp = d.constraints;
      lp.objective = Vector::Zero(static_cast<Eigen::Index>(lp.num_vars()));
      lp.objective.head(c.size()) = c;
      lp.sense = sense;
      const auto res = solve_lp(lp);
      if (res.status == LpStatus::Unbounded) throw Error(ErrorCode::Unbounded, "subdifferential is unbounded");
      if (res.status == LpStatus::Infeasible) throw Error(ErrorCode::EmptySubdifferential, "subdifferential is empty");
      return {res.value, res.point->head(c.size())};
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown subdifferential kind");
}

std::vector<Vector> subdiff_vertices(const SubdiffDesc& d) {
  if (d.kind == SubdiffDesc::Kind::Singleton) return {d.point};
  if (d.kind == SubdiffDesc::Kind::AnalyticBall) {
    throw Error(ErrorCode::VariantUnsupported, "a ball has no finite vertex set");
  }
  const auto& c = d.constraints;
  const auto nv = static_cast<Eigen::Index>(c.num_vars());
  const auto me = c.eq.lhs.rows();
  const auto mi = c.ineq.lhs.rows();
  Inequalities all{Matrix(mi + 2 * me, nv), Vector(mi + 2 * me)};
  if (mi > 0) {
    all.lhs.topRows(mi) = c.ineq.lhs;
    all.rhs.head(mi) = c.ineq.rhs;
  }
  if (me > 0) {
    all.lhs.middleRows(mi, me) = c.eq.lhs;
    all.rhs.segment(mi, me) = c.eq.rhs;
    all.lhs.bottomRows(me) = -c.eq.lhs;
    all.rhs.tail(me) = -c.eq.rhs;
  }
  std::vector<Vector> out;
  for (const auto& v : enumerate_vertices(all).vertices) {
    Vector u = v.head(static_cast<Eigen::Index>(d.dim));
    const bool dup = std::any_of(out.begin(), out.end(), [&](const Vector& w) {
      return (w - u).cwiseAbs().maxCoeff() <= kFeasibilityTol * (1.0 + inf_norm(u));
    });
    if (!dup) out.push_back(std::move(u));
  }
  return out;
}

}  // namespace conesemi
