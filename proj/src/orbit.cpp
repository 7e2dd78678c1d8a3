#include "bipoisson/orbit.hpp"

#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <limits>

#include "bipoisson/error.hpp"
#include "bipoisson/seeding.hpp"
#include "bipoisson/subalgebra.hpp"

namespace bipoisson {

namespace {

constexpr double kTangencyTolerance = 1e-6;

double kernel_component(const LieAlgebra& alg, const Element& x, const Element& w) {
  return kernel(alg.adjoint(x)).project(w).norm();
}

}  // namespace

OrbitConfig make_orbit_config(AlgebraPtr alg, const Element& a) {
  if (!alg) throw InputError("make_orbit_config: null algebra");
  if (a.size() != alg->dim()) throw InputError("make_orbit_config: seed element has wrong length");
  if (!(a.norm() > 0.0)) throw DomainError("make_orbit_config: degenerate orbit (a = 0)");
  OrbitConfig c;
  c.alg = alg;
  c.a = a;
  c.k = kernel(alg->adjoint(a));
  c.m = orthogonal_complement(c.k);
  return c;
}

OrbitConfigAudit audit(const OrbitConfig& c) {
  const LieAlgebra& alg = c.algebra();
  OrbitConfigAudit out;
  for (int i = 0; i < c.k.dim(); ++i) {
    out.k_commutes = std::max(out.k_commutes, alg.bracket(c.k.column(i), c.a).norm());
  }
  out.m_orthogonal = (c.k.dim() && c.m.dim()) ? (c.k.basis().transpose() * c.m.basis()).norm() : 0.0;
  out.image_distance = projector_distance(image(alg.adjoint(c.a), Subspace::whole(alg.dim())), c.m);
  Matrix joined(alg.dim(), c.k.dim() + c.m.dim());
  joined << c.k.basis(), c.m.basis();
  out.total_rank = numerical_rank(joined);
  return out;
}

PointAudit audit_point(const OrbitConfig& c, const TangentBundlePoint& p) {
  const LieAlgebra& alg = c.algebra();
  PointAudit out;
  out.spectrum_distance = (anti_hermitian_spectrum(alg.to_matrix(p.x)) -
                           anti_hermitian_spectrum(alg.to_matrix(c.a)))
                              .cwiseAbs()
                              .maxCoeff();
  out.tangency = kernel_component(alg, p.x, p.v);
  return out;
}

Subspace ambient_tangent_space(const OrbitConfig& c, const TangentBundlePoint& p) {
  const LieAlgebra& alg = c.algebra();
  const int n = alg.dim();
  const Matrix ad_x = alg.adjoint(p.x);
  const Matrix ad_v = alg.adjoint(p.v);
  const Subspace tangent_x = image(ad_x, Subspace::whole(n));
  Matrix cols = Matrix::Zero(2 * n, n + tangent_x.dim());
  cols.block(0, 0, n, n) = -ad_x;
  cols.block(n, 0, n, n) = -ad_v;
  cols.block(n, n, n, tangent_x.dim()) = tangent_x.basis();
  return Subspace::span(cols);
}

Matrix adjoint_exponential(const LieAlgebra& alg, const Element& xi) {
  const Matrix ad = alg.adjoint(xi);
  return ad.exp();
}

Matrix dexp_series(const Matrix& ad_xi) {
  const auto n = ad_xi.rows();
  Matrix sum = Matrix::Identity(n, n);
  Matrix term = Matrix::Identity(n, n);
  for (int k = 1; k < 200; ++k) {
    term = ad_xi * term / static_cast<double>(k + 1);
    sum += term;
    if (term.norm() < 1e-16) break;
  }
  return sum;
}

Vector infinitesimal_action(const OrbitConfig& c, const Element& xi, const TangentBundlePoint& p) {
  const LieAlgebra& alg = c.algebra();
  const int n = alg.dim();
  Vector out(2 * n);
  out.head(n) = alg.bracket(xi, p.x);
  out.tail(n) = alg.bracket(xi, p.v);
  return out;
}

double tautological_oneform(const OrbitConfig& c, const TangentBundlePoint& p, const Vector& tangent) {
  const LieAlgebra& alg = c.algebra();
  const int n = alg.dim();
  if (tangent.size() != 2 * n) throw InputError("tautological_oneform: tangent must have length 2n");
  const Vector dx = tangent.head(n);
  if (kernel_component(alg, p.x, dx) > kTangencyTolerance * std::max(1.0, dx.norm())) {
    throw DomainError("tautological_oneform: dx is not tangent to the orbit");
  }
  return p.v.dot(dx);
}

double kks_form(const OrbitConfig& c, const Element& x, const Element& alpha, const Element& beta) {
  const LieAlgebra& alg = c.algebra();
  const Matrix ad_x = alg.adjoint(x);
  const Subspace ker = kernel(ad_x);
  for (const Element* t : {&alpha, &beta}) {
    if (ker.project(*t).norm() > kTangencyTolerance * std::max(1.0, t->norm())) {
      throw DomainError("kks_form: argument is not tangent to the orbit");
    }
  }
  const Matrix pinv = pseudo_inverse(ad_x);
  const Element xi1 = pinv * alpha;
  const Element xi2 = pinv * beta;
  return -alg.inner(x, alg.bracket(xi1, xi2));
}

Matrix kks_matrix(const OrbitConfig& c, const Element& x, const Matrix& tangents) {
  const Matrix ad_x = c.algebra().adjoint(x);
  const Matrix lifts = pseudo_inverse(ad_x) * tangents;
  // -<x, [xi_i, xi_j]> = xi_i^T ad(x) xi_j by ad-invariance of the product.
  const Matrix w = lifts.transpose() * ad_x * lifts;
  return skew_part(w);
}

Chart::Chart(OrbitConfig config, TangentBundlePoint base, Subspace frame)
    : config_(std::move(config)), base_(std::move(base)), frame_(std::move(frame)) {
  const int n = config_.algebra().dim();
  if (base_.x.size() != n || base_.v.size() != n || frame_.ambient_dim() != n) {
    throw InputError("Chart: dimension mismatch");
  }
  if ((base_.x - config_.a).norm() > 1e-10 * std::max(1.0, config_.a.norm())) {
    throw DomainError("Chart: base point must be the orbit seed a");
  }
  if (config_.m.residual(base_.v) > 1e-8 * std::max(1.0, base_.v.norm())) {
    throw DomainError("Chart: base fiber vector is not tangent at a");
  }
  if (config_.m.containment_residual(frame_) > 1e-8) {
    throw DomainError("Chart: frame is not contained in m");
  }
}

LocalChart::Evaluation Chart::evaluate(const Vector& coords) const {
  const int f = frame_.dim();
  if (coords.size() != 2 * f) throw InputError("Chart: coordinate vector has wrong length");
  if (f > 0 && coords.cwiseAbs().maxCoeff() > kMaxCoordinate) {
    throw RangeError("Chart: coordinates outside the validity box");
  }
  const LieAlgebra& alg = config_.algebra();
  const int n = alg.dim();
  const Matrix& frame = frame_.basis();
  const Element xi = frame * coords.head(f);
  const Matrix ad_xi = alg.adjoint(xi);
  const Matrix ad_exp = ad_xi.exp();

  Evaluation out;
  out.point.x = ad_exp * config_.a;
  out.point.v = ad_exp * (base_.v + frame * coords.tail(f));

  const Matrix zeta = dexp_series(ad_xi) * frame;
  out.pushforward = Matrix::Zero(2 * n, 2 * f);
  out.pushforward.block(0, 0, n, f) = -alg.adjoint(out.point.x) * zeta;
  out.pushforward.block(n, 0, n, f) = -alg.adjoint(out.point.v) * zeta;
  out.pushforward.block(n, f, n, f) = ad_exp * frame;
  return out;
}

double injectivity_spot_check(const LocalChart& chart, int pairs, std::uint64_t seed) {
  Stream rng(seed);
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < pairs; ++i) {
    const Vector c1 = rng.uniform_vector(chart.dim(), -Chart::kValidityBox, Chart::kValidityBox);
    const Vector c2 = rng.uniform_vector(chart.dim(), -Chart::kValidityBox, Chart::kValidityBox);
    const double gap = (stack(chart.map(c1)) - stack(chart.map(c2))).norm();
    worst = std::min(worst, gap / (c1 - c2).norm());
  }
  return worst;
}

Vector stack(const TangentBundlePoint& p) {
  Vector out(p.x.size() + p.v.size());
  out << p.x, p.v;
  return out;
}

}  // namespace bipoisson
