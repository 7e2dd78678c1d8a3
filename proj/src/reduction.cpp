#include "bipoisson/reduction.hpp"

#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <limits>
#include <sstream>

#include "bipoisson/error.hpp"
#include "bipoisson/seeding.hpp"

namespace bipoisson {

namespace {

constexpr double kIdentityTolerance = 1e-10;

Subspace isotropy_in(const LieAlgebra& alg, const Subspace& within, const Element& x) {
  if (within.dim() == 0) return within;
  const Subspace coeffs = kernel(alg.adjoint(x) * within.basis());
  return Subspace::span(within.basis() * coeffs.basis());
}

double max_bracket(const LieAlgebra& alg, const Subspace& a, const Subspace& b) {
  double worst = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < b.dim(); ++j) worst = std::max(worst, alg.bracket(a.column(i), b.column(j)).norm());
  return worst;
}

void require(bool ok, const char* identity, double value) {
  if (!ok) {
    std::ostringstream msg;
    msg << "reduction setup: identity '" << identity << "' failed (residual " << value << ")";
    throw SetupError(msg.str());
  }
}

Matrix doubled(const Matrix& op) {
  const auto n = op.rows();
  Matrix out = Matrix::Zero(2 * n, 2 * n);
  out.topLeftCorner(n, n) = op;
  out.bottomRightCorner(n, n) = op;
  return out;
}

void require_regular(const ReductionSetup& setup, const TangentBundlePoint& point, const char* where) {
  if (!is_regular(setup, point)) {
    throw DomainError(std::string(where) + ": point is not regular (isotropy differs from h)");
  }
}

Vector chart_gradient(const LocalChart& chart, const InvariantFunction& f, const Vector& coords, double h) {
  Vector grad(coords.size());
  for (Eigen::Index i = 0; i < coords.size(); ++i) {
    Vector plus = coords, minus = coords;
    plus(i) += h;
    minus(i) -= h;
    grad(i) = (f(chart.map(plus)) - f(chart.map(minus))) / (2.0 * h);
  }
  return grad;
}

}  // namespace

PrincipalIsotropy principal_isotropy(const OrbitConfig& config, int samples, std::uint64_t seed) {
  if (samples < 8) throw InputError("principal_isotropy: samples must be at least 8");
  const LieAlgebra& alg = config.algebra();
  const auto draw = [&](int i) -> Element {
    Stream rng(seed, "principal-isotropy", static_cast<std::uint64_t>(i));
    const Element x = config.m.basis() * rng.normal_vector(config.m.dim());
    return x / x.norm();
  };
  const auto search = [&](int count) {
    PrincipalIsotropy best;
    int best_dim = std::numeric_limits<int>::max();
    for (int i = 0; i < count; ++i) {
      const Element x0 = draw(i);
      Subspace h = isotropy_in(alg, config.k, x0);
      if (h.dim() < best_dim) {
        best_dim = h.dim();
        best.x0 = x0;
        best.h = std::move(h);
      }
    }
    best.samples = count;
    return best;
  };
  PrincipalIsotropy first = search(samples);
  const PrincipalIsotropy second = search(2 * samples);
  if (first.h.dim() != second.h.dim()) {
    throw GenericityError("principal_isotropy: minimal isotropy dimension changed from " +
                          std::to_string(first.h.dim()) + " to " + std::to_string(second.h.dim()) +
                          " when doubling the sample count; raise samples");
  }
  return first;
}

ReductionSetup reduction_setup(const OrbitConfig& config, int samples, std::uint64_t seed) {
  return reduction_setup(config, principal_isotropy(config, samples, seed).x0);
}

ReductionSetup reduction_setup(const OrbitConfig& config, const Element& x0) {
  const LieAlgebra& alg = config.algebra();
  if (x0.size() != alg.dim()) throw InputError("reduction_setup: x0 has wrong length");
  ReductionSetup s;
  s.config = config;
  s.x0 = x0;
  s.h = isotropy_in(alg, config.k, x0);
  s.n_h = normalizer(alg, s.h);
  s.p = orthogonal_complement(s.n_h);
  s.g_hat = centralizer(alg, s.h);
  s.k_hat = intersection(s.g_hat, config.k);
  s.m_hat = complement_within(s.g_hat, s.k_hat);
  s.slice = complement_within(config.m, image(alg.adjoint(x0), config.k));
  s.z_hat = center(alg, s.g_hat);

  SetupIdentities& id = s.identities;
  id.h_in_k = config.k.containment_residual(s.h);
  id.x0_centralizes_h = max_bracket(alg, Subspace::span(x0), s.h);
  id.slice_centralizes_h = max_bracket(alg, s.slice, s.h);
  id.slice_in_m_hat = s.m_hat.containment_residual(s.slice);
  id.slice_complement_distance =
      projector_distance(s.slice, complement_within(s.m_hat, image(alg.adjoint(x0), s.k_hat)));
  id.a_in_g_hat = s.g_hat.residual(config.a);
  id.p_orthogonal = (s.p.dim() && s.n_h.dim()) ? (s.p.basis().transpose() * s.n_h.basis()).norm() : 0.0;
  Matrix joined(alg.dim(), s.p.dim() + s.n_h.dim());
  joined << s.p.basis(), s.n_h.basis();
  id.p_sum_rank = numerical_rank(joined);

  require(id.h_in_k <= kIdentityTolerance, "h inside k", id.h_in_k);
  require(id.x0_centralizes_h <= kIdentityTolerance, "[x0, h] = 0", id.x0_centralizes_h);
  require(id.slice_centralizes_h <= kIdentityTolerance, "[slice, h] = 0", id.slice_centralizes_h);
  require(id.slice_in_m_hat <= kSubspaceTolerance, "slice inside m_hat", id.slice_in_m_hat);
  require(id.slice_complement_distance <= kSubspaceTolerance, "slice = m_hat minus ad(x0) k_hat",
          id.slice_complement_distance);
  require(id.a_in_g_hat <= kIdentityTolerance, "a in g_hat", id.a_in_g_hat);
  require(id.p_orthogonal <= kIdentityTolerance, "p orthogonal to n(h)", id.p_orthogonal);
  require(id.p_sum_rank == alg.dim(), "p + n(h) = g", alg.dim() - id.p_sum_rank);
  return s;
}

SliceNormalForm slice_normal_form(const OrbitConfig& config, const Element& x0, const Element& y, int max_iter,
                                  double tol) {
  const LieAlgebra& alg = config.algebra();
  if (config.m.residual(y) > 1e-8 * std::max(1.0, y.norm())) {
    throw DomainError("slice_normal_form: y is not in m");
  }
  const Subspace tangential = image(alg.adjoint(x0), config.k);
  const Matrix to_k = config.k.projector();
  // the objective is homogeneous in y and x0; scale the gradient so the
  // initial step 0.5 means the same thing for every input size
  const double scale = 1.0 / std::max(1e-300, y.norm() * x0.norm());

  SliceNormalForm out;
  out.y = y;
  out.residual = tangential.project(out.y).norm();
  double value = out.y.dot(x0);
  while (out.residual > tol) {
    if (out.iterations >= max_iter) {
      throw ConvergenceError("slice_normal_form: no convergence after " + std::to_string(max_iter) +
                                 " iterations",
                             out.residual);
    }
    const Element grad = to_k * alg.bracket(x0, out.y) * scale;
    const double slope = grad.squaredNorm() / scale;
    // near the maximum the Armijo gain drops below the rounding of the
    // objective; there the tangential residual decides instead
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(value);
    double step = 0.5;
    bool accepted = false;
    Element trial;
    double trial_value = value;
    double trial_residual = out.residual;
    for (int k = 0; k < 60; ++k) {
      trial = adjoint_exponential(alg, -step * grad) * out.y;
      trial_value = trial.dot(x0);
      trial_residual = tangential.project(trial).norm();
      accepted = trial_value >= value + 1e-4 * step * slope ||
                 (std::abs(trial_value - value) <= noise && trial_residual < out.residual);
      if (accepted) break;
      step *= 0.5;
    }
    ++out.iterations;
    if (accepted) {
      out.y = trial;
      value = trial_value;
      out.residual = trial_residual;
    }
  }
  return out;
}

Subspace isotropy_algebra(const OrbitConfig& config, const TangentBundlePoint& point) {
  const LieAlgebra& alg = config.algebra();
  const int n = alg.dim();
  Matrix stack(2 * n, n);
  stack << alg.adjoint(point.x), alg.adjoint(point.v);
  return kernel(stack);
}

bool is_regular(const ReductionSetup& setup, const TangentBundlePoint& point) {
  return same_subspace(isotropy_algebra(setup.config, point), setup.h);
}

Subspace regular_tangent_space(const ReductionSetup& setup, const TangentBundlePoint& point) {
  require_regular(setup, point, "regular_tangent_space");
  const Subspace tangent = ambient_tangent_space(setup.config, point);
  if (setup.h.dim() == 0) return tangent;
  const int n = setup.algebra().dim();
  Matrix stack(static_cast<Eigen::Index>(setup.h.dim()) * 2 * n, tangent.dim());
  for (int j = 0; j < setup.h.dim(); ++j) {
    stack.middleRows(static_cast<Eigen::Index>(j) * 2 * n, 2 * n) =
        doubled(setup.algebra().adjoint(setup.h.column(j))) * tangent.basis();
  }
  return Subspace::span(tangent.basis() * kernel(stack).basis());
}

Subspace canonical_complement(const ReductionSetup& setup, const TangentBundlePoint& point) {
  return canonical_complement(setup, setup.p, point);
}

Subspace canonical_complement(const ReductionSetup& setup, const Subspace& complement,
                              const TangentBundlePoint& point) {
  require_regular(setup, point, "canonical_complement");
  const int n = setup.algebra().dim();
  Matrix cols(2 * n, complement.dim());
  for (int i = 0; i < complement.dim(); ++i) {
    cols.col(i) = infinitesimal_action(setup.config, complement.column(i), point);
  }
  const Subspace out = Subspace::span(cols);
  if (out.dim() != complement.dim()) {
    throw DegeneracyError("canonical_complement: action of p has rank " + std::to_string(out.dim()) +
                          " < dim p = " + std::to_string(complement.dim()));
  }
  return out;
}

double complement_independence(const Subspace& complement, const Subspace& tangent) {
  Matrix joined(complement.ambient_dim(), complement.dim() + tangent.dim());
  joined << complement.basis(), tangent.basis();
  return min_singular_value(joined);
}

OrthogonalityResult complement_orthogonality(const ReductionSetup& setup, const LocalChart& chart,
                                             const Vector& coords, const Matrix& form) {
  const auto e = chart.evaluate(coords);
  const Matrix to_coords = pseudo_inverse(e.pushforward);
  const Matrix cp = to_coords * canonical_complement(setup, e.point).basis();
  const Matrix ct = to_coords * regular_tangent_space(setup, e.point).basis();
  OrthogonalityResult r;
  const Matrix pairing = cp.transpose() * form * ct;
  r.pairing = pairing.size() ? pairing.cwiseAbs().maxCoeff() : 0.0;
  r.sigma_complement =
      cp.cols() ? min_singular_value(cp.transpose() * form * cp) : std::numeric_limits<double>::infinity();
  r.sigma_tangent =
      ct.cols() ? min_singular_value(ct.transpose() * form * ct) : std::numeric_limits<double>::infinity();
  return r;
}

AdaptedChart::AdaptedChart(const ReductionSetup& setup, const TangentBundlePoint& base)
    : complement_(setup.p), sub_(setup.config, base, setup.m_hat) {
  if (setup.m_hat.residual(base.v) > 1e-8 * std::max(1.0, base.v.norm())) {
    throw DomainError("AdaptedChart: base fiber vector is not in m_hat");
  }
  require_regular(setup, base, "AdaptedChart");
}

LocalChart::Evaluation AdaptedChart::evaluate(const Vector& coords) const {
  const int dp = complement_.dim();
  if (coords.size() != dim()) throw InputError("AdaptedChart: coordinate vector has wrong length");
  if (dp > 0 && coords.head(dp).cwiseAbs().maxCoeff() > Chart::kMaxCoordinate) {
    throw RangeError("AdaptedChart: coordinates outside the validity box");
  }
  const LieAlgebra& alg = config().algebra();
  const int n = alg.dim();
  const auto sub = sub_.evaluate(coords.tail(sub_.dim()));
  const Element xi = complement_.basis() * coords.head(dp);
  const Matrix ad_xi = alg.adjoint(xi);
  const Matrix ad_exp = ad_xi.exp();

  Evaluation out;
  out.point.x = ad_exp * sub.point.x;
  out.point.v = ad_exp * sub.point.v;
  const Matrix zeta = dexp_series(ad_xi) * complement_.basis();
  out.pushforward = Matrix::Zero(2 * n, dim());
  out.pushforward.block(0, 0, n, dp) = -alg.adjoint(out.point.x) * zeta;
  out.pushforward.block(n, 0, n, dp) = -alg.adjoint(out.point.v) * zeta;
  out.pushforward.block(0, dp, n, sub_.dim()) = ad_exp * sub.pushforward.topRows(n);
  out.pushforward.block(n, dp, n, sub_.dim()) = ad_exp * sub.pushforward.bottomRows(n);
  return out;
}

BlockSplit split_blocks(const Matrix& form, int complement_dim) {
  const auto rest = form.rows() - complement_dim;
  BlockSplit out;
  if (complement_dim > 0 && rest > 0) {
    out.off_diagonal = std::max(form.topRightCorner(complement_dim, rest).norm(),
                                form.bottomLeftCorner(rest, complement_dim).norm());
  }
  out.sigma_complement = complement_dim > 0
                             ? min_singular_value(form.topLeftCorner(complement_dim, complement_dim))
                             : std::numeric_limits<double>::infinity();
  out.sigma_tangent = rest > 0 ? min_singular_value(form.bottomRightCorner(rest, rest))
                               : std::numeric_limits<double>::infinity();
  return out;
}

FrameSplit adapted_frame_split(const ReductionSetup& setup, const AdaptedChart& chart, const Vector& coords) {
  const auto e = chart.evaluate(coords);
  const int dp = chart.complement_dim();
  FrameSplit out;
  out.complement_distance = projector_distance(Subspace::span(e.pushforward.leftCols(dp)),
                                               canonical_complement(setup, e.point));
  out.tangent_distance = projector_distance(Subspace::span(e.pushforward.rightCols(chart.dim() - dp)),
                                            regular_tangent_space(setup, e.point));
  return out;
}

RestrictedPencilData restricted_pencil(const ReductionSetup& setup, const TangentBundlePoint& base,
                                       double fd_step) {
  check_fd_step(fd_step);
  if (setup.m_hat.residual(base.v) > 1e-8 * std::max(1.0, base.v.norm())) {
    throw DomainError("restricted_pencil: base fiber vector is not in m_hat");
  }
  require_regular(setup, base, "restricted_pencil");

  RestrictedPencilData d;
  d.ambient_chart = std::make_shared<const Chart>(setup.config, base, setup.config.m);
  d.sub_chart = std::make_shared<const Chart>(setup.config, base, setup.m_hat);
  // both charts share the base, so Ad(e^{F u}) = Ad(e^{F_hat u_hat}) when
  // F u = F_hat u_hat: the sub-chart is the ambient chart on a linear slice
  const Matrix frame_map = d.ambient_chart->frame().basis().transpose() * d.sub_chart->frame().basis();
  const auto fm = frame_map.rows();
  const auto fs = frame_map.cols();
  d.embedding = Matrix::Zero(2 * fm, 2 * fs);
  d.embedding.topLeftCorner(fm, fs) = frame_map;
  d.embedding.bottomRightCorner(fm, fs) = frame_map;

  d.w1_ambient = canonical_form_field(d.ambient_chart, fd_step);
  d.w2_ambient = omega2_field(d.ambient_chart, fd_step);
  const Matrix emb = d.embedding;
  const auto restrict = [emb](FormField ambient) -> FormField {
    return [emb, ambient = std::move(ambient)](const Vector& s) -> Matrix {
      return skew_part(emb.transpose() * ambient(emb * s) * emb);
    };
  };
  d.w1_sub = restrict(d.w1_ambient);
  d.w2_sub = restrict(d.w2_ambient);

  const int amb_dim = d.ambient_chart->dim();
  const int sub_dim = d.sub_chart->dim();
  d.p1_ambient = invert_form(d.w1_ambient, amb_dim, "ambient eta1");
  d.p2_ambient = invert_form(d.w2_ambient, amb_dim, "ambient eta2");
  d.p1_sub = invert_form(d.w1_sub, sub_dim, "restricted eta1");
  d.p2_sub = invert_form(d.w2_sub, sub_dim, "restricted eta2");
  return d;
}

BracketComparison bracket_agreement(const ReductionSetup& setup, const RestrictedPencilData& data,
                                    const InvariantFunction& f, const InvariantFunction& g,
                                    const Vector& sub_coords, const PencilParameter& t, double fd_step) {
  check_fd_step(fd_step);
  require_regular(setup, data.sub_chart->map(sub_coords), "bracket_agreement");
  const Vector amb = data.ambient_coords(sub_coords);

  const Matrix eta_amb = t.t1() * data.p1_ambient(amb) + t.t2() * data.p2_ambient(amb);
  const Vector df_amb = chart_gradient(*data.ambient_chart, f, amb, fd_step);
  const Vector dg_amb = chart_gradient(*data.ambient_chart, g, amb, fd_step);

  const Matrix eta_sub = t.t1() * data.p1_sub(sub_coords) + t.t2() * data.p2_sub(sub_coords);
  const Vector df_sub = chart_gradient(*data.sub_chart, f, sub_coords, fd_step);
  const Vector dg_sub = chart_gradient(*data.sub_chart, g, sub_coords, fd_step);

  BracketComparison out;
  out.ambient = df_amb.dot(eta_amb * dg_amb);
  out.restricted = df_sub.dot(eta_sub * dg_sub);
  out.residual = std::abs(out.ambient - out.restricted) / (1.0 + std::abs(out.ambient));
  return out;
}

BracketComparison covector_agreement(const ReductionSetup& setup, const RestrictedPencilData& data,
                                     const Vector& alpha, const Vector& beta, const Vector& sub_coords,
                                     const PencilParameter& t) {
  const auto sub_dim = data.embedding.cols();
  if (alpha.size() != sub_dim || beta.size() != sub_dim) {
    throw InputError("covector_agreement: covectors must have the sub-chart dimension");
  }
  const Vector amb = data.ambient_coords(sub_coords);
  const auto e = data.ambient_chart->evaluate(amb);
  require_regular(setup, e.point, "covector_agreement");
  const Matrix complement = pseudo_inverse(e.pushforward) * canonical_complement(setup, e.point).basis();
  // lift: agrees with the covector on the sub-chart directions, zero on P
  const auto amb_dim = data.embedding.rows();
  Matrix system(amb_dim, amb_dim);
  system << data.embedding.transpose(), complement.transpose();
  Matrix rhs = Matrix::Zero(amb_dim, 2);
  rhs.col(0).head(sub_dim) = alpha;
  rhs.col(1).head(sub_dim) = beta;
  if (min_singular_value(system) <= 1e-8) {
    throw DegeneracyError("covector_agreement: sub-chart directions and P are not complementary");
  }
  const Matrix lifted = system.partialPivLu().solve(rhs);

  const Matrix eta_amb = t.t1() * data.p1_ambient(amb) + t.t2() * data.p2_ambient(amb);
  const Matrix eta_sub = t.t1() * data.p1_sub(sub_coords) + t.t2() * data.p2_sub(sub_coords);
  BracketComparison out;
  out.ambient = lifted.col(0).dot(eta_amb * lifted.col(1));
  out.restricted = alpha.dot(eta_sub * beta);
  out.residual = std::abs(out.ambient - out.restricted) / (1.0 + std::abs(out.ambient));
  return out;
}

int local_freeness_excess(const ReductionSetup& setup, const std::vector<TangentBundlePoint>& points) {
  int worst = std::numeric_limits<int>::min();
  for (const auto& p : points) {
    const int excess = intersection(isotropy_algebra(setup.config, p), setup.g_hat).dim() - setup.z_hat.dim();
    worst = std::max(worst, excess);
  }
  return points.empty() ? 0 : worst;
}

int transversality_deficiency(const ReductionSetup& setup, const TangentBundlePoint& point) {
  const int n = setup.algebra().dim();
  Matrix cols = Matrix::Zero(2 * n, setup.g_hat.dim() + setup.slice.dim());
  for (int i = 0; i < setup.g_hat.dim(); ++i) {
    cols.col(i) = infinitesimal_action(setup.config, setup.g_hat.column(i), point);
  }
  for (int j = 0; j < setup.slice.dim(); ++j) {
    cols.col(setup.g_hat.dim() + j).tail(n) = setup.slice.column(j);
  }
  return 2 * setup.m_hat.dim() - numerical_rank(cols);
}

}  // namespace bipoisson
