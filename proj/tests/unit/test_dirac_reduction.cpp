#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bipoisson/error.hpp"
#include "bipoisson/invariant_functions.hpp"
#include "bipoisson/reduction.hpp"
#include "support.hpp"

using namespace bipoisson;
using test::spin;

namespace {

Element unit(const Element& x) { return x / x.norm(); }

TangentBundlePoint regular_point(const ReductionSetup& s, std::uint64_t seed) {
  Stream rng(seed);
  return {s.config.a, unit(test::random_in(s.m_hat, rng))};
}

TangentBundlePoint slice_point(const ReductionSetup& s, std::uint64_t seed) {
  Stream rng(seed);
  return {s.config.a, unit(test::random_in(s.slice, rng))};
}

const ReductionSetup& cp2_setup() {
  static const ReductionSetup s = reduction_setup(test::cp2(), 32, 1);
  return s;
}
const ReductionSetup& su2_setup() {
  static const ReductionSetup s = reduction_setup(test::su2_sphere(), 32, 1);
  return s;
}

}  // namespace

TEST_CASE("principal isotropy") {
  CHECK(principal_isotropy(test::su2_sphere(), 32, 1).h.dim() == 0);
  CHECK(principal_isotropy(test::cp2(), 32, 1).h.dim() == 1);
  CHECK(principal_isotropy(test::su3_regular(), 32, 1).h.dim() == 0);
  CHECK_THROWS_AS(principal_isotropy(test::cp2(), 4, 1), InputError);

  const auto p = principal_isotropy(test::cp2(), 32, 2);
  CHECK(p.x0.norm() == doctest::Approx(1.0));
  CHECK(test::cp2().m.residual(p.x0) < 1e-12);
}

TEST_CASE("reduction setup dimensions") {
  const auto& c = cp2_setup();
  CHECK(!c.trivial());
  CHECK(c.h.dim() == 1);
  CHECK(c.n_h.dim() == 4);
  CHECK(c.p.dim() == 4);
  CHECK(c.g_hat.dim() == 4);
  CHECK(c.k_hat.dim() == 2);
  CHECK(c.m_hat.dim() == 2);
  CHECK(c.slice.dim() == 1);
  CHECK(c.z_hat.dim() == 1);

  const auto& s = su2_setup();
  CHECK(s.trivial());
  CHECK(s.g_hat.dim() == 3);
  CHECK(same_subspace(s.m_hat, s.config.m));
  CHECK(s.p.dim() == 0);
  CHECK(s.slice.dim() == 1);
  CHECK(s.z_hat.dim() == 0);

  const auto r = reduction_setup(test::su3_regular(), 32, 1);
  CHECK(r.trivial());
  CHECK(r.slice.dim() == 4);
}

TEST_CASE("setup identities hold") {
  for (const ReductionSetup* s : {&cp2_setup(), &su2_setup()}) {
    const auto& id = s->identities;
    CHECK(id.h_in_k <= 1e-10);
    CHECK(id.x0_centralizes_h <= 1e-10);
    CHECK(id.slice_centralizes_h <= 1e-10);
    CHECK(id.slice_in_m_hat <= 1e-8);
    CHECK(id.slice_complement_distance <= 1e-8);
    CHECK(id.a_in_g_hat <= 1e-10);
    CHECK(id.p_orthogonal <= 1e-10);
    CHECK(id.p_sum_rank == s->algebra().dim());
  }
  // [slice, h] = 0 by direct brackets
  const auto& c = cp2_setup();
  for (int i = 0; i < c.slice.dim(); ++i)
    for (int j = 0; j < c.h.dim(); ++j) CHECK(c.algebra().bracket(c.slice.column(i), c.h.column(j)).norm() <= 1e-10);
}

TEST_CASE("slice normal form") {
  const auto config = test::su2_sphere();
  const auto& alg = config.algebra();
  const Element e1 = alg.from_matrix(spin(1)), e2 = alg.from_matrix(spin(2));
  const auto r = slice_normal_form(config, e1, e2);
  CHECK(std::abs(std::abs(r.y.dot(e1)) / e1.squaredNorm() - 1.0) < 1e-8);
  CHECK(r.residual <= 1e-8);

  const auto& c = cp2_setup();
  const Element y = 0.7 * c.slice.column(0);
  const auto same = slice_normal_form(c, y);
  CHECK(same.iterations == 0);
  CHECK(same.y == y);

  Stream rng(3);
  for (int i = 0; i < 10; ++i) {
    const Element z = unit(test::random_in(c.config.m, rng));
    const auto n = slice_normal_form(c, z);
    CHECK(n.residual <= 1e-8);
    CHECK(n.iterations <= 200);
    CHECK(std::abs(n.y.norm() - 1.0) <= 1e-10);
  }

  CHECK_THROWS_AS(slice_normal_form(c, c.config.a), DomainError);
  const Element hard = unit(test::random_in(c.config.m, rng));
  CHECK_THROWS_AS(slice_normal_form(c, hard, 1), ConvergenceError);
  try {
    slice_normal_form(c, hard, 1);
  } catch (const ConvergenceError& e) {
    CHECK(e.best_residual() > 1e-8);
  }
}

TEST_CASE("isotropy algebra") {
  const auto& c = cp2_setup();
  CHECK(same_subspace(isotropy_algebra(c.config, {c.config.a, Vector::Zero(8)}), c.config.k));
  const auto p = slice_point(c, 4);
  CHECK(projector_distance(isotropy_algebra(c.config, p), c.h) <= 1e-8);
  CHECK(is_regular(c, p));
  CHECK(!is_regular(c, {c.config.a, Vector::Zero(8)}));

  const auto config = test::su2_sphere();
  const Element e1 = config.algebra().from_matrix(spin(1)), e3 = config.algebra().from_matrix(spin(3));
  CHECK(isotropy_algebra(config, {e3, e1}).dim() == 0);
}

TEST_CASE("regular tangent space and canonical complement") {
  const auto& s = su2_setup();
  const auto ps = regular_point(s, 5);
  CHECK(same_subspace(regular_tangent_space(s, ps), ambient_tangent_space(s.config, ps)));
  CHECK(canonical_complement(s, ps).dim() == 0);

  const auto& c = cp2_setup();
  for (std::uint64_t seed = 6; seed < 9; ++seed) {
    const auto p = regular_point(c, seed);
    const Subspace t = regular_tangent_space(c, p);
    CHECK(t.dim() == 2 * c.m_hat.dim());
    const Chart sub(c.config, p, c.m_hat);
    const Subspace sub_tangent = Subspace::span(sub.pushforward(Vector::Zero(sub.dim())));
    CHECK(t.containment_residual(sub_tangent) <= 1e-8);

    const Subspace pc = canonical_complement(c, p);
    CHECK(pc.dim() == c.p.dim());
    CHECK(complement_independence(pc, t) > 1e-6);
    CHECK(pc.dim() + t.dim() == ambient_tangent_space(c.config, p).dim());

    // another invariant product gives the same complement
    const auto prod = random_invariant_product(c.algebra(), c.h, seed);
    const Subspace other = orthogonal_complement(c.algebra(), c.n_h, prod);
    CHECK(projector_distance(canonical_complement(c, other, p), pc) <= 1e-8);
  }
  CHECK_THROWS_AS(regular_tangent_space(c, {c.config.a, Vector::Zero(8)}), DomainError);
}

TEST_CASE("complement orthogonality") {
  const auto& c = cp2_setup();
  for (std::uint64_t seed = 10; seed < 13; ++seed) {
    const auto p = regular_point(c, seed);
    const Chart chart(c.config, p, c.config.m);
    const Vector zero = Vector::Zero(chart.dim());
    const Matrix w1 = canonical_form_matrix(chart, zero);
    const Matrix w2 = omega2_matrix(chart, zero);
    for (const Matrix& w : {w1, w2, Matrix(0.3 * w1 + 0.7 * w2), Matrix(2.0 * w1 - 0.5 * w2)}) {
      const auto o = complement_orthogonality(c, chart, zero, w);
      CHECK(o.pairing <= 1e-8);
      CHECK(o.sigma_complement > 1e-6);
      CHECK(o.sigma_tangent > 1e-6);
    }
  }
}

TEST_CASE("adapted chart") {
  const auto& s = su2_setup();
  const AdaptedChart trivial(s, regular_point(s, 1));
  CHECK(trivial.complement_dim() == 0);
  CHECK(trivial.dim() == trivial.sub_chart().dim());

  const auto& c = cp2_setup();
  const AdaptedChart chart(c, regular_point(c, 2));
  const int dp = chart.complement_dim();
  CHECK(dp == 4);
  CHECK(chart.dim() == 8);
  Stream rng(3);
  Vector coords = Vector::Zero(chart.dim());
  coords.tail(chart.dim() - dp) = test::box_coords(chart.dim() - dp, rng);
  for (const Matrix& w : {canonical_form_matrix(chart, coords), omega2_matrix(chart, coords)}) {
    const auto b = split_blocks(w, dp);
    CHECK(b.off_diagonal <= 1e-8);
    CHECK(b.sigma_complement > 1e-6);
    CHECK(b.sigma_tangent > 1e-6);
  }
  const auto fs = adapted_frame_split(c, chart, coords);
  CHECK(fs.complement_distance <= 1e-8);
  CHECK(fs.tangent_distance <= 1e-8);

  coords.head(dp) = 0.05 * unit(rng.normal_vector(dp));
  CHECK(split_blocks(canonical_form_matrix(chart, coords), dp).off_diagonal > 1e-6);

  CHECK_THROWS_AS(AdaptedChart(c, {c.config.a, Vector::Zero(8)}), DomainError);
}

TEST_CASE("restricted pencil on CP^2") {
  const auto& c = cp2_setup();
  const auto data = restricted_pencil(c, slice_point(c, 20));
  CHECK(data.sub_chart->dim() == 4);
  for (int i = 0; i < 3; ++i) {
    Stream rng(40, "restricted-test", i);
    const Vector s = test::box_coords(data.sub_chart->dim(), rng);
    CHECK(closedness_residual(data.w1_sub, s) <= 1e-5);
    CHECK(closedness_residual(data.w2_sub, s) <= 1e-5);
    CHECK(min_singular_value(data.w1_sub(s)) > 1e-6);
    CHECK(min_singular_value(data.w2_sub(s)) > 1e-6);
    CHECK(jacobi_residual(data.p1_sub, s) <= 1e-5);
    CHECK(jacobi_residual(data.p2_sub, s) <= 1e-5);
    CHECK(compatibility_residual(data.p1_sub, data.p2_sub, s) <= 1e-5);
    const auto v = classify_profile(degeneracy_profile(data.p1_sub, data.p2_sub, s, unit_circle_samples(16)));
    CHECK(v.max_sigma_on_line <= 1e-8);
    CHECK(v.min_sigma_off_line > 1e-4);
  }
  CHECK_THROWS_AS(restricted_pencil(c, {c.config.a, Vector::Zero(8)}), DomainError);
}

TEST_CASE("trivial reduction restricts to the ambient pencil") {
  const auto& s = su2_setup();
  const auto data = restricted_pencil(s, slice_point(s, 21));
  Stream rng(22);
  const Vector c = test::box_coords(data.sub_chart->dim(), rng);
  const Vector a = data.ambient_coords(c);
  CHECK((data.w1_sub(c) - data.w1_ambient(a)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((data.p2_sub(c) - data.p2_ambient(a)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("bracket agreement") {
  const auto& c = cp2_setup();
  const auto data = restricted_pencil(c, slice_point(c, 23));
  const auto f = invariant_function(c.config.alg, parse_word("vv"));
  const auto g = invariant_function(c.config.alg, parse_word("xxvv"));
  Stream rng(24);
  const Vector s = test::box_coords(data.sub_chart->dim(), rng);
  const auto same = bracket_agreement(c, data, f, f, s, {1.0, 1.0});
  CHECK(std::abs(same.ambient) < 1e-10);
  CHECK(std::abs(same.restricted) < 1e-10);
  for (const PencilParameter& t : {PencilParameter(1, 0), PencilParameter(0, 1), PencilParameter(0.3, 0.7)}) {
    CHECK(bracket_agreement(c, data, f, g, s, t).residual <= 1e-5);
    const auto cv = covector_agreement(c, data, rng.normal_vector(4), rng.normal_vector(4), s, t);
    CHECK(cv.residual <= 1e-5);
    CHECK(std::abs(cv.ambient) > 1e-3);
  }
}

TEST_CASE("local freeness and transversality") {
  for (const ReductionSetup* s : {&cp2_setup(), &su2_setup()}) {
    const auto data = restricted_pencil(*s, slice_point(*s, 30));
    std::vector<TangentBundlePoint> points;
    Stream rng(31);
    for (int i = 0; i < 5; ++i) points.push_back(data.sub_chart->map(test::box_coords(data.sub_chart->dim(), rng)));
    CHECK(local_freeness_excess(*s, points) == 0);
    CHECK(transversality_deficiency(*s, slice_point(*s, 32)) == 0);

    const TangentBundlePoint zero{s->config.a, Vector::Zero(s->algebra().dim())};
    CHECK(local_freeness_excess(*s, {zero}) > 0);
    CHECK(transversality_deficiency(*s, zero) > 0);
  }
}
