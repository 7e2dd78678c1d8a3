#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bipoisson/error.hpp"
#include "bipoisson/forms.hpp"
#include "bipoisson/invariant_functions.hpp"
#include "support.hpp"

using namespace bipoisson;
using test::spin;

namespace {

// Cross-product form of the orbit form on su(2): in the orthonormal basis
// [x, y] = sqrt(2) x cross y.
double kks_su2_oracle(const Vector& x, const Vector& alpha, const Vector& beta) {
  const Eigen::Vector3d x3 = x, a3 = alpha, b3 = beta;
  return -x3.dot(a3.cross(b3)) / (std::sqrt(2.0) * x3.squaredNorm());
}

// d(theta) straight from the pushforward: entry (j, k) = <V_j, X_k> - <V_k, X_j>.
Matrix canonical_form_oracle(const LocalChart& chart, const Vector& coords) {
  const Matrix push = chart.pushforward(coords);
  const auto n = push.rows() / 2;
  const Matrix x = push.topRows(n), v = push.bottomRows(n);
  const Matrix m = v.transpose() * x;
  return m - m.transpose();
}

Vector fd_map(const LocalChart& chart, const Vector& coords, int i, double h) {
  Vector plus = coords, minus = coords;
  plus(i) += h;
  minus(i) -= h;
  return (stack(chart.map(plus)) - stack(chart.map(minus))) / (2.0 * h);
}

}  // namespace

TEST_CASE("orbit decomposition dimensions") {
  const auto s2 = test::su2_sphere();
  CHECK(s2.k.dim() == 1);
  CHECK(s2.m.dim() == 2);
  const auto cp2 = test::cp2();
  CHECK(cp2.k.dim() == 4);
  CHECK(cp2.m.dim() == 4);
  const auto flag = test::su3_regular();
  CHECK(flag.k.dim() == 2);
  CHECK(flag.m.dim() == 6);

  for (const auto* c : {&s2, &cp2, &flag}) {
    const auto a = audit(*c);
    CHECK(a.k_commutes < 1e-12);
    CHECK(a.m_orthogonal < 1e-12);
    CHECK(a.image_distance < 1e-10);
    CHECK(a.total_rank == c->algebra().dim());
  }

  CHECK_THROWS_AS(make_orbit_config(test::su(2), Vector::Zero(3)), DomainError);
}

TEST_CASE("chart at the origin is the base point") {
  for (const auto& config : {test::su2_sphere(), test::cp2(), test::su3_regular()}) {
    const auto chart = test::ambient_chart(config, 2);
    const auto p = chart->map(Vector::Zero(chart->dim()));
    CHECK(p.x == chart->base().x);
    CHECK(p.v == chart->base().v);
  }
}

TEST_CASE("chart points stay on the tangent bundle") {
  for (const auto& config : {test::su2_sphere(), test::cp2(), test::su3_regular()}) {
    const auto chart = test::ambient_chart(config, 3);
    Stream rng(8);
    for (int i = 0; i < 5; ++i) {
      const auto a = audit_point(config, chart->map(test::box_coords(chart->dim(), rng)));
      CHECK(a.spectrum_distance < 1e-12);
      CHECK(a.tangency < 1e-12);
    }
  }
}

TEST_CASE("pushforward matches finite differences") {
  for (const auto& config : {test::su2_sphere(), test::cp2(), test::su3_regular()}) {
    const auto chart = test::ambient_chart(config, 4);
    Stream rng(9);
    const Vector c = test::box_coords(chart->dim(), rng);
    const Matrix push = chart->pushforward(c);
    for (int i = 0; i < chart->dim(); ++i) CHECK((push.col(i) - fd_map(*chart, c, i, 1e-5)).norm() < 1e-8);
    // columns span the ambient tangent space
    CHECK(same_subspace(Subspace::span(push), ambient_tangent_space(config, chart->map(c))));
  }
}

TEST_CASE("su(2) chart traces a great circle") {
  const auto alg = test::su(2);
  const Element e1 = alg->from_matrix(spin(1)), e2 = alg->from_matrix(spin(2)), e3 = alg->from_matrix(spin(3));
  const auto config = make_orbit_config(alg, e3);
  Matrix frame(3, 2);
  frame << e1.normalized(), e2.normalized();
  const Chart chart(config, {e3, e1}, Subspace::from_orthonormal(frame));
  const Vector plane_normal = e1.normalized();
  for (double s : {-0.4, -0.1, 0.05, 0.3}) {
    Vector c = Vector::Zero(4);
    c(0) = s;
    const Element x = chart.map(c).x;
    CHECK(x.norm() == doctest::Approx(e3.norm()).epsilon(1e-14));
    CHECK(std::abs(x.dot(plane_normal)) < 1e-14);
    // a unit element rotates at rate sqrt(2)
    CHECK(std::acos(x.dot(e3) / e3.squaredNorm()) == doctest::Approx(std::sqrt(2.0) * std::abs(s)).epsilon(1e-12));
  }
}

TEST_CASE("chart argument checks") {
  const auto config = test::cp2();
  const auto chart = test::ambient_chart(config, 5);
  CHECK_THROWS_AS(chart->map(Vector::Constant(chart->dim(), 0.6)), RangeError);
  CHECK_THROWS_AS(chart->map(Vector::Zero(chart->dim() + 1)), InputError);
  CHECK_THROWS_AS(Chart(config, {config.a * 2.0, Vector::Zero(8)}, config.m), DomainError);
  CHECK_THROWS_AS(Chart(config, {config.a, config.k.column(0)}, config.m), DomainError);
  CHECK_THROWS_AS(Chart(config, {config.a, Vector::Zero(8)}, config.k), DomainError);
  CHECK(injectivity_spot_check(*chart, 50, 1) > 1e-3);
}

TEST_CASE("adjoint exponential and its derivative") {
  const auto alg = test::su(3);
  Stream rng(6);
  const Element xi = 0.3 * rng.normal_vector(8), eta = rng.normal_vector(8), x = rng.normal_vector(8);
  const Matrix g = adjoint_exponential(*alg, xi);
  CHECK((g.transpose() * g - Matrix::Identity(8, 8)).norm() < 1e-13);
  CHECK((g * xi - xi).norm() < 1e-14);
  CHECK((adjoint_exponential(*alg, -xi) * g - Matrix::Identity(8, 8)).norm() < 1e-13);

  // d/ds Ad(e^{xi + s eta}) x = ad(dexp(ad xi) eta) Ad(e^xi) x
  const double h = 1e-5;
  const Vector fd = (adjoint_exponential(*alg, xi + h * eta) * x - adjoint_exponential(*alg, xi - h * eta) * x) / (2 * h);
  const Element lie = dexp_series(alg->adjoint(xi)) * eta;
  CHECK((fd - alg->bracket(lie, g * x)).norm() < 1e-8);
}

TEST_CASE("tautological one-form") {
  const auto config = test::cp2();
  const auto chart = test::ambient_chart(config, 6);
  Stream rng(7);
  const Vector c = test::box_coords(chart->dim(), rng);
  auto p = chart->map(c);
  const Vector t = chart->pushforward(c).col(0);
  const auto n = config.algebra().dim();

  TangentBundlePoint zero_fiber{p.x, Vector::Zero(n)};
  CHECK(tautological_oneform(config, zero_fiber, t) == 0.0);

  // dx orthogonal to v
  Vector perp = t;
  const Vector dx = t.head(n);
  perp.head(n) = dx - dx.dot(p.v) / p.v.squaredNorm() * p.v;
  CHECK(std::abs(tautological_oneform(config, p, perp)) < 1e-14);
  CHECK(tautological_oneform(config, p, t) == doctest::Approx(p.v.dot(dx)));

  // a vector along ker ad(x) is not tangent
  Vector bad = Vector::Zero(2 * n);
  bad.head(n) = p.x;
  CHECK_THROWS_AS(tautological_oneform(config, p, bad), DomainError);
}

TEST_CASE("infinitesimal action") {
  const auto config = test::su2_sphere();
  const auto& alg = config.algebra();
  const Element e1 = alg.from_matrix(spin(1)), e2 = alg.from_matrix(spin(2)), e3 = alg.from_matrix(spin(3));
  const Vector act = infinitesimal_action(config, e3, {e3, e1});
  CHECK(act.head(3).norm() < 1e-15);
  CHECK((act.tail(3) - e2).norm() < 1e-15);
  CHECK(infinitesimal_action(config, e3, {e3, e3 * 0.0}).norm() < 1e-15);
}

TEST_CASE("orbit form") {
  const auto config = test::su2_sphere();
  const auto& alg = config.algebra();
  const Element e1 = alg.from_matrix(spin(1)), e2 = alg.from_matrix(spin(2)), e3 = alg.from_matrix(spin(3));
  const Element alpha = alg.bracket(e1, e3), beta = alg.bracket(e2, e3);
  CHECK(kks_form(config, e3, alpha, alpha) == 0.0);
  CHECK(kks_form(config, e3, alpha, beta) == doctest::Approx(-e3.squaredNorm()).epsilon(1e-13));
  CHECK_THROWS_AS(kks_form(config, e3, e3, beta), DomainError);

  // cross-product oracle at random points of the sphere
  const auto chart = test::ambient_chart(config, 1);
  Stream rng(2);
  for (int i = 0; i < 5; ++i) {
    const Vector c = test::box_coords(chart->dim(), rng);
    const Element x = chart->map(c).x;
    const Matrix dx = chart->pushforward(c).topRows(3);
    const Matrix k = kks_matrix(config, x, dx);
    for (int a = 0; a < dx.cols(); ++a)
      for (int b = 0; b < dx.cols(); ++b) CHECK(std::abs(k(a, b) - kks_su2_oracle(x, dx.col(a), dx.col(b))) < 1e-12);
  }

  // invariance under conjugation
  const auto cp2 = test::cp2();
  const Matrix g = adjoint_exponential(cp2.algebra(), rng.normal_vector(8));
  const Element x = cp2.a;
  const Element u = cp2.algebra().bracket(x, rng.normal_vector(8)), w = cp2.algebra().bracket(x, rng.normal_vector(8));
  CHECK(kks_form(cp2, g * x, g * u, g * w) == doctest::Approx(kks_form(cp2, x, u, w)).epsilon(1e-12));
}

TEST_CASE("canonical form against the pushforward oracle") {
  for (const auto& config : {test::su2_sphere(), test::cp2(), test::su3_regular()}) {
    const auto chart = test::ambient_chart(config, 10);
    Stream rng(11);
    for (int i = 0; i < 3; ++i) {
      const Vector c = test::box_coords(chart->dim(), rng);
      const Matrix w1 = canonical_form_matrix(*chart, c);
      CHECK((w1 - canonical_form_oracle(*chart, c)).cwiseAbs().maxCoeff() < 1e-7);
      CHECK((w1 + w1.transpose()).norm() == 0.0);
    }
  }
}

TEST_CASE("orbit form pulled back to the bundle") {
  const auto config = test::cp2();
  const auto chart = test::ambient_chart(config, 12);
  const int half = chart->dim() / 2;
  Stream rng(13);
  Vector c = test::box_coords(chart->dim(), rng);
  const Matrix k = pullback_kks_matrix(*chart, c);
  // fiber directions are in the kernel
  CHECK(k.rightCols(half).norm() == 0.0);
  CHECK(k.bottomRows(half).norm() == 0.0);

  // W2 - W1 depends on the base point only
  const Matrix d0 = omega2_matrix(*chart, c) - canonical_form_matrix(*chart, c);
  c.tail(half) = test::box_coords(half, rng);
  const Matrix d1 = omega2_matrix(*chart, c) - canonical_form_matrix(*chart, c);
  CHECK((d0 - d1).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("closedness residual") {
  const Matrix j = [] {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 2) = m(1, 3) = 1.0;
    m(2, 0) = m(3, 1) = -1.0;
    return m;
  }();
  const FormField constant = [j](const Vector&) { return j; };
  CHECK(closedness_residual(constant, Vector::Zero(4)) == 0.0);

  const auto config = test::cp2();
  const auto chart = test::ambient_chart(config, 14);
  const FormField w1 = canonical_form_field(chart);
  const FormField corrupted = [w1](const Vector& c) {
    Matrix m = w1(c);
    m(0, 1) = std::exp(c(2));
    m(1, 0) = -m(0, 1);
    return m;
  };
  Stream rng(15);
  const Vector c = test::box_coords(chart->dim(), rng);
  CHECK(closedness_residual(w1, c) < 1e-5);
  CHECK(closedness_residual(omega2_field(chart), c) < 1e-5);
  CHECK(closedness_residual(corrupted, c) > 1e-2);

  CHECK_THROWS_AS(check_fd_step(1e-2), InputError);
  CHECK_THROWS_AS(check_fd_step(1e-7), InputError);
  CHECK_NOTHROW(check_fd_step(1e-4));
  CHECK_THROWS_AS(canonical_form_field(chart, 1e-2), InputError);
}

TEST_CASE("serial and parallel form kernels agree bit for bit") {
  const auto config = test::su3_regular();
  const auto chart = test::ambient_chart(config, 16);
  Stream rng(17);
  const Vector c = test::box_coords(chart->dim(), rng);
  CHECK(canonical_form_matrix(*chart, c, kDefaultFdStep, Execution::serial) ==
        canonical_form_matrix(*chart, c, kDefaultFdStep, Execution::parallel));
  const FormField w2 = omega2_field(chart);
  CHECK(closedness_residual(w2, c, kDefaultFdStep, Execution::serial) ==
        closedness_residual(w2, c, kDefaultFdStep, Execution::parallel));
}

TEST_CASE("invariant trace-word functions") {
  const auto config = test::cp2();
  const auto chart = test::ambient_chart(config, 18);
  Stream rng(19);
  const auto p = chart->map(test::box_coords(chart->dim(), rng));
  for (const char* w : {"xx", "vv", "xv", "xxvv", "xvxv", "vvvv"}) {
    const auto f = invariant_function(config.alg, parse_word(w));
    CHECK(invariance_defect(config.algebra(), f, p, 20, 3) < 1e-10);
    CHECK(to_string(parse_word(w)) == w);
  }
  // f_xx = -<x, x> up to the trace-form sign
  const auto fxx = invariant_function(config.alg, parse_word("xx"));
  CHECK(fxx(p) == doctest::Approx(-p.x.squaredNorm()).epsilon(1e-12));
  CHECK_THROWS_AS(parse_word(""), InputError);
  CHECK_THROWS_AS(parse_word("xy"), InputError);
}
