#include "bipoisson/forms.hpp"

#include <cmath>

#include "bipoisson/error.hpp"

namespace bipoisson {

void check_fd_step(double fd_step) {
  if (!(fd_step >= kMinFdStep && fd_step <= kMaxFdStep)) {
    throw InputError("fd_step must lie in [1e-6, 1e-3], got " + std::to_string(fd_step));
  }
}

Vector tautological_coefficients(const LocalChart& chart, const Vector& coords) {
  const auto e = chart.evaluate(coords);
  const auto n = e.point.x.size();
  return e.pushforward.topRows(n).transpose() * e.point.v;
}

Matrix canonical_form_matrix(const LocalChart& chart, const Vector& coords, double fd_step, Execution exec) {
  check_fd_step(fd_step);
  const int d = chart.dim();
  if (coords.size() != d) throw InputError("canonical_form_matrix: coordinate length mismatch");
  // row i holds d_i theta_j for all j
  const auto rows = sample_map<Vector>(exec, d, [&](int i) -> Vector {
    Vector plus = coords, minus = coords;
    plus(i) += fd_step;
    minus(i) -= fd_step;
    return (tautological_coefficients(chart, plus) - tautological_coefficients(chart, minus)) / (2.0 * fd_step);
  });
  Matrix dtheta(d, d);
  for (int i = 0; i < d; ++i) dtheta.row(i) = rows[i].transpose();
  return skew_part(dtheta - dtheta.transpose());
}

Matrix pullback_kks_matrix(const LocalChart& chart, const Vector& coords) {
  const auto e = chart.evaluate(coords);
  const auto n = e.point.x.size();
  return kks_matrix(chart.config(), e.point.x, e.pushforward.topRows(n));
}

Matrix omega2_matrix(const LocalChart& chart, const Vector& coords, double fd_step, Execution exec) {
  return canonical_form_matrix(chart, coords, fd_step, exec) + pullback_kks_matrix(chart, coords);
}

FormField canonical_form_field(ChartPtr chart, double fd_step) {
  check_fd_step(fd_step);
  return [chart = std::move(chart), fd_step](const Vector& c) { return canonical_form_matrix(*chart, c, fd_step); };
}

FormField omega2_field(ChartPtr chart, double fd_step) {
  check_fd_step(fd_step);
  return [chart = std::move(chart), fd_step](const Vector& c) { return omega2_matrix(*chart, c, fd_step); };
}

double closedness_residual(const FormField& field, const Vector& coords, double fd_step, Execution exec) {
  const int d = static_cast<int>(coords.size());
  const auto derivs = sample_map<Matrix>(exec, d, [&](int l) -> Matrix {
    Vector plus = coords, minus = coords;
    plus(l) += fd_step;
    minus(l) -= fd_step;
    return (field(plus) - field(minus)) / (2.0 * fd_step);
  });
  double worst = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      for (int k = j + 1; k < d; ++k) {
        const double s = derivs[i](j, k) + derivs[j](k, i) + derivs[k](i, j);
        worst = std::max(worst, std::abs(s));
      }
  return worst;
}

}  // namespace bipoisson
