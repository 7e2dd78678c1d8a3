#include "bipoisson/poisson.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "bipoisson/error.hpp"

namespace bipoisson {

PencilParameter::PencilParameter(double t1, double t2) : t1_(t1), t2_(t2) {
  if (t1 == 0.0 && t2 == 0.0) throw InputError("pencil parameter (0, 0) is not allowed");
}

std::vector<PencilParameter> unit_circle_samples(int count) {
  std::vector<PencilParameter> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / count;
    out.emplace_back(std::cos(angle), std::sin(angle));
  }
  return out;
}

InverseResult invert_skew(const Matrix& w, const Vector& coords) {
  const Vector sv = singular_values(w);
  const double top = sv.size() ? sv(0) : 0.0;
  const double bottom = sv.size() ? sv(sv.size() - 1) : 0.0;
  if (!(bottom > 1e-8 * top)) {
    std::ostringstream msg;
    msg << "degenerate form (sigma_min " << bottom << ", sigma_max " << top << ") at coords ["
        << coords.transpose() << "]";
    throw DegeneracyError(msg.str());
  }
  InverseResult r;
  r.inverse = skew_part(w.partialPivLu().inverse());
  r.residual = (r.inverse * w - Matrix::Identity(w.rows(), w.cols())).norm();
  r.condition = top / bottom;
  return r;
}

PoissonField invert_form(FormField form, int dim, std::string provenance) {
  return PoissonField(
      [form = std::move(form)](const Vector& c) { return invert_skew(form(c), c).inverse; }, dim,
      std::move(provenance));
}

PoissonField pencil(const PoissonField& p1, const PoissonField& p2, const PencilParameter& t) {
  if (p1.dim() != p2.dim()) throw InputError("pencil: fields have different sizes");
  const double t1 = t.t1(), t2 = t.t2();
  return PoissonField(
      [p1, p2, t1, t2](const Vector& c) -> Matrix {
        if (t2 == 0.0) return t1 * p1(c);
        if (t1 == 0.0) return t2 * p2(c);
        return t1 * p1(c) + t2 * p2(c);
      },
      p1.dim(), "pencil");
}

Vector jacobi_tensor(const PoissonField& p, const Vector& coords, double fd_step, Execution exec) {
  const int d = static_cast<int>(coords.size());
  const Matrix center = p(coords);
  const auto derivs = sample_map<Matrix>(exec, d, [&](int l) -> Matrix {
    Vector plus = coords, minus = coords;
    plus(l) += fd_step;
    minus(l) -= fd_step;
    return (p(plus) - p(minus)) / (2.0 * fd_step);
  });
  std::vector<double> out;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      for (int k = j + 1; k < d; ++k) {
        double s = 0.0;
        for (int l = 0; l < d; ++l) {
          s += center(l, i) * derivs[l](j, k) + center(l, j) * derivs[l](k, i) + center(l, k) * derivs[l](i, j);
        }
        out.push_back(s);
      }
  return Eigen::Map<const Vector>(out.data(), static_cast<Eigen::Index>(out.size()));
}

double jacobi_residual(const PoissonField& p, const Vector& coords, double fd_step, Execution exec) {
  const Vector t = jacobi_tensor(p, coords, fd_step, exec);
  return t.size() ? t.cwiseAbs().maxCoeff() : 0.0;
}

double compatibility_residual(const PoissonField& p1, const PoissonField& p2, const Vector& coords,
                              double fd_step, Execution exec) {
  return jacobi_residual(pencil(p1, p2, PencilParameter(1.0, 1.0)), coords, fd_step, exec);
}

std::vector<DegeneracySample> degeneracy_profile(const PoissonField& p1, const PoissonField& p2,
                                                 const Vector& coords,
                                                 const std::vector<PencilParameter>& t_samples) {
  const Matrix a = p1(coords);
  const Matrix b = p2(coords);
  std::vector<DegeneracySample> out;
  out.reserve(t_samples.size());
  for (const auto& t : t_samples) {
    const Matrix m = t.t1() * a + t.t2() * b;
    DegeneracySample s;
    s.t1 = t.t1();
    s.t2 = t.t2();
    s.sigma_min = min_singular_value(m);
    s.rank = numerical_rank(m);
    out.push_back(s);
  }
  return out;
}

DegeneracyVerdict classify_profile(const std::vector<DegeneracySample>& profile) {
  DegeneracyVerdict v;
  v.min_sigma_off_line = std::numeric_limits<double>::infinity();
  for (const auto& s : profile) {
    const double radius = std::hypot(s.t1, s.t2);
    const double line_distance = std::abs(s.t1 + s.t2) / std::sqrt(2.0);
    // angle between t and the nearer of the two directions (1,-1), (-1,1)
    const double angle = std::asin(std::min(1.0, line_distance / radius));
    if (line_distance <= 1e-6) {
      v.max_sigma_on_line = std::max(v.max_sigma_on_line, s.sigma_min);
      ++v.on_line;
    } else if (angle > 0.1) {
      v.min_sigma_off_line = std::min(v.min_sigma_off_line, s.sigma_min);
      ++v.off_line;
    }
  }
  return v;
}

}  // namespace bipoisson
