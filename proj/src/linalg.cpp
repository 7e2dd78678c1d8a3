#include "bipoisson/linalg.hpp"

#include <algorithm>

#include "bipoisson/error.hpp"

namespace bipoisson {

namespace {

int rank_from(const Vector& sv) {
  if (sv.size() == 0) return 0;
  const double cutoff = std::max(kRankTolerance * sv(0), kAbsoluteRankFloor);
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++r;
  }
  return r;
}

}  // namespace

Subspace Subspace::zero(int ambient_dim) { return Subspace(Matrix(ambient_dim, 0)); }

Subspace Subspace::whole(int ambient_dim) {
  return Subspace(Matrix::Identity(ambient_dim, ambient_dim));
}

Subspace Subspace::span(const Matrix& vectors) {
  const auto n = vectors.rows();
  if (vectors.cols() == 0 || n == 0) return zero(static_cast<int>(n));
  Eigen::JacobiSVD<Matrix> svd(vectors, Eigen::ComputeThinU);
  const int r = rank_from(svd.singularValues());
  return Subspace(svd.matrixU().leftCols(r));
}

Subspace Subspace::from_orthonormal(Matrix basis) {
  const Matrix gram = basis.transpose() * basis;
  if ((gram - Matrix::Identity(gram.rows(), gram.cols())).norm() > 1e-10) {
    throw InputError("Subspace::from_orthonormal: columns are not orthonormal");
  }
  return Subspace(std::move(basis));
}

Vector Subspace::project(const Vector& v) const {
  if (dim() == 0) return Vector::Zero(v.size());
  return basis_ * (basis_.transpose() * v);
}

double Subspace::residual(const Vector& v) const { return (v - project(v)).norm(); }

double Subspace::containment_residual(const Subspace& other) const {
  double worst = 0.0;
  for (int i = 0; i < other.dim(); ++i) worst = std::max(worst, residual(other.column(i)));
  return worst;
}

Subspace kernel(const Matrix& a) {
  const auto n = a.cols();
  if (a.rows() == 0) return Subspace::whole(static_cast<int>(n));
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const int r = rank_from(svd.singularValues());
  return Subspace::from_orthonormal(svd.matrixV().rightCols(n - r));
}

int numerical_rank(const Matrix& a) {
  if (a.size() == 0) return 0;
  return rank_from(singular_values(a));
}

Vector singular_values(const Matrix& a) {
  if (a.size() == 0) return Vector(0);
  return Eigen::JacobiSVD<Matrix>(a).singularValues();
}

double min_singular_value(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  const Vector sv = singular_values(a);
  // A wide or tall matrix has min(rows, cols) singular values; a square one
  // with rank deficiency reports its zero.
  return sv(sv.size() - 1);
}

Matrix pseudo_inverse(const Matrix& a) {
  if (a.size() == 0) return Matrix(a.cols(), a.rows());
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  const int r = rank_from(sv);
  Matrix result = Matrix::Zero(a.cols(), a.rows());
  for (int i = 0; i < r; ++i) {
    result += svd.matrixV().col(i) * (svd.matrixU().col(i).transpose() / sv(i));
  }
  return result;
}

double projector_distance(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw InputError("projector_distance: ambient dimensions differ");
  }
  return (a.projector() - b.projector()).norm();
}

bool same_subspace(const Subspace& a, const Subspace& b, double tol) {
  return a.dim() == b.dim() && projector_distance(a, b) <= tol;
}

Subspace subspace_sum(const Subspace& a, const Subspace& b) {
  Matrix joined(a.ambient_dim(), a.dim() + b.dim());
  joined << a.basis(), b.basis();
  return Subspace::span(joined);
}

Subspace intersection(const Subspace& a, const Subspace& b) {
  if (a.dim() == 0 || b.dim() == 0) return Subspace::zero(a.ambient_dim());
  // a*c lies in b  <=>  (I - P_b) a c = 0
  const Matrix off = a.basis() - b.basis() * (b.basis().transpose() * a.basis());
  const Subspace coeffs = kernel(off);
  return Subspace::span(a.basis() * coeffs.basis());
}

Subspace orthogonal_complement(const Subspace& s) {
  if (s.dim() == 0) return Subspace::whole(s.ambient_dim());
  return kernel(s.basis().transpose());
}

Subspace complement_within(const Subspace& outer, const Subspace& inner) {
  if (outer.dim() == 0) return outer;
  if (inner.dim() == 0) return outer;
  const Subspace coeffs = kernel(inner.basis().transpose() * outer.basis());
  return Subspace::span(outer.basis() * coeffs.basis());
}

Subspace image(const Matrix& op, const Subspace& s) {
  if (s.dim() == 0) return Subspace::zero(static_cast<int>(op.rows()));
  return Subspace::span(op * s.basis());
}

}  // namespace bipoisson
