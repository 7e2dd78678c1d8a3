#include "bipoisson/lie_algebra.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>

#include "bipoisson/error.hpp"

namespace bipoisson {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

CMatrix unit(int n, int r, int c) {
  CMatrix m = CMatrix::Zero(n, n);
  m(r, c) = 1.0;
  return m;
}

}  // namespace

double trace_product(const CMatrix& x, const CMatrix& y) { return -(x * y).trace().real(); }

Vector anti_hermitian_spectrum(const CMatrix& x) {
  const CMatrix h = kI * x;
  const CMatrix herm = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
  Vector ev = es.eigenvalues();
  std::sort(ev.data(), ev.data() + ev.size());
  return ev;
}

bool StructureAudit::ok(double tol) const {
  return closure <= tol && antisymmetry <= tol && jacobi <= tol && invariance <= tol &&
         min_product_eigenvalue > 0.0 && orthonormality <= 1e-10 && anti_hermitian <= 1e-10;
}

LieAlgebra LieAlgebra::special_unitary(int n) {
  if (n < 2) throw InputError("su(n) requires n >= 2");
  std::vector<CMatrix> gens;
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      gens.push_back(-kI * (unit(n, j, k) + unit(n, k, j)));
      gens.push_back(unit(n, k, j) - unit(n, j, k));
    }
  }
  for (int l = 1; l < n; ++l) {
    CMatrix d = CMatrix::Zero(n, n);
    for (int i = 0; i < l; ++i) d(i, i) = 1.0;
    d(l, l) = -static_cast<double>(l);
    gens.push_back(-kI * d);
  }
  return from_matrices("su(" + std::to_string(n) + ")", gens);
}

LieAlgebra LieAlgebra::special_orthogonal(int n) {
  if (n < 3) throw InputError("so(n) requires n >= 3");
  std::vector<CMatrix> gens;
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) gens.push_back(unit(n, k, j) - unit(n, j, k));
  }
  return from_matrices("so(" + std::to_string(n) + ")", gens);
}

LieAlgebra LieAlgebra::from_matrices(std::string name, const std::vector<CMatrix>& matrices) {
  if (matrices.empty()) throw InputError("empty basis");
  const auto d = matrices.front().rows();
  for (const auto& m : matrices) {
    if (m.rows() != d || m.cols() != d) throw InputError("basis matrices must share one square shape");
    if ((m + m.adjoint()).norm() > 1e-10 * std::max(1.0, m.norm())) {
      throw InputError("basis matrix is not anti-Hermitian (compact real form required)");
    }
  }
  const int n = static_cast<int>(matrices.size());
  Matrix gram(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gram(i, j) = trace_product(matrices[i], matrices[j]);
  gram = 0.5 * (gram + gram.transpose());

  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  const Vector& ev = es.eigenvalues();
  if (ev.minCoeff() <= 1e-10 * std::max(1.0, ev.maxCoeff())) {
    throw InputError("basis matrices are linearly dependent");
  }
  // Symmetric orthonormalization T = G^{-1/2}: keeps each new basis element as
  // close as possible to the supplied one.
  const Matrix t = es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() *
                   es.eigenvectors().transpose();
  std::vector<CMatrix> ortho(n, CMatrix::Zero(d, d));
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i) ortho[a] += t(i, a) * matrices[i];
  return LieAlgebra(std::move(name), std::move(ortho));
}

LieAlgebra::LieAlgebra(std::string name, std::vector<CMatrix> orthonormal_basis)
    : name_(std::move(name)),
      dim_(static_cast<int>(orthonormal_basis.size())),
      matrix_dim_(static_cast<int>(orthonormal_basis.front().rows())),
      basis_(std::move(orthonormal_basis)) {
  const int n = dim_;
  product_.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) product_(i, j) = trace_product(basis_[i], basis_[j]);

  constants_.assign(static_cast<std::size_t>(n) * n * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const CMatrix comm = basis_[i] * basis_[j] - basis_[j] * basis_[i];
      for (int k = 0; k < n; ++k) {
        constants_[(static_cast<std::size_t>(i) * n + j) * n + k] = trace_product(basis_[k], comm);
      }
    }
  }
  ad_basis_.assign(n, Matrix::Zero(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) ad_basis_[i](k, j) = structure_constant(i, j, k);
}

void LieAlgebra::check_length(const Element& x) const {
  if (x.size() != dim_) {
    throw InputError("element has " + std::to_string(x.size()) + " coefficients, algebra " + name_ +
                     " has dimension " + std::to_string(dim_));
  }
}

double LieAlgebra::inner(const Element& x, const Element& y) const {
  check_length(x);
  check_length(y);
  return x.dot(y);
}

Matrix LieAlgebra::adjoint(const Element& x) const {
  check_length(x);
  Matrix ad = Matrix::Zero(dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    if (x(i) != 0.0) ad += x(i) * ad_basis_[i];
  }
  return ad;
}

Element LieAlgebra::bracket(const Element& x, const Element& y) const {
  check_length(y);
  return adjoint(x) * y;
}

CMatrix LieAlgebra::to_matrix(const Element& x) const {
  check_length(x);
  CMatrix m = CMatrix::Zero(matrix_dim_, matrix_dim_);
  for (int i = 0; i < dim_; ++i) m += x(i) * basis_[i];
  return m;
}

Element LieAlgebra::from_matrix(const CMatrix& m) const {
  if (m.rows() != matrix_dim_ || m.cols() != matrix_dim_) {
    throw InputError("matrix shape does not match the algebra's realization");
  }
  Element x(dim_);
  for (int i = 0; i < dim_; ++i) x(i) = trace_product(basis_[i], m);
  return x;
}

double LieAlgebra::span_residual(const CMatrix& m) const {
  const CMatrix back = to_matrix(from_matrix(m));
  return (m - back).norm() / std::max(m.norm(), 1.0);
}

StructureAudit LieAlgebra::audit() const {
  StructureAudit a;
  const int n = dim_;
  for (int i = 0; i < n; ++i) {
    a.anti_hermitian = std::max(a.anti_hermitian, (basis_[i] + basis_[i].adjoint()).norm());
    for (int j = 0; j < n; ++j) {
      const CMatrix comm = basis_[i] * basis_[j] - basis_[j] * basis_[i];
      CMatrix expansion = CMatrix::Zero(matrix_dim_, matrix_dim_);
      for (int k = 0; k < n; ++k) expansion += structure_constant(i, j, k) * basis_[k];
      a.closure = std::max(a.closure, (comm - expansion).norm() / std::max(comm.norm(), 1.0));
      for (int k = 0; k < n; ++k) {
        a.antisymmetry =
            std::max(a.antisymmetry, std::abs(structure_constant(i, j, k) + structure_constant(j, i, k)));
        // invariance: <[E_i,E_j],E_k> + <E_j,[E_i,E_k]> with the Gram matrix
        double lhs = 0.0;
        for (int l = 0; l < n; ++l) {
          lhs += structure_constant(i, j, l) * product_(l, k) + product_(j, l) * structure_constant(i, k, l);
        }
        a.invariance = std::max(a.invariance, std::abs(lhs));
      }
    }
  }
  // Jacobi: [[E_i,E_j],E_k] + cyclic = 0, coefficient of E_m.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        for (int m = 0; m < n; ++m) {
          double s = 0.0;
          for (int l = 0; l < n; ++l) {
            s += structure_constant(i, j, l) * structure_constant(l, k, m) +
                 structure_constant(j, k, l) * structure_constant(l, i, m) +
                 structure_constant(k, i, l) * structure_constant(l, j, m);
          }
          a.jacobi = std::max(a.jacobi, std::abs(s));
        }
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (product_ + product_.transpose()), Eigen::EigenvaluesOnly);
  a.min_product_eigenvalue = es.eigenvalues().minCoeff();
  a.orthonormality = (product_ - Matrix::Identity(n, n)).norm();
  return a;
}

}  // namespace bipoisson
