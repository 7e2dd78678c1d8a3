#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bipoisson/linalg.hpp"

namespace bipoisson {

/// Coordinates of an algebra element in the (orthonormal) basis.
using Element = Vector;

/// Residuals of the structural identities of a matrix Lie algebra.
struct StructureAudit {
  double closure = 0.0;        // relative, commutators vs structure-constant expansion
  double antisymmetry = 0.0;   // max |c_ijk + c_jik|
  double jacobi = 0.0;         // max Jacobi residual of the structure constants
  double invariance = 0.0;     // max |<[z,x],y> + <x,[z,y]>| over basis triples
  double min_product_eigenvalue = 0.0;
  double orthonormality = 0.0; // |Gram - I|
  double anti_hermitian = 0.0; // max |E + E^*|

  bool ok(double tol = 1e-12) const;
};

/// A compact matrix Lie algebra with basis orthonormal for <X,Y> = -Re tr(XY).
///
/// Construction orthonormalizes the supplied matrices, then computes the
/// structure constants c[i][j][k] = <E_k, [E_i, E_j]> once. All bracket
/// arithmetic goes through the cached constants.
class LieAlgebra {
 public:
  /// su(n) from the generator enumeration: for each pair j<k the matrices
  /// -i(E_jk + E_kj) and E_kj - E_jk, then -i times the generalized
  /// Gell-Mann diagonals. For n = 2 this is -i sigma_k / sqrt(2).
  static LieAlgebra special_unitary(int n);
  /// so(n) from E_kj - E_jk, pairs j<k in lexicographic order.
  static LieAlgebra special_orthogonal(int n);
  /// Arbitrary anti-Hermitian basis; linearly dependent input is an error.
  static LieAlgebra from_matrices(std::string name, const std::vector<CMatrix>& matrices);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  int matrix_dim() const { return matrix_dim_; }
  const std::vector<CMatrix>& basis() const { return basis_; }
  Element basis_element(int i) const { return Element::Unit(dim_, i); }

  double structure_constant(int i, int j, int k) const {
    return constants_[(static_cast<std::size_t>(i) * dim_ + j) * dim_ + k];
  }
  /// Gram matrix of the basis; the identity up to rounding.
  const Matrix& product() const { return product_; }
  double inner(const Element& x, const Element& y) const;

  Element bracket(const Element& x, const Element& y) const;
  /// Matrix of ad(x) acting on coefficient vectors.
  Matrix adjoint(const Element& x) const;
  const Matrix& adjoint_of_basis(int i) const { return ad_basis_[i]; }

  CMatrix to_matrix(const Element& x) const;
  /// Orthogonal projection of a matrix onto the algebra, in coefficients.
  Element from_matrix(const CMatrix& m) const;
  /// Distance from m to the span of the basis, relative to |m|.
  double span_residual(const CMatrix& m) const;

  StructureAudit audit() const;

 private:
  LieAlgebra(std::string name, std::vector<CMatrix> orthonormal_basis);

  void check_length(const Element& x) const;

  std::string name_;
  int dim_ = 0;
  int matrix_dim_ = 0;
  std::vector<CMatrix> basis_;
  std::vector<double> constants_;
  std::vector<Matrix> ad_basis_;
  Matrix product_;
};

using AlgebraPtr = std::shared_ptr<const LieAlgebra>;

/// Trace-form product of two matrices: -Re tr(XY).
double trace_product(const CMatrix& x, const CMatrix& y);

/// Eigenvalues of the anti-Hermitian matrix X as the sorted real spectrum
/// of the Hermitian matrix iX.
Vector anti_hermitian_spectrum(const CMatrix& x);

}  // namespace bipoisson
