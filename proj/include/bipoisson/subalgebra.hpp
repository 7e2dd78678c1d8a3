#pragma once

#include <cstdint>
#include <vector>

#include "bipoisson/lie_algebra.hpp"

namespace bipoisson {

/// Symmetric positive-definite matrix of a scalar product on the algebra,
/// in basis coefficients.
class InvariantProduct {
 public:
  /// Throws DomainError if `matrix` is not symmetric positive definite.
  explicit InvariantProduct(Matrix matrix);

  const Matrix& matrix() const { return matrix_; }
  double min_eigenvalue() const;
  /// max over basis z of h of |M ad(z) + ad(z)^T M|.
  double invariance_residual(const LieAlgebra& alg, const Subspace& h) const;

 private:
  Matrix matrix_;
};

/// Subspace spanned by the given algebra elements (columns).
Subspace span_of(const Matrix& elements);
/// Elements given as matrices in the algebra's realization.
Subspace span_of_matrices(const LieAlgebra& alg, const std::vector<CMatrix>& mats);

/// Max residual of brackets of basis pairs projected off `s`.
double closure_residual(const LieAlgebra& alg, const Subspace& s);
inline bool is_subalgebra(const LieAlgebra& alg, const Subspace& s, double tol = 1e-10) {
  return closure_residual(alg, s) <= tol;
}

/// Vertical stack of ad(s_j) over a basis of s.
Matrix stacked_adjoint(const LieAlgebra& alg, const Subspace& s);

/// {y : [y, s] = 0 for all s in S}.
Subspace centralizer(const LieAlgebra& alg, const Subspace& s);
/// {xi : [xi, h] in h}. Throws DomainError if h is not closed under bracket.
Subspace normalizer(const LieAlgebra& alg, const Subspace& h);
/// Complement of s with respect to `prod`, orthonormalized for the base
/// product. Throws DomainError if `prod` is not positive definite.
Subspace orthogonal_complement(const LieAlgebra& alg, const Subspace& s, const Matrix& prod);
inline Subspace orthogonal_complement(const LieAlgebra& alg, const Subspace& s,
                                      const InvariantProduct& prod) {
  return orthogonal_complement(alg, s, prod.matrix());
}
/// Center of a subalgebra: s intersected with its centralizer.
Subspace center(const LieAlgebra& alg, const Subspace& s);

/// Basis (Frobenius-orthonormal) of the symmetric solutions M of
/// M ad(z) + ad(z)^T M = 0 for all z in h.
std::vector<Matrix> invariant_product_space(const LieAlgebra& alg, const Subspace& h);

/// Base product plus a seeded random combination of the solution space,
/// halved until the smallest eigenvalue exceeds 0.1 times the base one.
InvariantProduct random_invariant_product(const LieAlgebra& alg, const Subspace& h, std::uint64_t seed);

struct ComplementComparison {
  /// max over trials of |P(p^a + h) - P(p^b + h)|_F
  double max_sum_distance = 0.0;
  /// max over trials of |P(p^a) - P(p^b)|_F; shows whether p itself moved
  double max_complement_distance = 0.0;
  int trials = 0;
};

/// Complement-invariance check: for random pairs of ad(h)-invariant
/// products, the complements of n(h) differ but their sums with h agree.
ComplementComparison compare_normalizer_complements(const LieAlgebra& alg, const Subspace& h,
                                                    std::uint64_t seed, int trials);

/// Joint kernel of ad(z)|_ambient over z in h. Throws DomainError if the
/// ambient subspace is not ad(h)-invariant.
Subspace fixed_vector_space(const LieAlgebra& alg, const Subspace& h, const Subspace& ambient);

}  // namespace bipoisson
