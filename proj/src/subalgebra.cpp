#include "bipoisson/subalgebra.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "bipoisson/error.hpp"
#include "bipoisson/seeding.hpp"

namespace bipoisson {

namespace {

double min_eigenvalue_of(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void require_positive_definite(const Matrix& m, const char* who) {
  if (m.rows() != m.cols()) throw InputError(std::string(who) + ": product matrix is not square");
  if ((m - m.transpose()).norm() > 1e-10 * std::max(1.0, m.norm())) {
    throw DomainError(std::string(who) + ": product matrix is not symmetric");
  }
  if (!(min_eigenvalue_of(m) > 0.0)) {
    throw DomainError(std::string(who) + ": product matrix is not positive definite");
  }
}

// Symmetric n x n matrices <-> R^{n(n+1)/2}, scaled so both inner products agree.
Matrix symmetric_from_params(const Vector& p, int n) {
  Matrix m = Matrix::Zero(n, n);
  int idx = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j, ++idx) {
      if (i == j) {
        m(i, i) = p(idx);
      } else {
        m(i, j) = m(j, i) = p(idx) / std::sqrt(2.0);
      }
    }
  }
  return m;
}

Vector params_from_symmetric(const Matrix& m) {
  const auto n = m.rows();
  Vector p(n * (n + 1) / 2);
  int idx = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j, ++idx) p(idx) = (i == j) ? m(i, i) : m(i, j) * std::sqrt(2.0);
  }
  return p;
}

}  // namespace

InvariantProduct::InvariantProduct(Matrix matrix) : matrix_(std::move(matrix)) {
  require_positive_definite(matrix_, "InvariantProduct");
}

double InvariantProduct::min_eigenvalue() const { return min_eigenvalue_of(matrix_); }

double InvariantProduct::invariance_residual(const LieAlgebra& alg, const Subspace& h) const {
  double worst = 0.0;
  for (int j = 0; j < h.dim(); ++j) {
    const Matrix ad = alg.adjoint(h.column(j));
    worst = std::max(worst, (matrix_ * ad + ad.transpose() * matrix_).cwiseAbs().maxCoeff());
  }
  return worst;
}

Subspace span_of(const Matrix& elements) { return Subspace::span(elements); }

Subspace span_of_matrices(const LieAlgebra& alg, const std::vector<CMatrix>& mats) {
  Matrix cols(alg.dim(), static_cast<Eigen::Index>(mats.size()));
  for (std::size_t i = 0; i < mats.size(); ++i) cols.col(static_cast<Eigen::Index>(i)) = alg.from_matrix(mats[i]);
  return Subspace::span(cols);
}

double closure_residual(const LieAlgebra& alg, const Subspace& s) {
  double worst = 0.0;
  for (int i = 0; i < s.dim(); ++i) {
    for (int j = i + 1; j < s.dim(); ++j) {
      worst = std::max(worst, s.residual(alg.bracket(s.column(i), s.column(j))));
    }
  }
  return worst;
}

Matrix stacked_adjoint(const LieAlgebra& alg, const Subspace& s) {
  const int n = alg.dim();
  Matrix stack(static_cast<Eigen::Index>(s.dim()) * n, n);
  for (int j = 0; j < s.dim(); ++j) stack.middleRows(j * n, n) = alg.adjoint(s.column(j));
  return stack;
}

Subspace centralizer(const LieAlgebra& alg, const Subspace& s) {
  return kernel(stacked_adjoint(alg, s));
}

Subspace normalizer(const LieAlgebra& alg, const Subspace& h) {
  if (!is_subalgebra(alg, h)) {
    throw DomainError("normalizer: subspace is not closed under the bracket (residual " +
                      std::to_string(closure_residual(alg, h)) + ")");
  }
  const int n = alg.dim();
  const Matrix q = Matrix::Identity(n, n) - h.projector();
  // [xi, z] = -ad(z) xi must have no component off h.
  Matrix stack(static_cast<Eigen::Index>(h.dim()) * n, n);
  for (int j = 0; j < h.dim(); ++j) stack.middleRows(j * n, n) = q * alg.adjoint(h.column(j));
  return kernel(stack);
}

Subspace orthogonal_complement(const LieAlgebra& alg, const Subspace& s, const Matrix& prod) {
  require_positive_definite(prod, "orthogonal_complement");
  if (s.ambient_dim() != alg.dim()) throw InputError("orthogonal_complement: subspace of another algebra");
  if (s.dim() == 0) return Subspace::whole(alg.dim());
  const Subspace t = kernel(s.basis().transpose() * prod);
  return t;
}

Subspace center(const LieAlgebra& alg, const Subspace& s) {
  return intersection(s, centralizer(alg, s));
}

std::vector<Matrix> invariant_product_space(const LieAlgebra& alg, const Subspace& h) {
  const int n = alg.dim();
  const int params = n * (n + 1) / 2;
  Matrix constraints(static_cast<Eigen::Index>(h.dim()) * params, params);
  for (int j = 0; j < h.dim(); ++j) {
    const Matrix ad = alg.adjoint(h.column(j));
    for (int p = 0; p < params; ++p) {
      const Matrix s = symmetric_from_params(Vector::Unit(params, p), n);
      constraints.block(static_cast<Eigen::Index>(j) * params, p, params, 1) =
          params_from_symmetric(s * ad + ad.transpose() * s);
    }
  }
  const Subspace sol = kernel(constraints);
  std::vector<Matrix> out;
  out.reserve(sol.dim());
  for (int i = 0; i < sol.dim(); ++i) out.push_back(symmetric_from_params(sol.column(i), n));
  return out;
}

InvariantProduct random_invariant_product(const LieAlgebra& alg, const Subspace& h, std::uint64_t seed) {
  const auto space = invariant_product_space(alg, h);
  Stream rng(seed);
  const int n = alg.dim();
  Matrix delta = Matrix::Zero(n, n);
  for (const auto& s : space) delta += rng.normal() * s;
  const Matrix& base = alg.product();
  const double floor = 0.1 * min_eigenvalue_of(base);
  Matrix m = base + delta;
  while (!(min_eigenvalue_of(m) > floor)) {
    delta *= 0.5;
    m = base + delta;
  }
  return InvariantProduct(0.5 * (m + m.transpose()));
}

ComplementComparison compare_normalizer_complements(const LieAlgebra& alg, const Subspace& h,
                                                    std::uint64_t seed, int trials) {
  const Subspace n_h = normalizer(alg, h);
  ComplementComparison out;
  out.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const auto alpha = random_invariant_product(alg, h, derive_seed(seed, "complement-alpha", t));
    const auto beta = random_invariant_product(alg, h, derive_seed(seed, "complement-beta", t));
    const Subspace p_alpha = orthogonal_complement(alg, n_h, alpha);
    const Subspace p_beta = orthogonal_complement(alg, n_h, beta);
    out.max_complement_distance = std::max(out.max_complement_distance, projector_distance(p_alpha, p_beta));
    out.max_sum_distance = std::max(
        out.max_sum_distance, projector_distance(subspace_sum(p_alpha, h), subspace_sum(p_beta, h)));
  }
  return out;
}

Subspace fixed_vector_space(const LieAlgebra& alg, const Subspace& h, const Subspace& ambient) {
  if (ambient.dim() == 0 || h.dim() == 0) return ambient;
  const int n = alg.dim();
  Matrix stack(static_cast<Eigen::Index>(h.dim()) * n, ambient.dim());
  for (int j = 0; j < h.dim(); ++j) {
    const Matrix moved = alg.adjoint(h.column(j)) * ambient.basis();
    double leak = 0.0;
    for (int c = 0; c < moved.cols(); ++c) leak = std::max(leak, ambient.residual(moved.col(c)));
    if (leak > 1e-10 * std::max(1.0, moved.norm())) {
      throw DomainError("fixed_vector_space: ambient subspace is not ad(h)-invariant");
    }
    stack.middleRows(static_cast<Eigen::Index>(j) * n, n) = moved;
  }
  const Subspace coeffs = kernel(stack);
  return Subspace::span(ambient.basis() * coeffs.basis());
}

}  // namespace bipoisson
