#pragma once

// Dense small-matrix helpers shared by every module: subspaces with
// orthonormal bases, SVD-based kernels and ranks, projector distances.

#include <Eigen/Dense>

namespace bipoisson {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;

/// Singular values below this fraction of the largest one count as zero.
inline constexpr double kRankTolerance = 1e-9;
/// Absolute floor so that a numerically zero matrix has rank 0.
inline constexpr double kAbsoluteRankFloor = 1e-12;
/// Two subspaces are equal when their projectors differ by less than this.
inline constexpr double kSubspaceTolerance = 1e-8;

/// A linear subspace of R^n given by an orthonormal basis (columns).
class Subspace {
 public:
  Subspace() = default;

  static Subspace zero(int ambient_dim);
  static Subspace whole(int ambient_dim);
  /// Orthonormalized column span of `vectors` (rank-revealing SVD).
  static Subspace span(const Matrix& vectors);
  /// Adopts `basis` as is; throws InputError if the columns are not
  /// orthonormal to 1e-10.
  static Subspace from_orthonormal(Matrix basis);

  int dim() const { return static_cast<int>(basis_.cols()); }
  int ambient_dim() const { return static_cast<int>(basis_.rows()); }
  const Matrix& basis() const { return basis_; }
  Vector column(int i) const { return basis_.col(i); }

  Matrix projector() const { return basis_ * basis_.transpose(); }
  Vector project(const Vector& v) const;
  /// Norm of the component of v orthogonal to the subspace.
  double residual(const Vector& v) const;
  /// Largest residual of `other`'s basis vectors.
  double containment_residual(const Subspace& other) const;

 private:
  explicit Subspace(Matrix basis) : basis_(std::move(basis)) {}
  Matrix basis_ = Matrix(0, 0);
};

/// Null space of A (A has `A.cols()` columns). A with zero rows or zero
/// norm gives the whole space.
Subspace kernel(const Matrix& a);
int numerical_rank(const Matrix& a);
Vector singular_values(const Matrix& a);
/// Smallest singular value of a square or rectangular matrix (0 for empty).
double min_singular_value(const Matrix& a);
Matrix pseudo_inverse(const Matrix& a);

double projector_distance(const Subspace& a, const Subspace& b);
bool same_subspace(const Subspace& a, const Subspace& b, double tol = kSubspaceTolerance);

Subspace subspace_sum(const Subspace& a, const Subspace& b);
Subspace intersection(const Subspace& a, const Subspace& b);
/// Euclidean orthogonal complement in R^n.
Subspace orthogonal_complement(const Subspace& s);
/// Orthogonal complement of `inner` inside `outer`.
Subspace complement_within(const Subspace& outer, const Subspace& inner);
/// Column span of op * basis(s).
Subspace image(const Matrix& op, const Subspace& s);

inline Matrix skew_part(const Matrix& w) { return 0.5 * (w - w.transpose()); }

}  // namespace bipoisson
