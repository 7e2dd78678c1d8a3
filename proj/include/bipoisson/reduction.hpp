#pragma once

// Reduction of the bi-Poisson pencil to the regular submanifold of points
// whose isotropy algebra is the principal one, h.
//
//   h      isotropy in k of a generic x0 in m
//   n(h)   normalizer, p its orthogonal complement
//   g_hat  centralizer of h, k_hat = g_hat & k, m_hat = g_hat & m
//   slice  complement of ad(x0) k inside m
//   z_hat  center of g_hat

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "bipoisson/poisson.hpp"
#include "bipoisson/subalgebra.hpp"

namespace bipoisson {

struct PrincipalIsotropy {
  Element x0;  // unit length, in m
  Subspace h;
  int samples = 0;
};

/// Draws `samples` random x0 in m and keeps the first one whose isotropy in k
/// has minimal dimension. The minimum is recomputed with doubled samples;
/// a different answer throws GenericityError. samples < 8 is an InputError.
PrincipalIsotropy principal_isotropy(const OrbitConfig& config, int samples, std::uint64_t seed);

/// Residuals of the defining identities, as measured at construction.
struct SetupIdentities {
  double h_in_k = 0.0;
  double x0_centralizes_h = 0.0;     // max |[x0, h_i]|
  double slice_centralizes_h = 0.0;  // max |[s_j, h_i]|
  double slice_in_m_hat = 0.0;
  double slice_complement_distance = 0.0;  // vs complement of ad(x0) k_hat in m_hat
  double a_in_g_hat = 0.0;
  double p_orthogonal = 0.0;         // |p^T n(h)|
  int p_sum_rank = 0;                // rank of [p | n(h)]
};

struct ReductionSetup {
  OrbitConfig config;
  Element x0;
  Subspace h, n_h, p, g_hat, k_hat, m_hat, slice, z_hat;
  SetupIdentities identities;

  const LieAlgebra& algebra() const { return config.algebra(); }
  bool trivial() const { return h.dim() == 0; }
};

/// Throws SetupError naming the first identity that fails.
ReductionSetup reduction_setup(const OrbitConfig& config, int samples, std::uint64_t seed);
/// Same with an explicit x0 (used when h is known in closed form).
ReductionSetup reduction_setup(const OrbitConfig& config, const Element& x0);

struct SliceNormalForm {
  Element y;        // Ad(k^-1) y, orthogonal to ad(x0) k up to `residual`
  int iterations = 0;
  double residual = 0.0;
};

/// Maximizes k -> <y, Ad(k) x0> over exp(k) by gradient ascent with
/// backtracking (first step 0.5, shrink 0.5). Throws ConvergenceError after
/// max_iter iterations, carrying the best residual.
SliceNormalForm slice_normal_form(const OrbitConfig& config, const Element& x0, const Element& y,
                                  int max_iter = 200, double tol = 1e-8);
inline SliceNormalForm slice_normal_form(const ReductionSetup& setup, const Element& y, int max_iter = 200,
                                         double tol = 1e-8) {
  return slice_normal_form(setup.config, setup.x0, y, max_iter, tol);
}

/// {xi : [xi, x] = 0 and [xi, v] = 0}.
Subspace isotropy_algebra(const OrbitConfig& config, const TangentBundlePoint& point);
/// Isotropy algebra equals h (projector distance <= 1e-8).
bool is_regular(const ReductionSetup& setup, const TangentBundlePoint& point);

/// Vectors of T_point T(O) fixed by the linearized h-action. Throws
/// DomainError at points that are not regular.
Subspace regular_tangent_space(const ReductionSetup& setup, const TangentBundlePoint& point);
/// Span of the fundamental fields of p at the point. Throws DegeneracyError
/// if their rank is below dim p, DomainError at points that are not regular.
Subspace canonical_complement(const ReductionSetup& setup, const TangentBundlePoint& point);
/// Same span built from a different complement of n(h) (e.g. under another
/// invariant product).
Subspace canonical_complement(const ReductionSetup& setup, const Subspace& complement,
                              const TangentBundlePoint& point);

/// Smallest singular value of [P | T] over orthonormal bases; positive means
/// the complement and the regular tangent space are independent.
double complement_independence(const Subspace& complement, const Subspace& tangent);

struct OrthogonalityResult {
  double pairing = 0.0;          // max |W(P_i, T_j)|
  double sigma_complement = 0.0; // sigma_min of W on the complement
  double sigma_tangent = 0.0;    // sigma_min of W on the regular tangent space
};

/// Evaluates the form matrix `form` (in chart coordinates at `coords`) on
/// the canonical complement and the regular tangent space at the image point.
OrthogonalityResult complement_orthogonality(const ReductionSetup& setup, const LocalChart& chart,
                                             const Vector& coords, const Matrix& form);

/// Chart (y, s) -> Ad(exp(sum y_i p_i)) sub_chart(s), of full dimension
/// dim p + 2 dim m_hat.
class AdaptedChart final : public LocalChart {
 public:
  /// base = (a, w) with w in m_hat and regular. Throws DomainError otherwise.
  AdaptedChart(const ReductionSetup& setup, const TangentBundlePoint& base);

  const OrbitConfig& config() const override { return sub_.config(); }
  int dim() const override { return complement_.dim() + sub_.dim(); }
  Evaluation evaluate(const Vector& coords) const override;

  int complement_dim() const { return complement_.dim(); }
  const Chart& sub_chart() const { return sub_; }

 private:
  Subspace complement_;
  Chart sub_;
};

struct BlockSplit {
  double off_diagonal = 0.0;  // max(|B|, |C|), Frobenius
  double sigma_complement = 0.0;
  double sigma_tangent = 0.0;
};
/// Splits a form matrix in adapted coordinates into (p, sub-chart) blocks.
BlockSplit split_blocks(const Matrix& form, int complement_dim);

struct FrameSplit {
  double complement_distance = 0.0;  // y-columns vs canonical complement
  double tangent_distance = 0.0;     // s-columns vs regular tangent space
};
/// At coordinates with y = 0: the coordinate frame against the
/// (complement, regular tangent) splitting at the image point.
FrameSplit adapted_frame_split(const ReductionSetup& setup, const AdaptedChart& chart, const Vector& coords);

/// Restriction of the ambient pencil to the sub-bundle T(G_hat a) through a
/// base point (a, y).
struct RestrictedPencilData {
  std::shared_ptr<const Chart> ambient_chart;  // frame m
  std::shared_ptr<const Chart> sub_chart;      // frame m_hat, same base
  Matrix embedding;                            // sub coords -> ambient coords
  FormField w1_sub, w2_sub;
  PoissonField p1_sub, p2_sub;
  FormField w1_ambient, w2_ambient;
  PoissonField p1_ambient, p2_ambient;

  Vector ambient_coords(const Vector& sub_coords) const { return embedding * sub_coords; }
};

/// Throws DomainError unless the base is (a, y) with y in m_hat regular.
RestrictedPencilData restricted_pencil(const ReductionSetup& setup, const TangentBundlePoint& base,
                                       double fd_step = kDefaultFdStep);

using InvariantFunction = std::function<double(const TangentBundlePoint&)>;

struct BracketComparison {
  double ambient = 0.0;
  double restricted = 0.0;
  double residual = 0.0;  // |ambient - restricted| / (1 + |ambient|)
};

/// {f, g} of the pencil member t at the image of `sub_coords`, computed
/// once in the ambient chart and once in the sub-chart. Throws DomainError
/// when the image point is not regular.
BracketComparison bracket_agreement(const ReductionSetup& setup, const RestrictedPencilData& data,
                                    const InvariantFunction& f, const InvariantFunction& g,
                                    const Vector& sub_coords, const PencilParameter& t,
                                    double fd_step = kDefaultFdStep);

/// Pointwise form of the same identity for arbitrary covectors: alpha, beta
/// on the sub-chart are lifted to ambient covectors that vanish on the
/// canonical complement, then eta^t is compared with the restricted eta^t.
/// Invariant functions Poisson-commute on symmetric orbits, where the
/// function-level comparison degenerates to 0 = 0; this one does not.
BracketComparison covector_agreement(const ReductionSetup& setup, const RestrictedPencilData& data,
                                     const Vector& alpha, const Vector& beta, const Vector& sub_coords,
                                     const PencilParameter& t);

/// max over points of dim(isotropy & g_hat) - dim z_hat.
int local_freeness_excess(const ReductionSetup& setup, const std::vector<TangentBundlePoint>& points);

/// 2 dim m_hat minus the rank of the g_hat action directions plus the slice
/// fiber directions at (a, y).
int transversality_deficiency(const ReductionSetup& setup, const TangentBundlePoint& point);

}  // namespace bipoisson
