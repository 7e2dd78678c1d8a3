#pragma once

// Local differential geometry of the tangent bundle T(O) of an adjoint orbit
// O = Ad(G) a. Points are pairs (x, v) of algebra elements; ambient tangent
// vectors are pairs (dx, dv) stacked into one vector of length 2n.

#include <cstdint>

#include "bipoisson/lie_algebra.hpp"

namespace bipoisson {

struct OrbitConfig {
  AlgebraPtr alg;
  Element a;
  Subspace k;  // ker ad(a)
  Subspace m;  // complement of k

  const LieAlgebra& algebra() const { return *alg; }
  int orbit_dim() const { return m.dim(); }
};

/// k = ker ad(a), m = k^perp. Throws DomainError for a = 0.
OrbitConfig make_orbit_config(AlgebraPtr alg, const Element& a);

struct OrbitConfigAudit {
  double k_commutes = 0.0;       // max |[k_i, a]|
  double m_orthogonal = 0.0;     // |k^T m|
  double image_distance = 0.0;   // projector distance of im ad(a) and m
  int total_rank = 0;            // rank of [k | m]
};
OrbitConfigAudit audit(const OrbitConfig& config);

struct TangentBundlePoint {
  Element x;
  Element v;
};

struct PointAudit {
  double spectrum_distance = 0.0;  // sorted spectrum of x vs spectrum of a
  double tangency = 0.0;           // component of v along ker ad(x)
};
PointAudit audit_point(const OrbitConfig& config, const TangentBundlePoint& p);

/// T_{(x,v)} T(O) = {([z,x], [z,v] + w) : z in g, w in im ad(x)}.
Subspace ambient_tangent_space(const OrbitConfig& config, const TangentBundlePoint& p);

/// Ad(e^xi) = exp(ad xi) on coefficient vectors.
Matrix adjoint_exponential(const LieAlgebra& alg, const Element& xi);
/// sum_k ad_xi^k / (k+1)!, truncated once a term's norm drops below 1e-16.
/// d/ds e^{xi + s eta} e^{-xi} = dexp_series(ad xi) eta.
Matrix dexp_series(const Matrix& ad_xi);

/// The fundamental vector field of xi at p: ([xi, x], [xi, v]).
Vector infinitesimal_action(const OrbitConfig& config, const Element& xi, const TangentBundlePoint& p);

/// theta_{(x,v)}(dx, dv) = <v, dx>. Throws DomainError when dx has a
/// component along ker ad(x) larger than 1e-6.
double tautological_oneform(const OrbitConfig& config, const TangentBundlePoint& p, const Vector& tangent);

/// KKS form at x: -<x, [xi_1, xi_2]> with xi_i the minimal-norm solutions of
/// [x, xi_i] = alpha, beta. Throws DomainError for non-tangent arguments.
double kks_form(const OrbitConfig& config, const Element& x, const Element& alpha, const Element& beta);
/// Matrix of the KKS form on the columns of `tangents` (n x d).
Matrix kks_matrix(const OrbitConfig& config, const Element& x, const Matrix& tangents);

/// A coordinate system on (part of) T(O) with exact pushforwards.
class LocalChart {
 public:
  struct Evaluation {
    TangentBundlePoint point;
    Matrix pushforward;  // 2n x dim()
  };

  virtual ~LocalChart() = default;
  virtual const OrbitConfig& config() const = 0;
  virtual int dim() const = 0;
  virtual Evaluation evaluate(const Vector& coords) const = 0;

  TangentBundlePoint map(const Vector& coords) const { return evaluate(coords).point; }
  Matrix pushforward(const Vector& coords) const { return evaluate(coords).pushforward; }
};

/// Conjugated-linear-fiber chart based at (a, vbar) with frame F in m:
///   (u, w) -> (Ad(e^{F u}) a, Ad(e^{F u}) (vbar + F w)).
class Chart final : public LocalChart {
 public:
  /// Coordinates beyond this (max norm) raise RangeError.
  static constexpr double kMaxCoordinate = 0.5;
  /// Box used for sampling; well inside the injectivity radius.
  static constexpr double kValidityBox = 0.1;

  /// Throws DomainError unless base.x = a, base.v is tangent at a and the
  /// frame lies in m.
  Chart(OrbitConfig config, TangentBundlePoint base, Subspace frame);

  const OrbitConfig& config() const override { return config_; }
  int dim() const override { return 2 * frame_.dim(); }
  Evaluation evaluate(const Vector& coords) const override;

  const TangentBundlePoint& base() const { return base_; }
  const Subspace& frame() const { return frame_; }

 private:
  OrbitConfig config_;
  TangentBundlePoint base_;
  Subspace frame_;
};

/// Smallest |map(c1) - map(c2)| / |c1 - c2| over random pairs in the
/// validity box; positive means no collision was found.
double injectivity_spot_check(const LocalChart& chart, int pairs, std::uint64_t seed);

/// Stacks a point into one 2n vector (x, v).
Vector stack(const TangentBundlePoint& p);

}  // namespace bipoisson
