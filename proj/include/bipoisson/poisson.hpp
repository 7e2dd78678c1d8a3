#pragma once

// Pencils of Poisson bivectors t1*eta1 + t2*eta2 given as skew matrix fields
// over chart coordinates, with finite-difference Jacobi certificates.

#include <functional>
#include <string>
#include <vector>

#include "bipoisson/forms.hpp"

namespace bipoisson {

class PencilParameter {
 public:
  /// Throws InputError for (0, 0).
  PencilParameter(double t1, double t2);
  double t1() const { return t1_; }
  double t2() const { return t2_; }

 private:
  double t1_, t2_;
};

/// The unit circle sampled at angles 2*pi*k/count, k = 0..count-1.
std::vector<PencilParameter> unit_circle_samples(int count);

class PoissonField {
 public:
  using Evaluator = std::function<Matrix(const Vector&)>;

  PoissonField() = default;
  PoissonField(Evaluator eval, int dim, std::string provenance)
      : eval_(std::move(eval)), dim_(dim), provenance_(std::move(provenance)) {}

  Matrix operator()(const Vector& coords) const { return eval_(coords); }
  int dim() const { return dim_; }
  const std::string& provenance() const { return provenance_; }

 private:
  Evaluator eval_;
  int dim_ = 0;
  std::string provenance_;
};

struct InverseResult {
  Matrix inverse;      // re-skew-symmetrized
  double residual;     // |P W - I|_F
  double condition;    // sigma_max / sigma_min of W
};

/// Inverts one skew form matrix. Throws DegeneracyError (message carries the
/// coordinates) when sigma_min <= 1e-8 sigma_max.
InverseResult invert_skew(const Matrix& w, const Vector& coords);

/// eta = W^{-1} pointwise.
PoissonField invert_form(FormField form, int dim, std::string provenance = "inverse-of-form");
/// t1 * P1 + t2 * P2 pointwise. Throws InputError on size mismatch.
PoissonField pencil(const PoissonField& p1, const PoissonField& p2, const PencilParameter& t);

/// Signed components J_ijk, i<j<k, in lexicographic order.
Vector jacobi_tensor(const PoissonField& p, const Vector& coords, double fd_step = kDefaultFdStep,
                     Execution exec = Execution::serial);
/// max over i<j<k of |sum_l P_li d_l P_jk + P_lj d_l P_ki + P_lk d_l P_ij|.
double jacobi_residual(const PoissonField& p, const Vector& coords, double fd_step = kDefaultFdStep,
                       Execution exec = Execution::serial);
/// Jacobi residual of P1 + P2.
double compatibility_residual(const PoissonField& p1, const PoissonField& p2, const Vector& coords,
                              double fd_step = kDefaultFdStep, Execution exec = Execution::serial);

struct DegeneracySample {
  double t1 = 0.0, t2 = 0.0;
  double sigma_min = 0.0;
  int rank = 0;
};

std::vector<DegeneracySample> degeneracy_profile(const PoissonField& p1, const PoissonField& p2,
                                                 const Vector& coords,
                                                 const std::vector<PencilParameter>& t_samples);

/// Summary of a profile against the line t1 + t2 = 0.
struct DegeneracyVerdict {
  double max_sigma_on_line = 0.0;   // over samples within 1e-6 of the line
  double min_sigma_off_line = 0.0;  // over samples at angular distance > 0.1
  int on_line = 0;
  int off_line = 0;
};
DegeneracyVerdict classify_profile(const std::vector<DegeneracySample>& profile);

}  // namespace bipoisson
