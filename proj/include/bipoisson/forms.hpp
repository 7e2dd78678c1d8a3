#pragma once

// Symplectic forms on T(O) as skew matrix fields in chart coordinates:
//   W1 = Omega = d(theta),  theta(dx, dv) = <v, dx>
//   W2 = Omega + pi^* omega_KKS
// theta is evaluated on exact pushforwards; only the outer exterior
// derivative uses central differences.

#include <functional>
#include <memory>

#include "bipoisson/orbit.hpp"
#include "bipoisson/parallel.hpp"

namespace bipoisson {

inline constexpr double kDefaultFdStep = 1e-4;
inline constexpr double kMinFdStep = 1e-6;
inline constexpr double kMaxFdStep = 1e-3;

using FormField = std::function<Matrix(const Vector&)>;
using ChartPtr = std::shared_ptr<const LocalChart>;

/// theta_j(coords) = <v, dx_j> on each pushforward column.
Vector tautological_coefficients(const LocalChart& chart, const Vector& coords);

Matrix canonical_form_matrix(const LocalChart& chart, const Vector& coords, double fd_step = kDefaultFdStep,
                             Execution exec = Execution::serial);
/// pi^* omega on the x-parts of the pushforward columns (exact).
Matrix pullback_kks_matrix(const LocalChart& chart, const Vector& coords);
Matrix omega2_matrix(const LocalChart& chart, const Vector& coords, double fd_step = kDefaultFdStep,
                     Execution exec = Execution::serial);

FormField canonical_form_field(ChartPtr chart, double fd_step = kDefaultFdStep);
FormField omega2_field(ChartPtr chart, double fd_step = kDefaultFdStep);

/// max_{i<j<k} |d_i W_jk + d_j W_ki + d_k W_ij| by central differences.
double closedness_residual(const FormField& field, const Vector& coords, double fd_step = kDefaultFdStep,
                           Execution exec = Execution::serial);

/// Throws InputError unless fd_step lies in [1e-6, 1e-3].
void check_fd_step(double fd_step);

}  // namespace bipoisson
