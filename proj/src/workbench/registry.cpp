#include "bipoisson/workbench/registry.hpp"

#include <algorithm>
#include <stdexcept>

namespace bipoisson::workbench {

namespace {

CheckInfo positive(std::string name, std::string stage, std::string anchor, double tol,
                   Comparison cmp = Comparison::at_most) {
  return {std::move(name), std::move(stage), std::move(anchor), tol, cmp, CheckKind::positive};
}

CheckInfo control(std::string name, std::string stage, std::string anchor, double tol,
                  Comparison cmp = Comparison::at_most) {
  return {std::move(name), std::move(stage), std::move(anchor), tol, cmp, CheckKind::negative_control};
}

std::vector<CheckInfo> build() {
  using C = Comparison;
  return {
      positive("structure_identities", "lie_core",
               "bracket closure, antisymmetry, Jacobi identity and ad-invariance of the trace form", 1e-12),
      positive("orbit_decomposition", "orbit",
               "k = ker ad(a) commutes with a; m is orthogonal to k and equals the image of ad(a)", 1e-10),
      positive("chart_injectivity", "orbit",
               "the orbit chart separates sampled coordinate pairs (min distance ratio)", 1e-3, C::above),
      positive("principal_isotropy_stable", "isotropy",
               "the minimal isotropy dimension in k of generic x0 in m is unchanged when samples double", 0.0),
      positive("setup_identities", "setup",
               "h lies in k and commutes with x0; a lies in the centralizer of h; g = p + n(h) orthogonally",
               1e-10),
      positive("slice_centralizes_h", "setup", "[m(x0), h] = 0 on the whole slice", 1e-10),
      positive("slice_is_complement", "setup",
               "the slice lies in m_hat and is the complement of ad(x0) k_hat there", 1e-8),
      positive("invariant_functions", "forms",
               "trace-word functions of (x, v) are invariant under conjugation", 1e-10),
      positive("w1_closed", "forms", "the canonical form d(theta) on T(O) is closed", 1e-5),
      positive("w2_closed", "forms", "d(theta) plus the pulled-back orbit form is closed", 1e-5),
      positive("forms_nondegenerate", "forms", "both symplectic forms are nondegenerate at every sample", 1e-6,
               C::above),
      positive("eta1_jacobi", "pencil", "the inverse of d(theta) is a Poisson bivector", 1e-5),
      positive("eta2_jacobi", "pencil", "the inverse of the magnetic form is a Poisson bivector", 1e-5),
      positive("pencil_compatibility", "pencil",
               "eta1 + eta2 is Poisson, hence every member t1 eta1 + t2 eta2 is", 1e-5),
      positive("jacobi_quadratic_homogeneity", "pencil",
               "the Jacobi expression is quadratic in the bivector (relative, on a non-Poisson field)", 1e-6),
      positive("degenerate_on_line", "degeneracy", "the pencil member is degenerate when t1 + t2 = 0", 1e-8),
      positive("nondegenerate_off_line", "degeneracy",
               "the pencil member is nondegenerate at unit-circle samples off t1 + t2 = 0", 1e-4, C::above),
      positive("regular_points_isotropy", "complement",
               "sampled points (a, w), w in m_hat, have isotropy algebra exactly h", 1e-8),
      positive("regular_tangent_matches_subchart", "complement",
               "h-fixed tangent vectors form the tangent space of the sub-bundle through the point", 1e-8),
      positive("complement_independent", "complement",
               "the canonical complement and the regular tangent space are independent", 1e-6, C::above),
      positive("complement_orthogonality", "complement",
               "each nondegenerate invariant form of the pencil pairs the canonical complement with the "
               "regular tangent space to zero",
               1e-8),
      positive("complement_blocks_nondegenerate", "complement",
               "the forms restricted to the complement and to the regular tangent space are nondegenerate", 1e-6,
               C::above),
      positive("complement_product_independence", "complement",
               "the canonical complement does not depend on the invariant product used to complement n(h)", 1e-8),
      positive("normalizer_complement_sum", "complement",
               "p + h does not depend on the ad(h)-invariant product defining p", 1e-8),
      positive("adapted_blocks", "adapted_chart",
               "in adapted coordinates at y = 0 both forms are block diagonal", 1e-8),
      positive("adapted_frame_split", "adapted_chart",
               "at y = 0 the adapted frame splits as canonical complement plus regular tangent space", 1e-8),
      positive("adapted_diagonal_nondegenerate", "adapted_chart",
               "the diagonal blocks of both forms in adapted coordinates are nondegenerate", 1e-6, C::above),
      positive("restricted_closed", "restricted", "both forms restricted to the sub-bundle are closed", 1e-5),
      positive("restricted_nondegenerate", "restricted",
               "both restricted forms are nondegenerate on the sub-bundle", 1e-6, C::above),
      positive("restricted_jacobi", "restricted", "the inverses of the restricted forms are Poisson", 1e-5),
      positive("restricted_compatibility", "restricted",
               "the restricted bivectors form a Poisson pair: their sum is Poisson", 1e-5),
      positive("restricted_degenerate_on_line", "restricted",
               "the restricted pencil member is degenerate when t1 + t2 = 0", 1e-8),
      positive("restricted_nondegenerate_off_line", "restricted",
               "the restricted pencil member is nondegenerate off t1 + t2 = 0", 1e-4, C::above),
      positive("bracket_agreement", "brackets",
               "brackets of invariant functions computed on T(O) and on the sub-bundle agree (relative)", 1e-5),
      positive("covector_agreement", "brackets",
               "eta^t on covectors vanishing on the canonical complement equals the restricted eta^t (relative)",
               1e-5),
      positive("local_freeness", "freeness",
               "isotropy in g_hat of generic sub-bundle points is the center of g_hat (excess dimension)", 0.0),
      positive("transversality", "transversality",
               "g_hat directions plus slice fiber directions span the sub-bundle tangent space (rank deficiency)",
               0.0),
      positive("slice_normal_form", "slice",
               "conjugating y by a maximizer of <y, Ad(k) x0> makes it orthogonal to ad(x0) k", 1e-8),
      positive("slice_normal_form_isometry", "slice", "the normal form preserves the norm of y", 1e-10),
      control("corrupted_form_jacobi", "pencil",
              "a non-closed perturbation of d(theta) must break the Jacobi identity of its inverse", 1e-5),
      control("adapted_blocks_off_submanifold", "adapted_chart",
              "off the regular submanifold (|y| = 0.05) the adapted off-diagonal blocks must not vanish", 1e-6),
      control("zero_section_isotropy_excess", "freeness",
              "at (a, 0) the isotropy in g_hat must exceed the center of g_hat", 0.0),
      control("zero_section_transversality", "transversality",
              "at (a, 0) the g_hat and slice directions must fail to span", 0.0),
  };
}

}  // namespace

const std::vector<CheckInfo>& check_registry() {
  static const std::vector<CheckInfo> registry = build();
  return registry;
}

const CheckInfo* find_check(const std::string& name) {
  const auto& r = check_registry();
  const auto it = std::find_if(r.begin(), r.end(), [&](const CheckInfo& c) { return c.name == name; });
  return it == r.end() ? nullptr : &*it;
}

std::string to_string(Comparison c) { return c == Comparison::at_most ? "<=" : ">"; }

Comparison comparison_from_string(const std::string& s) {
  if (s == "<=") return Comparison::at_most;
  if (s == ">") return Comparison::above;
  throw std::invalid_argument("unknown comparison '" + s + "'");
}

}  // namespace bipoisson::workbench
