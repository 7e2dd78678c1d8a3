#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "bipoisson/orbit.hpp"
#include "bipoisson/seeding.hpp"

namespace test {

using namespace bipoisson;

inline AlgebraPtr su(int n) { return std::make_shared<const LieAlgebra>(LieAlgebra::special_unitary(n)); }
inline AlgebraPtr so(int n) { return std::make_shared<const LieAlgebra>(LieAlgebra::special_orthogonal(n)); }

/// i * diag(d) as an element (d need not be centered when it already sums to 0).
inline Element diag_element(const LieAlgebra& alg, const std::vector<double>& d) {
  const int n = static_cast<int>(d.size());
  CMatrix m = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = {0.0, d[i]};
  return alg.from_matrix(m);
}

/// -i sigma_k / 2, the spin-1/2 generators.
inline CMatrix spin(int k) {
  using C = std::complex<double>;
  CMatrix s(2, 2);
  if (k == 1) s << C(0, 0), C(1, 0), C(1, 0), C(0, 0);
  if (k == 2) s << C(0, 0), C(0, -1), C(0, 1), C(0, 0);
  if (k == 3) s << C(1, 0), C(0, 0), C(0, 0), C(-1, 0);
  return C(0, -0.5) * s;
}

/// E_kj - E_jk in so(n).
inline CMatrix rotation(int n, int j, int k) {
  CMatrix m = CMatrix::Zero(n, n);
  m(k, j) = 1.0;
  m(j, k) = -1.0;
  return m;
}

inline OrbitConfig su2_sphere() {
  const auto alg = su(2);
  return make_orbit_config(alg, alg->from_matrix(spin(3)));
}
inline OrbitConfig cp2() {
  const auto alg = su(3);
  return make_orbit_config(alg, diag_element(*alg, {2, -1, -1}));
}
inline OrbitConfig su3_regular() {
  const auto alg = su(3);
  return make_orbit_config(alg, diag_element(*alg, {1, 2, -3}));
}

inline Element random_in(const Subspace& s, Stream& rng) { return s.basis() * rng.normal_vector(s.dim()); }

/// Ambient chart at (a, vbar) with vbar a unit vector in m.
inline std::shared_ptr<const Chart> ambient_chart(const OrbitConfig& config, std::uint64_t seed) {
  Stream rng(seed);
  Element v = random_in(config.m, rng);
  return std::make_shared<const Chart>(config, TangentBundlePoint{config.a, v / v.norm()}, config.m);
}

inline Vector box_coords(int dim, Stream& rng) {
  return rng.uniform_vector(dim, -Chart::kValidityBox, Chart::kValidityBox);
}

}  // namespace test
