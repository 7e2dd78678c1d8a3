#include "bipoisson/invariant_functions.hpp"

#include "bipoisson/error.hpp"
#include "bipoisson/seeding.hpp"

namespace bipoisson {

Word parse_word(const std::string& text) {
  if (text.empty()) throw InputError("invariant function: empty word");
  Word out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == 'x') {
      out.push_back(Letter::x);
    } else if (c == 'v') {
      out.push_back(Letter::v);
    } else {
      throw InputError(std::string("invariant function: unknown letter '") + c + "'");
    }
  }
  return out;
}

std::string to_string(const Word& word) {
  std::string out;
  for (Letter l : word) out += l == Letter::x ? 'x' : 'v';
  return out;
}

InvariantFunction invariant_function(AlgebraPtr alg, const Word& word) {
  if (word.empty()) throw InputError("invariant function: empty word");
  if (!alg) throw InputError("invariant function: null algebra");
  return [alg = std::move(alg), word](const TangentBundlePoint& p) {
    const CMatrix x = alg->to_matrix(p.x);
    const CMatrix v = alg->to_matrix(p.v);
    CMatrix prod = word.front() == Letter::x ? x : v;
    for (std::size_t i = 1; i < word.size(); ++i) prod = prod * (word[i] == Letter::x ? x : v);
    return prod.trace().real();
  };
}

double invariance_defect(const LieAlgebra& alg, const InvariantFunction& f, const TangentBundlePoint& p,
                         int conjugations, std::uint64_t seed) {
  const double base = f(p);
  double worst = 0.0;
  for (int i = 0; i < conjugations; ++i) {
    Stream rng(seed, "invariance-conjugation", static_cast<std::uint64_t>(i));
    const Matrix g = adjoint_exponential(alg, rng.normal_vector(alg.dim()));
    worst = std::max(worst, std::abs(f({g * p.x, g * p.v}) - base));
  }
  return worst;
}

}  // namespace bipoisson
