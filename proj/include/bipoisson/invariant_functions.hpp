#pragma once

// Conjugation-invariant functions on T(O): f_word(x, v) = Re tr(w_1 ... w_k)
// with each letter w_i either x or v in the matrix realization.

#include <string>
#include <vector>

#include "bipoisson/reduction.hpp"

namespace bipoisson {

enum class Letter { x, v };
using Word = std::vector<Letter>;

/// Parses a word such as "xxvv". Throws InputError on empty input or
/// letters other than x and v.
Word parse_word(const std::string& text);
std::string to_string(const Word& word);

/// Throws InputError for an empty word.
InvariantFunction invariant_function(AlgebraPtr alg, const Word& word);

/// max over `conjugations` random group elements of |f(g.p) - f(p)|.
double invariance_defect(const LieAlgebra& alg, const InvariantFunction& f, const TangentBundlePoint& p,
                         int conjugations, std::uint64_t seed);

}  // namespace bipoisson
