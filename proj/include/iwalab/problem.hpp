#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "iwalab/crossed.hpp"
#include "iwalab/gamma.hpp"

namespace iwalab {

enum class ProblemKind { Gamma, Crossed };

/// A parsed and validated problem file.
///
/// Integers may be written as JSON numbers or decimal strings; series are
/// arrays of coefficient strings, lowest degree first. Unknown keys are
/// rejected.
struct Problem {
    int schema = 1;
    ProblemKind kind = ProblemKind::Gamma;
    mpz_class p;
    int precision = PadicContext::kDefaultPrecision;
    /// When set, matrix entries are read as series known modulo X^truncation
    /// (they lose their exact-polynomial status).
    std::optional<std::size_t> truncation;
    std::size_t d = 0;
    std::vector<IntPoly> matrix;  // F (gamma) or A (crossed), row-major
    mpz_class kappa = 1;          // crossed only
    std::vector<mpz_class> characters;
    std::vector<Level> levels;  // gamma levels carry m = 0
    std::optional<int> budget;
    std::optional<std::uint64_t> search_seed;
    std::optional<bool> include_trivial;

    PadicContext context(int precision) const { return PadicContext(p, precision); }
    GammaModule gamma_module(int precision) const;
    CrossedModule crossed_module(int precision) const;
};

/// Throws ParseError on malformed text or unknown keys and ValidationError
/// (naming the invariant) when the stanza describes an invalid module.
Problem parse_problem(const std::string& text);

}  // namespace iwalab
