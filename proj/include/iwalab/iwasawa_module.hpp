#pragma once

#include <optional>

#include "iwalab/poly_matrix.hpp"

namespace iwalab {

/// A finitely presented Lambda-module: coker of the relations matrix acting
/// on column vectors. Entries must be exact polynomials so that determinant
/// vanishing and fraction-field ranks stay decidable.
struct LambdaModule {
    size_t generators = 0;
    PolyMatrix relations; // generators rows, one column per relation

    LambdaModule() = default;
    LambdaModule(size_t g, PolyMatrix rel);
};

enum class InvariantMethod { determinant, growth };

struct InvariantReport {
    bool torsion = false;
    std::optional<unsigned> lambda; // absent when not torsion
    std::optional<unsigned> mu;
    std::optional<long> nu;         // growth route only
    InvariantMethod method = InvariantMethod::determinant;
};

struct GrowthOptions {
    int nMin = 0;
    int nMax = 4;
    size_t matrixBudget = 4096;       // cap on expanded rows
    bool shiftVariableRetry = true;   // retry through a lambda/mu-preserving
                                      // change of variable when a layer
                                      // quotient is infinite
};

GrowthOptions defaultGrowthOptions(uint64_t p);

/// Exact determinant route for square presentations: (lambda, mu) of
/// Lambda/(det). Errors: NotSquare; ZeroDeterminant, carrying whether the
/// determinant vanished identically as an exact polynomial.
InvariantReport exactInvariants(const LambdaModule& m);

/// log_p |M / omega_n M| by expanding to a Z/p^N presentation (companion
/// action of omega_n) and reading elementary divisors. Errors:
/// InfiniteQuotient (certified rank defect), PrecisionExhausted (a divisor
/// valuation reached N), BudgetExceeded.
long finiteQuotientLogSize(const LambdaModule& m, unsigned n,
                           const GrowthOptions& opts = GrowthOptions{});

/// Growth route: fit log_p |M/omega_n M| = mu p^n + lambda n + nu on the last
/// three layers and demand exact reproduction from some n0 <= nMax - 2 on.
InvariantReport growthInvariants(const LambdaModule& m, const GrowthOptions& opts);
InvariantReport growthInvariants(const LambdaModule& m);

/// The presentation with T replaced by a + (1+a)T; lambda and mu are
/// preserved (the substitution is a ring automorphism).
LambdaModule shiftModuleVariable(const LambdaModule& m, uint64_t a);

} // namespace iwalab
