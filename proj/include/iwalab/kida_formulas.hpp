#pragma once

#include <optional>
#include <vector>

#include "iwalab/errors.hpp"

namespace iwalab {

/// Reduction-type labels for the elliptic-curve evaluators.
enum class PrimeLabel { none, good, split, potGood, potSplit, other };

/// One ramification datum shared by `count` primes of the top field:
/// ramification index e, inertia degree f, n = e*f.
struct PrimeDatum {
    long e = 1;
    long f = 1;
    long count = 1;
    PrimeLabel label = PrimeLabel::none;
    std::optional<long> localLambdaBase; // lambda of the local H^0 downstairs
    std::optional<long> localLambdaTop;  // and upstairs
};

/// Inputs for the generic ordinary evaluator: global lambda / H^0 / delta
/// terms on both levels plus per-prime local lambdas.
struct GenericOrdInput {
    long degree = 1; // [K_inf : k_inf]
    long lambdaSelBase = 0;
    long lambdaH0ABase = 0;
    long deltaBase = 0;
    long lambdaH0ATop = 0;
    long deltaTop = 0;
    std::vector<PrimeDatum> primes;
};

/// Inputs for the p-adic Lie rank formula; primes are the non-completely
/// split ones of the base, carrying their local lambda.
struct LieRankInput {
    long lambdaBase = 0;
    long delta = 0; // 0 or 1
    long lambdaH0ABase = 0;
    long deltaBase = 0;
    std::vector<PrimeDatum> primes;
    bool cmShortcut = false; // lambdaBase - delta + count of listed primes
};

struct FormulaResult {
    long lambdaTop = 0;
    std::vector<std::string> warnings;
};

/// lambda(Sel top) = degree*(lambdaSel - lambdaH0A - delta)_base
///   + lambdaH0A_top + delta_top + sum_w count*(n_w * localBase - localTop).
long evalMainOrd(const GenericOrdInput& in);

/// Totally real p-ramified variant: degree*(lambda-1) + 1 + sum count*(e-1);
/// with xs = true (the all-finite-primes-ramified module) the prime sum drops.
long evalTotallyReal(long degree, long lambdaBase, const std::vector<PrimeDatum>& primes,
                     bool xs = false);

/// CM split-module variant: degree*(lambda-delta) + delta + sum count*(n-1).
long evalCmSplit(long degree, long delta, long lambdaBase, const std::vector<PrimeDatum>& primes);

/// Classical minus-part formula: as evalCmSplit with e in place of n
/// (non-p-adic primes only).
long evalKidaClassical(long degree, long delta, long lambdaBase,
                       const std::vector<PrimeDatum>& primes);

/// Sigma-ramified CM variant: degree*(lambda-1) + 1 + sum count*(n-1).
long evalSigmaRamified(long degree, long lambdaBase, const std::vector<PrimeDatum>& primes);

/// Local corank of the points module at a non-p-adic prime.
long localRankHM1(PrimeLabel reductionType, bool hasPTorsionPoint);

/// Ordinary elliptic formula: degree*lambda + 2(e-1) at good primes,
/// (e-1) at split ones, -2 and -1 at potentially good / split ones. Negative
/// results are returned with a warning: the hypotheses preclude them but the
/// arithmetic is evaluated as stated.
FormulaResult evalEllipticOrdinary(long degree, long lambdaBase,
                                   const std::vector<PrimeDatum>& primes);

/// Supersingular (multi-signed) variant: same arithmetic; the sign vector is
/// recorded by callers for provenance only.
FormulaResult evalEllipticSupersingular(long degree, long lambdaBase,
                                        const std::vector<PrimeDatum>& primes);

/// Z_p[[H]]-corank formula for p-adic Lie extensions.
long evalLieRank(const LieRankInput& in);

} // namespace iwalab
