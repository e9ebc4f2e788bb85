#include "iwalab/kida_formulas.hpp"

#include <string>

namespace iwalab {

long evalMainOrd(const GenericOrdInput& in) {
    long total = in.degree * (in.lambdaSelBase - in.lambdaH0ABase - in.deltaBase) +
                 in.lambdaH0ATop + in.deltaTop;
    for (const PrimeDatum& w : in.primes) {
        if (!w.localLambdaBase || !w.localLambdaTop)
            fail(ErrorCode::MissingLocalData,
                 "the generic evaluator needs local lambda values on both levels");
        long n = w.e * w.f;
        total += w.count * (n * *w.localLambdaBase - *w.localLambdaTop);
    }
    return total;
}

long evalTotallyReal(long degree, long lambdaBase, const std::vector<PrimeDatum>& primes,
                     bool xs) {
    long total = degree * (lambdaBase - 1) + 1;
    if (!xs)
        for (const PrimeDatum& w : primes) total += w.count * (w.e - 1);
    return total;
}

long evalCmSplit(long degree, long delta, long lambdaBase, const std::vector<PrimeDatum>& primes) {
    long total = degree * (lambdaBase - delta) + delta;
    for (const PrimeDatum& w : primes) total += w.count * (w.e * w.f - 1);
    return total;
}

long evalKidaClassical(long degree, long delta, long lambdaBase,
                       const std::vector<PrimeDatum>& primes) {
    long total = degree * (lambdaBase - delta) + delta;
    for (const PrimeDatum& w : primes) total += w.count * (w.e - 1);
    return total;
}

long evalSigmaRamified(long degree, long lambdaBase, const std::vector<PrimeDatum>& primes) {
    long total = degree * (lambdaBase - 1) + 1;
    for (const PrimeDatum& w : primes) total += w.count * (w.e * w.f - 1);
    return total;
}

long localRankHM1(PrimeLabel reductionType, bool hasPTorsionPoint) {
    if (reductionType == PrimeLabel::good && hasPTorsionPoint) return 2;
    if (reductionType == PrimeLabel::split) return 1;
    return 0;
}

FormulaResult evalEllipticOrdinary(long degree, long lambdaBase,
                                   const std::vector<PrimeDatum>& primes) {
    FormulaResult out;
    out.lambdaTop = degree * lambdaBase;
    for (const PrimeDatum& w : primes) {
        switch (w.label) {
        case PrimeLabel::good: out.lambdaTop += w.count * 2 * (w.e - 1); break;
        case PrimeLabel::split: out.lambdaTop += w.count * (w.e - 1); break;
        case PrimeLabel::potGood: out.lambdaTop += w.count * (-2); break;
        case PrimeLabel::potSplit: out.lambdaTop += w.count * (-1); break;
        case PrimeLabel::other:
        case PrimeLabel::none: break;
        }
    }
    if (out.lambdaTop < 0)
        out.warnings.push_back("negative lambda: the formula's hypotheses exclude this, "
                               "but the inputs were evaluated as given");
    return out;
}

FormulaResult evalEllipticSupersingular(long degree, long lambdaBase,
                                        const std::vector<PrimeDatum>& primes) {
    return evalEllipticOrdinary(degree, lambdaBase, primes);
}

long evalLieRank(const LieRankInput& in) {
    if (in.cmShortcut) {
        long total = in.lambdaBase - in.delta;
        for (const PrimeDatum& w : in.primes) total += w.count;
        return total;
    }
    long total = in.lambdaBase - in.lambdaH0ABase - in.deltaBase;
    for (const PrimeDatum& w : in.primes) {
        if (!w.localLambdaBase)
            fail(ErrorCode::MissingLocalData, "Lie rank formula needs base local lambdas");
        total += w.count * *w.localLambdaBase;
    }
    return total;
}

} // namespace iwalab
