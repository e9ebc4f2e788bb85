#include <doctest.h>

#include <array>

#include "iwalab/kida_formulas.hpp"

using namespace iwalab;

namespace {

uint64_t rngState = 5150;
uint64_t rnd() {
    uint64_t z = (rngState += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace

TEST_CASE("generic ordinary formula") {
    {
        GenericOrdInput in;
        in.degree = 1;
        in.lambdaSelBase = 7;
        in.lambdaH0ABase = 2;
        in.deltaBase = 1;
        in.lambdaH0ATop = 2;
        in.deltaTop = 1;
        CHECK(evalMainOrd(in) == 7); // identity extension
    }
    {
        GenericOrdInput in;
        in.degree = 3;
        in.lambdaSelBase = 4;
        PrimeDatum w;
        w.e = 3;
        w.f = 1;
        w.localLambdaBase = 1;
        w.localLambdaTop = 1;
        in.primes = {w};
        CHECK(evalMainOrd(in) == 3 * 4 + 2);
    }
    {
        GenericOrdInput in;
        in.degree = 3;
        PrimeDatum w;
        w.e = 3;
        in.primes = {w}; // missing local data
        CHECK_THROWS_AS(evalMainOrd(in), Error);
    }
}

TEST_CASE("totally real formula") {
    CHECK(evalTotallyReal(3, 1, {}) == 1);
    {
        PrimeDatum w;
        w.e = 3;
        w.count = 2;
        CHECK(evalTotallyReal(3, 1, {w}) == 5);
        CHECK(evalTotallyReal(3, 1, {w}, /*xs=*/true) == 1); // prime sum drops
    }
    CHECK(evalTotallyReal(1, 9, {}) == 9);
}

TEST_CASE("CM split formula") {
    {
        PrimeDatum w;
        w.e = 3;
        w.f = 1;
        w.count = 2;
        CHECK(evalCmSplit(3, 1, 2, {w}) == 8);
    }
    CHECK(evalCmSplit(1, 1, 5, {}) == 5);
    {
        PrimeDatum w;
        w.e = 3;
        w.f = 3;
        CHECK(evalCmSplit(9, 0, 0, {w}) == 8);
    }
}

TEST_CASE("classical Kida formula") {
    {
        PrimeDatum w;
        w.e = 3;
        w.count = 2;
        CHECK(evalKidaClassical(3, 1, 2, {w}) == 8);
    }
    CHECK(evalKidaClassical(1, 0, 4, {}) == 4);
    {
        PrimeDatum w;
        w.e = 9;
        CHECK(evalKidaClassical(9, 0, 0, {w}) == 8);
    }
}

TEST_CASE("sigma-ramified formula") {
    CHECK(evalSigmaRamified(1, 6, {}) == 6);
    {
        PrimeDatum w;
        w.e = 3;
        w.f = 1;
        w.count = 2;
        CHECK(evalSigmaRamified(3, 1, {w}) == 5);
    }
    {
        PrimeDatum w;
        w.e = 3;
        w.f = 3;
        CHECK(evalSigmaRamified(3, 2, {w}) == 4 + 8);
    }
}

TEST_CASE("local ranks by reduction type") {
    CHECK(localRankHM1(PrimeLabel::good, true) == 2);
    CHECK(localRankHM1(PrimeLabel::good, false) == 0);
    CHECK(localRankHM1(PrimeLabel::split, false) == 1);
    CHECK(localRankHM1(PrimeLabel::split, true) == 1);
    CHECK(localRankHM1(PrimeLabel::other, true) == 0);
    CHECK(localRankHM1(PrimeLabel::potGood, false) == 0);
}

TEST_CASE("elliptic ordinary formula") {
    {
        PrimeDatum w;
        w.label = PrimeLabel::good;
        w.e = 3;
        CHECK(evalEllipticOrdinary(3, 2, {w}).lambdaTop == 10);
    }
    {
        PrimeDatum w;
        w.label = PrimeLabel::potGood;
        CHECK(evalEllipticOrdinary(3, 2, {w}).lambdaTop == 4);
    }
    CHECK(evalEllipticOrdinary(1, 5, {}).lambdaTop == 5);
    {
        PrimeDatum w;
        w.label = PrimeLabel::potSplit;
        w.count = 4;
        FormulaResult res = evalEllipticOrdinary(1, 0, {w});
        CHECK(res.lambdaTop == -4);
        CHECK(!res.warnings.empty());
    }
    // supersingular variant delegates to the same arithmetic
    {
        PrimeDatum w;
        w.label = PrimeLabel::split;
        w.e = 9;
        CHECK(evalEllipticSupersingular(9, 1, {w}).lambdaTop ==
              evalEllipticOrdinary(9, 1, {w}).lambdaTop);
    }
}

TEST_CASE("Lie rank formula") {
    {
        LieRankInput in;
        in.cmShortcut = true;
        in.lambdaBase = 4;
        in.delta = 1;
        PrimeDatum w;
        w.count = 2;
        in.primes = {w};
        CHECK(evalLieRank(in) == 5);
    }
    {
        LieRankInput in;
        in.lambdaBase = 6;
        CHECK(evalLieRank(in) == 6);
    }
    // generic and CM shortcut agree when every local lambda is 1
    for (int trial = 0; trial < 200; ++trial) {
        LieRankInput gen, cm;
        gen.lambdaBase = cm.lambdaBase = long(rnd() % 10);
        long delta = long(rnd() % 2);
        gen.deltaBase = delta;
        cm.delta = delta;
        cm.cmShortcut = true;
        size_t nPrimes = rnd() % 4;
        for (size_t i = 0; i < nPrimes; ++i) {
            PrimeDatum w;
            w.count = 1 + long(rnd() % 3);
            w.localLambdaBase = 1;
            gen.primes.push_back(w);
            cm.primes.push_back(w);
        }
        CHECK(evalLieRank(gen) == evalLieRank(cm));
    }
}

TEST_CASE("tower transitivity for the classical shapes") {
    // Composite towers: degrees multiply, fibers compose with
    // sum_{x|w} e_x f_x = [L:K] per prime; verify two-step = one-step.
    for (int trial = 0; trial < 1000; ++trial) {
        long d1 = 1, d2 = 1;
        for (int i = rnd() % 3; i > 0; --i) d1 *= 3;
        for (int i = rnd() % 3; i > 0; --i) d2 *= 3;
        long delta = long(rnd() % 2);
        long lambdaBase = long(rnd() % 12);

        struct Fiber {
            long e1, f1, m1; // splitting data in K/k per base prime
            long e2, f2, m2; // splitting data in L/K per K-prime (uniform)
        };
        // e*f*m = degree per fiber; withF = false restricts to f = 1, the
        // regime of the e-only evaluators (non-p-adic primes are inert along
        // the base Z_p-direction, so their inertia is absorbed).
        auto makeFibers = [&](size_t count, bool withF) {
            std::vector<Fiber> fibers(count);
            auto split3 = [&](long d, long& e, long& f, long& m) {
                e = f = m = 1;
                for (long rest = d; rest > 1; rest /= 3) {
                    switch (rnd() % (withF ? 3 : 2)) {
                    case 0: e *= 3; break;
                    case 1: m *= 3; break;
                    default: f *= 3; break;
                    }
                }
            };
            for (auto& fb : fibers) {
                split3(d1, fb.e1, fb.f1, fb.m1);
                split3(d2, fb.e2, fb.f2, fb.m2);
            }
            return fibers;
        };
        auto towerData = [&](const std::vector<Fiber>& fibers) {
            std::array<std::vector<PrimeDatum>, 3> out; // K/k, L/K, L/k
            for (const auto& fb : fibers) {
                PrimeDatum wk;
                wk.e = fb.e1;
                wk.f = fb.f1;
                wk.count = fb.m1;
                out[0].push_back(wk);
                PrimeDatum wl;
                wl.e = fb.e2;
                wl.f = fb.f2;
                wl.count = fb.m1 * fb.m2; // K-primes over a fiber split alike
                out[1].push_back(wl);
                PrimeDatum wlk;
                wlk.e = fb.e1 * fb.e2;
                wlk.f = fb.f1 * fb.f2;
                wlk.count = fb.m1 * fb.m2;
                out[2].push_back(wlk);
            }
            return out;
        };

        {
            auto [upK, upLfromK, upLfromk] = towerData(makeFibers(rnd() % 4, true));
            long mid = evalCmSplit(d1, delta, lambdaBase, upK);
            CHECK(evalCmSplit(d2, delta, mid, upLfromK) ==
                  evalCmSplit(d1 * d2, delta, lambdaBase, upLfromk));
            long midSigma = evalSigmaRamified(d1, lambdaBase, upK);
            CHECK(evalSigmaRamified(d2, midSigma, upLfromK) ==
                  evalSigmaRamified(d1 * d2, lambdaBase, upLfromk));
        }
        {
            auto [upK, upLfromK, upLfromk] = towerData(makeFibers(rnd() % 4, false));
            long mid = evalTotallyReal(d1, lambdaBase, upK);
            CHECK(evalTotallyReal(d2, mid, upLfromK) ==
                  evalTotallyReal(d1 * d2, lambdaBase, upLfromk));
            long midKida = evalKidaClassical(d1, delta, lambdaBase, upK);
            CHECK(evalKidaClassical(d2, delta, midKida, upLfromK) ==
                  evalKidaClassical(d1 * d2, delta, lambdaBase, upLfromk));
        }
    }
}

TEST_CASE("generic formula subsumes the elliptic one") {
    for (int trial = 0; trial < 1000; ++trial) {
        long degree = 1;
        for (int i = rnd() % 3; i > 0; --i) degree *= 3;
        long lambdaBase = long(rnd() % 10);
        std::vector<PrimeDatum> primes(rnd() % 5);
        for (auto& w : primes) {
            w.e = 1;
            for (int i = rnd() % 3; i > 0; --i) w.e *= 3;
            w.f = 1; // non-p-adic primes: n = e
            w.count = 1 + long(rnd() % 3);
            switch (rnd() % 4) {
            case 0: w.label = PrimeLabel::good; break;
            case 1: w.label = PrimeLabel::split; break;
            case 2: w.label = PrimeLabel::potGood; break;
            default: w.label = PrimeLabel::potSplit; break;
            }
        }
        FormulaResult elliptic = evalEllipticOrdinary(degree, lambdaBase, primes);

        GenericOrdInput gen;
        gen.degree = degree;
        gen.lambdaSelBase = lambdaBase;
        for (const PrimeDatum& w : primes) {
            PrimeDatum t = w;
            // local lambdas via the reduction-type table: downstairs the
            // potentially-good/split types are additive (rank 0), upstairs
            // they become good/split.
            switch (w.label) {
            case PrimeLabel::good:
                t.localLambdaBase = localRankHM1(PrimeLabel::good, true);
                t.localLambdaTop = localRankHM1(PrimeLabel::good, true);
                break;
            case PrimeLabel::split:
                t.localLambdaBase = localRankHM1(PrimeLabel::split, false);
                t.localLambdaTop = localRankHM1(PrimeLabel::split, false);
                break;
            case PrimeLabel::potGood:
                t.localLambdaBase = localRankHM1(PrimeLabel::other, false);
                t.localLambdaTop = localRankHM1(PrimeLabel::good, true);
                break;
            default:
                t.localLambdaBase = localRankHM1(PrimeLabel::other, false);
                t.localLambdaTop = localRankHM1(PrimeLabel::split, false);
                break;
            }
            gen.primes.push_back(t);
        }
        CHECK(evalMainOrd(gen) == elliptic.lambdaTop);
    }
}

TEST_CASE("inert unramified primes contribute nothing") {
    for (int trial = 0; trial < 100; ++trial) {
        long degree = 3;
        long lambdaBase = long(rnd() % 8);
        PrimeDatum trivial;
        trivial.e = 1;
        trivial.f = 1;
        trivial.localLambdaBase = long(rnd() % 3);
        trivial.localLambdaTop = trivial.localLambdaBase;
        GenericOrdInput with, without;
        with.degree = without.degree = degree;
        with.lambdaSelBase = without.lambdaSelBase = lambdaBase;
        with.primes = {trivial};
        CHECK(evalMainOrd(with) == evalMainOrd(without));
        CHECK(evalCmSplit(degree, 1, lambdaBase, {trivial}) ==
              evalCmSplit(degree, 1, lambdaBase, {}));
        CHECK(evalTotallyReal(degree, lambdaBase, {trivial}) ==
              evalTotallyReal(degree, lambdaBase, {}));
    }
}
