#pragma once

#include "iwalab/group_ring.hpp"

namespace iwalab {

/// A bounded complex of finite free Lambda[G]-modules in cochain convention:
/// boundaries raise degree, d^{i+1} d^i = 0 exactly, column vectors, so d^i
/// has ranks[i+1] rows and ranks[i] columns.
struct PerfectComplex {
    int minDegree = 0;
    std::vector<size_t> ranks;             // degrees minDegree .. maxDegree
    std::vector<GroupRingMatrix> boundaries; // boundaries[i]: degree a+i -> a+i+1
    GroupPtr group;
    CtxPtr ctx;

    int maxDegree() const { return minDegree + int(ranks.size()) - 1; }
    size_t rankAt(int degree) const;
    long eulerCharacteristic() const;
};

/// Check dimensions and d^2 = 0 exactly.
/// Errors: BoundaryMismatch, NotAComplex (with the offending degree).
PerfectComplex validateComplex(int minDegree, std::vector<size_t> ranks,
                               std::vector<GroupRingMatrix> boundaries, GroupPtr group,
                               CtxPtr ctx);

/// Degreewise map of complexes phi^i : source^i -> target^i commuting with
/// the boundaries (checked exactly by cone()).
struct ChainMap {
    const PerfectComplex* source = nullptr;
    const PerfectComplex* target = nullptr;
    std::vector<GroupRingMatrix> maps; // indexed over the union degree range, by target layout
    int minDegree = 0;                 // degree of maps[0]

    const GroupRingMatrix* mapAt(int degree) const;
};

PerfectComplex shift(const PerfectComplex& c, int k);

/// Mapping cone of phi : C' -> C, with cone^i = C'^{i+1} (+) C^i and boundary
/// [[-d', 0], [phi, d]]. Errors NotChainMap when phi fails to commute.
PerfectComplex cone(const ChainMap& phi);

/// Base change to Lambda along g -> 1: same ranks, augmented boundaries,
/// trivial group.
PerfectComplex baseChange(const PerfectComplex& c);

struct ComplexClassification {
    bool torsion = false;
    bool muZero = false;
    std::vector<bool> perDegreeTorsion;
    std::vector<bool> perDegreeMuZero;
};

/// Torsion / mu=0 classification by exact fraction-field ranks: mod-p ranks
/// are decided exactly by evaluation; p-inverted ranks are certified lower
/// bounds combined with the complex inequality, and a deficit verdict that
/// saw near-precision divisors raises PrecisionExhausted instead of guessing.
ComplexClassification classify(const PerfectComplex& c);

struct LambdaOptions {
    bool crossCheck = true;   // layer-growth check on exact two-term complexes
    GrowthOptions growth;
};

/// lambda(C) = sum_i (-1)^i lambda(H^i(C)): two-term complexes go through the
/// determinant of the regular expansion; longer ones through an annihilator
/// of the top cohomology and the cone reduction, recursively. On exact
/// two-term complexes the determinant route is cross-checked against the
/// independent omega_n-layer growth route.
long lambdaOfComplex(const PerfectComplex& c);
long lambdaOfComplex(const PerfectComplex& c, const LambdaOptions& opts);

/// A distinguished exact polynomial f with mu(Lambda/(f)) = 0 annihilating
/// H^top(C): the determinant of a full-rank square column selection of the
/// expanded top boundary, verified by solving d * X = f * id exactly.
/// Errors: MuNotZeroAtTop, TDepthExhausted, NotAnnihilating.
IwasawaElement findAnnihilator(const PerfectComplex& c);

/// One step of the cone reduction: C' = [C^b -f-> C^b] at degrees b-1, b and
/// the strictified cone C'' at degrees a..b-1, built from the projective lift
/// of f through the top boundary. Requires b - a >= 2 (LengthTooShort).
std::pair<PerfectComplex, PerfectComplex> reduceStep(const PerfectComplex& c,
                                                     const IwasawaElement& f);

struct KidaReport {
    bool muZeroC = false;
    bool muZeroCbar = false;
    std::optional<long> lambdaC;
    std::optional<long> lambdaCbar;
    size_t groupOrder = 1;
    std::optional<bool> identityHolds; // present only when both mu flags hold
    bool violation = false;            // either side of the theorem failed
};

KidaReport verifyKida(const PerfectComplex& c);
KidaReport verifyKida(const PerfectComplex& c, const LambdaOptions& opts);

enum class ComplexFamily { muZero, muPositive, unconstrained };

struct RandomComplexParams {
    int minDegree = 0;
    int terms = 2;            // 2..4
    size_t maxRank = 4;
    int maxEntryDegree = 3;
    ComplexFamily family = ComplexFamily::muZero;
};

/// Deterministic in seed; d^2 = 0 holds by construction (block cells
/// conjugated by invertible transvection products).
PerfectComplex randomComplex(const RandomComplexParams& params, uint64_t seed,
                             const GroupPtr& group, const CtxPtr& ctx);

/// Same generator, plus the lambda value implied by the construction: the
/// signed sum of cell invariants. Present for the mu-zero family; used as an
/// independent oracle against the reduction engine.
struct GeneratedComplex {
    PerfectComplex complex;
    std::optional<long> expectedLambda;
};
GeneratedComplex randomComplexWithOracle(const RandomComplexParams& params, uint64_t seed,
                                         const GroupPtr& group, const CtxPtr& ctx);

/// A random triangle C' -> C -> cone for property suites; the chain map is a
/// scalar multiple or split inclusion, conjugated on both sides.
struct Triangle {
    PerfectComplex source;
    PerfectComplex target;
    PerfectComplex coneComplex;
};
Triangle randomTriangle(const RandomComplexParams& params, uint64_t seed, const GroupPtr& group,
                        const CtxPtr& ctx);

/// Synthetic global-onto-local triangle shape: C^1 -> C^2 -> C^3 with
/// C = cone(global -> local)[-1]; ranks balance so the Euler characteristic
/// vanishes when `balanced`.
PerfectComplex randomSelmerShape(uint64_t seed, const GroupPtr& group, const CtxPtr& ctx,
                                 bool balanced = true);

/// splitmix64; the deterministic seed stream used by all generators.
struct SplitMix64 {
    uint64_t state;
    explicit SplitMix64(uint64_t seed) : state(seed) {}
    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    uint64_t below(uint64_t n) { return n ? next() % n : 0; }
};

} // namespace iwalab
