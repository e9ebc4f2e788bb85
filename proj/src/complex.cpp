#include "iwalab/complex.hpp"

#include <algorithm>

namespace iwalab {

size_t PerfectComplex::rankAt(int degree) const {
    int idx = degree - minDegree;
    if (idx < 0 || idx >= int(ranks.size())) return 0;
    return ranks[size_t(idx)];
}

long PerfectComplex::eulerCharacteristic() const {
    long chi = 0;
    for (size_t i = 0; i < ranks.size(); ++i) {
        int degree = minDegree + int(i);
        long sign = ((degree % 2) + 2) % 2 == 0 ? 1 : -1;
        chi += sign * long(ranks[i]);
    }
    return chi;
}

PerfectComplex validateComplex(int minDegree, std::vector<size_t> ranks,
                               std::vector<GroupRingMatrix> boundaries, GroupPtr group,
                               CtxPtr ctx) {
    if (ranks.empty()) fail(ErrorCode::SchemaError, "complex needs at least one degree");
    if (boundaries.size() + 1 != ranks.size())
        fail(ErrorCode::BoundaryMismatch, "need exactly one boundary per adjacent degree pair");
    for (size_t i = 0; i < boundaries.size(); ++i) {
        const GroupRingMatrix& d = boundaries[i];
        if (d.rows != ranks[i + 1] || d.cols != ranks[i])
            fail(ErrorCode::BoundaryMismatch,
                 "boundary at degree " + std::to_string(minDegree + int(i)) + " must be " +
                     std::to_string(ranks[i + 1]) + " x " + std::to_string(ranks[i]));
        if (d.group->order != group->order)
            fail(ErrorCode::BoundaryMismatch, "boundary group mismatch");
    }
    for (size_t i = 0; i + 1 < boundaries.size(); ++i) {
        if (ranks[i] == 0 || ranks[i + 1] == 0 || ranks[i + 2] == 0) continue;
        if (!boundaries[i + 1].mul(boundaries[i]).isZero())
            throw Error(ErrorCode::NotAComplex,
                        "d^2 != 0 at degree " + std::to_string(minDegree + int(i)))
                .withDegree(minDegree + int(i));
    }
    PerfectComplex c;
    c.minDegree = minDegree;
    c.ranks = std::move(ranks);
    c.boundaries = std::move(boundaries);
    c.group = std::move(group);
    c.ctx = std::move(ctx);
    return c;
}

const GroupRingMatrix* ChainMap::mapAt(int degree) const {
    int idx = degree - minDegree;
    if (idx < 0 || idx >= int(maps.size())) return nullptr;
    return &maps[size_t(idx)];
}

PerfectComplex shift(const PerfectComplex& c, int k) {
    PerfectComplex out = c;
    out.minDegree = c.minDegree - k;
    if (k % 2 != 0) {
        for (auto& d : out.boundaries)
            for (auto& e : d.entries) e = e.negated();
    }
    return out;
}

namespace {

GroupRingMatrix zeroMatrix(size_t rows, size_t cols, const GroupPtr& g, const CtxPtr& ctx) {
    return GroupRingMatrix(rows, cols, g, ctx);
}

GroupRingMatrix scalarIdentity(size_t n, const IwasawaElement& f, const GroupPtr& g) {
    GroupRingMatrix m(n, n, g, f.ctx());
    for (size_t i = 0; i < n; ++i) m.at(i, i) = GroupRingElement::scalar(g, f);
    return m;
}

} // namespace

PerfectComplex cone(const ChainMap& phi) {
    const PerfectComplex& src = *phi.source;
    const PerfectComplex& dst = *phi.target;
    const GroupPtr& g = dst.group;
    const CtxPtr& ctx = dst.ctx;
    if (src.group->order != g->order) fail(ErrorCode::NotChainMap, "group mismatch");

    // Exact commutation check: phi^{i+1} d_src^i = d_dst^i phi^i.
    int lo = std::min(src.minDegree, dst.minDegree);
    int hi = std::max(src.maxDegree(), dst.maxDegree());
    auto mapOrZero = [&](int degree) {
        const GroupRingMatrix* m = phi.mapAt(degree);
        if (m) return *m;
        return zeroMatrix(dst.rankAt(degree), src.rankAt(degree), g, ctx);
    };
    auto boundaryOf = [&](const PerfectComplex& c, int degree) {
        int idx = degree - c.minDegree;
        if (idx < 0 || idx + 1 >= int(c.ranks.size()))
            return zeroMatrix(c.rankAt(degree + 1), c.rankAt(degree), c.group, c.ctx);
        return c.boundaries[size_t(idx)];
    };
    for (int i = lo; i < hi; ++i) {
        GroupRingMatrix lhs = mapOrZero(i + 1).mul(boundaryOf(src, i));
        GroupRingMatrix rhs = boundaryOf(dst, i).mul(mapOrZero(i));
        if (!lhs.sub(rhs).isZero())
            fail(ErrorCode::NotChainMap,
                 "map does not commute with boundaries at degree " + std::to_string(i));
    }

    // cone^i = src^{i+1} (+) dst^i, boundary [[-d_src, 0], [phi, d_dst]].
    int clo = std::min(src.minDegree - 1, dst.minDegree);
    int chi = std::max(src.maxDegree() - 1, dst.maxDegree());
    std::vector<size_t> ranks;
    for (int i = clo; i <= chi; ++i) ranks.push_back(src.rankAt(i + 1) + dst.rankAt(i));
    std::vector<GroupRingMatrix> boundaries;
    for (int i = clo; i < chi; ++i) {
        size_t sj = src.rankAt(i + 1), dj = dst.rankAt(i);
        size_t si = src.rankAt(i + 2), di = dst.rankAt(i + 1);
        GroupRingMatrix b(si + di, sj + dj, g, ctx);
        GroupRingMatrix dsrc = boundaryOf(src, i + 1);
        GroupRingMatrix ddst = boundaryOf(dst, i);
        GroupRingMatrix ph = mapOrZero(i + 1);
        for (size_t r = 0; r < si; ++r)
            for (size_t c2 = 0; c2 < sj; ++c2) b.at(r, c2) = dsrc.at(r, c2).negated();
        for (size_t r = 0; r < di; ++r) {
            for (size_t c2 = 0; c2 < sj; ++c2) b.at(si + r, c2) = ph.at(r, c2);
            for (size_t c2 = 0; c2 < dj; ++c2) b.at(si + r, sj + c2) = ddst.at(r, c2);
        }
        boundaries.push_back(std::move(b));
    }
    return validateComplex(clo, std::move(ranks), std::move(boundaries), g, ctx);
}

PerfectComplex baseChange(const PerfectComplex& c) {
    GroupPtr triv = trivialGroup();
    std::vector<GroupRingMatrix> boundaries;
    for (const auto& d : c.boundaries) {
        PolyMatrix aug = augmentMatrix(d);
        GroupRingMatrix b(d.rows, d.cols, triv, c.ctx);
        for (size_t i = 0; i < d.rows; ++i)
            for (size_t j = 0; j < d.cols; ++j)
                b.at(i, j) = GroupRingElement::scalar(triv, aug.at(i, j));
        boundaries.push_back(std::move(b));
    }
    return validateComplex(c.minDegree, c.ranks, std::move(boundaries), triv, c.ctx);
}

namespace {

std::vector<PolyMatrix> expandedBoundaries(const PerfectComplex& c) {
    std::vector<PolyMatrix> out;
    out.reserve(c.boundaries.size());
    for (const auto& d : c.boundaries) out.push_back(regularExpand(d));
    return out;
}

} // namespace

ComplexClassification classify(const PerfectComplex& c) {
    for (const auto& d : c.boundaries)
        if (!d.allEntriesExact())
            fail(ErrorCode::PrecisionExhausted,
                 "classification requires exact polynomial boundary entries");

    const size_t t = c.ranks.size();
    const size_t order = c.group->order;
    std::vector<PolyMatrix> b = expandedBoundaries(c);

    std::vector<size_t> rhoBar(b.size(), 0);
    for (size_t i = 0; i < b.size(); ++i) rhoBar[i] = rankModP(b[i]);
    auto rbAt = [&](long i) -> size_t {
        return (i >= 0 && i < long(b.size())) ? rhoBar[size_t(i)] : 0;
    };

    ComplexClassification cls;
    cls.perDegreeMuZero.assign(t, false);
    for (size_t i = 0; i < t; ++i)
        cls.perDegreeMuZero[i] = (c.ranks[i] * order == rbAt(long(i)) + rbAt(long(i) - 1));
    cls.muZero =
        std::all_of(cls.perDegreeMuZero.begin(), cls.perDegreeMuZero.end(), [](bool x) { return x; });

    if (cls.muZero) {
        cls.torsion = true;
        cls.perDegreeTorsion.assign(t, true);
        return cls;
    }

    std::vector<size_t> rho(b.size(), 0);
    bool anyNear = false;
    for (size_t i = 0; i < b.size(); ++i) {
        bool near = false;
        rho[i] = std::max(rhoBar[i], rankLowerBound(b[i], &near));
        anyNear = anyNear || near;
    }
    auto rAt = [&](long i) -> size_t {
        return (i >= 0 && i < long(b.size())) ? rho[size_t(i)] : 0;
    };
    cls.perDegreeTorsion.assign(t, false);
    for (size_t i = 0; i < t; ++i)
        cls.perDegreeTorsion[i] = (c.ranks[i] * order == rAt(long(i)) + rAt(long(i) - 1));
    cls.torsion = std::all_of(cls.perDegreeTorsion.begin(), cls.perDegreeTorsion.end(),
                              [](bool x) { return x; });
    if (!cls.torsion && anyNear)
        fail(ErrorCode::PrecisionExhausted,
             "torsion rank certificates ran into divisors near p^N; raise N and retry");
    return cls;
}

namespace {

PerfectComplex stripZeroEdges(const PerfectComplex& c) {
    size_t lo = 0, hi = c.ranks.size();
    while (lo < hi && c.ranks[lo] == 0) ++lo;
    while (hi > lo && c.ranks[hi - 1] == 0) --hi;
    if (lo == 0 && hi == c.ranks.size()) return c;
    PerfectComplex out;
    out.minDegree = c.minDegree + int(lo);
    out.group = c.group;
    out.ctx = c.ctx;
    out.ranks.assign(c.ranks.begin() + long(lo), c.ranks.begin() + long(hi));
    if (hi > lo + 1)
        out.boundaries.assign(c.boundaries.begin() + long(lo), c.boundaries.begin() + long(hi) - 1);
    return out;
}

long signOfDegree(int degree) { return ((degree % 2) + 2) % 2 == 0 ? 1 : -1; }

/// (lambda, mu) of Lambda/(det B) for square B over Lambda; triangular
/// matrices are summed along the diagonal so scalar complexes never push the
/// determinant degree past the window.
ElementInvariants invariantsOfSquareExpansion(const PolyMatrix& b) {
    const size_t n = b.rows();
    bool lower = true, upper = true;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            if (i < j && !b.at(i, j).isZero()) lower = false;
            if (i > j && !b.at(i, j).isZero()) upper = false;
        }
    if (lower || upper) {
        ElementInvariants total{0, 0};
        for (size_t i = 0; i < n; ++i) {
            ElementInvariants inv = invariantsOfElement(b.at(i, i));
            total.lambda += inv.lambda;
            total.mu += inv.mu;
        }
        return total;
    }
    IwasawaElement det = detPoly(b);
    if (det.isZero())
        fail(ErrorCode::PrecisionExhausted,
             "determinant of a torsion two-term complex vanished in the window");
    return invariantsOfElement(det);
}

struct AnnihilatorData {
    IwasawaElement f;        // determinant of the selected square submatrix
    PolyMatrix square;       // the submatrix itself
    std::vector<size_t> cols; // selected column indices in the expansion
};

AnnihilatorData annihilatorAtTop(const PerfectComplex& c) {
    if (c.boundaries.empty()) fail(ErrorCode::LengthTooShort, "complex has no boundaries");
    const PolyMatrix top = regularExpand(c.boundaries.back());
    if (top.rows() == 0) {
        AnnihilatorData out{IwasawaElement::constant(c.ctx, 1), PolyMatrix(0, 0, c.ctx), {}};
        return out;
    }
    if (top.cols() < top.rows())
        fail(ErrorCode::NotTorsion, "top boundary cannot have full row rank");

    std::vector<size_t> cols;
    try {
        cols = selectIndependentColumns(top, /*modP=*/true);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::MuNotZeroAtTop) throw;
        // mu > 0 at the top: fall back to a p-inverted certificate; the
        // annihilator then has positive mu but still drives the reduction.
        cols = selectIndependentColumns(top, /*modP=*/false);
    }
    PolyMatrix square(top.rows(), top.rows(), c.ctx);
    for (size_t i = 0; i < top.rows(); ++i)
        for (size_t j = 0; j < top.rows(); ++j) square.at(i, j) = top.at(i, cols[j]);
    IwasawaElement f = detPoly(square);
    if (f.isZero())
        fail(ErrorCode::PrecisionExhausted,
             "annihilator determinant vanished within the precision window");
    return AnnihilatorData{std::move(f), std::move(square), std::move(cols)};
}

GroupRingMatrix liftThroughTop(const PerfectComplex& c, const AnnihilatorData& ann,
                               const IwasawaElement& f) {
    const size_t order = c.group->order;
    const size_t rTop = c.ranks.back();
    const size_t rPrev = c.ranks[c.ranks.size() - 2];

    std::vector<size_t> unitCols(rTop);
    for (size_t j = 0; j < rTop; ++j) unitCols[j] = j * order + c.group->identityIndex;
    auto x = solveScaledUnits(ann.square, f, unitCols);
    if (!x)
        fail(ErrorCode::NotAnnihilating,
             "f * id does not lift through the top boundary; f does not annihilate "
             "the top cohomology at this precision");

    GroupRingMatrix star(rPrev, rTop, c.group, c.ctx);
    for (size_t s = 0; s < ann.cols.size(); ++s) {
        size_t slot = ann.cols[s] / order;
        size_t gidx = ann.cols[s] % order;
        for (size_t j = 0; j < rTop; ++j) {
            if (x->at(s, j).isZero()) continue;
            star.at(slot, j).coeffs[gidx] = star.at(slot, j).coeffs[gidx].add(x->at(s, j));
        }
    }
    return star;
}

PerfectComplex strictifiedCone(const PerfectComplex& c, const GroupRingMatrix& star) {
    // C'' for C' = [C^b -f-> C^b] at degrees b-1,b mapping into C by
    // (*, id): degrees a..b-1 with the degree-(b-2) term doubled to
    // C^b (+) C^{b-2} and top boundary [ * | d^{b-2} ].
    const size_t t = c.ranks.size(); // >= 3
    const size_t rTop = c.ranks[t - 1];
    std::vector<size_t> ranks(c.ranks.begin(), c.ranks.end() - 1);
    ranks[t - 3] += rTop;
    std::vector<GroupRingMatrix> boundaries;
    for (size_t i = 0; i + 4 < t; ++i) boundaries.push_back(c.boundaries[i]);
    // boundary into the doubled degree: [0; d^{b-3}] (C'-part rows first)
    if (t >= 4) {
        const GroupRingMatrix& low = c.boundaries[t - 4];
        GroupRingMatrix b(rTop + low.rows, low.cols, c.group, c.ctx);
        for (size_t i = 0; i < low.rows; ++i)
            for (size_t j = 0; j < low.cols; ++j) b.at(rTop + i, j) = low.at(i, j);
        boundaries.push_back(std::move(b));
    }
    // top boundary [ * | d^{b-2} ]
    const GroupRingMatrix& mid = c.boundaries[t - 3];
    GroupRingMatrix topB(mid.rows, rTop + mid.cols, c.group, c.ctx);
    for (size_t i = 0; i < mid.rows; ++i) {
        for (size_t j = 0; j < rTop; ++j) topB.at(i, j) = star.at(i, j);
        for (size_t j = 0; j < mid.cols; ++j) topB.at(i, rTop + j) = mid.at(i, j);
    }
    boundaries.push_back(std::move(topB));
    return validateComplex(c.minDegree, std::move(ranks), std::move(boundaries), c.group, c.ctx);
}

long lambdaRec(const PerfectComplex& raw, const LambdaOptions& opts);

long lambdaTwoTerm(const PerfectComplex& c, const LambdaOptions& opts) {
    const PolyMatrix b = regularExpand(c.boundaries.front());
    if (b.rows() != b.cols())
        fail(ErrorCode::NotTorsion, "two-term complex with unequal expanded ranks is not torsion");
    ElementInvariants det = invariantsOfSquareExpansion(b);

    if (opts.crossCheck && b.allEntriesExact()) {
        // Independent route: omega_n-layer growth of the cokernel module.
        GrowthOptions gopts = opts.growth;
        const uint64_t p = c.ctx->p();
        // Keep the largest layer matrix near a thousand rows.
        int nMax = gopts.nMin + 3;
        while (nMax < gopts.nMax) {
            uint64_t rowsAt = b.rows();
            for (int n = 0; n < nMax + 1; ++n) rowsAt *= p;
            if (rowsAt > 1296) break;
            ++nMax;
        }
        gopts.nMax = nMax;
        InvariantReport growth = growthInvariants(LambdaModule(b.rows(), b), gopts);
        if (!growth.lambda || *growth.lambda != det.lambda || *growth.mu != det.mu)
            fail(ErrorCode::Unstable,
                 "determinant and layer-growth routes disagree on the two-term complex");
    }
    return signOfDegree(c.maxDegree()) * long(det.lambda);
}

long lambdaRec(const PerfectComplex& raw, const LambdaOptions& opts) {
    PerfectComplex c = stripZeroEdges(raw);
    if (c.ranks.empty()) return 0;
    if (c.ranks.size() == 1) {
        if (c.ranks[0] == 0) return 0;
        fail(ErrorCode::NotTorsion, "a nonzero free module in a single degree is not torsion");
    }
    if (c.ranks.size() == 2) return lambdaTwoTerm(c, opts);

    AnnihilatorData ann = annihilatorAtTop(c);
    GroupRingMatrix star = liftThroughTop(c, ann, ann.f);
    PerfectComplex cpp = strictifiedCone(c, star);

    ElementInvariants inv = invariantsOfElement(ann.f);
    long lambdaPrime = signOfDegree(c.maxDegree()) *
                       long(c.ranks.back() * c.group->order) * long(inv.lambda);
    return lambdaPrime + lambdaRec(cpp, opts);
}

} // namespace

long lambdaOfComplex(const PerfectComplex& c, const LambdaOptions& opts) {
    // Complexes with window-only entries (reduction outputs) skip the
    // up-front classification; the reduction engine certifies torsion as it
    // goes: annihilators are verified, base determinants must be nonzero.
    bool exact = true;
    for (const auto& d : c.boundaries)
        if (!d.allEntriesExact()) exact = false;
    if (exact) {
        ComplexClassification cls = classify(c);
        if (!cls.torsion)
            fail(ErrorCode::NotTorsion, "lambda is only defined for torsion complexes");
    }
    return lambdaRec(c, opts);
}

long lambdaOfComplex(const PerfectComplex& c) { return lambdaOfComplex(c, LambdaOptions{}); }

IwasawaElement findAnnihilator(const PerfectComplex& c) {
    PerfectComplex work = stripZeroEdges(c);
    if (work.ranks.empty() || work.ranks.back() == 0)
        return IwasawaElement::constant(c.ctx, 1);
    if (work.ranks.size() == 1)
        fail(ErrorCode::MuNotZeroAtTop, "single nonzero free module has no torsion annihilator");

    // Spec precondition: mu(H^top) = 0, i.e. the top boundary keeps full row
    // rank mod p. selectIndependentColumns raises MuNotZeroAtTop otherwise.
    const PolyMatrix top = regularExpand(work.boundaries.back());
    if (top.cols() < top.rows())
        fail(ErrorCode::MuNotZeroAtTop, "top boundary cannot have full row rank");
    std::vector<size_t> cols = selectIndependentColumns(top, /*modP=*/true);
    PolyMatrix square(top.rows(), top.rows(), work.ctx);
    for (size_t i = 0; i < top.rows(); ++i)
        for (size_t j = 0; j < top.rows(); ++j) square.at(i, j) = top.at(i, cols[j]);
    IwasawaElement det = detPoly(square);
    if (det.isZero())
        fail(ErrorCode::PrecisionExhausted,
             "annihilator determinant vanished within the precision window");

    // Normalize to the distinguished part; with unit content this generates
    // the same ideal, so it still annihilates.
    Preparation prep = weierstrassPrepare(det);
    if (prep.mu != 0)
        fail(ErrorCode::MuNotZeroAtTop,
             "annihilator content is divisible by p; mu is not zero at the top degree");

    // Membership verification: f * id lifts through the boundary.
    AnnihilatorData ann{det, square, cols};
    (void)liftThroughTop(work, ann, det);
    return prep.distinguished;
}

std::pair<PerfectComplex, PerfectComplex> reduceStep(const PerfectComplex& c,
                                                     const IwasawaElement& f) {
    PerfectComplex work = stripZeroEdges(c);
    if (int(work.ranks.size()) < 3)
        fail(ErrorCode::LengthTooShort, "cone reduction needs maxDegree - minDegree >= 2");
    if (f.isZero()) fail(ErrorCode::NotAnnihilating, "zero cannot annihilate");

    AnnihilatorData ann = annihilatorAtTop(work);
    GroupRingMatrix star = liftThroughTop(work, ann, f);

    const size_t rTop = work.ranks.back();
    int b = work.maxDegree();
    PerfectComplex cPrime;
    {
        std::vector<GroupRingMatrix> bounds{scalarIdentity(rTop, f, work.group)};
        cPrime = validateComplex(b - 1, {rTop, rTop}, std::move(bounds), work.group, work.ctx);
    }
    PerfectComplex cSecond = strictifiedCone(work, star);
    return {std::move(cPrime), std::move(cSecond)};
}

KidaReport verifyKida(const PerfectComplex& c, const LambdaOptions& opts) {
    KidaReport rep;
    rep.groupOrder = c.group->order;
    ComplexClassification clsC = classify(c);
    PerfectComplex cbar = baseChange(c);
    ComplexClassification clsB = classify(cbar);
    rep.muZeroC = clsC.muZero;
    rep.muZeroCbar = clsB.muZero;
    if (clsC.muZero != clsB.muZero) {
        rep.violation = true;
        return rep;
    }
    if (clsC.muZero) {
        rep.lambdaC = lambdaOfComplex(c, opts);
        rep.lambdaCbar = lambdaOfComplex(cbar, opts);
        rep.identityHolds = (*rep.lambdaC == long(c.group->order) * *rep.lambdaCbar);
        rep.violation = !*rep.identityHolds;
    }
    return rep;
}

KidaReport verifyKida(const PerfectComplex& c) { return verifyKida(c, LambdaOptions{}); }

// ---------------------------------------------------------------------------
// Seeded generators
// ---------------------------------------------------------------------------

namespace {

IwasawaElement randomPoly(SplitMix64& rng, const CtxPtr& ctx, int maxDeg, bool forceUnitCoeff) {
    const PrecisionContext& cx = *ctx;
    IwasawaElement out = IwasawaElement::constant(ctx, 0);
    int deg = int(rng.below(uint64_t(maxDeg) + 1));
    for (int i = 0; i <= deg; ++i) out.setCoeff(size_t(i), rng.below(cx.modulus()));
    if (forceUnitCoeff) {
        bool hasUnit = false;
        for (int i = 0; i <= deg; ++i)
            if (cx.isUnit(out.coeff(size_t(i)))) hasUnit = true;
        if (!hasUnit) {
            size_t pos = size_t(rng.below(uint64_t(deg) + 1));
            out.setCoeff(pos, 1 + rng.below(cx.p() - 1));
        }
    }
    return out;
}

GroupRingElement randomGroupRingElement(SplitMix64& rng, const GroupPtr& g, const CtxPtr& ctx,
                                        int maxDeg) {
    GroupRingElement e = GroupRingElement::zero(g, ctx);
    size_t support = 1 + rng.below(std::min<uint64_t>(g->order, 3));
    for (size_t s = 0; s < support; ++s) {
        size_t idx = size_t(rng.below(g->order));
        e.coeffs[idx] = e.coeffs[idx].add(randomPoly(rng, ctx, maxDeg, false));
    }
    return e;
}

// In-place conjugation d -> U_{i+1} d U_i^{-1} with transvection products;
// inverses of the elementary factors are explicit so entries stay exact.
struct BasisChange {
    GroupRingMatrix u, uInv;
};

BasisChange randomBasisChange(SplitMix64& rng, size_t n, const GroupPtr& g, const CtxPtr& ctx,
                              int entryDeg) {
    BasisChange out{GroupRingMatrix(n, n, g, ctx), GroupRingMatrix(n, n, g, ctx)};
    for (size_t i = 0; i < n; ++i) {
        out.u.at(i, i) = GroupRingElement::scalar(g, IwasawaElement::constant(ctx, 1));
        out.uInv.at(i, i) = GroupRingElement::scalar(g, IwasawaElement::constant(ctx, 1));
    }
    if (n < 2) return out;
    size_t rounds = n + 1;
    for (size_t k = 0; k < rounds; ++k) {
        size_t s = size_t(rng.below(n)), t = size_t(rng.below(n));
        if (s == t) continue;
        GroupRingElement r = randomGroupRingElement(rng, g, ctx, entryDeg);
        GroupRingMatrix e(n, n, g, ctx), einv(n, n, g, ctx);
        for (size_t i = 0; i < n; ++i) {
            e.at(i, i) = GroupRingElement::scalar(g, IwasawaElement::constant(ctx, 1));
            einv.at(i, i) = GroupRingElement::scalar(g, IwasawaElement::constant(ctx, 1));
        }
        e.at(s, t) = r;
        einv.at(s, t) = r.negated();
        out.u = out.u.mul(e);
        out.uInv = einv.mul(out.uInv);
    }
    return out;
}

} // namespace

PerfectComplex randomComplex(const RandomComplexParams& params, uint64_t seed,
                             const GroupPtr& group, const CtxPtr& ctx) {
    return randomComplexWithOracle(params, seed, group, ctx).complex;
}

GeneratedComplex randomComplexWithOracle(const RandomComplexParams& params, uint64_t seed,
                                         const GroupPtr& group, const CtxPtr& ctx) {
    SplitMix64 rng(seed * 0x9e3779b97f4a7c15ull + 0x7f4a7c15ull);
    const int t = std::clamp(params.terms, 2, 4);
    const int cellDeg = std::max(0, params.maxEntryDegree - 2);
    const int mixDeg = params.maxEntryDegree >= 2 ? 1 : 0;

    // Cells on adjacent degree pairs; each contributes one generator at both
    // ends. Consecutive pair counts are bounded so every rank stays within
    // maxRank without disturbing the block layout.
    const size_t maxRank = std::max<size_t>(2, params.maxRank);
    std::vector<size_t> cells(size_t(t) - 1, 0);
    for (size_t i = 0; i < cells.size(); ++i) {
        size_t prev = i > 0 ? cells[i - 1] : 0;
        size_t limit = std::min<size_t>(2, maxRank - std::min(maxRank, prev));
        cells[i] = limit == 0 ? 0 : 1 + rng.below(limit);
    }
    if (std::all_of(cells.begin(), cells.end(), [](size_t c) { return c == 0; })) cells[0] = 1;
    std::vector<size_t> ranks(size_t(t), 0);
    for (size_t i = 0; i + 1 < size_t(t); ++i) {
        ranks[i] += cells[i];
        ranks[i + 1] += cells[i];
    }

    // Diagonal cell boundaries.
    std::optional<long> expectedLambda;
    if (params.family == ComplexFamily::muZero) expectedLambda = 0;
    std::vector<GroupRingMatrix> boundaries;
    size_t pCellPair = 0;
    for (size_t i = 0; i < cells.size(); ++i)
        if (cells[i] > 0) pCellPair = i; // last non-empty pair hosts the p-cell
    for (size_t i = 0; i + 1 < size_t(t); ++i) {
        GroupRingMatrix d(ranks[i + 1], ranks[i], group, ctx);
        size_t fromOffset = i == 0 ? 0 : cells[i - 1]; // bottoms of pair i sit after pair i-1 tops
        for (size_t cidx = 0; cidx < cells[i]; ++cidx) {
            size_t row = cidx;               // tops of pair i are first at degree i+1
            size_t col = fromOffset + cidx;
            if (col >= ranks[i] || row >= ranks[i + 1]) continue;
            GroupRingElement value = GroupRingElement::zero(group, ctx);
            switch (params.family) {
            case ComplexFamily::muZero:
                value = GroupRingElement::scalar(group, randomPoly(rng, ctx, cellDeg, true));
                break;
            case ComplexFamily::muPositive: {
                IwasawaElement f = randomPoly(rng, ctx, cellDeg, true);
                if (i == pCellPair && cidx == 0) f = f.scaled(ctx->p());
                value = GroupRingElement::scalar(group, f);
                break;
            }
            case ComplexFamily::unconstrained:
                value = randomGroupRingElement(rng, group, ctx, cellDeg);
                break;
            }
            d.at(row, col) = value;
            if (params.family == ComplexFamily::muZero && expectedLambda) {
                try {
                    ElementInvariants inv = invariantsOfElement(value.coeffs[group->identityIndex]);
                    int degree = params.minDegree + int(i) + 1;
                    long sign = ((degree % 2) + 2) % 2 == 0 ? 1 : -1;
                    *expectedLambda += sign * long(group->order) * long(inv.lambda);
                } catch (const Error&) {
                    expectedLambda.reset();
                }
            }
        }
        boundaries.push_back(std::move(d));
    }

    // Conjugate by invertible basis changes per degree.
    std::vector<BasisChange> changes;
    for (size_t i = 0; i < size_t(t); ++i)
        changes.push_back(randomBasisChange(rng, ranks[i], group, ctx, mixDeg));
    for (size_t i = 0; i + 1 < size_t(t); ++i)
        boundaries[i] = changes[i + 1].u.mul(boundaries[i]).mul(changes[i].uInv);

    GeneratedComplex out;
    out.complex =
        validateComplex(params.minDegree, std::move(ranks), std::move(boundaries), group, ctx);
    out.expectedLambda = expectedLambda;
    return out;
}

Triangle randomTriangle(const RandomComplexParams& params, uint64_t seed, const GroupPtr& group,
                        const CtxPtr& ctx) {
    SplitMix64 rng(seed ^ 0xd1b54a32d192ed03ull);
    Triangle tri;
    tri.source = randomComplex(params, rng.next(), group, ctx);

    if (rng.below(2) == 0) {
        // phi = f * id on the same complex.
        tri.target = tri.source;
        IwasawaElement f = randomPoly(rng, ctx, std::max(0, params.maxEntryDegree - 2), true);
        ChainMap phi;
        phi.source = &tri.source;
        phi.target = &tri.target;
        phi.minDegree = tri.source.minDegree;
        for (size_t i = 0; i < tri.source.ranks.size(); ++i)
            phi.maps.push_back(scalarIdentity(tri.source.ranks[i], f, group));
        tri.coneComplex = cone(phi);
    } else {
        // Split inclusion into source (+) extra.
        PerfectComplex extra = randomComplex(params, rng.next(), group, ctx);
        std::vector<size_t> ranks;
        std::vector<GroupRingMatrix> bounds;
        for (size_t i = 0; i < tri.source.ranks.size(); ++i)
            ranks.push_back(tri.source.ranks[i] + extra.ranks[i]);
        for (size_t i = 0; i + 1 < ranks.size(); ++i) {
            const GroupRingMatrix& a = tri.source.boundaries[i];
            const GroupRingMatrix& bmat = extra.boundaries[i];
            GroupRingMatrix d(ranks[i + 1], ranks[i], group, ctx);
            for (size_t r = 0; r < a.rows; ++r)
                for (size_t c2 = 0; c2 < a.cols; ++c2) d.at(r, c2) = a.at(r, c2);
            for (size_t r = 0; r < bmat.rows; ++r)
                for (size_t c2 = 0; c2 < bmat.cols; ++c2)
                    d.at(a.rows + r, a.cols + c2) = bmat.at(r, c2);
            bounds.push_back(std::move(d));
        }
        tri.target = validateComplex(tri.source.minDegree, std::move(ranks), std::move(bounds),
                                     group, ctx);
        ChainMap phi;
        phi.source = &tri.source;
        phi.target = &tri.target;
        phi.minDegree = tri.source.minDegree;
        for (size_t i = 0; i < tri.source.ranks.size(); ++i) {
            GroupRingMatrix inc(tri.target.ranks[i], tri.source.ranks[i], group, ctx);
            for (size_t j = 0; j < tri.source.ranks[i]; ++j)
                inc.at(j, j) = GroupRingElement::scalar(group, IwasawaElement::constant(ctx, 1));
            phi.maps.push_back(std::move(inc));
        }
        tri.coneComplex = cone(phi);
    }
    return tri;
}

PerfectComplex randomSelmerShape(uint64_t seed, const GroupPtr& group, const CtxPtr& ctx,
                                 bool balanced) {
    SplitMix64 rng(seed ^ 0xa0761d6478bd642full);
    // Global at degrees 1..2 mapping onto local at degrees 1..2; the complex
    // is cone(global -> local)[-1], living at degrees 1..3.
    size_t m = 1 + rng.below(2);          // local rank at degree 1
    size_t k = rng.below(2);              // extra local rank at degree 2
    size_t g1 = m + rng.below(2);         // global rank at degree 1 (>= m)
    size_t extra = g1 - m;
    size_t g2 = extra + m + k;            // balanced Euler bookkeeping
    size_t l2 = m + k;
    if (!balanced) g2 += 1;

    // d_glob = [[d_loc, 0], [mix, d_extra]] so the projection is a chain map.
    GroupRingMatrix dloc(l2, m, group, ctx);
    for (size_t i = 0; i < l2 && i < m; ++i)
        dloc.at(i, i) = GroupRingElement::scalar(group, randomPoly(rng, ctx, 1, true));
    GroupRingMatrix dglob(g2, g1, group, ctx);
    for (size_t i = 0; i < l2; ++i)
        for (size_t j = 0; j < m; ++j) dglob.at(i, j) = dloc.at(i, j);
    for (size_t i = 0; i < g2 - l2 && i < extra; ++i)
        dglob.at(l2 + i, m + i) = GroupRingElement::scalar(group, randomPoly(rng, ctx, 1, true));
    for (size_t i = 0; i + l2 < g2; ++i)
        for (size_t j = 0; j < m; ++j)
            if (rng.below(2) == 0)
                dglob.at(l2 + i, j) = randomGroupRingElement(rng, group, ctx, 1);

    PerfectComplex glob =
        validateComplex(1, {g1, g2}, {dglob}, group, ctx);
    PerfectComplex loc = validateComplex(1, {m, l2}, {dloc}, group, ctx);

    ChainMap phi;
    phi.source = &glob;
    phi.target = &loc;
    phi.minDegree = 1;
    {
        GroupRingMatrix p1(m, g1, group, ctx);
        for (size_t i = 0; i < m; ++i)
            p1.at(i, i) = GroupRingElement::scalar(group, IwasawaElement::constant(ctx, 1));
        GroupRingMatrix p2(l2, g2, group, ctx);
        for (size_t i = 0; i < l2; ++i)
            p2.at(i, i) = GroupRingElement::scalar(group, IwasawaElement::constant(ctx, 1));
        phi.maps = {p1, p2};
    }
    return shift(cone(phi), -1);
}

} // namespace iwalab
