#include "iwalab/iwasawa_module.hpp"

#include <algorithm>

namespace iwalab {

LambdaModule::LambdaModule(size_t g, PolyMatrix rel) : generators(g), relations(std::move(rel)) {
    if (relations.rows() != g)
        fail(ErrorCode::SchemaError, "relations matrix must have one row per generator");
    if (!relations.allEntriesExact())
        fail(ErrorCode::PrecisionExhausted,
             "module presentations require exact polynomial entries");
}

GrowthOptions defaultGrowthOptions(uint64_t p) {
    GrowthOptions o;
    o.nMax = p == 2 ? 5 : (p == 3 ? 4 : 3);
    return o;
}

InvariantReport exactInvariants(const LambdaModule& m) {
    if (m.relations.cols() != m.generators)
        fail(ErrorCode::NotSquare, "determinant route needs a square presentation");
    InvariantReport rep;
    rep.method = InvariantMethod::determinant;
    if (m.generators == 0) {
        rep.torsion = true;
        rep.lambda = 0;
        rep.mu = 0;
        return rep;
    }
    IwasawaElement det = detPoly(m.relations);
    if (det.isZero()) {
        // With exact entries the determinant is exact whenever its true degree
        // fits the window; only then is "identically zero" certified.
        long degreeBound = 0;
        for (size_t i = 0; i < m.relations.rows(); ++i) {
            int rowMax = 0;
            for (size_t j = 0; j < m.relations.cols(); ++j) {
                const auto& e = m.relations.at(i, j);
                if (!e.isZero()) rowMax = std::max(rowMax, *e.exactDegree());
            }
            degreeBound += rowMax;
        }
        bool certified = degreeBound < long(m.relations.ctx()->tPrecision());
        throw Error(ErrorCode::ZeroDeterminant,
                    certified ? "determinant is identically zero; module is not torsion"
                              : "determinant vanishes within the precision window")
            .withIdenticallyZero(certified);
    }
    ElementInvariants inv = invariantsOfElement(det);
    rep.torsion = true;
    rep.lambda = inv.lambda;
    rep.mu = inv.mu;
    return rep;
}

long finiteQuotientLogSize(const LambdaModule& m, unsigned n, const GrowthOptions& opts) {
    const CtxPtr& ctx = m.relations.ctx();
    const PrecisionContext& cx = *ctx;
    if (m.generators == 0) return 0;

    uint64_t layer = 1;
    for (unsigned i = 0; i < n; ++i) layer *= cx.p();
    if (m.generators * layer > opts.matrixBudget)
        fail(ErrorCode::BudgetExceeded,
             "expanded presentation exceeds the matrix budget of " +
                 std::to_string(opts.matrixBudget) + " rows");

    // Fewer relation columns than generators is a structural rank defect:
    // the module is not torsion and no layer quotient is finite.
    if (m.relations.cols() < m.generators)
        fail(ErrorCode::InfiniteQuotient,
             "presentation has fewer relations than generators; quotient is infinite");

    // omega_n = (1+T)^{p^n} - 1 as a raw coefficient vector; the layer degree
    // may exceed the T^M window, which is fine since only the companion
    // action matters here.
    const size_t d = size_t(layer);
    std::vector<uint64_t> om(d + 1, 0);
    {
        std::vector<uint64_t> row(d + 1, 0);
        row[0] = 1;
        for (size_t i = 1; i <= d; ++i)
            for (size_t j = i; j-- > 0;) row[j + 1] = cx.add(row[j + 1], row[j]);
        for (size_t k = 1; k <= d; ++k) om[k] = row[k];
    }

    // Expand M/omega_n M over Z/p^N: each generator splits into p^n residue
    // generators, each relation column r(T) into columns T^k r(T) mod omega_n.
    ResidueMatrix big(m.generators * d, m.relations.cols() * d, ctx);
    for (size_t col = 0; col < m.relations.cols(); ++col) {
        // srow[i] = entry_i mod omega_n; iterate srow <- T*srow mod omega_n.
        std::vector<std::vector<uint64_t>> srow(m.generators, std::vector<uint64_t>(d, 0));
        for (size_t i = 0; i < m.generators; ++i) {
            const IwasawaElement& e = m.relations.at(i, col);
            std::vector<uint64_t> r(size_t(*e.exactDegree()) + 1, 0);
            for (size_t k = 0; k < r.size(); ++k) r[k] = e.coeff(k);
            for (size_t deg = r.size(); deg-- > d;) {
                uint64_t c = r[deg];
                if (!c) continue;
                r[deg] = 0;
                for (size_t k = 0; k < d; ++k)
                    r[deg - d + k] = cx.sub(r[deg - d + k], cx.mul(c, om[k]));
            }
            for (size_t k = 0; k < d && k < r.size(); ++k) srow[i][k] = r[k];
        }
        for (size_t shift = 0; shift < d; ++shift) {
            for (size_t i = 0; i < m.generators; ++i)
                for (size_t k = 0; k < d; ++k)
                    big.at(i * d + k, col * d + shift) = srow[i][k];
            if (shift + 1 == d) break;
            // srow <- T * srow mod omega_n (monic of degree d).
            for (size_t i = 0; i < m.generators; ++i) {
                uint64_t top = srow[i][d - 1];
                for (size_t k = d; k-- > 1;) srow[i][k] = srow[i][k - 1];
                srow[i][0] = 0;
                if (top)
                    for (size_t k = 0; k < d; ++k)
                        srow[i][k] = cx.sub(srow[i][k], cx.mul(top, om[k]));
            }
        }
    }

    std::vector<unsigned> divs = smithValuations(big);
    long logSize = 0;
    size_t deficits = 0;
    for (size_t i = 0; i < m.generators * d; ++i) {
        unsigned v = i < divs.size() ? divs[i] : cx.coeffPrecision();
        if (v >= cx.coeffPrecision()) ++deficits;
        else logSize += long(v);
    }
    if (deficits > 0) {
        // A deficit is either a genuinely infinite quotient or a divisor past
        // p^N. If the relations cannot be certified to have full rank over
        // Frac(Lambda) the module itself looks non-torsion.
        if (rankLowerBound(m.relations) < m.generators)
            fail(ErrorCode::InfiniteQuotient,
                 "relations rank defect at working precision; quotient is infinite "
                 "or the module is not torsion");
        fail(ErrorCode::PrecisionExhausted,
             "an elementary divisor reached valuation N; the layer size is not "
             "trustworthy at this precision");
    }
    return logSize;
}

LambdaModule shiftModuleVariable(const LambdaModule& m, uint64_t a) {
    PolyMatrix rel(m.relations.rows(), m.relations.cols(), m.relations.ctx());
    for (size_t i = 0; i < rel.rows(); ++i)
        for (size_t j = 0; j < rel.cols(); ++j)
            rel.at(i, j) = m.relations.at(i, j).shiftVariable(a);
    return LambdaModule(m.generators, std::move(rel));
}

namespace {

struct GrowthFit {
    long mu, lambda, nu;
    int n0;
};

std::optional<GrowthFit> fitGrowth(const std::vector<long>& sizes, int nMin, uint64_t p) {
    const int count = int(sizes.size());
    if (count < 3) return std::nullopt;
    // Solve mu p^n + lambda n + nu = size_n on the last three points, exactly.
    long n2 = nMin + count - 1, n1 = n2 - 1, n0 = n2 - 2;
    auto pn = [&](long n) {
        long v = 1;
        for (long i = 0; i < n; ++i) v *= long(p);
        return v;
    };
    long y0 = sizes[size_t(n0 - nMin)], y1 = sizes[size_t(n1 - nMin)], y2 = sizes[size_t(n2 - nMin)];
    // Eliminate nu, then lambda.
    long a1 = pn(n1) - pn(n0), a2 = pn(n2) - pn(n1);
    long d1 = y1 - y0, d2 = y2 - y1;
    // mu*(a2-a1) + lambda*0 = d2-d1  since the n-coefficient differences are 1.
    long denom = a2 - a1;
    if (denom == 0) return std::nullopt;
    if ((d2 - d1) % denom != 0) return std::nullopt;
    long mu = (d2 - d1) / denom;
    long lambda = d1 - mu * a1;
    long nu = y0 - mu * pn(n0) - lambda * n0;
    if (mu < 0 || lambda < 0) return std::nullopt;

    // The fit must reproduce every point from some n0 <= nMax - 2 onward.
    int firstGood = -1;
    for (int i = 0; i < count; ++i) {
        long n = nMin + i;
        bool ok = sizes[size_t(i)] == mu * pn(n) + lambda * n + nu;
        if (ok && firstGood < 0) firstGood = i;
        if (!ok) firstGood = -1;
    }
    if (firstGood < 0 || nMin + firstGood > n0) return std::nullopt;
    return GrowthFit{mu, lambda, nu, int(nMin) + firstGood};
}

} // namespace

InvariantReport growthInvariants(const LambdaModule& m, const GrowthOptions& opts) {
    if (opts.nMax - opts.nMin < 3)
        fail(ErrorCode::Unstable, "growth fit needs nMax - nMin >= 3");

    const PrecisionContext& cx = *m.relations.ctx();
    std::vector<uint64_t> shifts{0};
    if (opts.shiftVariableRetry) {
        for (uint64_t j = 1; j <= 3; ++j) shifts.push_back((j * cx.p()) % cx.modulus());
    }

    std::optional<Error> lastError;
    for (uint64_t a : shifts) {
        LambdaModule mm = a == 0 ? m : shiftModuleVariable(m, a);
        std::vector<long> sizes;
        try {
            for (int n = opts.nMin; n <= opts.nMax; ++n)
                sizes.push_back(finiteQuotientLogSize(mm, unsigned(n), opts));
        } catch (const Error& e) {
            if (e.code() == ErrorCode::InfiniteQuotient ||
                e.code() == ErrorCode::PrecisionExhausted) {
                lastError = e;
                continue; // a shifted variable may make the layers finite
            }
            throw;
        }
        auto fit = fitGrowth(sizes, opts.nMin, cx.p());
        if (!fit) {
            lastError = Error(ErrorCode::Unstable,
                              "no stabilization window; raise nMax, N, or M and retry");
            continue;
        }
        InvariantReport rep;
        rep.method = InvariantMethod::growth;
        rep.torsion = true;
        rep.lambda = unsigned(fit->lambda);
        rep.mu = unsigned(fit->mu);
        rep.nu = fit->nu;
        return rep;
    }
    throw lastError.value_or(Error(ErrorCode::Unstable, "growth fit failed"));
}

InvariantReport growthInvariants(const LambdaModule& m) {
    return growthInvariants(m, defaultGrowthOptions(m.relations.ctx()->p()));
}

} // namespace iwalab
