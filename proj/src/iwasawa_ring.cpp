#include "iwalab/iwasawa_ring.hpp"

#include <algorithm>

namespace iwalab {

IwasawaElement::IwasawaElement(CtxPtr ctx, std::vector<int64_t> values, bool exact)
    : ctx_(std::move(ctx)), coeffs_(ctx_->tPrecision(), 0) {
    if (values.size() > coeffs_.size())
        fail(ErrorCode::TDepthExhausted,
             "coefficient list of length " + std::to_string(values.size()) +
                 " does not fit the T^" + std::to_string(coeffs_.size()) + " window");
    for (size_t i = 0; i < values.size(); ++i) coeffs_[i] = ctx_->reduce(values[i]);
    if (exact) markExactUpTo(int(values.size()) - 1);
}

void IwasawaElement::markExactUpTo(int d) {
    int top = -1;
    for (size_t i = 0; i < coeffs_.size(); ++i)
        if (coeffs_[i]) top = int(i);
    if (top > d) fail(ErrorCode::InternalError, "exactDegree below a nonzero coefficient");
    exactDegree_ = std::max(top, std::min(d, int(coeffs_.size()) - 1));
    if (top < 0) exactDegree_ = std::max(0, std::min(d, int(coeffs_.size()) - 1));
}

bool IwasawaElement::isZero() const {
    for (uint64_t c : coeffs_)
        if (c) return false;
    return true;
}

IwasawaElement IwasawaElement::add(const IwasawaElement& other) const {
    const PrecisionContext& cx = *ctx_;
    IwasawaElement out(ctx_);
    for (size_t i = 0; i < coeffs_.size(); ++i)
        out.coeffs_[i] = cx.add(coeffs_[i], other.coeffs_[i]);
    if (isExact() && other.isExact())
        out.markExactUpTo(std::max(*exactDegree_, *other.exactDegree_));
    return out;
}

IwasawaElement IwasawaElement::sub(const IwasawaElement& other) const {
    return add(other.negated());
}

IwasawaElement IwasawaElement::negated() const {
    IwasawaElement out(ctx_);
    for (size_t i = 0; i < coeffs_.size(); ++i) out.coeffs_[i] = ctx_->neg(coeffs_[i]);
    out.exactDegree_ = exactDegree_;
    return out;
}

IwasawaElement IwasawaElement::mul(const IwasawaElement& other) const {
    const PrecisionContext& cx = *ctx_;
    const size_t m = coeffs_.size();
    IwasawaElement out(ctx_);
    for (size_t i = 0; i < m; ++i) {
        uint64_t a = coeffs_[i];
        if (!a) continue;
        for (size_t j = 0; j + i < m; ++j)
            if (other.coeffs_[j])
                out.coeffs_[i + j] = cx.add(out.coeffs_[i + j], cx.mul(a, other.coeffs_[j]));
    }
    if (isExact() && other.isExact()) {
        int d = *exactDegree_ + *other.exactDegree_;
        if (d < int(m)) out.markExactUpTo(d);
    }
    return out;
}

IwasawaElement IwasawaElement::scaled(uint64_t c) const {
    IwasawaElement out(ctx_);
    for (size_t i = 0; i < coeffs_.size(); ++i) out.coeffs_[i] = ctx_->mul(coeffs_[i], c);
    out.exactDegree_ = exactDegree_;
    return out;
}

IwasawaElement IwasawaElement::inverted() const {
    const PrecisionContext& cx = *ctx_;
    if (!cx.isUnit(coeffs_[0]))
        fail(ErrorCode::NotAUnit, "series has non-unit constant coefficient");
    const size_t m = coeffs_.size();
    IwasawaElement out(ctx_);
    uint64_t inv0 = cx.invertUnit(coeffs_[0]);
    out.coeffs_[0] = inv0;
    for (size_t i = 1; i < m; ++i) {
        uint64_t acc = 0;
        for (size_t j = 1; j <= i; ++j)
            if (coeffs_[j] && out.coeffs_[i - j])
                acc = cx.add(acc, cx.mul(coeffs_[j], out.coeffs_[i - j]));
        out.coeffs_[i] = cx.mul(cx.neg(acc), inv0);
    }
    return out;
}

std::optional<unsigned> IwasawaElement::contentValuation() const {
    std::optional<unsigned> best;
    for (uint64_t c : coeffs_) {
        auto v = ctx_->valuation(c);
        if (v && (!best || *v < *best)) best = v;
        if (best && *best == 0) break;
    }
    return best;
}

std::optional<unsigned> IwasawaElement::firstUnitIndex() const {
    for (size_t i = 0; i < coeffs_.size(); ++i)
        if (ctx_->isUnit(coeffs_[i])) return unsigned(i);
    return std::nullopt;
}

bool IwasawaElement::isDistinguished() const {
    int top = -1;
    for (size_t i = 0; i < coeffs_.size(); ++i)
        if (coeffs_[i]) top = int(i);
    if (top < 0) return false;
    if (coeffs_[top] != 1) return false;
    for (int i = 0; i < top; ++i)
        if (ctx_->isUnit(coeffs_[i])) return false;
    // A truncated tail above `top` would make "monic" unverifiable.
    return !isExact() ? false : *exactDegree_ >= top;
}

IwasawaElement IwasawaElement::shiftVariable(uint64_t a) const {
    if (!isExact())
        fail(ErrorCode::PrecisionExhausted, "variable shift needs an exact polynomial");
    const PrecisionContext& cx = *ctx_;
    // Horner evaluation at s = a + (1+a) T.
    IwasawaElement s(ctx_);
    s.coeffs_[0] = cx.reduce(int64_t(a % cx.modulus()));
    s.coeffs_[1] = cx.add(1 % cx.modulus(), s.coeffs_[0]);
    s.markExactUpTo(1);
    IwasawaElement acc = IwasawaElement::constant(ctx_, 0);
    for (int i = *exactDegree_; i >= 0; --i) {
        acc = acc.mul(s);
        acc.coeffs_[0] = cx.add(acc.coeffs_[0], coeffs_[size_t(i)]);
        if (!acc.isExact()) acc.markExactUpTo(*exactDegree_ - i);
    }
    acc.markExactUpTo(*exactDegree_);
    return acc;
}

std::string IwasawaElement::toString() const {
    std::string out = "[";
    int top = 0;
    for (size_t i = 0; i < coeffs_.size(); ++i)
        if (coeffs_[i]) top = int(i);
    for (int i = 0; i <= top; ++i) {
        if (i) out += ", ";
        out += std::to_string(coeffs_[size_t(i)]);
    }
    return out + "]";
}

IwasawaElement IwasawaElement::constant(CtxPtr ctx, int64_t c) {
    return IwasawaElement(std::move(ctx), {c});
}

IwasawaElement IwasawaElement::monomial(CtxPtr ctx, unsigned degree, int64_t c) {
    IwasawaElement out(ctx);
    if (degree >= ctx->tPrecision())
        fail(ErrorCode::TDepthExhausted, "monomial degree outside the window");
    out.setCoeff(degree, out.ctx()->reduce(c));
    out.markExactUpTo(int(degree));
    return out;
}

Preparation weierstrassPrepare(const IwasawaElement& f) {
    const PrecisionContext& cx = *f.ctx();
    const unsigned n = cx.coeffPrecision();
    const size_t m = cx.tPrecision();

    auto content = f.contentValuation();
    if (!content)
        fail(ErrorCode::PrecisionExhausted,
             "element is 0 modulo (p^N, T^M); invariants are not visible");
    unsigned mu = *content;

    // Strip the content p^mu.
    IwasawaElement g(f.ctx());
    for (size_t i = 0; i < m; ++i) {
        uint64_t c = f.coeff(i);
        g.setCoeff(i, c / cx.pPow(mu));
    }
    if (f.isExact()) g.markExactUpTo(*f.exactDegree());

    auto unitIdx = g.firstUnitIndex();
    if (!unitIdx)
        fail(ErrorCode::TDepthExhausted,
             "no unit coefficient below T^" + std::to_string(m) + "; lambda >= M");
    unsigned lambda = *unitIdx;

    // Hensel: mod p we have g = T^lambda * unit-series; lift the factorization
    // g = P * u through the p-adic filtration, one digit at a time.
    IwasawaElement prep(f.ctx());
    prep.setCoeff(lambda, 1); // P starts as T^lambda
    IwasawaElement u(f.ctx());
    for (size_t i = 0; i + lambda < m; ++i) u.setCoeff(i, g.coeff(i + lambda) % cx.p());
    IwasawaElement uInvModP = u.inverted(); // used mod p only

    for (unsigned k = 1; k < n; ++k) {
        IwasawaElement residual = g.sub(prep.mul(u));
        // residual = p^k * h; extract h mod p.
        IwasawaElement h(f.ctx());
        bool zero = true;
        for (size_t i = 0; i < m; ++i) {
            uint64_t c = residual.coeff(i);
            if (c) zero = false;
            h.setCoeff(i, (c / cx.pPow(k)) % cx.p());
        }
        if (zero) break;
        IwasawaElement w = h.mul(uInvModP);
        IwasawaElement pi(f.ctx()), nu(f.ctx());
        for (size_t i = 0; i < lambda; ++i) pi.setCoeff(i, w.coeff(i) % cx.p());
        for (size_t i = 0; i + lambda < m; ++i) nu.setCoeff(i, w.coeff(i + lambda));
        nu = nu.mul(u);
        for (size_t i = 0; i < m; ++i) {
            prep.setCoeff(i, cx.add(prep.coeff(i), cx.mul(cx.pPow(k), pi.coeff(i) % cx.p())));
            u.setCoeff(i, cx.add(u.coeff(i), cx.mul(cx.pPow(k), nu.coeff(i) % cx.p())));
        }
    }

    prep.markExactUpTo(int(lambda));
    Preparation out{mu, prep, u, lambda};
    return out;
}

std::pair<IwasawaElement, IwasawaElement> weierstrassDivide(const IwasawaElement& f,
                                                            const IwasawaElement& p) {
    const PrecisionContext& cx = *f.ctx();
    if (!p.isDistinguished())
        fail(ErrorCode::NotDistinguished, "divisor fails the distinguished-polynomial check");
    int d = *p.exactDegree();
    if (d < 1) fail(ErrorCode::NotDistinguished, "divisor must have degree >= 1");
    const size_t m = cx.tPrecision();

    // Write P = T^d - beta with beta = -(lower part); then q solves the
    // fixed point q = (f + q*beta) div T^d. beta is divisible by p, so the
    // iteration stabilizes p-adically; the cap is M with convergence checked.
    IwasawaElement beta(f.ctx());
    for (int i = 0; i < d; ++i) beta.setCoeff(size_t(i), cx.neg(p.coeff(size_t(i))));
    beta.markExactUpTo(d - 1);

    auto divT = [&](const IwasawaElement& a) {
        IwasawaElement out(f.ctx());
        for (size_t i = 0; i + size_t(d) < m; ++i) out.setCoeff(i, a.coeff(i + size_t(d)));
        return out;
    };

    IwasawaElement q = divT(f);
    bool converged = false;
    for (size_t iter = 0; iter < m; ++iter) {
        IwasawaElement next = divT(f.add(q.mul(beta)));
        if (next == q) {
            converged = true;
            break;
        }
        q = next;
    }
    if (!converged)
        fail(ErrorCode::InternalError, "Weierstrass division did not converge within M steps");

    IwasawaElement r = f.sub(q.mul(p));
    for (size_t i = size_t(d); i < m; ++i)
        if (r.coeff(i))
            fail(ErrorCode::InternalError, "Weierstrass remainder has degree >= deg P");
    if (f.isExact()) {
        r.markExactUpTo(d - 1);
        q.markExactUpTo(std::max(0, *f.exactDegree() - d));
    }
    return {q, r};
}

IwasawaElement omega(unsigned n, const CtxPtr& ctx) {
    const PrecisionContext& cx = *ctx;
    uint64_t deg = 1;
    for (unsigned i = 0; i < n; ++i) {
        deg *= cx.p();
        if (deg >= cx.tPrecision())
            fail(ErrorCode::TDepthExhausted,
                 "omega_" + std::to_string(n) + " has degree p^n >= M");
    }
    if (deg >= cx.tPrecision())
        fail(ErrorCode::TDepthExhausted, "omega_" + std::to_string(n) + " has degree p^n >= M");

    // (1+T)^{p^n} - 1 via the Pascal recurrence; binomials fit in words since
    // p^n < M <= 63 in practice, and we only need them mod p^N anyway.
    IwasawaElement out(ctx);
    std::vector<uint64_t> row(size_t(deg) + 1, 0);
    row[0] = 1;
    for (uint64_t i = 1; i <= deg; ++i)
        for (uint64_t j = i; j-- > 0;) row[j + 1] = cx.add(row[j + 1], row[j]) % cx.modulus();
    for (uint64_t k = 1; k <= deg; ++k) out.setCoeff(size_t(k), row[k]);
    out.markExactUpTo(int(deg));
    return out;
}

ElementInvariants invariantsOfElement(const IwasawaElement& f) {
    Preparation prep = weierstrassPrepare(f);
    return {prep.lambda, prep.mu};
}

} // namespace iwalab
