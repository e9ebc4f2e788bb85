#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "iwalab/context.hpp"

namespace iwalab {

/// An element of Lambda = Z_p[[T]] truncated to (p^N, T^M): a dense window of
/// M coefficients, lowest degree first. exactDegree = d marks that the element
/// is a genuine polynomial of degree <= d (the truncated tail is truly zero,
/// not merely unknown); operations that need exactness beyond the window
/// demand it.
class IwasawaElement {
  public:
    IwasawaElement() = default;
    explicit IwasawaElement(CtxPtr ctx)
        : ctx_(std::move(ctx)), coeffs_(ctx_->tPrecision(), 0) {}
    IwasawaElement(CtxPtr ctx, std::vector<int64_t> values, bool exact = true);

    const CtxPtr& ctx() const { return ctx_; }
    const std::vector<uint64_t>& coeffs() const { return coeffs_; }
    uint64_t coeff(size_t i) const { return i < coeffs_.size() ? coeffs_[i] : 0; }
    void setCoeff(size_t i, uint64_t v) {
        coeffs_[i] = v % ctx_->modulus();
        if (exactDegree_ && coeffs_[i] && int(i) > *exactDegree_) exactDegree_ = int(i);
    }

    std::optional<int> exactDegree() const { return exactDegree_; }
    bool isExact() const { return exactDegree_.has_value(); }
    void markExactUpTo(int d);
    void clearExact() { exactDegree_ = std::nullopt; }

    bool isZero() const;
    bool operator==(const IwasawaElement& other) const { return coeffs_ == other.coeffs_; }

    IwasawaElement add(const IwasawaElement& other) const;
    IwasawaElement sub(const IwasawaElement& other) const;
    IwasawaElement negated() const;
    IwasawaElement mul(const IwasawaElement& other) const;
    IwasawaElement scaled(uint64_t c) const;

    /// Multiplicative inverse; requires the constant coefficient to be a unit.
    IwasawaElement inverted() const;

    /// Min coefficient valuation within the window; nullopt when zero here.
    std::optional<unsigned> contentValuation() const;

    /// Least index with a unit coefficient; nullopt when none in the window.
    std::optional<unsigned> firstUnitIndex() const;

    bool isDistinguished() const; // monic of some degree d, lower coeffs in (p)

    /// Substitute T -> a + (1+a)T (the automorphism 1+T -> (1+a)(1+T)); needs
    /// an exact polynomial and preserves degree, lambda and mu.
    IwasawaElement shiftVariable(uint64_t a) const;

    std::string toString() const;

    static IwasawaElement constant(CtxPtr ctx, int64_t c);
    static IwasawaElement monomial(CtxPtr ctx, unsigned degree, int64_t c = 1);

  private:
    CtxPtr ctx_;
    std::vector<uint64_t> coeffs_;
    std::optional<int> exactDegree_;
};

struct Preparation {
    unsigned mu = 0;
    IwasawaElement distinguished; // monic of degree lambda, lower coeffs in (p)
    IwasawaElement unit;          // constant coefficient a unit
    unsigned lambda = 0;
};

/// Weierstrass preparation: f = p^mu * distinguished * unit modulo
/// (p^N, T^M). Errors: PrecisionExhausted (f = 0 here), TDepthExhausted
/// (no unit coefficient below M after removing content).
Preparation weierstrassPrepare(const IwasawaElement& f);

/// Division by a distinguished polynomial of degree >= 1: f = q*P + r with
/// deg r < deg P, exact at the window. Fixed-point iteration capped at M
/// steps; convergence is asserted.
std::pair<IwasawaElement, IwasawaElement> weierstrassDivide(const IwasawaElement& f,
                                                            const IwasawaElement& p);

/// The layer polynomial (1+T)^{p^n} - 1, an exact distinguished polynomial of
/// degree p^n. Errors TDepthExhausted when p^n >= M.
IwasawaElement omega(unsigned n, const CtxPtr& ctx);

struct ElementInvariants {
    unsigned lambda = 0;
    unsigned mu = 0;
};

/// (lambda, mu) of the quotient module Lambda/(f), read from the preparation.
ElementInvariants invariantsOfElement(const IwasawaElement& f);

} // namespace iwalab
