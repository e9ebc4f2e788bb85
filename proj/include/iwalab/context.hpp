#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "iwalab/errors.hpp"

namespace iwalab {

/// Working precision for all exact arithmetic: computations take place in
/// Z/p^N for coefficients and modulo T^M in the series direction.
/// Word-sized residues are enough because we require p^N < 2^63.
class PrecisionContext {
  public:
    PrecisionContext(uint64_t p, unsigned coeffPrecision, unsigned tPrecision);

    uint64_t p() const { return p_; }
    unsigned coeffPrecision() const { return n_; }
    unsigned tPrecision() const { return m_; }
    uint64_t modulus() const { return q_; }
    uint64_t pPow(unsigned k) const { return ppow_.at(k); }

    bool sameAs(const PrecisionContext& other) const {
        return p_ == other.p_ && n_ == other.n_ && m_ == other.m_;
    }

    uint64_t reduce(int64_t v) const {
        int64_t r = v % static_cast<int64_t>(q_);
        if (r < 0) r += static_cast<int64_t>(q_);
        return static_cast<uint64_t>(r);
    }
    uint64_t add(uint64_t a, uint64_t b) const {
        uint64_t s = a + b;
        return s >= q_ ? s - q_ : s;
    }
    uint64_t sub(uint64_t a, uint64_t b) const { return a >= b ? a - b : a + q_ - b; }
    uint64_t neg(uint64_t a) const { return a == 0 ? 0 : q_ - a; }
    uint64_t mul(uint64_t a, uint64_t b) const {
        if (smallModulus_) return (a * b) % q_;
        return static_cast<uint64_t>((static_cast<__uint128_t>(a) * b) % q_);
    }

    /// Largest v < N with p^v | value; nullopt is the infinity marker for
    /// value = 0, i.e. "valuation >= N, indistinguishable from 0 here".
    std::optional<unsigned> valuation(uint64_t value) const {
        if (value == 0) return std::nullopt;
        unsigned v = 0;
        while (value % p_ == 0) {
            value /= p_;
            ++v;
        }
        return v;
    }

    bool isUnit(uint64_t value) const { return value % p_ != 0; }

    /// Inverse of a unit modulo p^N, by inverting mod p and Hensel lifting.
    uint64_t invertUnit(uint64_t value) const;

    uint64_t powMod(uint64_t base, uint64_t exp) const;

  private:
    uint64_t p_;
    unsigned n_;
    unsigned m_;
    uint64_t q_;
    bool smallModulus_;
    std::vector<uint64_t> ppow_;
};

using CtxPtr = std::shared_ptr<const PrecisionContext>;

inline CtxPtr makeContext(uint64_t p, unsigned n, unsigned m) {
    return std::make_shared<const PrecisionContext>(p, n, m);
}

/// A residue in [0, p^N) tied to its context.
struct Residue {
    uint64_t value = 0;
    CtxPtr ctx;

    Residue() = default;
    Residue(int64_t v, CtxPtr c) : ctx(std::move(c)) { value = ctx->reduce(v); }
};

std::optional<unsigned> valuation(const Residue& x);
Residue invertUnit(const Residue& x);

} // namespace iwalab
