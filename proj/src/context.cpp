#include "iwalab/context.hpp"

namespace iwalab {

const char* errorCodeName(ErrorCode code) {
    switch (code) {
    case ErrorCode::NotAUnit: return "NotAUnit";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::TDepthExhausted: return "TDepthExhausted";
    case ErrorCode::NotDistinguished: return "NotDistinguished";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::ZeroDeterminant: return "ZeroDeterminant";
    case ErrorCode::InfiniteQuotient: return "InfiniteQuotient";
    case ErrorCode::Unstable: return "Unstable";
    case ErrorCode::NotAssociative: return "NotAssociative";
    case ErrorCode::NoIdentity: return "NoIdentity";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::NotPPower: return "NotPPower";
    case ErrorCode::BoundaryMismatch: return "BoundaryMismatch";
    case ErrorCode::NotAComplex: return "NotAComplex";
    case ErrorCode::NotChainMap: return "NotChainMap";
    case ErrorCode::NotMuZero: return "NotMuZero";
    case ErrorCode::NotTorsion: return "NotTorsion";
    case ErrorCode::MuNotZeroAtTop: return "MuNotZeroAtTop";
    case ErrorCode::NotAnnihilating: return "NotAnnihilating";
    case ErrorCode::LengthTooShort: return "LengthTooShort";
    case ErrorCode::MissingLocalData: return "MissingLocalData";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::BadContext: return "BadContext";
    case ErrorCode::InternalError: return "InternalError";
    }
    return "UnknownError";
}

static bool isPrime(uint64_t p) {
    if (p < 2) return false;
    for (uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

PrecisionContext::PrecisionContext(uint64_t p, unsigned coeffPrecision, unsigned tPrecision)
    : p_(p), n_(coeffPrecision), m_(tPrecision) {
    if (!isPrime(p)) fail(ErrorCode::BadContext, "p = " + std::to_string(p) + " is not prime");
    if (n_ < 1) fail(ErrorCode::BadContext, "coefficient precision N must be >= 1");
    if (m_ < 1) fail(ErrorCode::BadContext, "T precision M must be >= 1");

    // p^N must stay below 2^63 so word arithmetic never overflows.
    ppow_.assign(n_ + 1, 1);
    for (unsigned k = 1; k <= n_; ++k) {
        if (ppow_[k - 1] > (uint64_t(1) << 62) / p_)
            fail(ErrorCode::BadContext, "p^N exceeds the 2^63 word bound");
        ppow_[k] = ppow_[k - 1] * p_;
    }
    q_ = ppow_[n_];
    smallModulus_ = q_ < (uint64_t(1) << 32);
}

uint64_t PrecisionContext::invertUnit(uint64_t value) const {
    value %= q_;
    if (!isUnit(value))
        throw Error(ErrorCode::NotAUnit, "value " + std::to_string(value) + " is divisible by p");
    // Inverse mod p by Fermat, then Newton steps double the precision.
    uint64_t invP = 1;
    {
        uint64_t base = value % p_, e = p_ - 2, acc = 1;
        while (e) {
            if (e & 1) acc = (acc * base) % p_;
            base = (base * base) % p_;
            e >>= 1;
        }
        invP = acc;
    }
    uint64_t x = invP;
    unsigned prec = 1;
    while (prec < n_) {
        // x <- x * (2 - value * x) mod p^min(2*prec, N)
        uint64_t two = add(2 % q_, 0);
        uint64_t t = sub(two, mul(value, x));
        x = mul(x, t);
        prec *= 2;
    }
    return x;
}

uint64_t PrecisionContext::powMod(uint64_t base, uint64_t exp) const {
    uint64_t acc = 1 % q_;
    base %= q_;
    while (exp) {
        if (exp & 1) acc = mul(acc, base);
        base = mul(base, base);
        exp >>= 1;
    }
    return acc;
}

std::optional<unsigned> valuation(const Residue& x) { return x.ctx->valuation(x.value); }

Residue invertUnit(const Residue& x) {
    Residue r;
    r.ctx = x.ctx;
    r.value = x.ctx->invertUnit(x.value);
    return r;
}

} // namespace iwalab
