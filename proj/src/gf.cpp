#include "iwalab/gf.hpp"

#include <algorithm>

namespace iwalab {

namespace {

// Dense polynomial arithmetic over F_p on small coefficient vectors,
// used only while constructing the field tables.
using Poly = std::vector<uint32_t>;

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly polyMulMod(const Poly& a, const Poly& b, const Poly& mod, uint64_t p) {
    Poly prod(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i])
            for (size_t j = 0; j < b.size(); ++j)
                prod[i + j] = uint32_t((prod[i + j] + uint64_t(a[i]) * b[j]) % p);
    size_t k = mod.size() - 1;
    for (size_t d = prod.size(); d-- > k;) {
        uint32_t c = prod[d];
        if (!c) continue;
        prod[d] = 0;
        for (size_t j = 0; j < k; ++j) {
            uint64_t t = prod[d - k + j] + (uint64_t(p - mod[j]) * c) % p;
            prod[d - k + j] = uint32_t(t % p);
        }
    }
    prod.resize(k);
    return prod;
}

Poly polyRem(Poly r, const Poly& g, uint64_t p) {
    size_t d = g.size() - 1; // g monic of degree d
    trim(r);
    while (r.size() > d) {
        uint32_t lead = r.back();
        size_t shift = r.size() - 1 - d;
        for (size_t i = 0; i <= d; ++i) {
            uint64_t t = r[shift + i] + (uint64_t(p - g[i]) * lead) % p;
            r[shift + i] = uint32_t(t % p);
        }
        trim(r);
    }
    return r;
}

bool isIrreducible(const Poly& f, uint64_t p) {
    size_t deg = f.size() - 1;
    for (size_t d = 1; 2 * d <= deg; ++d) {
        uint64_t count = 1;
        for (size_t i = 0; i < d; ++i) count *= p;
        for (uint64_t code = 0; code < count; ++code) {
            Poly g(d + 1, 0);
            uint64_t c = code;
            for (size_t i = 0; i < d; ++i) {
                g[i] = uint32_t(c % p);
                c /= p;
            }
            g[d] = 1;
            if (polyRem(f, g, p).empty()) return false;
        }
    }
    return true;
}

} // namespace

GaloisField::GaloisField(uint64_t p, unsigned k) : p_(p), k_(k) {
    if (k == 0) fail(ErrorCode::InternalError, "GF degree must be positive");
    q_ = 1;
    for (unsigned i = 0; i < k; ++i) {
        q_ *= p;
        if (q_ > (1u << 20)) fail(ErrorCode::BudgetExceeded, "GF table size over cap");
    }

    if (q_ == 2) {
        modPoly_ = {0, 1};
        exp_ = {1};
        log_.assign(2, 0);
        return;
    }

    // Deterministic search for a monic irreducible of degree k.
    Poly f;
    if (k == 1) {
        f = {0, 1};
    } else {
        uint64_t count = 1;
        for (unsigned i = 0; i < k; ++i) count *= p;
        bool found = false;
        for (uint64_t code = 1; code < count && !found; ++code) {
            Poly cand(k + 1, 0);
            uint64_t c = code;
            for (unsigned i = 0; i < k; ++i) {
                cand[i] = uint32_t(c % p);
                c /= p;
            }
            cand[k] = 1;
            if (cand[0] == 0) continue;
            if (isIrreducible(cand, p)) {
                f = cand;
                found = true;
            }
        }
        if (!found) fail(ErrorCode::InternalError, "no irreducible polynomial found");
    }
    modPoly_.assign(f.begin(), f.end());

    auto encode = [&](const Poly& a) {
        uint64_t code = 0;
        for (size_t i = a.size(); i-- > 0;) code = code * p_ + a[i];
        return uint32_t(code);
    };

    exp_.assign(q_ - 1, 0);
    log_.assign(q_, 0);
    for (uint64_t gCode = 2;; ++gCode) {
        if (gCode >= q_) fail(ErrorCode::InternalError, "no multiplicative generator found");
        Poly g(k_, 0);
        uint64_t c = gCode;
        for (unsigned i = 0; i < k_; ++i) {
            g[i] = uint32_t(c % p_);
            c /= p_;
        }
        Poly acc(k_, 0);
        acc[0] = 1;
        bool ok = true;
        for (uint64_t i = 0; i + 1 < q_; ++i) {
            uint32_t code = encode(acc);
            if (i > 0 && code == 1) { // order divides i, not a generator
                ok = false;
                break;
            }
            exp_[i] = code;
            acc = polyMulMod(acc, g, f, p_);
        }
        if (ok && encode(acc) == 1) {
            for (uint64_t i = 0; i + 1 < q_; ++i) log_[exp_[i]] = uint32_t(i);
            return;
        }
    }
}

uint32_t GaloisField::add(uint32_t a, uint32_t b) const {
    if (p_ == 2) return a ^ b;
    uint32_t out = 0, mul = 1;
    for (unsigned i = 0; i < k_; ++i) {
        uint32_t da = a % uint32_t(p_), db = b % uint32_t(p_);
        a /= uint32_t(p_);
        b /= uint32_t(p_);
        out += ((da + db) % uint32_t(p_)) * mul;
        mul *= uint32_t(p_);
    }
    return out;
}

uint32_t GaloisField::sub(uint32_t a, uint32_t b) const {
    if (p_ == 2) return a ^ b;
    uint32_t out = 0, mul = 1;
    for (unsigned i = 0; i < k_; ++i) {
        uint32_t da = a % uint32_t(p_), db = b % uint32_t(p_);
        a /= uint32_t(p_);
        b /= uint32_t(p_);
        out += ((da + uint32_t(p_) - db) % uint32_t(p_)) * mul;
        mul *= uint32_t(p_);
    }
    return out;
}

GaloisField fieldWithAtLeast(uint64_t p, uint64_t points) {
    unsigned k = 1;
    uint64_t q = p;
    while (q < points) {
        q *= p;
        ++k;
        if (q > (1u << 20))
            fail(ErrorCode::BudgetExceeded, "rank evaluation needs too many points");
    }
    return GaloisField(p, k);
}

size_t gfRank(const GaloisField& f, std::vector<std::vector<uint32_t>> m) {
    if (m.empty()) return 0;
    size_t rows = m.size(), cols = m[0].size();
    size_t rank = 0;
    for (size_t c = 0; c < cols && rank < rows; ++c) {
        size_t piv = rank;
        while (piv < rows && m[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[rank]);
        uint32_t inv = f.inv(m[rank][c]);
        for (size_t j = c; j < cols; ++j) m[rank][j] = f.mul(m[rank][j], inv);
        for (size_t i = rank + 1; i < rows; ++i) {
            if (m[i][c] == 0) continue;
            uint32_t factor = m[i][c];
            for (size_t j = c; j < cols; ++j)
                m[i][j] = f.sub(m[i][j], f.mul(factor, m[rank][j]));
        }
        ++rank;
    }
    return rank;
}

} // namespace iwalab
