#pragma once

#include <cstdint>
#include <vector>

#include "iwalab/errors.hpp"

namespace iwalab {

/// GF(p^k) with log/exp tables. Elements are encoded as base-p packed
/// polynomial coefficient vectors in [0, p^k). Sized for the evaluation-point
/// counts rank computations need (a few thousand elements at most).
class GaloisField {
  public:
    GaloisField(uint64_t p, unsigned k);

    uint64_t p() const { return p_; }
    unsigned k() const { return k_; }
    uint64_t size() const { return q_; }

    uint32_t add(uint32_t a, uint32_t b) const;
    uint32_t sub(uint32_t a, uint32_t b) const;
    uint32_t neg(uint32_t a) const { return sub(0, a); }
    uint32_t mul(uint32_t a, uint32_t b) const {
        if (!a || !b) return 0;
        uint32_t s = log_[a] + log_[b];
        if (s >= q_ - 1) s -= uint32_t(q_ - 1);
        return exp_[s];
    }
    uint32_t inv(uint32_t a) const {
        if (!a) fail(ErrorCode::InternalError, "GF inverse of zero");
        uint32_t e = uint32_t(q_ - 1) - log_[a];
        if (e == q_ - 1) e = 0;
        return exp_[e];
    }

    /// Embedding of a residue mod p as a constant field element.
    uint32_t fromResidue(uint64_t r) const { return uint32_t(r % p_); }

    /// The i-th field element in a fixed enumeration (i < p^k).
    uint32_t element(uint64_t i) const { return uint32_t(i); }

  private:
    uint64_t p_;
    unsigned k_;
    uint64_t q_;
    std::vector<uint32_t> modPoly_;        // monic irreducible, coeffs of 1..T^{k-1}
    std::vector<uint32_t> exp_;            // exp_[i] = g^i
    std::vector<uint32_t> log_;            // log of nonzero elements
};

/// Smallest field GF(p^k) with at least `points` elements. k is capped so the
/// tables stay tiny; desk-scale rank computations never exceed the cap.
GaloisField fieldWithAtLeast(uint64_t p, uint64_t points);

/// Rank of a matrix over GF, destroying its argument. Entries are field codes.
size_t gfRank(const GaloisField& f, std::vector<std::vector<uint32_t>> m);

} // namespace iwalab
