#pragma once

#include <vector>

#include "iwalab/gf.hpp"
#include "iwalab/iwasawa_ring.hpp"
#include "iwalab/residue_matrix.hpp"

namespace iwalab {

/// Dense matrix over the truncated series ring, row-major.
class PolyMatrix {
  public:
    PolyMatrix() = default;
    PolyMatrix(size_t rows, size_t cols, CtxPtr ctx)
        : rows_(rows), cols_(cols), ctx_(ctx),
          data_(rows * cols, IwasawaElement::constant(ctx, 0)) {}

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    const CtxPtr& ctx() const { return ctx_; }

    IwasawaElement& at(size_t r, size_t c) { return data_[r * cols_ + c]; }
    const IwasawaElement& at(size_t r, size_t c) const { return data_[r * cols_ + c]; }

    bool operator==(const PolyMatrix& other) const;

    PolyMatrix mul(const PolyMatrix& other) const;
    PolyMatrix sub(const PolyMatrix& other) const;
    bool allZero() const;
    bool allEntriesExact() const;
    int maxExactDegree() const; // -1 for an all-zero matrix

    /// Entrywise evaluation mod p at a field point; entries must be exact.
    std::vector<std::vector<uint32_t>> evalModP(const GaloisField& f, uint32_t point) const;

    /// Entrywise evaluation at an integer point over Z/p^N.
    ResidueMatrix evalResidue(uint64_t point) const;

    /// The matrix of constant terms, over Z/p^N.
    ResidueMatrix constantTerm() const;

  private:
    size_t rows_ = 0, cols_ = 0;
    CtxPtr ctx_;
    std::vector<IwasawaElement> data_;
};

/// Determinant over the truncated ring: elimination on unit pivots with a
/// division-free fallback on the residual block, so no precision is lost.
IwasawaElement detPoly(const PolyMatrix& a);

/// Exact rank over F_p(T) of the mod-p reduction. Entries must be exact
/// polynomials; decided deterministically by evaluating at deg-bound + 1
/// points of a large enough extension field.
size_t rankModP(const PolyMatrix& a);

/// Certified lower bound for the rank over Frac(Lambda): the max over the
/// mod-p rank and divisor-certified ranks of a few integer specializations.
/// Sets *nearPrecision when a specialization saw divisors at valuation >= N-1
/// (a deficit verdict would then be untrustworthy).
size_t rankLowerBound(const PolyMatrix& a, bool* nearPrecision = nullptr);

/// q with q * den = num in the truncated ring, or nullopt when num is not a
/// multiple of den there. Decided exactly by solving the lower-triangular
/// Toeplitz system over Z/p^N (remainder tests would miss window-edge
/// multiples).
std::optional<IwasawaElement> dividePolySeries(const IwasawaElement& num,
                                               const IwasawaElement& den);

/// Characteristic-polynomial coefficient vector of a square matrix by the
/// division-free Berkowitz recurrence; berkowitzDet / adjugate read off it.
std::vector<IwasawaElement> berkowitzCharPoly(const PolyMatrix& a);
IwasawaElement berkowitzDet(const PolyMatrix& a);
PolyMatrix adjugate(const PolyMatrix& a);

/// Pick rows().size() many columns of A whose square submatrix has nonzero
/// determinant, guided by one full-rank specialization. modP restricts the
/// certificate to the mod-p reduction (det will then have unit content).
/// Fails when no specialization reaches full row rank.
std::vector<size_t> selectIndependentColumns(const PolyMatrix& a, bool modP);

/// Exact solve of A * X = f * [e_c : c in unitCols] for square A.
/// Unit-pivot Gauss-Jordan plus an adjugate step on the non-unit core; the
/// core determinant must divide f (true for any annihilator produced from a
/// full-rank column selection), so nothing is divided by a non-unit. The
/// result is verified; nullopt when the divisibility or verification fails.
std::optional<PolyMatrix> solveScaledUnits(const PolyMatrix& a, const IwasawaElement& f,
                                           const std::vector<size_t>& unitCols);

} // namespace iwalab
