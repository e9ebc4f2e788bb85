#include "iwalab/poly_matrix.hpp"

#include <algorithm>

namespace iwalab {

bool PolyMatrix::operator==(const PolyMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) return false;
    for (size_t i = 0; i < data_.size(); ++i)
        if (!(data_[i] == other.data_[i])) return false;
    return true;
}

PolyMatrix PolyMatrix::mul(const PolyMatrix& other) const {
    if (cols_ != other.rows_) fail(ErrorCode::InternalError, "poly matrix product shape mismatch");
    PolyMatrix out(rows_, other.cols_, ctx_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t k = 0; k < cols_; ++k) {
            const IwasawaElement& a = at(i, k);
            if (a.isZero()) continue;
            for (size_t j = 0; j < other.cols_; ++j) {
                if (other.at(k, j).isZero()) continue;
                out.at(i, j) = out.at(i, j).add(a.mul(other.at(k, j)));
            }
        }
    return out;
}

PolyMatrix PolyMatrix::sub(const PolyMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        fail(ErrorCode::InternalError, "poly matrix difference shape mismatch");
    PolyMatrix out(rows_, cols_, ctx_);
    for (size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i].sub(other.data_[i]);
    return out;
}

bool PolyMatrix::allZero() const {
    for (const auto& e : data_)
        if (!e.isZero()) return false;
    return true;
}

bool PolyMatrix::allEntriesExact() const {
    for (const auto& e : data_)
        if (!e.isExact()) return false;
    return true;
}

int PolyMatrix::maxExactDegree() const {
    int d = -1;
    for (const auto& e : data_)
        if (e.isExact() && !e.isZero()) d = std::max(d, *e.exactDegree());
    return d;
}

std::vector<std::vector<uint32_t>> PolyMatrix::evalModP(const GaloisField& f,
                                                        uint32_t point) const {
    std::vector<std::vector<uint32_t>> out(rows_, std::vector<uint32_t>(cols_, 0));
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) {
            const IwasawaElement& e = at(i, j);
            int top = e.isExact() ? *e.exactDegree() : int(ctx_->tPrecision()) - 1;
            uint32_t acc = 0;
            for (int d = top; d >= 0; --d)
                acc = f.add(f.mul(acc, point), f.fromResidue(e.coeff(size_t(d))));
            out[i][j] = acc;
        }
    return out;
}

ResidueMatrix PolyMatrix::evalResidue(uint64_t point) const {
    const PrecisionContext& cx = *ctx_;
    ResidueMatrix out(rows_, cols_, ctx_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) {
            const IwasawaElement& e = at(i, j);
            int top = e.isExact() ? *e.exactDegree() : int(cx.tPrecision()) - 1;
            uint64_t acc = 0;
            for (int d = top; d >= 0; --d) acc = cx.add(cx.mul(acc, point), e.coeff(size_t(d)));
            out.at(i, j) = acc;
        }
    return out;
}

ResidueMatrix PolyMatrix::constantTerm() const {
    ResidueMatrix out(rows_, cols_, ctx_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) out.at(i, j) = at(i, j).coeff(0);
    return out;
}

std::optional<IwasawaElement> dividePolySeries(const IwasawaElement& num,
                                               const IwasawaElement& den) {
    const CtxPtr& ctx = num.ctx();
    const size_t m = ctx->tPrecision();
    if (den.isZero()) return std::nullopt;
    // (q * den)_k = sum_i q_i den_{k-i}: multiplication by den is the
    // lower-triangular Toeplitz matrix in the coefficients of q.
    ResidueMatrix toeplitz(m, m, ctx);
    for (size_t k = 0; k < m; ++k)
        for (size_t i = 0; i <= k; ++i) toeplitz.at(k, i) = den.coeff(k - i);
    RowEchelonSolver solver(toeplitz);
    std::vector<uint64_t> rhs(m, 0);
    for (size_t k = 0; k < m; ++k) rhs[k] = num.coeff(k);
    auto sol = solver.solve(rhs);
    if (!sol) return std::nullopt;
    IwasawaElement q(ctx);
    for (size_t k = 0; k < m; ++k) q.setCoeff(k, (*sol)[k]);
    if (!(q.mul(den) == num)) return std::nullopt;
    return q;
}

std::vector<IwasawaElement> berkowitzCharPoly(const PolyMatrix& a) {
    if (a.rows() != a.cols()) fail(ErrorCode::NotSquare, "char poly of a non-square matrix");
    const size_t n = a.rows();
    const CtxPtr& ctx = a.ctx();
    std::vector<IwasawaElement> coeffs{IwasawaElement::constant(ctx, -1)};
    for (size_t k = 0; k < n; ++k) {
        std::vector<IwasawaElement> tvec;
        tvec.push_back(IwasawaElement::constant(ctx, -1));
        tvec.push_back(a.at(k, k));
        if (k > 0) {
            std::vector<IwasawaElement> w(k);
            for (size_t i = 0; i < k; ++i) w[i] = a.at(i, k);
            for (;;) {
                IwasawaElement dot = IwasawaElement::constant(ctx, 0);
                for (size_t i = 0; i < k; ++i)
                    if (!a.at(k, i).isZero() && !w[i].isZero())
                        dot = dot.add(a.at(k, i).mul(w[i]));
                tvec.push_back(dot);
                if (tvec.size() == k + 2) break;
                std::vector<IwasawaElement> nw(k, IwasawaElement::constant(ctx, 0));
                for (size_t i = 0; i < k; ++i)
                    for (size_t j = 0; j < k; ++j)
                        if (!a.at(i, j).isZero() && !w[j].isZero())
                            nw[i] = nw[i].add(a.at(i, j).mul(w[j]));
                w = std::move(nw);
            }
        }
        std::vector<IwasawaElement> next(coeffs.size() + 1, IwasawaElement::constant(ctx, 0));
        for (size_t i = 0; i < next.size(); ++i) {
            IwasawaElement acc = IwasawaElement::constant(ctx, 0);
            for (size_t j = 0; j <= i && j < coeffs.size(); ++j) {
                size_t lag = i - j;
                if (lag < tvec.size() && !tvec[lag].isZero() && !coeffs[j].isZero())
                    acc = acc.add(tvec[lag].mul(coeffs[j]));
            }
            next[i] = acc;
        }
        coeffs = std::move(next);
    }
    return coeffs;
}

IwasawaElement berkowitzDet(const PolyMatrix& a) {
    if (a.rows() == 0) return IwasawaElement::constant(a.ctx(), 1);
    // The Berkowitz vector is (-1)^{n+1} * charpoly(x); its constant term is
    // always -det, independent of parity.
    return berkowitzCharPoly(a).back().negated();
}

PolyMatrix adjugate(const PolyMatrix& a) {
    const size_t n = a.rows();
    const CtxPtr& ctx = a.ctx();
    if (n == 0) return PolyMatrix(0, 0, ctx);
    std::vector<IwasawaElement> raw = berkowitzCharPoly(a);
    // True monic charpoly coefficients: chi_j = (-1)^{n+1} * raw[j].
    bool flip = (n % 2 == 0);
    // M = sum_{j=0}^{n-1} chi_j A^{n-1-j}; adj = (-1)^{n+1} M.
    PolyMatrix acc(n, n, ctx); // running Horner: acc = acc*A + chi_j I
    for (size_t j = 0; j < n; ++j) {
        if (j > 0) acc = acc.mul(a);
        IwasawaElement chi = flip ? raw[j].negated() : raw[j];
        for (size_t i = 0; i < n; ++i) acc.at(i, i) = acc.at(i, i).add(chi);
    }
    if (flip)
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) acc.at(i, j) = acc.at(i, j).negated();
    return acc;
}

IwasawaElement detPoly(const PolyMatrix& a) {
    if (a.rows() != a.cols()) fail(ErrorCode::NotSquare, "determinant of a non-square matrix");
    const size_t n = a.rows();
    const CtxPtr& ctx = a.ctx();
    if (n == 0) return IwasawaElement::constant(ctx, 1);

    PolyMatrix m = a;
    IwasawaElement acc = IwasawaElement::constant(ctx, 1);
    bool negate = false;

    std::vector<bool> usedRow(n, false), usedCol(n, false);
    std::vector<std::pair<size_t, size_t>> pivots;
    for (;;) {
        size_t pr = n, pc = n;
        for (size_t i = 0; i < n && pr == n; ++i) {
            if (usedRow[i]) continue;
            for (size_t j = 0; j < n; ++j) {
                if (usedCol[j]) continue;
                if (ctx->isUnit(m.at(i, j).coeff(0))) {
                    pr = i;
                    pc = j;
                    break;
                }
            }
        }
        if (pr == n) break;
        usedRow[pr] = true;
        usedCol[pc] = true;
        pivots.emplace_back(pr, pc);
        IwasawaElement inv = m.at(pr, pc).inverted();
        for (size_t i = 0; i < n; ++i) {
            if (usedRow[i] || m.at(i, pc).isZero()) continue;
            IwasawaElement factor = m.at(i, pc).mul(inv);
            for (size_t j = 0; j < n; ++j) {
                if (usedCol[j]) continue;
                if (!m.at(pr, j).isZero()) m.at(i, j) = m.at(i, j).sub(factor.mul(m.at(pr, j)));
            }
            m.at(i, pc) = IwasawaElement::constant(ctx, 0);
        }
        acc = acc.mul(m.at(pr, pc));
    }

    std::vector<size_t> freeRows, freeCols;
    for (size_t i = 0; i < n; ++i) {
        if (!usedRow[i]) freeRows.push_back(i);
        if (!usedCol[i]) freeCols.push_back(i);
    }
    if (!freeRows.empty()) {
        PolyMatrix block(freeRows.size(), freeCols.size(), ctx);
        for (size_t i = 0; i < freeRows.size(); ++i)
            for (size_t j = 0; j < freeCols.size(); ++j)
                block.at(i, j) = m.at(freeRows[i], freeCols[j]);
        acc = acc.mul(berkowitzDet(block));
    }

    // Sign of the permutation sending pivot rows to pivot columns.
    std::vector<size_t> perm(n);
    for (auto [r, c] : pivots) perm[r] = c;
    for (size_t i = 0; i < freeRows.size(); ++i) perm[freeRows[i]] = freeCols[i];
    std::vector<bool> seen(n, false);
    for (size_t i = 0; i < n; ++i) {
        if (seen[i]) continue;
        size_t len = 0, j = i;
        while (!seen[j]) {
            seen[j] = true;
            j = perm[j];
            ++len;
        }
        if (len % 2 == 0) negate = !negate;
    }
    return negate ? acc.negated() : acc;
}

size_t rankModP(const PolyMatrix& a) {
    if (a.rows() == 0 || a.cols() == 0) return 0;
    if (!a.allEntriesExact())
        fail(ErrorCode::PrecisionExhausted, "mod-p rank needs exact polynomial entries");
    int maxDeg = a.maxExactDegree();
    if (maxDeg < 0) return 0;
    uint64_t bound = uint64_t(std::min(a.rows(), a.cols())) * uint64_t(maxDeg) + 1;
    GaloisField f = fieldWithAtLeast(a.ctx()->p(), bound);
    size_t best = 0;
    const size_t full = std::min(a.rows(), a.cols());
    for (uint64_t i = 0; i < bound && best < full; ++i) {
        size_t r = gfRank(f, a.evalModP(f, f.element(i)));
        best = std::max(best, r);
    }
    return best;
}

size_t rankLowerBound(const PolyMatrix& a, bool* nearPrecision) {
    if (nearPrecision) *nearPrecision = false;
    if (a.rows() == 0 || a.cols() == 0) return 0;
    const PrecisionContext& cx = *a.ctx();
    size_t best = rankModP(a);
    const size_t full = std::min(a.rows(), a.cols());
    // A few integer specializations catch rank that only shows after
    // inverting p. Lower bounds only; no exactness is claimed here.
    const uint64_t points[] = {cx.p() % cx.modulus(), 2 % cx.modulus(), 1,
                               (1 + cx.p()) % cx.modulus()};
    for (uint64_t t : points) {
        if (best == full && !nearPrecision) break;
        std::vector<unsigned> divs = smithValuations(a.evalResidue(t));
        size_t r = 0;
        for (unsigned v : divs) {
            if (v < cx.coeffPrecision()) ++r;
            if (nearPrecision && v + 1 >= cx.coeffPrecision() && v < cx.coeffPrecision())
                *nearPrecision = true;
        }
        best = std::max(best, r);
    }
    return best;
}

std::vector<size_t> selectIndependentColumns(const PolyMatrix& a, bool modP) {
    const size_t rows = a.rows();
    const PrecisionContext& cx = *a.ctx();
    if (rows == 0) return {};

    if (modP) {
        // Find a specialization point of full row rank, then re-run the
        // elimination there with column tracking. For entries only known on
        // the window the point count is heuristic; every consumer verifies
        // the selection downstream.
        int maxDeg = a.allEntriesExact() ? std::max(a.maxExactDegree(), 0)
                                         : int(a.ctx()->tPrecision()) - 1;
        uint64_t bound = uint64_t(std::min(a.rows(), a.cols())) * uint64_t(maxDeg) + 1;
        GaloisField f = fieldWithAtLeast(cx.p(), bound);
        for (uint64_t i = 0; i < bound; ++i) {
            auto m = a.evalModP(f, f.element(i));
            // Gaussian elimination with column selection.
            std::vector<size_t> picked;
            size_t rank = 0;
            for (size_t c = 0; c < a.cols() && rank < rows; ++c) {
                size_t piv = rank;
                while (piv < rows && m[piv][c] == 0) ++piv;
                if (piv == rows) continue;
                std::swap(m[piv], m[rank]);
                uint32_t inv = f.inv(m[rank][c]);
                for (size_t j = c; j < a.cols(); ++j) m[rank][j] = f.mul(m[rank][j], inv);
                for (size_t r2 = rank + 1; r2 < rows; ++r2)
                    if (m[r2][c]) {
                        uint32_t factor = m[r2][c];
                        for (size_t j = c; j < a.cols(); ++j)
                            m[r2][j] = f.sub(m[r2][j], f.mul(factor, m[rank][j]));
                    }
                picked.push_back(c);
                ++rank;
            }
            if (rank == rows) return picked;
        }
        fail(ErrorCode::MuNotZeroAtTop, "boundary drops row rank modulo p");
    }

    // p-inverted certification: column selection at an integer specialization
    // with valuation-aware pivoting.
    const uint64_t points[] = {1, (1 + cx.p()) % cx.modulus(), 2 % cx.modulus(),
                               cx.p() % cx.modulus(), (2 * cx.p()) % cx.modulus()};
    for (uint64_t t : points) {
        ResidueMatrix m = a.evalResidue(t);
        std::vector<size_t> picked;
        size_t rank = 0;
        for (size_t c = 0; c < a.cols() && rank < rows; ++c) {
            size_t best = rows;
            unsigned bestVal = cx.coeffPrecision();
            for (size_t i = rank; i < rows; ++i) {
                auto v = cx.valuation(m.at(i, c));
                if (v && *v < bestVal) {
                    bestVal = *v;
                    best = i;
                }
            }
            if (best == rows) continue;
            for (size_t j = 0; j < a.cols(); ++j) std::swap(m.at(rank, j), m.at(best, j));
            uint64_t inv = cx.invertUnit(m.at(rank, c) / cx.pPow(bestVal));
            for (size_t i = rank + 1; i < rows; ++i) {
                auto v = cx.valuation(m.at(i, c));
                if (!v) continue;
                if (*v < bestVal) fail(ErrorCode::InternalError, "pivot ordering broken");
                uint64_t factor = cx.mul(cx.neg(m.at(i, c) / cx.pPow(bestVal)), inv);
                for (size_t j = c; j < a.cols(); ++j)
                    m.at(i, j) = cx.add(m.at(i, j), cx.mul(factor, m.at(rank, j)));
            }
            picked.push_back(c);
            ++rank;
        }
        if (rank == rows) return picked;
    }
    fail(ErrorCode::NotTorsion, "no specialization reaches full row rank; top cohomology "
                                "does not look torsion at this precision");
}

std::optional<PolyMatrix> solveScaledUnits(const PolyMatrix& a, const IwasawaElement& f,
                                           const std::vector<size_t>& unitCols) {
    if (a.rows() != a.cols()) fail(ErrorCode::NotSquare, "solveScaledUnits needs a square matrix");
    const size_t n = a.rows();
    const CtxPtr& ctx = a.ctx();
    const size_t nb = unitCols.size();

    // Augmented Gauss-Jordan on unit pivots; the augmented block tracks the
    // transformed plain unit vectors w, so the f factor stays symbolic.
    PolyMatrix m = a;
    PolyMatrix w(n, nb, ctx);
    for (size_t j = 0; j < nb; ++j) w.at(unitCols[j], j) = IwasawaElement::constant(ctx, 1);

    std::vector<bool> usedRow(n, false), usedCol(n, false);
    std::vector<std::pair<size_t, size_t>> pivots;
    for (;;) {
        size_t pr = n, pc = n;
        for (size_t i = 0; i < n && pr == n; ++i) {
            if (usedRow[i]) continue;
            for (size_t j = 0; j < n; ++j) {
                if (usedCol[j]) continue;
                if (ctx->isUnit(m.at(i, j).coeff(0))) {
                    pr = i;
                    pc = j;
                    break;
                }
            }
        }
        if (pr == n) break;
        usedRow[pr] = true;
        usedCol[pc] = true;
        pivots.emplace_back(pr, pc);
        IwasawaElement inv = m.at(pr, pc).inverted();
        for (size_t i = 0; i < n; ++i) {
            if (i == pr || m.at(i, pc).isZero()) continue;
            IwasawaElement factor = m.at(i, pc).mul(inv);
            for (size_t j = 0; j < n; ++j)
                if (!usedCol[j] && !m.at(pr, j).isZero())
                    m.at(i, j) = m.at(i, j).sub(factor.mul(m.at(pr, j)));
            for (size_t j = 0; j < nb; ++j)
                if (!w.at(pr, j).isZero()) w.at(i, j) = w.at(i, j).sub(factor.mul(w.at(pr, j)));
            m.at(i, pc) = IwasawaElement::constant(ctx, 0);
        }
    }

    std::vector<size_t> freeRows, freeCols;
    for (size_t i = 0; i < n; ++i) {
        if (!usedRow[i]) freeRows.push_back(i);
        if (!usedCol[i]) freeCols.push_back(i);
    }
    const size_t k = freeRows.size();

    // After Gauss-Jordan the bottom equations read B x_B = f w_B, solved by
    // x_B = adj(B) w_B q with q = f / det(B). Divisibility is decided by the
    // lower-triangular Toeplitz system q * det(B) = f over Z/p^N; remainder
    // tests are not sound at the window edge, a linear solve is.
    PolyMatrix x(n, nb, ctx);
    if (k > 0) {
        PolyMatrix block(k, k, ctx);
        for (size_t i = 0; i < k; ++i)
            for (size_t j = 0; j < k; ++j) block.at(i, j) = m.at(freeRows[i], freeCols[j]);
        IwasawaElement detB = berkowitzDet(block);
        auto q = dividePolySeries(f, detB);
        if (!q) return std::nullopt;
        PolyMatrix adjB = adjugate(block);
        PolyMatrix wB(k, nb, ctx);
        for (size_t i = 0; i < k; ++i)
            for (size_t j = 0; j < nb; ++j) wB.at(i, j) = w.at(freeRows[i], j);
        PolyMatrix xB = adjB.mul(wB);
        for (size_t i = 0; i < k; ++i)
            for (size_t j = 0; j < nb; ++j) x.at(freeCols[i], j) = xB.at(i, j).mul(*q);
    }

    // Back-substitute the pivot rows: pivot * x_pc = f*w_pr - (row|B-cols)*x_B.
    for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
        auto [pr, pc] = *it;
        IwasawaElement inv = m.at(pr, pc).inverted();
        for (size_t j = 0; j < nb; ++j) {
            IwasawaElement rhs = w.at(pr, j).mul(f);
            for (size_t c : freeCols)
                if (!m.at(pr, c).isZero() && !x.at(c, j).isZero())
                    rhs = rhs.sub(m.at(pr, c).mul(x.at(c, j)));
            x.at(pc, j) = rhs.mul(inv);
        }
    }

    // Full verification keeps this path honest.
    PolyMatrix rhs(n, nb, ctx);
    for (size_t j = 0; j < nb; ++j) rhs.at(unitCols[j], j) = f;
    if (!a.mul(x).sub(rhs).allZero()) return std::nullopt;
    return x;
}

} // namespace iwalab
