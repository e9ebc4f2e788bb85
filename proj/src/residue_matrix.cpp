#include "iwalab/residue_matrix.hpp"

#include <algorithm>

namespace iwalab {

ResidueMatrix ResidueMatrix::transposed() const {
    ResidueMatrix t(cols_, rows_, ctx_);
    for (size_t r = 0; r < rows_; ++r)
        for (size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
    return t;
}

ResidueMatrix ResidueMatrix::mul(const ResidueMatrix& other) const {
    if (cols_ != other.rows_) fail(ErrorCode::InternalError, "matrix product shape mismatch");
    const PrecisionContext& cx = *ctx_;
    ResidueMatrix out(rows_, other.cols_, ctx_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t k = 0; k < cols_; ++k) {
            uint64_t a = at(i, k);
            if (!a) continue;
            const uint64_t* src = other.rowPtr(k);
            uint64_t* dst = out.rowPtr(i);
            for (size_t j = 0; j < other.cols(); ++j)
                if (src[j]) dst[j] = cx.add(dst[j], cx.mul(a, src[j]));
        }
    return out;
}

namespace {

// Row echelon over Z/p^N with minimal-valuation pivoting. Pivots are
// normalized to pure powers of p. Returns pivot (row, col, val) triples.
struct Pivot {
    size_t row, col;
    unsigned val;
};

unsigned valOrN(const PrecisionContext& cx, uint64_t v) {
    auto w = cx.valuation(v);
    return w ? *w : cx.coeffPrecision();
}

void rowAddMul(const PrecisionContext& cx, uint64_t* dst, const uint64_t* src, uint64_t factor,
               size_t n) {
    if (!factor) return;
    for (size_t j = 0; j < n; ++j)
        if (src[j]) dst[j] = cx.add(dst[j], cx.mul(factor, src[j]));
}

std::vector<Pivot> echelonize(ResidueMatrix& m) {
    const PrecisionContext& cx = *m.ctx();
    const unsigned N = cx.coeffPrecision();
    std::vector<Pivot> pivots;
    size_t r = 0;
    for (size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        size_t best = r;
        unsigned bestVal = N;
        for (size_t i = r; i < m.rows(); ++i) {
            unsigned v = valOrN(cx, m.at(i, c));
            if (v < bestVal) {
                bestVal = v;
                best = i;
            }
        }
        if (bestVal >= N) continue;
        if (best != r)
            for (size_t j = 0; j < m.cols(); ++j) std::swap(m.at(r, j), m.at(best, j));
        // Normalize the pivot row so the pivot is exactly p^v.
        uint64_t unitPart = m.at(r, c) / cx.pPow(bestVal);
        uint64_t inv = cx.invertUnit(unitPart);
        for (size_t j = c; j < m.cols(); ++j) m.at(r, j) = cx.mul(m.at(r, j), inv);
        for (size_t i = r + 1; i < m.rows(); ++i) {
            uint64_t e = m.at(i, c);
            if (!e) continue;
            // e has valuation >= bestVal by pivot choice.
            uint64_t mult = cx.neg(e / cx.pPow(bestVal));
            rowAddMul(cx, m.rowPtr(i), m.rowPtr(r), mult, m.cols());
        }
        pivots.push_back({r, c, bestVal});
        ++r;
    }
    return pivots;
}

// Reduce row w against the echelon rows; returns true if w became zero.
// When w cannot be absorbed, it is left partially reduced.
bool reduceRow(const PrecisionContext& cx, std::vector<uint64_t>& w, const ResidueMatrix& m,
               const std::vector<Pivot>& pivots) {
    for (const Pivot& p : pivots) {
        uint64_t e = w[p.col];
        if (!e) continue;
        unsigned v = valOrN(cx, e);
        if (v < p.val) return false; // cannot clear with this pivot
        uint64_t mult = cx.neg(e / cx.pPow(p.val));
        rowAddMul(cx, w.data(), m.rowPtr(p.row), mult, w.size());
    }
    for (uint64_t x : w)
        if (x) return false;
    return true;
}

// Row-span Howell form: echelon + closure under torsion shadows + reduction
// of entries above each pivot. Zero rows are dropped.
ResidueMatrix rowHowell(ResidueMatrix m, std::vector<Pivot>* pivotsOut) {
    const PrecisionContext& cx = *m.ctx();
    const unsigned N = cx.coeffPrecision();
    std::vector<Pivot> pivots = echelonize(m);

    // Closure: for each pivot p^v with v > 0, the shadow p^(N-v) * row has a
    // leading zero; if it is not already in the span, adjoin it and redo.
    bool changed = true;
    while (changed) {
        changed = false;
        for (const Pivot& p : pivots) {
            if (p.val == 0) continue;
            std::vector<uint64_t> w(m.cols(), 0);
            uint64_t f = cx.pPow(N - p.val);
            for (size_t j = 0; j < m.cols(); ++j) w[j] = cx.mul(f, m.at(p.row, j));
            if (!reduceRow(cx, w, m, pivots)) {
                ResidueMatrix grown(m.rows() + 1, m.cols(), m.ctx());
                for (size_t i = 0; i < m.rows(); ++i)
                    for (size_t j = 0; j < m.cols(); ++j) grown.at(i, j) = m.at(i, j);
                for (size_t j = 0; j < m.cols(); ++j) grown.at(m.rows(), j) = w[j];
                m = std::move(grown);
                pivots = echelonize(m);
                changed = true;
                break;
            }
        }
    }

    // Entries above a pivot p^v are reduced modulo p^v.
    for (const Pivot& p : pivots) {
        for (size_t i = 0; i < p.row; ++i) {
            uint64_t e = m.at(i, p.col);
            uint64_t q = e / cx.pPow(p.val);
            if (!q) continue;
            rowAddMul(cx, m.rowPtr(i), m.rowPtr(p.row), cx.neg(q), m.cols());
        }
    }

    ResidueMatrix out(pivots.size(), m.cols(), m.ctx());
    for (size_t i = 0; i < pivots.size(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) out.at(i, j) = m.at(pivots[i].row, j);
    if (pivotsOut) {
        *pivotsOut = pivots;
        for (size_t i = 0; i < pivotsOut->size(); ++i) (*pivotsOut)[i].row = i;
    }
    return out;
}

} // namespace

HowellResult howellForm(const ResidueMatrix& a) {
    const PrecisionContext& cx = *a.ctx();
    const unsigned N = cx.coeffPrecision();
    std::vector<Pivot> pivots;
    ResidueMatrix h = rowHowell(a.transposed(), &pivots);
    HowellResult res;
    res.form = h.transposed();
    long logIm = 0;
    for (const Pivot& p : pivots) logIm += long(N) - long(p.val);
    res.logImageSize = logIm;

    // Kernel size from the elementary divisors: an independent route, so the
    // identity logKer + logIm = cols*N is a genuine cross-check in tests.
    std::vector<unsigned> divs = smithValuations(a);
    long logKer = long(a.cols()) * long(N);
    for (unsigned v : divs) logKer -= long(N) - long(v);
    res.logKernelSize = logKer;
    return res;
}

std::vector<unsigned> smithValuations(const ResidueMatrix& a) {
    ResidueMatrix m = a;
    const PrecisionContext& cx = *m.ctx();
    const unsigned N = cx.coeffPrecision();
    const size_t k = std::min(m.rows(), m.cols());
    std::vector<unsigned> divs;

    for (size_t step = 0; step < k; ++step) {
        size_t br = step, bc = step;
        unsigned bestVal = N;
        for (size_t i = step; i < m.rows() && bestVal > 0; ++i)
            for (size_t j = step; j < m.cols(); ++j) {
                unsigned v = valOrN(cx, m.at(i, j));
                if (v < bestVal) {
                    bestVal = v;
                    br = i;
                    bc = j;
                    if (!bestVal) break;
                }
            }
        if (bestVal >= N) break; // remaining block is zero at this precision
        if (br != step)
            for (size_t j = 0; j < m.cols(); ++j) std::swap(m.at(step, j), m.at(br, j));
        if (bc != step)
            for (size_t i = 0; i < m.rows(); ++i) std::swap(m.at(i, step), m.at(i, bc));
        uint64_t inv = cx.invertUnit(m.at(step, step) / cx.pPow(bestVal));
        for (size_t j = step; j < m.cols(); ++j) m.at(step, j) = cx.mul(m.at(step, j), inv);
        for (size_t i = step + 1; i < m.rows(); ++i) {
            uint64_t e = m.at(i, step);
            if (!e) continue;
            uint64_t mult = cx.neg(e / cx.pPow(bestVal));
            rowAddMul(cx, m.rowPtr(i), m.rowPtr(step), mult, m.cols());
        }
        // Column clearing: only the pivot row has support in this column now,
        // and the global-minimum pivot divides every entry of its row.
        for (size_t j = step + 1; j < m.cols(); ++j) m.at(step, j) = 0;
        divs.push_back(bestVal);
    }
    while (divs.size() < k) divs.push_back(N);
    std::sort(divs.begin(), divs.end());
    return divs;
}

RowEchelonSolver::RowEchelonSolver(const ResidueMatrix& a)
    : rows_(a.rows()), cols_(a.cols()), ctx_(a.ctx()) {
    const PrecisionContext& cx = *ctx_;
    const unsigned N = cx.coeffPrecision();
    // Echelonize [A | I] with globally minimal valuation pivots and column
    // swaps; that ordering keeps every tail entry of a pivot row at least as
    // divisible as the pivot, so back-substitution with free variables at
    // zero succeeds on every consistent system.
    ResidueMatrix aug(rows_, cols_ + rows_, ctx_);
    for (size_t i = 0; i < rows_; ++i) {
        for (size_t j = 0; j < cols_; ++j) aug.at(i, j) = a.at(i, j);
        aug.at(i, cols_ + i) = 1 % cx.modulus();
    }
    colPerm_.resize(cols_);
    for (size_t j = 0; j < cols_; ++j) colPerm_[j] = j;

    size_t step = 0;
    const size_t maxSteps = std::min(rows_, cols_);
    while (step < maxSteps) {
        size_t br = step, bc = step;
        unsigned bestVal = N;
        for (size_t i = step; i < rows_ && bestVal > 0; ++i)
            for (size_t j = step; j < cols_; ++j) {
                unsigned v = valOrN(cx, aug.at(i, j));
                if (v < bestVal) {
                    bestVal = v;
                    br = i;
                    bc = j;
                    if (!bestVal) break;
                }
            }
        if (bestVal >= N) break;
        if (br != step)
            for (size_t j = 0; j < aug.cols(); ++j) std::swap(aug.at(step, j), aug.at(br, j));
        if (bc != step) {
            for (size_t i = 0; i < rows_; ++i) std::swap(aug.at(i, step), aug.at(i, bc));
            std::swap(colPerm_[step], colPerm_[bc]);
        }
        uint64_t inv = cx.invertUnit(aug.at(step, step) / cx.pPow(bestVal));
        for (size_t j = 0; j < aug.cols(); ++j) aug.at(step, j) = cx.mul(aug.at(step, j), inv);
        for (size_t i = step + 1; i < rows_; ++i) {
            uint64_t e = aug.at(i, step);
            if (!e) continue;
            uint64_t mult = cx.neg(e / cx.pPow(bestVal));
            rowAddMul(cx, aug.rowPtr(i), aug.rowPtr(step), mult, aug.cols());
        }
        pivotVals_.push_back(bestVal);
        ++step;
    }
    h_ = ResidueMatrix(rows_, cols_, ctx_);
    e_ = ResidueMatrix(rows_, rows_, ctx_);
    for (size_t i = 0; i < rows_; ++i) {
        for (size_t j = 0; j < cols_; ++j) h_.at(i, j) = aug.at(i, j);
        for (size_t j = 0; j < rows_; ++j) e_.at(i, j) = aug.at(i, cols_ + j);
    }
}

std::optional<std::vector<uint64_t>> RowEchelonSolver::solve(const std::vector<uint64_t>& b) const {
    const PrecisionContext& cx = *ctx_;
    if (b.size() != rows_) fail(ErrorCode::InternalError, "solver rhs size mismatch");
    std::vector<uint64_t> tb(rows_, 0);
    for (size_t i = 0; i < rows_; ++i) {
        uint64_t acc = 0;
        for (size_t j = 0; j < rows_; ++j)
            if (b[j] && e_.at(i, j)) acc = cx.add(acc, cx.mul(e_.at(i, j), b[j]));
        tb[i] = acc;
    }
    const size_t nPiv = pivotVals_.size();
    std::vector<uint64_t> xp(cols_, 0); // permuted coordinates
    for (size_t ii = nPiv; ii-- > 0;) {
        uint64_t rhs = tb[ii];
        for (size_t j = ii + 1; j < cols_; ++j)
            if (xp[j] && h_.at(ii, j)) rhs = cx.sub(rhs, cx.mul(h_.at(ii, j), xp[j]));
        uint64_t pv = cx.pPow(pivotVals_[ii]);
        if (rhs % pv != 0) return std::nullopt;
        xp[ii] = rhs / pv;
    }
    for (size_t i = nPiv; i < rows_; ++i)
        if (tb[i] != 0) return std::nullopt;
    std::vector<uint64_t> x(cols_, 0);
    for (size_t j = 0; j < cols_; ++j) x[colPerm_[j]] = xp[j];
    return x;
}

} // namespace iwalab
