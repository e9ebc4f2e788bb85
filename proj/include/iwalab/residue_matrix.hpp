#pragma once

#include <cstdint>
#include <vector>

#include "iwalab/context.hpp"

namespace iwalab {

/// Dense matrix over Z/p^N, row-major. All entries share one context.
class ResidueMatrix {
  public:
    ResidueMatrix() = default;
    ResidueMatrix(size_t rows, size_t cols, CtxPtr ctx)
        : rows_(rows), cols_(cols), ctx_(std::move(ctx)), data_(rows * cols, 0) {}

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    const CtxPtr& ctx() const { return ctx_; }

    uint64_t& at(size_t r, size_t c) { return data_[r * cols_ + c]; }
    uint64_t at(size_t r, size_t c) const { return data_[r * cols_ + c]; }
    uint64_t* rowPtr(size_t r) { return data_.data() + r * cols_; }
    const uint64_t* rowPtr(size_t r) const { return data_.data() + r * cols_; }

    bool operator==(const ResidueMatrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
    }

    ResidueMatrix transposed() const;
    ResidueMatrix mul(const ResidueMatrix& other) const;

  private:
    size_t rows_ = 0, cols_ = 0;
    CtxPtr ctx_;
    std::vector<uint64_t> data_;
};

struct HowellResult {
    ResidueMatrix form;       // canonical generators of the column span
    long logKernelSize = 0;   // log_p |ker(A)| acting on column vectors
    long logImageSize = 0;    // log_p |column span of A| in (Z/p^N)^rows
};

/// Howell normal form of the column span of A over Z/p^N, with exact
/// kernel/image cardinalities. logKernelSize + logImageSize = cols * N.
HowellResult howellForm(const ResidueMatrix& a);

/// Valuations of the elementary divisors of A over Z/p^N, ascending.
/// Divisors that are zero at this precision are reported as N; the list is
/// padded to min(rows, cols).
std::vector<unsigned> smithValuations(const ResidueMatrix& a);

/// Echelonized view of a matrix A over Z/p^N that answers A x = b queries.
/// Solutions are exact; inconsistent systems are reported, not approximated.
class RowEchelonSolver {
  public:
    explicit RowEchelonSolver(const ResidueMatrix& a);

    /// Some solution of A x = b, or nullopt when the system is inconsistent.
    std::optional<std::vector<uint64_t>> solve(const std::vector<uint64_t>& b) const;

  private:
    size_t rows_, cols_;
    CtxPtr ctx_;
    ResidueMatrix h_;                 // echelon form E*A*P in permuted columns
    ResidueMatrix e_;                 // the transform E
    std::vector<size_t> colPerm_;     // permuted index -> original column
    std::vector<unsigned> pivotVals_;
};

} // namespace iwalab
