#pragma once

#include <stdexcept>
#include <string>

namespace iwalab {

enum class ErrorCode {
    NotAUnit,
    PrecisionExhausted,
    TDepthExhausted,
    NotDistinguished,
    NotSquare,
    ZeroDeterminant,
    InfiniteQuotient,
    Unstable,
    NotAssociative,
    NoIdentity,
    NotInvertible,
    NotPPower,
    BoundaryMismatch,
    NotAComplex,
    NotChainMap,
    NotMuZero,
    NotTorsion,
    MuNotZeroAtTop,
    NotAnnihilating,
    LengthTooShort,
    MissingLocalData,
    BudgetExceeded,
    SchemaError,
    BadContext,
    InternalError,
};

const char* errorCodeName(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, std::string message)
        : std::runtime_error(std::string(errorCodeName(code)) + ": " + message), code_(code) {}

    ErrorCode code() const { return code_; }

    // Extra payload for ZeroDeterminant: whether the determinant vanished as
    // an exact polynomial (module genuinely not torsion) rather than merely
    // within the precision window.
    Error& withIdenticallyZero(bool flag) {
        identicallyZero_ = flag;
        return *this;
    }
    bool identicallyZero() const { return identicallyZero_; }

    Error& withDegree(int degree) {
        degree_ = degree;
        hasDegree_ = true;
        return *this;
    }
    bool hasDegree() const { return hasDegree_; }
    int degree() const { return degree_; }

    // True for the error family caused by working at finite precision
    // (raise N or M and retry), as opposed to bad input.
    bool isPrecisionFamily() const {
        switch (code_) {
        case ErrorCode::PrecisionExhausted:
        case ErrorCode::TDepthExhausted:
        case ErrorCode::Unstable:
            return true;
        default:
            return false;
        }
    }

  private:
    ErrorCode code_;
    bool identicallyZero_ = false;
    bool hasDegree_ = false;
    int degree_ = 0;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace iwalab
