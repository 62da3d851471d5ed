#pragma once

#include <stdexcept>
#include <string>

namespace cubesum {

enum class ErrorKind {
    BoundExceeded,
    NotCoprime,
    ResidueCharThree,
    Singular,
    BadPrimeClass,
    WildPlace,
    ZeroArgument,
    LiftNotFound,
    PointNotOnCurve,
    PrecisionBudgetExceeded,
    NormalizationFailure,
    SignMismatch,
    Inconclusive,
    DegenerateCert,
    TorsionImage,
    NotFound,
    TorsionPoint,
    NoGenerator,
    PrecisionTooLow,
    RecognitionFailed,
    InvalidFamily,
    ParseError,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind k, const std::string& what)
        : std::runtime_error(std::string(to_string(k)) + ": " + what), kind_(k) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace cubesum
