#pragma once

#include <stdexcept>
#include <string>

namespace koko {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// polynomial layer
struct ZeroPolynomialError : Error {
    using Error::Error;
};
struct DegenerateLeadingCoefficientError : Error {
    using Error::Error;
};
struct NotQuadraticError : Error {
    using Error::Error;
};

// coefficient layer
struct InvalidIsogramError : Error {
    using Error::Error;
};
struct HingeOverflowError : Error {
    using Error::Error;
};
struct AngleOutOfRangeError : Error {
    using Error::Error;
};

// verification layer
struct NotIsogonalError : Error {
    using Error::Error;
};
struct HypothesisViolatedError : Error {
    using Error::Error;
};
struct ShapeMismatchError : Error {
    using Error::Error;
};

// constructors
struct SearchExhaustedError : Error {
    int attempts = 0;
    SearchExhaustedError(const std::string& msg, int n) : Error(msg), attempts(n) {}
};
struct NoRealZError : SearchExhaustedError {
    using SearchExhaustedError::SearchExhaustedError;
};
struct NoRealBranchError : SearchExhaustedError {
    using SearchExhaustedError::SearchExhaustedError;
};
struct FactorExtractionFailedError : Error {
    using Error::Error;
};
struct DegenerateParameterizationError : Error {
    using Error::Error;
};

// geometry
struct NoRealConfigurationError : Error {
    using Error::Error;
};
struct InfeasibleEmbeddingError : Error {
    using Error::Error;
};

// io
struct ParseError : Error {
    using Error::Error;
};
struct InvalidParamError : Error {
    using Error::Error;
};

} // namespace koko
