#pragma once

#include <stdexcept>
#include <string>

namespace flattop {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument or configuration (bad parameter, malformed spec).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The series has zero sample variance.
class ConstantSeries : public Error {
public:
    using Error::Error;
};

class LagOutOfRange : public Error {
public:
    using Error::Error;
};

/// An autocorrelation estimate does not cover enough lags for the request.
class InsufficientLags : public Error {
public:
    using Error::Error;
};

class InvalidBreakpoint : public Error {
public:
    using Error::Error;
};

/// A model evaluates to a non-positive variance.
class DegenerateModel : public Error {
public:
    using Error::Error;
};

/// Circulant embedding produced significantly negative eigenvalues.
class EmbeddingFailure : public Error {
public:
    using Error::Error;
};

class NonStationary : public Error {
public:
    using Error::Error;
};

/// Regression with no variance in the regressor.
class DegenerateFit : public Error {
public:
    using Error::Error;
};

/// Malformed input file (CSV series, JSON spec).
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace flattop
