#pragma once

#include <stdexcept>
#include <string>

namespace mxpbf {

// Base class for all library errors. Subclasses distinguish usage errors
// (bad arguments, malformed input) from numeric failures so the CLI can
// map them to distinct exit codes.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid inputs / preconditions.
class DataError : public Error {
public:
    using Error::Error;
};

// Numeric failure (degenerate statistics, factorization failure, ...).
class NumericError : public Error {
public:
    using Error::Error;
};

class SpanTooShort : public DataError {
public:
    using DataError::DataError;
};

class SameColumn : public DataError {
public:
    using DataError::DataError;
};

class CenterOutOfRange : public DataError {
public:
    using DataError::DataError;
};

class DegenerateVariance : public NumericError {
public:
    using NumericError::NumericError;
};

class EmptyProfile : public DataError {
public:
    using DataError::DataError;
};

class LadderMismatch : public DataError {
public:
    using DataError::DataError;
};

class LadderInfeasible : public DataError {
public:
    using DataError::DataError;
};

class InfeasibleScenario : public DataError {
public:
    using DataError::DataError;
};

class NotPositiveDefinite : public NumericError {
public:
    using NumericError::NumericError;
};

class NoFeasibleAlpha : public NumericError {
public:
    using NumericError::NumericError;
};

class ParseError : public DataError {
public:
    using DataError::DataError;
};

class NonRectangular : public DataError {
public:
    using DataError::DataError;
};

class NonFinite : public DataError {
public:
    using DataError::DataError;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace mxpbf
