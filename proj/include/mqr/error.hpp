#pragma once

#include <stdexcept>
#include <string>

namespace mqr {

// Base for every error raised by the library. Subclasses name the failure
// class so callers (and the CLI exit-code mapping) can distinguish them.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class OrderingError : public Error {
public:
    using Error::Error;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

class DataError : public Error {
public:
    using Error::Error;
};

class ScoringError : public Error {
public:
    using Error::Error;
};

class SpanConflictError : public Error {
public:
    using Error::Error;
};

class EmptyGraphError : public Error {
public:
    using Error::Error;
};

class SolverError : public Error {
public:
    SolverError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class NumericError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class LookupError : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

// A metric whose definition needs data that is absent (no positive labels,
// zero baseline).
class UndefinedMetricError : public Error {
public:
    using Error::Error;
};

}  // namespace mqr
