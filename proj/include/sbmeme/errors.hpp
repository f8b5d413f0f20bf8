#pragma once

#include <stdexcept>
#include <string>

namespace sbmeme {

/// Base class for all library errors that are not plain precondition
/// violations (those throw std::invalid_argument).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file; message carries path and line number.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Pipeline stages disagree on an artifact schema (missing meme, field).
class SchemaError : public Error {
public:
    using Error::Error;
};

/// Both popularity samples at the awakening are zero, Eq.-style innovation
/// estimate would be 0.
class NoInnovationSignal : public Error {
public:
    using Error::Error;
};

/// The imitation equation has no root for the given (p, peak delay).
class NoImitationSolution : public Error {
public:
    using Error::Error;
};

/// Awake-window popularity sums to zero.
class EmptyWakeWindow : public Error {
public:
    using Error::Error;
};

/// Too few observations for the requested estimator.
class InsufficientSample : public Error {
public:
    using Error::Error;
};

/// All values identical, no spread to fit.
class ZeroVariance : public Error {
public:
    using Error::Error;
};

/// A series with zero variance was passed to a correlation.
class DegenerateSeries : public Error {
public:
    using Error::Error;
};

} // namespace sbmeme
