#pragma once

#include <stdexcept>
#include <string>

namespace nlslab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input that cannot describe a valid object (p <= 1, N < 1, bad CSV, ...).
class MalformedInput : public Error {
public:
    using Error::Error;
};

/// Parameters outside the regime an operation is defined for (e.g. s_c <= 0).
class OutOfRegime : public Error {
public:
    using Error::Error;
};

/// Argument outside a function's mathematical domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A quantity that is not defined for the given parameters (e.g. M[W] for N <= 4).
class NotApplicable : public Error {
public:
    using Error::Error;
};

/// An iterative method failed to bracket or converge.
class NonConvergence : public Error {
public:
    using Error::Error;
};

/// Two routes to the same quantity disagree beyond tolerance.
class InconsistencyError : public Error {
public:
    using Error::Error;
};

/// Grid too coarse: doubling the resolution moved a functional too much.
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// Time integration lost mass without a blow-up alarm.
class InstabilityError : public Error {
public:
    using Error::Error;
};

}  // namespace nlslab
