#pragma once

#include <stdexcept>
#include <string>

namespace lppl {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad CSV rows, unparsable dates, bad config keys.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Violated preconditions on otherwise well-formed data: evaluation at
/// t >= tc, windows with too few observations, invalid date ranges.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Numerical failure: rank-deficient linear systems, degenerate fits.
class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace lppl
