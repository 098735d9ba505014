#pragma once

#include <stdexcept>
#include <string>

namespace symcone {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the region an operation is defined on (not in V, not in D,
// algebra mismatch, malformed coordinates).
class DomainError : public Error {
public:
    using Error::Error;
};

class SingularityError : public Error {
public:
    using Error::Error;
};

// Operation not available for this algebra or algorithm kind.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

// Least-squares design matrix without full column rank.
class RankError : public Error {
public:
    using Error::Error;
};

// Invalid parameters when assembling an algorithm, function or quadruple.
class ConstructionError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace symcone
