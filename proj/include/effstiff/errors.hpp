#pragma once

#include <stdexcept>
#include <string>

namespace effstiff {

// Base for every error the library raises.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside an operation's documented domain.
class DomainError : public Error {
public:
    using Error::Error;
};

// Iterative kernel failed to converge, or an indefinite pivot was met.
class NumericalError : public Error {
public:
    using Error::Error;
};

// Pencil matrices do not share a null space.
class PencilDomainError : public Error {
public:
    using Error::Error;
};

class ConditioningError : public Error {
public:
    using Error::Error;
};

// Assembly violates a well-formedness requirement (singular elimination block,
// wrong factor rank, ...).
class NotWellFormedError : public Error {
public:
    using Error::Error;
};

// Malformed element data: bad indices, wrong element rank, missing factor.
class ModelError : public Error {
public:
    using Error::Error;
};

// Sampled matrix does not have the null space of the original.
class NullSpaceMismatchError : public Error {
public:
    using Error::Error;
};

// Right-hand side is not in the range of the operator.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace effstiff
