#pragma once

#include <stdexcept>
#include <string>

namespace hbd {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input data has the wrong shape (vector/matrix sizes disagree with n, p, m1, m2).
class DimensionError : public Error {
public:
    using Error::Error;
};

// JSON is missing a required field or a field has the wrong type/format.
class SchemaError : public Error {
public:
    using Error::Error;
};

// Simplex exceeded its pivot cap; treated as numerical instability.
class SimplexError : public Error {
public:
    using Error::Error;
};

// The optimization problem itself is unbounded (not just one auxiliary LP).
class UnboundedError : public Error {
public:
    using Error::Error;
};

// The phi range cannot be binary-encoded (unbounded bound LPs).
class EncodingError : public Error {
public:
    using Error::Error;
};

// A constraint is unsatisfiable for every binary x (negative slack range).
class MasterInfeasibleError : public Error {
public:
    using Error::Error;
};

// The continuous relaxation is empty, so the whole instance is infeasible.
class InstanceInfeasibleError : public Error {
public:
    using Error::Error;
};

// Exhaustive backend asked to enumerate more than 2^24 states.
class SizeCapError : public Error {
public:
    using Error::Error;
};

// Invariant violation that indicates a bug, not bad input.
class InternalError : public Error {
public:
    using Error::Error;
};

} // namespace hbd
