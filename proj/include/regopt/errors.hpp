#pragma once

#include <stdexcept>
#include <string>

namespace regopt {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Caller broke a documented precondition (dimension mismatch, parameter out of range, infeasible start).
class ContractError : public Error {
public:
    using Error::Error;
};

// An objective or ground-truth oracle produced non-finite values or failed to converge.
class OracleFailure : public Error {
public:
    using Error::Error;
};

// Armijo backtracking exhausted its budget; usually a wrong gradient or a non-convex objective.
class LineSearchFailure : public Error {
public:
    using Error::Error;
};

// Inner loop of a two-level method exceeded its iteration cap.
class RunawayError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace regopt
