#pragma once

#include <stdexcept>
#include <string>

namespace lcsm {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed arguments: bad shapes, non-triangular lengths, invalid settings.
class InvalidInput : public Error {
public:
    using Error::Error;
};

// File/parsing problems surfaced by the CLI layer.
class DataError : public Error {
public:
    using Error::Error;
};

// A basis (or candidate basis) is numerically linearly dependent.
class DependencyError : public Error {
public:
    DependencyError(const std::string& msg, int index) : Error(msg), index_(index) {}
    int index() const { return index_; }

private:
    int index_;
};

// The lambda grid cannot be formed (lambda_max <= 0).
class DegenerateData : public Error {
public:
    using Error::Error;
};

}  // namespace lcsm
