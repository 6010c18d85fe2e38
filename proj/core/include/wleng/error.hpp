#pragma once

#include <stdexcept>
#include <string>

namespace wleng {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: a topology, stream or Q-table file that violates its
/// schema, or a configuration value outside its domain.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A protocol violation against mutable simulator state, e.g. releasing a
/// reservation twice or allocating more slots than a cluster has free.
class StateError : public Error {
public:
    using Error::Error;
};

} // namespace wleng
