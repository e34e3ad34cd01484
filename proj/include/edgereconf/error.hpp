#pragma once

#include <stdexcept>
#include <string>

namespace edgereconf {

/// Invalid scenario, shape, catalog or request plan.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A query referenced an id that does not exist or is not in scope.
class LookupError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Committing a placement would exceed a device or link capacity.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Assignment model violates its structural invariants.
class ModelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Reconfiguration plan no longer matches the state it was computed on.
class StalePlanError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace edgereconf
