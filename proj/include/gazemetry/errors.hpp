#pragma once

#include <stdexcept>
#include <string>

namespace gazemetry {

// Base class for all library errors. exit_code() mirrors the CLI contract:
// 1 = usage/configuration problem, 2 = data problem.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    [[nodiscard]] virtual int exit_code() const { return 2; }
};

/// Invalid configuration or parameter value (non-positive threshold, bad range, ...).
class ConfigError : public Error {
public:
    using Error::Error;
    [[nodiscard]] int exit_code() const override { return 1; }
};

/// Malformed input text (bad header, non-numeric field, bad JSON shape, ...).
class FormatError : public Error {
public:
    using Error::Error;
};

/// Timestamps out of order or a non-positive time delta.
class OrderingError : public Error {
public:
    using Error::Error;
};

/// Fewer samples/groups than the operation needs.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// Zero-length gaze vector or otherwise unusable geometry.
class DegenerateGeometryError : public Error {
public:
    using Error::Error;
};

/// A participant produced no fixation groups, so the GRI is undefined.
class ZeroFixationError : public Error {
public:
    using Error::Error;
};

/// A participant has no group assignment.
class AssignmentError : public Error {
public:
    using Error::Error;
};

/// A requested threshold / merge setting is not present in a sweep table.
class LookupError : public Error {
public:
    using Error::Error;
};

}  // namespace gazemetry
