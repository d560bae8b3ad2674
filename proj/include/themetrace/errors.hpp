#pragma once

#include <stdexcept>
#include <string>

namespace themetrace {

/// Base class for all themetrace errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed or undecodable input data.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

/// A domain invariant was violated (overlapping periods, synonym chains, ...).
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

/// Bad run configuration (out-of-range parameter, missing file, ...).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// Failure inside a pipeline stage; carries the stage name.
class PipelineError : public Error {
public:
    PipelineError(std::string stage_name, const std::string& msg)
        : Error("[stage:" + stage_name + "] " + msg), stage_(std::move(stage_name)) {}

    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

} // namespace themetrace
