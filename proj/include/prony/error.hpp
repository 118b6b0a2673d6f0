#pragma once

#include <stdexcept>
#include <string>

namespace prony {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user input: bad configuration, malformed file, violated precondition.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Failure inside a numerical stage. The stage name is kept separately so
/// front ends can report it.
class NumericalError : public Error {
public:
    NumericalError(std::string stage, const std::string& message);

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

}  // namespace prony
