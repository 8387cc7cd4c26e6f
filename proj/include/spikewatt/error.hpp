#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spikewatt {

/// Base of every error the library raises. Callers that only need the
/// message can catch std::runtime_error.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value lies outside the domain the operation is defined on.
class DomainError : public Error {
public:
    using Error::Error;
};

class InvalidArgumentError : public Error {
public:
    using Error::Error;
};

/// Lengths or grid shapes that must agree do not.
class ShapeError : public Error {
public:
    using Error::Error;
};

class BoundsError : public Error {
public:
    using Error::Error;
};

/// A configuration file or struct violates one of its invariants. The
/// message names the invariant.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Input text or bytes do not follow the documented format. `line()` is
/// 1-based, 0 when the location is not a line.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Required physical quantities were neither logged nor overridden.
class IncompleteInputError : public Error {
public:
    explicit IncompleteInputError(std::vector<std::string> missing)
        : Error(compose(missing)), missing_(std::move(missing)) {}

    const std::vector<std::string>& missing() const noexcept { return missing_; }

private:
    static std::string compose(const std::vector<std::string>& missing) {
        std::string msg = "missing required input:";
        for (const auto& m : missing) msg += " " + m;
        return msg;
    }

    std::vector<std::string> missing_;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace spikewatt
