#pragma once

#include <stdexcept>
#include <string>

namespace lancaster {

// Base for every error the library throws. The CLI maps the two families
// (parse vs. domain/numeric) onto distinct exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

class SampleTooSmallError : public DomainError {
public:
    using DomainError::DomainError;
};

// Zero variance in a margin.
class DegenerateSampleError : public DomainError {
public:
    using DomainError::DomainError;
};

// Standardized fourth moment not exceeding one.
class DegenerateKurtosisError : public DomainError {
public:
    using DomainError::DomainError;
};

// |tau| == 1 in a limit law.
class SingularCorrelationError : public DomainError {
public:
    using DomainError::DomainError;
};

// Malformed input text (CSV, config file, report file).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Well-formed but inconsistent configuration (unknown ids, missing truth values).
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace lancaster
