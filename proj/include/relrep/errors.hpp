#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace relrep {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Caller combined arguments in a way the operation does not accept.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// An internal ordering or consistency invariant was violated by the input.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// A combination of classes that the outcome table marks as impossible.
class InconsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class InsufficientDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input file structure problems (missing column, unknown label).
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Row-level parse or validation failure; carries the 1-based input line.
class RowError : public std::runtime_error {
public:
    RowError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace relrep
