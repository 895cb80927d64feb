#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace reducesim {

enum class ErrorCode {
    MultipleConscious,
    UnknownComponent,
    NegativeWeight,
    TargetNotReady,
    NotCollapsed,
    OutOfField,
    InvalidWeights,
    InvalidArgument,
    SyntaxError,
    ValidationError,
    IoError,
};

[[nodiscard]] const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Scenario text could not be tokenized or a value could not be read.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t line, std::size_t column, std::string expected)
        : Error(ErrorCode::SyntaxError,
                "line " + std::to_string(line) + ", column " + std::to_string(column) +
                    ": expected " + expected),
          line_(line), column_(column), expected_(std::move(expected)) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] std::size_t column() const noexcept { return column_; }
    [[nodiscard]] const std::string& expected() const noexcept { return expected_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string expected_;
};

/// A well-formed scenario breaks a named invariant.
class ValidationError : public Error {
public:
    explicit ValidationError(std::string invariant)
        : Error(ErrorCode::ValidationError, invariant), invariant_(std::move(invariant)) {}

    [[nodiscard]] const std::string& invariant() const noexcept { return invariant_; }

private:
    std::string invariant_;
};

/// CLI exit status for an error: 1 for bad input, 2 for runtime invariant violations.
[[nodiscard]] int exit_code_for(ErrorCode code) noexcept;

}  // namespace reducesim
