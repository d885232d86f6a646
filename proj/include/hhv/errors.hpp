#pragma once

#include <cstddef>
#include <exception>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hhv {

// Root of the library's exception hierarchy. Every error carries a stable
// machine-readable code used by the CLI's error objects.
class Error : public std::exception {
public:
    Error(std::string code, std::string message)
        : code_(std::move(code)), message_(std::move(message)) {}

    const char* what() const noexcept override { return message_.c_str(); }
    const std::string& code() const noexcept { return code_; }
    const std::string& context() const noexcept { return context_; }

    // Prefixes the message with where the failure happened (e.g. a chain term).
    void add_context(const std::string& ctx) {
        context_ = context_.empty() ? ctx : ctx + "/" + context_;
        message_ = ctx + ": " + message_;
    }

private:
    std::string code_;
    std::string message_;
    std::string context_;
};

// Bad input or configuration: maps to CLI exit code 2.
class UsageError : public Error {
public:
    explicit UsageError(std::string message, std::string code = "usage_error")
        : Error(std::move(code), std::move(message)) {}
};

class ParseError : public UsageError {
public:
    ParseError(std::string message, std::size_t offset, std::vector<std::string> expected,
               std::string code = "parse_error")
        : UsageError(std::move(message), std::move(code)),
          offset_(offset),
          expected_(std::move(expected)) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

class UnknownIdentifierError : public ParseError {
public:
    UnknownIdentifierError(std::string identifier, std::size_t offset)
        : ParseError("unknown identifier '" + identifier + "' at offset " + std::to_string(offset),
                     offset, {}, "unknown_identifier"),
          identifier_(std::move(identifier)) {}

    const std::string& identifier() const noexcept { return identifier_; }

private:
    std::string identifier_;
};

// Failure while computing something numerically: maps to CLI exit code 3.
class NumericError : public Error {
public:
    NumericError(std::string code, std::string message, std::optional<double> abscissa = {})
        : Error(std::move(code), std::move(message)), abscissa_(abscissa) {}

    std::optional<double> abscissa() const noexcept { return abscissa_; }

private:
    std::optional<double> abscissa_;
};

enum class DomainKind {
    log_non_positive,
    sqrt_negative,
    division_by_zero,
    zero_to_negative_power,
    negative_base_fractional_power,
    non_finite_argument,
    non_finite_integrand,
};

const char* to_string(DomainKind kind) noexcept;

class DomainError : public NumericError {
public:
    DomainError(DomainKind kind, double x);

    DomainKind kind() const noexcept { return kind_; }
    double x() const noexcept { return *abscissa(); }

private:
    DomainKind kind_;
};

class OverflowError : public NumericError {
public:
    explicit OverflowError(double x);
};

class MaxDepthExceeded : public NumericError {
public:
    MaxDepthExceeded(int depth, double left, double right);
};

class PositivityViolated : public NumericError {
public:
    PositivityViolated(double x, std::string detail);
    double x() const noexcept { return *abscissa(); }
};

class PhiRangeViolated : public NumericError {
public:
    PhiRangeViolated(double x, double phi_x, double lo, double hi);
    double x() const noexcept { return *abscissa(); }
    double phi_x() const noexcept { return phi_x_; }

private:
    double phi_x_;
};

class DegeneratePhi : public NumericError {
public:
    DegeneratePhi(double phi_a, double phi_b);
};

class GenerationExhausted : public NumericError {
public:
    GenerationExhausted(std::string family, int attempts);
};

}  // namespace hhv
