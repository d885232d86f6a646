#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hhv {

/// Closed interval [a, b] with a < b strictly and both endpoints finite.
class Interval {
public:
    Interval(double a, double b);

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    double width() const noexcept { return b_ - a_; }
    double midpoint() const noexcept { return 0.5 * (a_ + b_); }
    bool contains(double x) const noexcept { return a_ <= x && x <= b_; }

    // Point i of an (n+1)-point equally spaced grid; grid_point(n, n) == b exactly.
    double grid_point(std::size_t i, std::size_t n) const noexcept;

    friend bool operator==(const Interval&, const Interval&) = default;

private:
    double a_;
    double b_;
};

enum class UnaryOp : std::uint8_t { neg, exp, ln, sqrt, abs };
enum class BinaryOp : std::uint8_t { add, sub, mul, div, pow };
enum class NamedConstant : std::uint8_t { e, pi };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Number {
    double value;
};
struct Variable {};
struct Constant {
    NamedConstant which;
};
struct Unary {
    UnaryOp op;
    NodePtr operand;
};
struct Binary {
    BinaryOp op;
    NodePtr lhs;
    NodePtr rhs;
};

struct Node {
    std::variant<Number, Variable, Constant, Unary, Binary> data;
};

bool structurally_equal(const Node& lhs, const Node& rhs);

/// Immutable parsed univariate function of `x`.
///
/// Grammar (see docs/grammar.md):
///
///     expr     = term { ("+" | "-") term } ;
///     term     = unary { ("*" | "/") unary } ;
///     unary    = "-" unary | power ;
///     power    = primary [ "^" exponent ] ;
///     exponent = "-" exponent | power ;
///     primary  = number | "x" | "e" | "pi" | func "(" expr ")" | "(" expr ")" ;
///     func     = "exp" | "ln" | "sqrt" | "abs" ;
///
/// Evaluation either returns a finite double or throws DomainError /
/// OverflowError; it never returns NaN or infinity.
class Expr {
public:
    static Expr parse(std::string_view text);

    static Expr number(double value);
    static Expr variable();
    static Expr constant(NamedConstant which);
    static Expr unary(UnaryOp op, const Expr& operand);
    static Expr binary(BinaryOp op, const Expr& lhs, const Expr& rhs);

    double eval(double x) const;
    double operator()(double x) const { return eval(x); }

    const Node& root() const noexcept { return *root_; }
    const std::string& source() const noexcept { return source_; }

    /// Fully parenthesized canonical text; parses back to an identical tree.
    std::string serialize() const;

    friend bool operator==(const Expr& lhs, const Expr& rhs) {
        return structurally_equal(*lhs.root_, *rhs.root_);
    }

private:
    struct Instr {
        enum class Code : std::uint8_t { push, load_x, neg, exp, ln, sqrt, abs, add, sub, mul, div, pow };
        Code code;
        double value = 0.0;
    };

    Expr(NodePtr root, std::string source);
    void compile();

    NodePtr root_;
    std::string source_;
    std::vector<Instr> program_;
    std::size_t stack_depth_ = 0;
};

inline Expr parse(std::string_view text) { return Expr::parse(text); }
inline double eval(const Expr& f, double x) { return f.eval(x); }

struct PositivityResult {
    bool positive = true;
    std::optional<double> witness;
    std::string reason;  // empty when positive

    explicit operator bool() const noexcept { return positive; }
};

inline constexpr std::size_t default_positivity_grid = 256;

/// Samples f on grid_size+1 equally spaced points of `domain` (endpoints
/// included). Returns the first point where f is not strictly positive or
/// fails to evaluate.
PositivityResult check_positive(const Expr& f, const Interval& domain,
                                std::size_t grid_size = default_positivity_grid);

}  // namespace hhv
