#include "hhv/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

#include "hhv/errors.hpp"
#include "hhv/format.hpp"

namespace hhv {

Interval::Interval(double a, double b) : a_(a), b_(b) {
    if (!std::isfinite(a) || !std::isfinite(b)) {
        throw UsageError("interval endpoints must be finite", "invalid_interval");
    }
    if (!(a < b)) {
        throw UsageError("interval requires a < b, got [" + format_real(a) + ", " + format_real(b) + "]",
                         "invalid_interval");
    }
}

double Interval::grid_point(std::size_t i, std::size_t n) const noexcept {
    if (i == 0) return a_;
    if (i >= n) return b_;
    return a_ + width() * (static_cast<double>(i) / static_cast<double>(n));
}

bool structurally_equal(const Node& lhs, const Node& rhs) {
    if (lhs.data.index() != rhs.data.index()) return false;
    return std::visit(
        [&rhs](const auto& l) -> bool {
            using T = std::decay_t<decltype(l)>;
            const auto& r = std::get<T>(rhs.data);
            if constexpr (std::is_same_v<T, Number>) {
                return l.value == r.value;
            } else if constexpr (std::is_same_v<T, Variable>) {
                return true;
            } else if constexpr (std::is_same_v<T, Constant>) {
                return l.which == r.which;
            } else if constexpr (std::is_same_v<T, Unary>) {
                return l.op == r.op && structurally_equal(*l.operand, *r.operand);
            } else {
                return l.op == r.op && structurally_equal(*l.lhs, *r.lhs) &&
                       structurally_equal(*l.rhs, *r.rhs);
            }
        },
        lhs.data);
}

namespace {

NodePtr make_node(auto payload) { return std::make_shared<const Node>(Node{std::move(payload)}); }

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr parse() {
        skip_space();
        if (pos_ == text_.size()) fail({"expression"}, "empty expression");
        NodePtr root = parse_expr();
        skip_space();
        if (pos_ != text_.size()) fail({"operator", "end of input"}, "unexpected trailing input");
        return root;
    }

private:
    [[noreturn]] void fail(std::vector<std::string> expected, const std::string& what) const {
        std::string msg = what + " at offset " + std::to_string(pos_) + "; expected one of:";
        for (const auto& e : expected) msg += " " + e;
        throw ParseError(msg, pos_, std::move(expected));
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        for (;;) {
            if (accept('+')) {
                lhs = make_node(Binary{BinaryOp::add, lhs, parse_term()});
            } else if (accept('-')) {
                lhs = make_node(Binary{BinaryOp::sub, lhs, parse_term()});
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_unary();
        for (;;) {
            if (accept('*')) {
                lhs = make_node(Binary{BinaryOp::mul, lhs, parse_unary()});
            } else if (accept('/')) {
                lhs = make_node(Binary{BinaryOp::div, lhs, parse_unary()});
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_unary() {
        if (accept('-')) return make_node(Unary{UnaryOp::neg, parse_unary()});
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        if (accept('^')) return make_node(Binary{BinaryOp::pow, base, parse_exponent()});
        return base;
    }

    NodePtr parse_exponent() {
        if (accept('-')) return make_node(Unary{UnaryOp::neg, parse_exponent()});
        return parse_power();
    }

    NodePtr parse_primary() {
        skip_space();
        static const std::vector<std::string> operand_start{"number", "'x'", "'e'", "'pi'", "function",
                                                           "'('", "'-'"};
        if (pos_ >= text_.size()) fail(operand_start, "unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr inner = parse_expr();
            if (!accept(')')) fail({"')'"}, "unbalanced parenthesis");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        fail(operand_start, std::string("unexpected character '") + c + "'");
    }

    NodePtr parse_number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
                ++n;
            }
            return n;
        };
        std::size_t mantissa_digits = digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            mantissa_digits += digits();
        }
        if (mantissa_digits == 0) {
            pos_ = start;
            fail({"digit"}, "malformed number");
        }
        // An exponent is only consumed when digits follow, so "2e" stays "2" then 'e'.
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
            if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
                pos_ = look;
                digits();
            }
        }
        double value = 0.0;
        const char* first = text_.data() + start;
        const char* last = text_.data() + pos_;
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
            pos_ = start;
            fail({"finite number"}, "number literal out of range");
        }
        return make_node(Number{value});
    }

    NodePtr parse_identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        const std::string_view name = text_.substr(start, pos_ - start);
        if (name == "x") return make_node(Variable{});
        if (name == "e") return make_node(Constant{NamedConstant::e});
        if (name == "pi") return make_node(Constant{NamedConstant::pi});

        static constexpr std::array<std::pair<std::string_view, UnaryOp>, 4> functions{{
            {"exp", UnaryOp::exp},
            {"ln", UnaryOp::ln},
            {"sqrt", UnaryOp::sqrt},
            {"abs", UnaryOp::abs},
        }};
        for (const auto& [fname, op] : functions) {
            if (name != fname) continue;
            if (!accept('(')) fail({"'('"}, "function '" + std::string(name) + "' requires parentheses");
            NodePtr arg = parse_expr();
            if (!accept(')')) fail({"')'"}, "unbalanced parenthesis");
            return make_node(Unary{op, arg});
        }
        throw UnknownIdentifierError(std::string(name), start);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

const char* unary_name(UnaryOp op) {
    switch (op) {
        case UnaryOp::neg: return "-";
        case UnaryOp::exp: return "exp";
        case UnaryOp::ln: return "ln";
        case UnaryOp::sqrt: return "sqrt";
        case UnaryOp::abs: return "abs";
    }
    return "?";
}

const char* binary_symbol(BinaryOp op) {
    switch (op) {
        case BinaryOp::add: return " + ";
        case BinaryOp::sub: return " - ";
        case BinaryOp::mul: return " * ";
        case BinaryOp::div: return " / ";
        case BinaryOp::pow: return "^";
    }
    return "?";
}

void serialize_into(const Node& node, std::string& out) {
    std::visit(
        [&out](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Number>) {
                out += format_real(n.value);
            } else if constexpr (std::is_same_v<T, Variable>) {
                out += 'x';
            } else if constexpr (std::is_same_v<T, Constant>) {
                out += n.which == NamedConstant::e ? "e" : "pi";
            } else if constexpr (std::is_same_v<T, Unary>) {
                if (n.op == UnaryOp::neg) {
                    out += "(-";
                    serialize_into(*n.operand, out);
                    out += ')';
                } else {
                    out += unary_name(n.op);
                    out += '(';
                    serialize_into(*n.operand, out);
                    out += ')';
                }
            } else {
                out += '(';
                serialize_into(*n.lhs, out);
                out += binary_symbol(n.op);
                serialize_into(*n.rhs, out);
                out += ')';
            }
        },
        node.data);
}

bool is_integer(double v) { return std::nearbyint(v) == v; }

}  // namespace

Expr::Expr(NodePtr root, std::string source) : root_(std::move(root)), source_(std::move(source)) {
    compile();
}

Expr Expr::parse(std::string_view text) {
    if (text.empty()) throw ParseError("empty expression at offset 0", 0, {"expression"});
    return Expr(Parser(text).parse(), std::string(text));
}

Expr Expr::number(double value) {
    if (!std::isfinite(value)) throw UsageError("number literal must be finite");
    NodePtr n = make_node(Number{value});
    std::string text;
    serialize_into(*n, text);
    return Expr(n, text);
}

Expr Expr::variable() { return Expr(make_node(Variable{}), "x"); }

Expr Expr::constant(NamedConstant which) {
    return Expr(make_node(Constant{which}), which == NamedConstant::e ? "e" : "pi");
}

Expr Expr::unary(UnaryOp op, const Expr& operand) {
    NodePtr n = make_node(Unary{op, operand.root_});
    std::string text;
    serialize_into(*n, text);
    return Expr(n, text);
}

Expr Expr::binary(BinaryOp op, const Expr& lhs, const Expr& rhs) {
    NodePtr n = make_node(Binary{op, lhs.root_, rhs.root_});
    std::string text;
    serialize_into(*n, text);
    return Expr(n, text);
}

std::string Expr::serialize() const {
    std::string out;
    serialize_into(*root_, out);
    return out;
}

void Expr::compile() {
    program_.clear();
    std::size_t depth = 0;
    auto emit = [&](Instr::Code code, double value, int stack_delta) {
        program_.push_back({code, value});
        depth = static_cast<std::size_t>(static_cast<long>(depth) + stack_delta);
        stack_depth_ = std::max(stack_depth_, depth);
    };
    auto walk = [&](auto&& self, const Node& node) -> void {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Number>) {
                    emit(Instr::Code::push, n.value, 1);
                } else if constexpr (std::is_same_v<T, Variable>) {
                    emit(Instr::Code::load_x, 0.0, 1);
                } else if constexpr (std::is_same_v<T, Constant>) {
                    emit(Instr::Code::push,
                         n.which == NamedConstant::e ? std::numbers::e : std::numbers::pi, 1);
                } else if constexpr (std::is_same_v<T, Unary>) {
                    self(self, *n.operand);
                    static constexpr std::array codes{Instr::Code::neg, Instr::Code::exp, Instr::Code::ln,
                                                      Instr::Code::sqrt, Instr::Code::abs};
                    emit(codes[static_cast<std::size_t>(n.op)], 0.0, 0);
                } else {
                    self(self, *n.lhs);
                    self(self, *n.rhs);
                    static constexpr std::array codes{Instr::Code::add, Instr::Code::sub, Instr::Code::mul,
                                                      Instr::Code::div, Instr::Code::pow};
                    emit(codes[static_cast<std::size_t>(n.op)], 0.0, -1);
                }
            },
            node.data);
    };
    walk(walk, *root_);
}

double Expr::eval(double x) const {
    if (!std::isfinite(x)) throw DomainError(DomainKind::non_finite_argument, x);

    constexpr std::size_t inline_capacity = 64;
    std::array<double, inline_capacity> local{};
    std::vector<double> heap;
    double* stack = local.data();
    if (stack_depth_ > inline_capacity) {
        heap.resize(stack_depth_);
        stack = heap.data();
    }

    std::size_t top = 0;  // number of live entries
    for (const Instr& ins : program_) {
        double r = 0.0;
        switch (ins.code) {
            case Instr::Code::push: stack[top++] = ins.value; continue;
            case Instr::Code::load_x: stack[top++] = x; continue;
            case Instr::Code::neg: stack[top - 1] = -stack[top - 1]; continue;
            case Instr::Code::abs: stack[top - 1] = std::fabs(stack[top - 1]); continue;
            case Instr::Code::exp: r = std::exp(stack[top - 1]); break;
            case Instr::Code::ln: {
                const double v = stack[top - 1];
                if (!(v > 0.0)) throw DomainError(DomainKind::log_non_positive, x);
                r = std::log(v);
                break;
            }
            case Instr::Code::sqrt: {
                const double v = stack[top - 1];
                if (v < 0.0) throw DomainError(DomainKind::sqrt_negative, x);
                r = std::sqrt(v);
                break;
            }
            default: {
                const double rhs = stack[--top];
                const double lhs = stack[top - 1];
                switch (ins.code) {
                    case Instr::Code::add: r = lhs + rhs; break;
                    case Instr::Code::sub: r = lhs - rhs; break;
                    case Instr::Code::mul: r = lhs * rhs; break;
                    case Instr::Code::div:
                        if (rhs == 0.0) throw DomainError(DomainKind::division_by_zero, x);
                        r = lhs / rhs;
                        break;
                    case Instr::Code::pow:
                        if (lhs == 0.0 && rhs < 0.0) throw DomainError(DomainKind::zero_to_negative_power, x);
                        if (lhs < 0.0 && !is_integer(rhs))
                            throw DomainError(DomainKind::negative_base_fractional_power, x);
                        r = std::pow(lhs, rhs);
                        break;
                    default: break;
                }
                break;
            }
        }
        if (!std::isfinite(r)) throw OverflowError(x);
        stack[top - 1] = r;
    }
    return stack[0];
}

PositivityResult check_positive(const Expr& f, const Interval& domain, std::size_t grid_size) {
    if (grid_size < 2) throw UsageError("positivity grid size must be at least 2");
    for (std::size_t i = 0; i <= grid_size; ++i) {
        const double x = domain.grid_point(i, grid_size);
        try {
            const double v = f.eval(x);
            if (!(v > 0.0)) return {false, x, "f(x)=" + format_real(v) + " is not positive"};
        } catch (const NumericError& e) {
            return {false, x, e.what()};
        }
    }
    return {};
}

}  // namespace hhv
