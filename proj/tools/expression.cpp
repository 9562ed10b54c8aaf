#include "expression.hpp"

#include "discenv/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

namespace discenv::cli {

struct Expression::Node {
    enum class Kind { Constant, Variable, Add, Sub, Mul, Div, Neg, Pow, Call } kind;
    Complex value;
    std::size_t variable = 0;
    int exponent = 0;
    std::string function;
    std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

struct FunctionInfo {
    const char* name;
    std::size_t arity;
};
constexpr FunctionInfo kFunctions[] = {{"Re", 1},  {"Im", 1},  {"abs", 1}, {"log", 1},
                                       {"exp", 1}, {"max", 2}, {"min", 2}};

NodePtr make(Kind k, std::vector<NodePtr> args = {}) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = k;
    n->args = std::move(args);
    return n;
}

class Parser {
public:
    Parser(const std::string& s, const std::vector<std::string>& vars) : s_(s), vars_(vars) {}

    NodePtr parse() {
        auto n = sum();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return n;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("expression \"" + s_ + "\", column " + std::to_string(pos_ + 1) + ": " + what);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    NodePtr sum() {
        auto n = product();
        for (;;) {
            if (accept('+'))
                n = make(Kind::Add, {n, product()});
            else if (accept('-'))
                n = make(Kind::Sub, {n, product()});
            else
                return n;
        }
    }

    NodePtr product() {
        auto n = unary();
        for (;;) {
            if (accept('*'))
                n = make(Kind::Mul, {n, unary()});
            else if (accept('/'))
                n = make(Kind::Div, {n, unary()});
            else
                return n;
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Kind::Neg, {unary()});
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        auto base = primary();
        if (!accept('^')) return base;
        skip();
        const bool negative = accept('-');
        skip();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("exponent must be an integer literal");
        if (pos_ - start > 4) fail("exponent too large");
        auto n = std::make_shared<Expression::Node>();
        n->kind = Kind::Pow;
        n->exponent = std::atoi(s_.substr(start, pos_ - start).c_str()) * (negative ? -1 : 1);
        n->args = {base};
        return n;
    }

    NodePtr primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of expression");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            auto n = sum();
            expect(')');
            return n;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end == begin) fail("malformed number");
            pos_ += static_cast<std::size_t>(end - begin);
            auto n = std::make_shared<Expression::Node>();
            n->kind = Kind::Constant;
            n->value = v;
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            const std::string name = s_.substr(start, pos_ - start);
            skip();
            if (pos_ < s_.size() && s_[pos_] == '(') return call(name, start);
            return identifier(name, start);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    NodePtr call(const std::string& name, std::size_t start) {
        const auto* info = std::find_if(std::begin(kFunctions), std::end(kFunctions),
                                        [&](const FunctionInfo& f) { return name == f.name; });
        if (info == std::end(kFunctions)) {
            pos_ = start;
            fail("unknown function '" + name + "'");
        }
        expect('(');
        std::vector<NodePtr> args{sum()};
        while (accept(',')) args.push_back(sum());
        expect(')');
        if (args.size() != info->arity) {
            pos_ = start;
            fail(name + " takes " + std::to_string(info->arity) + " argument(s)");
        }
        auto n = std::make_shared<Expression::Node>();
        n->kind = Kind::Call;
        n->function = name;
        n->args = std::move(args);
        return n;
    }

    NodePtr identifier(const std::string& name, std::size_t start) {
        auto n = std::make_shared<Expression::Node>();
        const auto it = std::find(vars_.begin(), vars_.end(), name);
        if (it != vars_.end()) {
            n->kind = Kind::Variable;
            n->variable = static_cast<std::size_t>(it - vars_.begin());
        } else if (name == "i") {
            n->kind = Kind::Constant;
            n->value = Complex(0.0, 1.0);
        } else if (name == "pi") {
            n->kind = Kind::Constant;
            n->value = std::numbers::pi;
        } else {
            pos_ = start;
            fail("unknown variable '" + name + "'");
        }
        return n;
    }

    const std::string& s_;
    const std::vector<std::string>& vars_;
    std::size_t pos_ = 0;
};

double real_argument(Complex z, const std::string& fn) {
    if (std::abs(z.imag()) > 1e-12 * std::max(1.0, std::abs(z.real())))
        throw EvaluationError(fn + ": argument is not real");
    return z.real();
}

Complex eval(const Expression::Node& n, std::span<const Complex> v) {
    switch (n.kind) {
        case Kind::Constant: return n.value;
        case Kind::Variable: return v[n.variable];
        case Kind::Add: return eval(*n.args[0], v) + eval(*n.args[1], v);
        case Kind::Sub: return eval(*n.args[0], v) - eval(*n.args[1], v);
        case Kind::Mul: return eval(*n.args[0], v) * eval(*n.args[1], v);
        case Kind::Div: return eval(*n.args[0], v) / eval(*n.args[1], v);
        case Kind::Neg: return -eval(*n.args[0], v);
        case Kind::Pow: {
            const Complex b = eval(*n.args[0], v);
            Complex r = 1.0;
            for (int k = 0; k < std::abs(n.exponent); ++k) r *= b;
            return n.exponent < 0 ? 1.0 / r : r;
        }
        case Kind::Call: {
            const Complex a = eval(*n.args[0], v);
            if (n.function == "Re") return a.real();
            if (n.function == "Im") return a.imag();
            if (n.function == "abs") return std::abs(a);
            if (n.function == "exp") return std::exp(a);
            if (n.function == "log") {
                // Real logarithm on the nonnegative axis so that log(0) = -inf stays real.
                if (a.imag() == 0.0 && a.real() >= 0.0) return std::log(a.real());
                return std::log(a);
            }
            const double x = real_argument(a, n.function);
            const double y = real_argument(eval(*n.args[1], v), n.function);
            return n.function == "max" ? std::max(x, y) : std::min(x, y);
        }
    }
    return 0.0;
}

}  // namespace

Expression::Expression(const std::string& source, std::vector<std::string> variables)
    : source_(source), variables_(std::move(variables)) {
    root_ = Parser(source_, variables_).parse();
}

Complex Expression::operator()(std::span<const Complex> values) const {
    if (values.size() < variables_.size()) throw ConfigError("expression: too few variable values");
    return eval(*root_, values);
}

double Expression::real(std::span<const Complex> values) const {
    const Complex z = (*this)(values);
    if (std::abs(z.imag()) > 1e-12 * std::max(1.0, std::abs(z.real())))
        throw EvaluationError("expression \"" + source_ + "\" is not real-valued here");
    return z.real();
}

std::vector<std::string> coordinate_names(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t c = 1; c <= n; ++c) out.push_back("z" + std::to_string(c));
    return out;
}

}  // namespace discenv::cli
