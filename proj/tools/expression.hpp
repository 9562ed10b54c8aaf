#pragma once

#include "discenv/types.hpp"

#include <memory>
#include <string>
#include <vector>

namespace discenv::cli {

/// A compiled arithmetic expression over complex variables.
///
/// Grammar: numbers, `i`, `pi`, variables, + - * / (binary), unary minus,
/// integer powers `^`, parentheses and the functions Re, Im, abs, log, exp,
/// max, min. Evaluation is complex; max and min need real arguments.
class Expression {
public:
    /// Variables are the names the expression may use, bound by position at
    /// evaluation time. Throws ConfigError with a column on syntax errors.
    Expression(const std::string& source, std::vector<std::string> variables);

    Complex operator()(std::span<const Complex> values) const;
    /// Evaluates and requires a real result; throws EvaluationError otherwise.
    double real(std::span<const Complex> values) const;

    const std::string& source() const { return source_; }

    struct Node;

private:
    std::string source_;
    std::vector<std::string> variables_;
    std::shared_ptr<const Node> root_;
};

/// Names z1, ..., zn.
std::vector<std::string> coordinate_names(std::size_t n);

}  // namespace discenv::cli
