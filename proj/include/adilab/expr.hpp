// expr.hpp — tiny arithmetic expression parser for config-supplied functions of t

#pragma once

#include <memory>
#include <string>

namespace adilab {

// Parses expressions like "1", "1 - 0.5*t", "0.8 + 0.2*cos(pi*t)".
// Grammar: + - * / ^, parentheses, variable t, constant pi,
// functions sin cos tan exp log sqrt abs tanh atan.
class Expr {
public:
    Expr() = default;                       // evaluates to 0
    static Expr parse(const std::string& text);
    static Expr constant(double value);

    double operator()(double t) const;
    bool is_constant() const;               // no dependence on t
    const std::string& text() const { return text_; }

    struct Node;

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
};

} // namespace adilab
