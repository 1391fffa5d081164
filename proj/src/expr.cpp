// expr.cpp — recursive-descent parser for the config expression language

#include "adilab/expr.hpp"
#include "adilab/common.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <vector>

namespace adilab {

struct Expr::Node {
    enum class Op { Num, Var, Add, Sub, Mul, Div, Pow, Neg, Fun };
    Op op{Op::Num};
    double value{0.0};
    double (*fun)(double) = nullptr;
    std::shared_ptr<const Node> a, b;

    double eval(double t) const {
        switch (op) {
            case Op::Num: return value;
            case Op::Var: return t;
            case Op::Add: return a->eval(t) + b->eval(t);
            case Op::Sub: return a->eval(t) - b->eval(t);
            case Op::Mul: return a->eval(t) * b->eval(t);
            case Op::Div: return a->eval(t) / b->eval(t);
            case Op::Pow: return std::pow(a->eval(t), b->eval(t));
            case Op::Neg: return -a->eval(t);
            case Op::Fun: return fun(a->eval(t));
        }
        return 0.0;
    }
    bool uses_var() const {
        if (op == Op::Var) return true;
        if (a && a->uses_var()) return true;
        if (b && b->uses_var()) return true;
        return false;
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

struct Parser {
    const std::string& s;
    std::size_t pos{0};

    explicit Parser(const std::string& text) : s(text) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) { ++pos; return true; }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw config_error("expression error at position " + std::to_string(pos) + " in '" + s + "': " + msg);
    }

    static NodePtr make(Expr::Node n) { return std::make_shared<Expr::Node>(std::move(n)); }

    NodePtr number() {
        skip_ws();
        std::size_t end = pos;
        while (end < s.size() &&
               (std::isdigit(static_cast<unsigned char>(s[end])) || s[end] == '.' ||
                s[end] == 'e' || s[end] == 'E' ||
                ((s[end] == '+' || s[end] == '-') && end > pos && (s[end - 1] == 'e' || s[end - 1] == 'E'))))
            ++end;
        if (end == pos) fail("expected number");
        Expr::Node n;
        n.op = Expr::Node::Op::Num;
        n.value = std::stod(s.substr(pos, end - pos));
        pos = end;
        return make(std::move(n));
    }

    NodePtr ident() {
        skip_ws();
        std::size_t end = pos;
        while (end < s.size() && (std::isalnum(static_cast<unsigned char>(s[end])) || s[end] == '_')) ++end;
        std::string name = s.substr(pos, end - pos);
        pos = end;
        if (name == "t") {
            Expr::Node n; n.op = Expr::Node::Op::Var;
            return make(std::move(n));
        }
        if (name == "pi") {
            Expr::Node n; n.op = Expr::Node::Op::Num; n.value = pi;
            return make(std::move(n));
        }
        static const std::pair<const char*, double (*)(double)> funs[] = {
            {"sin", [](double x) { return std::sin(x); }},
            {"cos", [](double x) { return std::cos(x); }},
            {"tan", [](double x) { return std::tan(x); }},
            {"exp", [](double x) { return std::exp(x); }},
            {"log", [](double x) { return std::log(x); }},
            {"sqrt", [](double x) { return std::sqrt(x); }},
            {"abs", [](double x) { return std::fabs(x); }},
            {"tanh", [](double x) { return std::tanh(x); }},
            {"atan", [](double x) { return std::atan(x); }},
        };
        for (const auto& [fname, f] : funs) {
            if (name == fname) {
                if (!eat('(')) fail("expected '(' after function name");
                NodePtr arg = expr();
                if (!eat(')')) fail("expected ')'");
                Expr::Node n;
                n.op = Expr::Node::Op::Fun;
                n.fun = f;
                n.a = arg;
                return make(std::move(n));
            }
        }
        fail("unknown identifier '" + name + "'");
    }

    NodePtr atom() {
        skip_ws();
        if (pos >= s.size()) fail("unexpected end of expression");
        char c = s[pos];
        if (c == '(') {
            ++pos;
            NodePtr inner = expr();
            if (!eat(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return ident();
        fail("unexpected character");
    }

    NodePtr unary() {
        skip_ws();
        if (eat('-')) {
            Expr::Node n;
            n.op = Expr::Node::Op::Neg;
            n.a = unary();
            return make(std::move(n));
        }
        (void)eat('+');
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        skip_ws();
        if (eat('^')) {
            Expr::Node n;
            n.op = Expr::Node::Op::Pow;
            n.a = base;
            n.b = unary();   // right-associative
            return make(std::move(n));
        }
        return base;
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            skip_ws();
            if (eat('*')) {
                Expr::Node n; n.op = Expr::Node::Op::Mul; n.a = lhs; n.b = unary();
                lhs = make(std::move(n));
            } else if (eat('/')) {
                Expr::Node n; n.op = Expr::Node::Op::Div; n.a = lhs; n.b = unary();
                lhs = make(std::move(n));
            } else {
                return lhs;
            }
        }
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            skip_ws();
            if (eat('+')) {
                Expr::Node n; n.op = Expr::Node::Op::Add; n.a = lhs; n.b = term();
                lhs = make(std::move(n));
            } else if (eat('-')) {
                Expr::Node n; n.op = Expr::Node::Op::Sub; n.a = lhs; n.b = term();
                lhs = make(std::move(n));
            } else {
                return lhs;
            }
        }
    }
};

} // namespace

Expr Expr::parse(const std::string& text) {
    Parser p(text);
    Expr e;
    e.root_ = p.expr();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing characters");
    e.text_ = text;
    return e;
}

Expr Expr::constant(double value) {
    Expr e;
    Node n;
    n.op = Node::Op::Num;
    n.value = value;
    e.root_ = std::make_shared<Node>(std::move(n));
    e.text_ = std::to_string(value);
    return e;
}

double Expr::operator()(double t) const { return root_ ? root_->eval(t) : 0.0; }

bool Expr::is_constant() const { return !root_ || !root_->uses_var(); }

} // namespace adilab
