#include "iwsk/coupling.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace iwsk {

namespace {
enum class Op { Number, VarX, VarY, Neg, Add, Sub, Mul, Div, Pow, Exp, Sin, Cos, Tanh, Abs };
}

struct CouplingExpr::Node {
    Op op;
    double value = 0.0;
    std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const CouplingExpr::Node>;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<CouplingExpr::Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodePtr make_num(double v) {
    auto n = std::make_shared<CouplingExpr::Node>();
    n->op = Op::Number;
    n->value = v;
    return n;
}

class Parser {
  public:
    explicit Parser(const std::string& src) : src_(src) {}

    NodePtr run() {
        NodePtr e = expr();
        skip_ws();
        if (pos_ != src_.size()) fail("unexpected trailing input");
        return e;
    }

  private:
    const std::string& src_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    NodePtr expr() {
        NodePtr e = term();
        for (;;) {
            if (eat('+'))
                e = make(Op::Add, e, term());
            else if (eat('-'))
                e = make(Op::Sub, e, term());
            else
                return e;
        }
    }

    NodePtr term() {
        NodePtr e = unary();
        for (;;) {
            if (eat('*'))
                e = make(Op::Mul, e, unary());
            else if (eat('/'))
                e = make(Op::Div, e, unary());
            else
                return e;
        }
    }

    NodePtr unary() {
        if (eat('-')) return make(Op::Neg, unary());
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (eat('^')) return make(Op::Pow, base, unary());  // right-associative
        return base;
    }

    NodePtr primary() {
        skip_ws();
        if (pos_ >= src_.size()) fail("unexpected end of expression");
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail("unexpected character");
    }

    NodePtr number() {
        double v = 0.0;
        const char* begin = src_.data() + pos_;
        const char* end = src_.data() + src_.size();
        auto [ptr, ec] = std::from_chars(begin, end, v);
        if (ec != std::errc()) fail("malformed number");
        pos_ = static_cast<std::size_t>(ptr - src_.data());
        return make_num(v);
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        const std::string name = src_.substr(start, pos_ - start);
        if (name == "x") return make(Op::VarX);
        if (name == "y") return make(Op::VarY);
        Op fn;
        if (name == "exp")
            fn = Op::Exp;
        else if (name == "sin")
            fn = Op::Sin;
        else if (name == "cos")
            fn = Op::Cos;
        else if (name == "tanh")
            fn = Op::Tanh;
        else if (name == "abs")
            fn = Op::Abs;
        else {
            pos_ = start;
            fail("unknown identifier '" + name + "'");
        }
        if (!eat('(')) fail("expected '(' after function name");
        NodePtr arg = expr();
        if (!eat(')')) fail("expected ')'");
        return make(fn, arg);
    }
};

double eval_node(const CouplingExpr::Node& n, double x, double y) {
    switch (n.op) {
        case Op::Number: return n.value;
        case Op::VarX: return x;
        case Op::VarY: return y;
        case Op::Neg: return -eval_node(*n.a, x, y);
        case Op::Add: return eval_node(*n.a, x, y) + eval_node(*n.b, x, y);
        case Op::Sub: return eval_node(*n.a, x, y) - eval_node(*n.b, x, y);
        case Op::Mul: return eval_node(*n.a, x, y) * eval_node(*n.b, x, y);
        case Op::Div: {
            const double den = eval_node(*n.b, x, y);
            if (den == 0.0) throw NumericError("coupling eval: division by zero");
            return eval_node(*n.a, x, y) / den;
        }
        case Op::Pow: {
            const double base = eval_node(*n.a, x, y);
            const double e = eval_node(*n.b, x, y);
            if (base == 0.0 && e < 0.0) throw NumericError("coupling eval: 0^negative");
            return std::pow(base, e);
        }
        case Op::Exp: return std::exp(eval_node(*n.a, x, y));
        case Op::Sin: return std::sin(eval_node(*n.a, x, y));
        case Op::Cos: return std::cos(eval_node(*n.a, x, y));
        case Op::Tanh: return std::tanh(eval_node(*n.a, x, y));
        case Op::Abs: return std::abs(eval_node(*n.a, x, y));
    }
    throw NumericError("coupling eval: corrupt AST");
}

void print_node(const CouplingExpr::Node& n, std::string& out) {
    auto binary = [&](const char* op) {
        out += '(';
        print_node(*n.a, out);
        out += op;
        print_node(*n.b, out);
        out += ')';
    };
    auto func = [&](const char* name) {
        out += name;
        out += '(';
        print_node(*n.a, out);
        out += ')';
    };
    switch (n.op) {
        case Op::Number: {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", n.value);
            out += buf;
            return;
        }
        case Op::VarX: out += 'x'; return;
        case Op::VarY: out += 'y'; return;
        case Op::Neg:
            out += "(-";
            print_node(*n.a, out);
            out += ')';
            return;
        case Op::Add: binary("+"); return;
        case Op::Sub: binary("-"); return;
        case Op::Mul: binary("*"); return;
        case Op::Div: binary("/"); return;
        case Op::Pow: binary("^"); return;
        case Op::Exp: func("exp"); return;
        case Op::Sin: func("sin"); return;
        case Op::Cos: func("cos"); return;
        case Op::Tanh: func("tanh"); return;
        case Op::Abs: func("abs"); return;
    }
}

}  // namespace

CouplingExpr CouplingExpr::parse(const std::string& src) {
    CouplingExpr e;
    e.root_ = Parser(src).run();
    return e;
}

CouplingExpr CouplingExpr::constant(double v) {
    CouplingExpr e;
    e.root_ = make_num(v);
    return e;
}

double CouplingExpr::eval(double x, double y) const {
    if (!root_) throw ConfigError("eval of empty coupling expression");
    return eval_node(*root_, x, y);
}

std::string CouplingExpr::to_string() const {
    if (!root_) return "";
    std::string out;
    print_node(*root_, out);
    return out;
}

}  // namespace iwsk
