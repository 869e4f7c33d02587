#pragma once

#include <memory>
#include <string>

#include "iwsk/field.hpp"
#include "iwsk/util.hpp"

namespace iwsk {

/// Syntax error with the byte offset of the offending character.
struct ParseError : ConfigError {
    std::size_t offset;
    ParseError(const std::string& msg, std::size_t off)
        : ConfigError(msg + " (byte " + std::to_string(off) + ")"), offset(off) {}
};

/// Parsed closed-form coupling lambda(x, y): literals, x, y, + - * / ^,
/// unary minus, exp/sin/cos/tanh/abs. Precedence ^ > unary- > */ > +-,
/// with ^ right-associative. Immutable; eval is pure.
class CouplingExpr {
  public:
    struct Node;

    CouplingExpr() = default;

    static CouplingExpr parse(const std::string& src);
    static CouplingExpr constant(double v);

    /// IEEE double evaluation. Division by zero and 0^negative raise NumericError.
    double eval(double x, double y) const;

    /// Fully parenthesized form; parse(print(e)) reproduces the AST.
    std::string to_string() const;

    bool empty() const { return !root_; }

    CouplingFn fn() const {
        auto self = *this;
        return [self](double x, double y) { return self.eval(x, y); };
    }

  private:
    std::shared_ptr<const Node> root_;
};

}  // namespace iwsk
