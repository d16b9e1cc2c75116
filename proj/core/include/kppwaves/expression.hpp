#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace kppwaves {

/// Arithmetic expression in the single variable r.
///
/// Grammar: +, -, *, /, ^ (right-associative power), unary minus,
/// parentheses, numeric literals, the variable `r`, and the functions
/// sqrt, exp, log.
class Expression {
  public:
    static Expression parse(std::string_view source);  // throws ParseError

    double operator()(double r) const;

    const std::string& source() const { return source_; }

    struct Node;

  private:
    Expression(std::shared_ptr<const Node> root, std::string source);

    std::shared_ptr<const Node> root_;
    std::string source_;
};

}  // namespace kppwaves
