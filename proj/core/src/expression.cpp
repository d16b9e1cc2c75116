#include "kppwaves/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "kppwaves/errors.hpp"

namespace kppwaves {

struct Expression::Node {
    enum class Kind { Literal, Variable, Add, Sub, Mul, Div, Pow, Neg, Sqrt, Exp, Log };
    Kind kind;
    double value = 0.0;
    std::shared_ptr<const Node> lhs, rhs;

    double eval(double r) const {
        switch (kind) {
            case Kind::Literal: return value;
            case Kind::Variable: return r;
            case Kind::Add: return lhs->eval(r) + rhs->eval(r);
            case Kind::Sub: return lhs->eval(r) - rhs->eval(r);
            case Kind::Mul: return lhs->eval(r) * rhs->eval(r);
            case Kind::Div: return lhs->eval(r) / rhs->eval(r);
            case Kind::Pow: return std::pow(lhs->eval(r), rhs->eval(r));
            case Kind::Neg: return -lhs->eval(r);
            case Kind::Sqrt: return std::sqrt(lhs->eval(r));
            case Kind::Exp: return std::exp(lhs->eval(r));
            case Kind::Log: return std::log(lhs->eval(r));
        }
        return 0.0;
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = kind;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

NodePtr make_literal(double v) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = Kind::Literal;
    n->value = v;
    return n;
}

class Parser {
  public:
    explicit Parser(std::string_view src) : src_(src) {}

    NodePtr parse() {
        NodePtr e = expression();
        skip_ws();
        if (pos_ != src_.size()) fail("unexpected trailing input");
        return e;
    }

  private:
    std::string_view src_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        // Expressions are single-line; column is 1-based.
        throw ParseError(msg, 1, static_cast<int>(pos_) + 1);
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool consume(char c) {
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

    NodePtr expression() {
        NodePtr lhs = term();
        while (true) {
            if (consume('+')) {
                lhs = make(Kind::Add, lhs, term());
            } else if (consume('-')) {
                lhs = make(Kind::Sub, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        while (true) {
            if (consume('*')) {
                lhs = make(Kind::Mul, lhs, unary());
            } else if (consume('/')) {
                lhs = make(Kind::Div, lhs, unary());
            } else {
                return lhs;
            }
        }
    }

    NodePtr unary() {
        if (consume('-')) return make(Kind::Neg, unary());
        if (consume('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (consume('^')) return make(Kind::Pow, base, unary());  // right-assoc
        return base;
    }

    NodePtr atom() {
        skip_ws();
        if (pos_ >= src_.size()) fail("unexpected end of expression");
        char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expression();
            if (!consume(')')) fail("missing ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        fail(std::string("unexpected character '") + c + "'");
    }

    NodePtr number() {
        size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
            ++pos_;
        // Scientific notation.
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            size_t mark = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    ++pos_;
            } else {
                pos_ = mark;
            }
        }
        std::string text(src_.substr(start, pos_ - start));
        char* end = nullptr;
        double v = std::strtod(text.c_str(), &end);
        if (end != text.c_str() + text.size()) {
            pos_ = start;
            fail("malformed number '" + text + "'");
        }
        return make_literal(v);
    }

    NodePtr identifier() {
        size_t start = pos_;
        while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        std::string name(src_.substr(start, pos_ - start));
        if (name == "r") return make(Kind::Variable);
        Kind fn;
        if (name == "sqrt") {
            fn = Kind::Sqrt;
        } else if (name == "exp") {
            fn = Kind::Exp;
        } else if (name == "log") {
            fn = Kind::Log;
        } else {
            pos_ = start;
            fail("unknown identifier '" + name + "'");
        }
        if (!consume('(')) fail("expected '(' after function name");
        NodePtr arg = expression();
        if (!consume(')')) fail("missing ')'");
        return make(fn, arg);
    }
};

}  // namespace

Expression::Expression(std::shared_ptr<const Node> root, std::string source)
    : root_(std::move(root)), source_(std::move(source)) {}

Expression Expression::parse(std::string_view source) {
    Parser p(source);
    return Expression(p.parse(), std::string(source));
}

double Expression::operator()(double r) const { return root_->eval(r); }

}  // namespace kppwaves
