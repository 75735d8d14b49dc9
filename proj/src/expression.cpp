#include "sublap/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

namespace sublap {

struct Expression::Node {
    enum class Op { number, var_x, var_y, add, sub, mul, div, pow, neg, sin, cos, exp, abs };

    Op op = Op::number;
    double value = 0.0;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;

    double eval(double x, double y) const
    {
        switch (op) {
        case Op::number: return value;
        case Op::var_x: return x;
        case Op::var_y: return y;
        case Op::add: return lhs->eval(x, y) + rhs->eval(x, y);
        case Op::sub: return lhs->eval(x, y) - rhs->eval(x, y);
        case Op::mul: return lhs->eval(x, y) * rhs->eval(x, y);
        case Op::div: return lhs->eval(x, y) / rhs->eval(x, y);
        case Op::pow: return std::pow(lhs->eval(x, y), rhs->eval(x, y));
        case Op::neg: return -lhs->eval(x, y);
        case Op::sin: return std::sin(lhs->eval(x, y));
        case Op::cos: return std::cos(lhs->eval(x, y));
        case Op::exp: return std::exp(lhs->eval(x, y));
        case Op::abs: return std::abs(lhs->eval(x, y));
        }
        return 0.0;
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Op = Expression::Node::Op;

NodePtr leaf(Op op, double value = 0.0)
{
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->value = value;
    return n;
}

NodePtr node(Op op, NodePtr lhs, NodePtr rhs = nullptr)
{
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

// Recursive descent:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' unary)?
//   primary := number | name | name '(' expr ')' | '(' expr ')'
class Parser {
public:
    explicit Parser(const std::string& s) : src_(s) {}

    NodePtr parse()
    {
        NodePtr e = expr();
        skip();
        if (pos_ != src_.size())
            fail("unexpected '" + std::string(1, src_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const
    {
        throw ExpressionError(what, pos_);
    }

    void skip()
    {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
    }

    bool accept(char c)
    {
        skip();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr()
    {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+'))
                lhs = node(Op::add, lhs, term());
            else if (accept('-'))
                lhs = node(Op::sub, lhs, term());
            else
                return lhs;
        }
    }

    NodePtr term()
    {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*'))
                lhs = node(Op::mul, lhs, unary());
            else if (accept('/'))
                lhs = node(Op::div, lhs, unary());
            else
                return lhs;
        }
    }

    NodePtr unary()
    {
        if (accept('-'))
            return node(Op::neg, unary());
        if (accept('+'))
            return unary();
        return power();
    }

    NodePtr power()
    {
        NodePtr base = primary();
        if (accept('^'))
            return node(Op::pow, base, unary());
        return base;
    }

    NodePtr primary()
    {
        skip();
        if (pos_ >= src_.size())
            fail("unexpected end of expression");
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!accept(')'))
                fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return number();
        if (std::isalpha(static_cast<unsigned char>(c)))
            return name();
        fail("unexpected '" + std::string(1, c) + "'");
    }

    NodePtr number()
    {
        const char* first = src_.data() + pos_;
        const char* last = src_.data() + src_.size();
        double v = 0.0;
        const auto res = std::from_chars(first, last, v);
        if (res.ec != std::errc())
            fail("malformed number");
        pos_ += static_cast<std::size_t>(res.ptr - first);
        return leaf(Op::number, v);
    }

    NodePtr name()
    {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        const std::string id = src_.substr(start, pos_ - start);
        if (id == "x")
            return leaf(Op::var_x);
        if (id == "y")
            return leaf(Op::var_y);
        if (id == "pi")
            return leaf(Op::number, std::numbers::pi);
        if (id == "e")
            return leaf(Op::number, std::numbers::e);

        Op fn;
        if (id == "sin")
            fn = Op::sin;
        else if (id == "cos")
            fn = Op::cos;
        else if (id == "exp")
            fn = Op::exp;
        else if (id == "abs")
            fn = Op::abs;
        else {
            pos_ = start;
            fail("unknown identifier '" + id + "'");
        }
        if (!accept('('))
            fail("expected '(' after " + id);
        NodePtr arg = expr();
        if (!accept(')'))
            fail("expected ')'");
        return node(fn, arg);
    }

    const std::string& src_;
    std::size_t pos_ = 0;
};

} // namespace

ExpressionError::ExpressionError(const std::string& message, std::size_t position)
    : Error("expression error at column " + std::to_string(position + 1) + ": " + message), position_(position)
{
}

Expression Expression::parse(const std::string& source)
{
    Expression e;
    e.root_ = Parser(source).parse();
    e.source_ = source;
    return e;
}

double Expression::operator()(double x, double y) const
{
    return root_->eval(x, y);
}

} // namespace sublap
