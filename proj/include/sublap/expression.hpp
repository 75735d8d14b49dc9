#pragma once

#include "sublap/error.hpp"

#include <memory>
#include <string>

namespace sublap {

/// Parse failure; `position` is the 0-based offset into the source text.
class ExpressionError : public Error {
public:
    ExpressionError(const std::string& message, std::size_t position);

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Arithmetic over x and y: + - * / ^ (right-associative), unary minus,
/// sin cos exp abs, constants pi and e. Immutable once parsed.
class Expression {
public:
    struct Node;

    static Expression parse(const std::string& source);

    double operator()(double x, double y) const;
    const std::string& source() const noexcept { return source_; }

private:
    std::shared_ptr<const Node> root_;
    std::string source_;
};

} // namespace sublap
