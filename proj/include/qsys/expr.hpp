#pragma once

#include "qsys/algebra.hpp"

#include <string>
#include <vector>

namespace qsys {

// Thrown with a 1-based column pointing into the offending expression.
struct ParseError : std::runtime_error {
    ParseError(const std::string &msg, std::size_t column)
        : std::runtime_error(msg + " (column " + std::to_string(column) + ")"), column(column) {}
    std::size_t column;
};

// Grammar: integers, identifiers, + - * / ^ with the usual precedence, unary
// minus, parentheses. `i` is the imaginary unit and is only legal in the
// Gaussian entry point below.

// Expression over Q(vars). Unknown identifiers and `i` are rejected.
RationalFunction parse_rational_function(const std::string &expr, const std::vector<std::string> &vars);

// Constant expression over Q(i). Any identifier other than `i` is rejected.
GaussianRational parse_gaussian(const std::string &expr);

// Constant expression over Q.
Rational parse_rational_const(const std::string &expr);

} // namespace qsys
