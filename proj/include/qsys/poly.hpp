#pragma once

#include "qsys/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qsys {

// Sparse multivariate polynomial over Q. Variables are kept sorted by name and
// trimmed to those actually occurring, so equal polynomials compare equal
// regardless of how they were built. Exponent vectors are parallel to vars().
class Polynomial {
public:
    using Exponents = std::vector<int>;
    using TermMap = std::map<Exponents, Rational>;

    Polynomial() = default;

    static Polynomial constant(const Rational &c);
    static Polynomial variable(const std::string &name);
    // term c * prod vars[i]^exps[i]; vars need not be sorted here
    static Polynomial term(const Rational &c, const std::vector<std::string> &vars, const Exponents &exps);

    const std::vector<std::string> &vars() const { return vars_; }
    const TermMap &terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return vars_.empty(); }
    Rational constant_value() const; // 0 for the zero polynomial
    bool uses(const std::string &var) const;

    int total_degree() const;                    // -1 for the zero polynomial
    int degree_in(const std::string &var) const; // -1 for the zero polynomial

    friend Polynomial operator+(const Polynomial &a, const Polynomial &b);
    friend Polynomial operator-(const Polynomial &a, const Polynomial &b);
    friend Polynomial operator*(const Polynomial &a, const Polynomial &b);
    Polynomial operator-() const;
    friend Polynomial operator*(const Polynomial &a, const Rational &c);
    friend Polynomial operator*(const Rational &c, const Polynomial &a) { return a * c; }
    Polynomial pow(unsigned e) const;

    friend bool operator==(const Polynomial &a, const Polynomial &b);
    friend bool operator!=(const Polynomial &a, const Polynomial &b) { return !(a == b); }
    // arbitrary strict total order (for use as map key)
    friend bool operator<(const Polynomial &a, const Polynomial &b);

    Polynomial derivative(const std::string &var) const;

    // View as univariate in var: result[k] = coefficient of var^k, a polynomial
    // in the remaining variables. Size degree_in(var)+1 (empty for zero).
    std::vector<Polynomial> coeffs_in(const std::string &var) const;
    static Polynomial from_coeffs_in(const std::string &var, const std::vector<Polynomial> &coeffs);

    // Leading coefficient/monomial in graded-lex order (ties broken by the
    // sorted variable list). Zero polynomial has no leading data.
    Rational leading_coefficient() const;

    Polynomial rename_var(const std::string &from, const std::string &to) const;
    Polynomial subst(const std::string &var, const Polynomial &value) const;

    Rational eval(const std::map<std::string, Rational> &point) const;
    GaussianRational eval(const std::map<std::string, GaussianRational> &point) const;
    std::complex<double> eval(const std::map<std::string, std::complex<double>> &point) const;

    // Positive rational c such that (*this)/c has coprime integer coefficients.
    // Zero polynomial -> 1.
    Rational integer_content() const;
    // Largest |integer coefficient| of the content-cleared polynomial (the
    // complexity contribution); zero polynomial -> 0.
    Int max_integer_coefficient() const;

    std::string str() const;

private:
    void insert_term(const Exponents &e, const Rational &c);
    void trim();

    std::vector<std::string> vars_; // sorted, no duplicates, all occurring
    TermMap terms_;                 // no zero coefficients
};

// Exact division a / b; returns nothing when b does not divide a.
std::optional<Polynomial> try_exact_div(const Polynomial &a, const Polynomial &b);
// Throwing flavour for places where divisibility is an invariant.
Polynomial exact_div(const Polynomial &a, const Polynomial &b);

} // namespace qsys
