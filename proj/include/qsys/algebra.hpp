#pragma once

#include "qsys/poly.hpp"

#include <utility>
#include <vector>

namespace qsys {

// Multivariate gcd over Q, returned primitive over Z with positive leading
// (graded-lex) coefficient. gcd(0,0) throws ("gcd of zeros").
Polynomial poly_gcd(const Polynomial &p, const Polynomial &q);
// The spec-facing flavour: gcd computed with var as the main variable and the
// result normalized primitive/positive-leading (monic-in-var up to content).
Polynomial poly_gcd(const Polynomial &p, const Polynomial &q, const std::string &var);

Polynomial poly_lcm(const Polynomial &p, const Polynomial &q);

// content/primitive part with respect to one variable (coefficients are
// polynomials in the remaining variables)
Polynomial content_in(const Polynomial &p, const std::string &var);
Polynomial primitive_part_in(const Polynomial &p, const std::string &var);

// p / gcd(p, dp/dvar) for every variable, primitive positive-leading
Polynomial squarefree_part(const Polynomial &p);

// Sylvester-matrix resultant, p-rows first. Throws unless both degrees in var
// are positive.
Polynomial resultant(const Polynomial &p, const Polynomial &q, const std::string &var);

// Fraction-free determinant of a square polynomial matrix (Bareiss).
Polynomial poly_det(std::vector<std::vector<Polynomial>> mat);

// Ratio of polynomials over Q, kept in lowest terms with integer coefficients,
// joint content 1 and positive leading (graded-lex) denominator coefficient.
class RationalFunction {
public:
    RationalFunction() : num_(), den_(Polynomial::constant(Rational(1))) {}
    RationalFunction(const Rational &c) : RationalFunction(Polynomial::constant(c)) {}
    explicit RationalFunction(Polynomial num) : num_(std::move(num)), den_(Polynomial::constant(Rational(1))) {
        normalize();
    }
    RationalFunction(Polynomial num, Polynomial den);

    static RationalFunction variable(const std::string &name) {
        return RationalFunction(Polynomial::variable(name));
    }

    const Polynomial &num() const { return num_; }
    const Polynomial &den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.is_constant(); }

    friend RationalFunction operator+(const RationalFunction &a, const RationalFunction &b);
    friend RationalFunction operator-(const RationalFunction &a, const RationalFunction &b);
    friend RationalFunction operator*(const RationalFunction &a, const RationalFunction &b);
    friend RationalFunction operator/(const RationalFunction &a, const RationalFunction &b);
    RationalFunction operator-() const;
    friend bool operator==(const RationalFunction &a, const RationalFunction &b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RationalFunction &a, const RationalFunction &b) { return !(a == b); }

    RationalFunction derivative(const std::string &var) const;
    RationalFunction subst(const std::map<std::string, RationalFunction> &values) const;
    GaussianRational eval(const std::map<std::string, GaussianRational> &point) const;
    std::complex<double> eval(const std::map<std::string, std::complex<double>> &point) const;

    std::string str() const;

private:
    void normalize();
    Polynomial num_, den_;
};

// --- dense univariate polynomials over the field Q(t_remaining) ------------
// coeffs[k] multiplies x^k; trailing zeros trimmed.
using RFPoly = std::vector<RationalFunction>;

RFPoly rfpoly_from(const Polynomial &p, const std::string &var);
Polynomial rfpoly_numerator_form(const RFPoly &p, const std::string &var, Polynomial *common_den = nullptr);
int rfpoly_deg(const RFPoly &p); // -1 for zero
RFPoly rfpoly_mul(const RFPoly &a, const RFPoly &b);
RFPoly rfpoly_sub(const RFPoly &a, const RFPoly &b);
// division with remainder over the coefficient field
void rfpoly_divrem(const RFPoly &a, const RFPoly &b, RFPoly &q, RFPoly &r);
// extended Euclid: a*s + b*t = g (g not normalized)
RFPoly rfpoly_ext_gcd(const RFPoly &a, const RFPoly &b, RFPoly &s, RFPoly &t);

// --- spec operations --------------------------------------------------------

// Lemma "elimination on a hypersurface": R = U/Q on {S = 0}, with
// U in Z[t,x], Q in Z[t], deg_x U <= deg_x S - 1. Verified exactly before
// returning: S | (U*B - Q*A).
struct EliminationResult {
    Polynomial U;
    Polynomial Q;
    // measured size of the output representation (largest |integer coeff|)
    Int max_coefficient;
};
EliminationResult eliminate_on_hypersurface(const RationalFunction &R, const Polynomial &S,
                                            const std::string &x);

// monic char polynomial det(lambda I - M), exact; variable name "lambda"
Polynomial char_poly(const std::vector<std::vector<Rational>> &M, const std::string &var = "lambda");
// Faddeev-LeVerrier over Q(i); coefficients c[0] + c[1] lambda + ... + lambda^n
std::vector<GaussianRational> char_poly_gaussian(const std::vector<std::vector<GaussianRational>> &M);

struct RationalRoots {
    std::vector<std::pair<Rational, int>> roots; // (root, multiplicity), sorted
    bool splits_over_q = false;                  // sum of multiplicities == degree
    Polynomial deflated;                         // no rational roots remain
};
RationalRoots rational_roots(const Polynomial &p_univariate);

// number of distinct real roots (Sturm, after squarefree reduction)
int real_root_count(const Polynomial &p_univariate);

// Divisors of |n| in ascending order (n != 0). Throws when n resists the
// built-in factoring effort (trial division + Pollard rho).
std::vector<Int> divisors(const Int &n);

} // namespace qsys
