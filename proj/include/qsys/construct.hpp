#pragma once

#include "qsys/form.hpp"

#include <map>
#include <string>
#include <vector>

namespace qsys {

// Algebraic equation P(t_1..t_m, y) = 0, squarefree in the distinguished
// variable y.
struct AlgebraicSpec {
    Polynomial P;
    std::string y;
    int d = 0; // deg_y P

    static AlgebraicSpec make(Polynomial P, std::string y);
};

// Linear Pfaffian system satisfied by (1, y, ..., y^{d-1}) on {P = 0}; all
// entry denominators divide the y-discriminant of P. For d = 1 the basis is
// (1, y) so that the (rational) branch itself is a solution component.
MatrixOneForm from_algebraic(const AlgebraicSpec &spec);
// The y-discriminant used for the denominators (resultant of P and dP/dy).
Polynomial algebraic_discriminant(const AlgebraicSpec &spec);

// Euler system dX = (A/t) X: single finite pole at 0 with residue A.
FuchsianSystem euler(const GMat &A);
FuchsianSystem euler(const QMat &A);
FuchsianSystem euler_diag(const std::vector<Rational> &spectrum);

// 2x2 Fuchsian realization of the hypergeometric equation with residue
// spectra {0, 1-c} at t=0 and {0, c-a-b} at t=1. The scalar exponents at
// infinity are {a, b}; the matrix residue there carries {a, b-1} (the Fuchs
// relation forbids realizing all three scalar pairs at once).
struct HypergeometricSystem {
    FuchsianSystem system;
    std::vector<Rational> exponents_at_zero;
    std::vector<Rational> exponents_at_one;
    std::vector<Rational> scalar_exponents_at_infinity; // {a, b}
};
HypergeometricSystem hypergeometric(const Rational &a, const Rational &b, const Rational &c);

// Block-diagonal sum; inputs must share the variable list.
MatrixOneForm direct_sum(const MatrixOneForm &omega, const MatrixOneForm &theta);

// Omega (x) I + I (x) Theta in the lexicographic pair basis z_ij = x_i y_j.
MatrixOneForm tensor_product(const MatrixOneForm &omega, const MatrixOneForm &theta);

// Index map for the monomial extension: exponents over the symbols
// (t_1..t_m, X_11..X_nn), graded-lex ordered.
struct MonomialIndexMap {
    int m = 0, n = 0, delta = 0;
    std::vector<std::vector<int>> monomials;
    std::map<std::vector<int>, int> position;

    int index_of(const std::vector<int> &t_exponents, const Mat<int> &x_exponents) const;
    std::size_t size() const { return monomials.size(); }
};

struct MonomialExtension {
    MatrixOneForm system;
    MonomialIndexMap map;
};

// System satisfied by every monomial t^alpha X^beta with |alpha|+|beta| <= delta.
MonomialExtension monomial_extension(const MatrixOneForm &omega, int delta);

// Rational map f: s-space -> t-space defined over Q.
struct RationalMapSpec {
    std::vector<std::string> source_vars;
    std::vector<std::string> target_vars;
    std::vector<RationalFunction> components; // one per target variable, in source vars

    static RationalMapSpec make(std::vector<std::string> source_vars, std::vector<std::string> target_vars,
                                std::vector<RationalFunction> components);
};

// f*Omega, expanded exactly to rational functions of the source variables.
MatrixOneForm pullback(const MatrixOneForm &omega, const RationalMapSpec &f);

// Input/output complexity echo, so that no construction silently blows up.
struct ConstructionEcho {
    std::string operation;
    std::vector<ComplexityReport> inputs;
    ComplexityReport output;
};
ConstructionEcho make_echo(const std::string &operation, const std::vector<ComplexityReport> &inputs,
                           const ComplexityReport &output);

ComplexityReport complexity(const FuchsianSystem &f);

} // namespace qsys
