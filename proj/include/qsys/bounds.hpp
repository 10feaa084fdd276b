#pragma once

#include "qsys/form.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qsys {

// Values that may only be representable through their logarithms.
struct LogMagnitude {
    std::optional<double> value; // set when the bound fits a double
    double log2 = 0;             // may be +inf when only log2log2 fits
    double log2log2 = 0;

    static LogMagnitude from_value(double v);
    static LogMagnitude from_log2(double l2);
    static LogMagnitude from_log2log2(double l2l2);

    // does an empirical count respect the bound? (compared in log space)
    bool admits(double count) const;
};

struct ConstantProvenance {
    std::string constant;
    std::string source; // "paper-explicit" or "configurable-default"
    double configured = 0;
};

// The paper states the bound shapes but not the polynomial constants; those
// are configuration with default 1 and are stamped as such in every report.
struct BoundConfig {
    double rho_poly_coefficient = 1.0; // uniform coefficient of Poly(n,m)
    std::optional<double> rho_poly_override;
    double q_poly_K = 1.0; // Poly(d,n,m) = K d^5 m^5 n^20
    std::optional<double> q_poly_override;
    double field_ext_poly_coefficient = 1.0; // Poly(delta) = coeff * delta
    std::optional<double> field_ext_poly_override;
};

struct BoundReport {
    std::string kind; // euler | rho-double-exponential | q-complexity | field-extension
    LogMagnitude value;
    // inputs as used
    int n = 0, m = 0, d = 0;
    double s = 0;
    double rho_value = 0;
    int delta = 0;
    std::vector<Rational> spectrum;
    std::vector<ConstantProvenance> constants;
    std::string formula;
    // for the field-extension report: the direct 2^2^Poly(delta) shape
    std::optional<LogMagnitude> direct_shape;
};

// (n-1) + 2 pi |l_1 - l_n| with the eigenvalues taken in monotone order.
BoundReport euler_bound(std::vector<Rational> spectrum);

// rho(Omega)^(2^Poly(n,m)), Poly with all monomials up to degree 1 + m n^2 + m.
BoundReport rho_bound(const FuchsianSystem &f, const BoundConfig &config = {});

// s^(2^Poly(d,n,m)) with Poly = K d^5 m^5 n^20, hypothesis s >= 2.
BoundReport q_bound(const ComplexityReport &c, const BoundConfig &config = {});

// Extension-system shape for degree-delta elements of the solution field:
// composes the monomial-extension dimensions with q_bound and also reports the
// direct 2^2^Poly(delta) form.
BoundReport field_extension_bound(const ComplexityReport &c, int delta, const BoundConfig &config = {});

// dimensions of the degree-delta monomial extension used by the bound
double monomial_count(int symbols, int delta); // C(symbols + delta, delta)

} // namespace qsys
