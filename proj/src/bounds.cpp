#include "qsys/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qsys {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();
} // namespace

LogMagnitude LogMagnitude::from_value(double v) {
    LogMagnitude out;
    out.value = v;
    out.log2 = v > 0 ? std::log2(v) : -kInf;
    out.log2log2 = out.log2 > 0 ? std::log2(out.log2) : -kInf;
    return out;
}

LogMagnitude LogMagnitude::from_log2(double l2) {
    LogMagnitude out;
    out.log2 = l2;
    out.log2log2 = l2 > 0 ? std::log2(l2) : -kInf;
    if (l2 < 1000) out.value = std::exp2(l2);
    return out;
}

LogMagnitude LogMagnitude::from_log2log2(double l2l2) {
    LogMagnitude out;
    out.log2log2 = l2l2;
    out.log2 = l2l2 < 1000 ? std::exp2(l2l2) : kInf;
    if (out.log2 < 1000) out.value = std::exp2(out.log2);
    return out;
}

bool LogMagnitude::admits(double count) const {
    if (count <= 0) return true;
    double c2 = std::log2(count);
    if (std::isfinite(log2)) return c2 <= log2;
    if (c2 <= 0) return true;
    return std::log2(c2) <= log2log2;
}

BoundReport euler_bound(std::vector<Rational> spectrum) {
    if (spectrum.empty()) throw std::invalid_argument("Euler bound needs a nonempty spectrum");
    std::sort(spectrum.begin(), spectrum.end());
    std::size_t n = spectrum.size();
    double spread = (spectrum.back() - spectrum.front()).to_double();
    double v = double(n - 1) + 2.0 * kPi * spread;

    BoundReport rep;
    rep.kind = "euler";
    rep.n = int(n);
    rep.m = 1;
    rep.spectrum = std::move(spectrum);
    rep.value = LogMagnitude::from_value(v);
    rep.constants.push_back({"2*pi", "paper-explicit", 2.0 * kPi});
    rep.constants.push_back({"chebyshev term n-1", "paper-explicit", double(n - 1)});
    std::ostringstream os;
    os << "(n-1) + 2*pi*|l_1 - l_n| = " << (n - 1) << " + 2*pi*" << spread;
    rep.formula = os.str();
    return rep;
}

namespace {

// sum of coeff * n^i * m^j over i + j <= degree
double full_degree_poly(double coeff, int n, int m, long degree) {
    double acc = 0;
    for (long i = 0; i <= degree; ++i) {
        double ni = std::pow(double(n), double(i));
        for (long j = 0; i + j <= degree; ++j) acc += coeff * ni * std::pow(double(m), double(j));
        if (!std::isfinite(acc)) return kInf;
    }
    return acc;
}

} // namespace

BoundReport rho_bound(const FuchsianSystem &f, const BoundConfig &config) {
    BoundReport rep;
    rep.kind = "rho-double-exponential";
    rep.n = f.n();
    rep.m = int(f.pole_count());
    rep.rho_value = rho(f);

    long degree = 1 + long(rep.m) * long(rep.n) * long(rep.n) + long(rep.m);
    double poly;
    if (config.rho_poly_override) {
        poly = *config.rho_poly_override;
        rep.constants.push_back({"Poly(n,m) override", "configurable-default", poly});
    } else {
        poly = full_degree_poly(config.rho_poly_coefficient, rep.n, rep.m, degree);
        rep.constants.push_back(
            {"Poly(n,m) uniform coefficient", "configurable-default", config.rho_poly_coefficient});
    }
    rep.constants.push_back({"Poly(n,m) total degree 1+m*n^2+m", "paper-explicit", double(degree)});

    // log2(bound) = 2^poly * log2(rho); log2log2 = poly + log2 log2 rho
    double log2rho = std::log2(rep.rho_value);
    double l2l2 = poly + std::log2(log2rho);
    double l2 = poly < 1000 ? std::exp2(poly) * log2rho : kInf;
    rep.value = std::isfinite(l2) ? LogMagnitude::from_log2(l2) : LogMagnitude{};
    if (!std::isfinite(l2)) {
        rep.value.log2 = kInf;
        rep.value.log2log2 = l2l2;
    } else {
        rep.value.log2log2 = l2l2;
    }
    std::ostringstream os;
    os << "rho^(2^Poly(n,m)), rho = " << rep.rho_value << ", Poly = " << poly;
    rep.formula = os.str();
    return rep;
}

BoundReport q_bound(const ComplexityReport &c, const BoundConfig &config) {
    double s = c.s.get_d();
    if (s < 2) throw std::invalid_argument("complexity bound requires s >= 2");
    BoundReport rep;
    rep.kind = "q-complexity";
    rep.n = c.n;
    rep.m = c.m;
    rep.d = c.d;
    rep.s = s;

    double poly;
    if (config.q_poly_override) {
        poly = *config.q_poly_override;
        rep.constants.push_back({"Poly(d,n,m) override", "configurable-default", poly});
    } else {
        poly = config.q_poly_K * std::pow(double(c.d), 5.0) * std::pow(double(c.m), 5.0) *
               std::pow(double(c.n), 20.0);
        rep.constants.push_back({"Poly(d,n,m) multiplier K", "configurable-default", config.q_poly_K});
    }
    rep.constants.push_back({"Poly shape d^5 m^5 n^20", "paper-explicit", 0});

    double log2s = std::log2(s);
    double l2 = poly < 1000 ? std::exp2(poly) * log2s : kInf;
    double l2l2 = poly + std::log2(log2s);
    if (std::isfinite(l2)) {
        rep.value = LogMagnitude::from_log2(l2);
        rep.value.log2log2 = l2l2;
    } else {
        rep.value.log2 = kInf;
        rep.value.log2log2 = l2l2;
    }
    std::ostringstream os;
    os << "s^(2^Poly(d,n,m)), s = " << s << ", Poly = " << poly;
    rep.formula = os.str();
    return rep;
}

double monomial_count(int symbols, int delta) {
    // C(symbols + delta, delta)
    double acc = 1;
    for (int k = 1; k <= delta; ++k) acc = acc * double(symbols + k) / double(k);
    return acc;
}

BoundReport field_extension_bound(const ComplexityReport &c, int delta, const BoundConfig &config) {
    if (delta < 1) throw std::invalid_argument("field extension bound needs delta >= 1");
    // extension-system dimensions from the monomial construction
    double n_ext = monomial_count(c.m + c.n * c.n, delta);
    ComplexityReport ext;
    ext.n = n_ext < 2e9 ? int(n_ext) : std::numeric_limits<int>::max();
    ext.m = c.m;
    ext.d = c.d;
    ext.s = c.s * delta; // Leibniz multiplicities scale the coefficients by <= delta
    if (ext.s < 2) ext.s = 2;

    BoundReport rep = q_bound(ext, config);
    rep.kind = "field-extension";
    rep.delta = delta;
    rep.constants.push_back({"extension dimension C(m+n^2+delta, delta)", "paper-explicit", n_ext});
    rep.constants.push_back({"extension complexity s' = delta*s", "paper-explicit", ext.s.get_d()});

    double poly_delta = config.field_ext_poly_override ? *config.field_ext_poly_override
                                                       : config.field_ext_poly_coefficient * delta;
    rep.constants.push_back({"Poly(delta) for the direct 2^2^Poly shape", "configurable-default",
                             poly_delta});
    LogMagnitude direct;
    double l2 = poly_delta < 1000 ? std::exp2(poly_delta) : kInf;
    if (std::isfinite(l2)) {
        direct = LogMagnitude::from_log2(l2);
        direct.log2log2 = poly_delta;
    } else {
        direct.log2 = kInf;
        direct.log2log2 = poly_delta;
    }
    rep.direct_shape = direct;
    std::ostringstream os;
    os << rep.formula << "; extension n' = " << n_ext << ", direct shape 2^2^" << poly_delta;
    rep.formula = os.str();
    return rep;
}

} // namespace qsys
