#include "qsys/rational.hpp"

#include <sstream>

namespace qsys {

Rational Rational::parse(const std::string &s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(Int(s));
        return Rational(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
    } catch (const std::invalid_argument &) {
        throw std::invalid_argument("bad rational literal: " + s);
    }
}

Rational Rational::pow(long e) const {
    if (e == 0) return Rational(1);
    Rational base = e > 0 ? *this : inverse();
    long k = e > 0 ? e : -e;
    Rational acc(1);
    while (k > 0) {
        if (k & 1) acc *= base;
        base *= base;
        k >>= 1;
    }
    return acc;
}

std::string Rational::str() const {
    std::string out = num().get_str();
    if (!is_integer()) out += "/" + den().get_str();
    return out;
}

Int gcd(const Int &a, const Int &b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

Int lcm(const Int &a, const Int &b) {
    Int l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

std::string GaussianRational::str() const {
    if (im.is_zero()) return re.str();
    std::string i_part = im.abs() == Rational(1) ? "i" : im.abs().str() + "i";
    std::string sign = im.sign() < 0 ? "-" : "+";
    if (re.is_zero()) return (im.sign() < 0 ? "-" : "") + i_part;
    return re.str() + sign + i_part;
}

} // namespace qsys
