#pragma once

#include <gmpxx.h>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qsys {

using Int = mpz_class;

// Exact rational p/q, q >= 1, gcd(|p|,q) = 1 (mpq_class keeps it canonical).
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long n) : v_(n) {}
    Rational(const Int &n) : v_(n) {}
    Rational(long n, long d) : v_(n, d) {
        if (d == 0) throw std::domain_error("rational with zero denominator");
        v_.canonicalize();
    }
    Rational(const Int &n, const Int &d) : v_(n, d) {
        if (d == 0) throw std::domain_error("rational with zero denominator");
        v_.canonicalize();
    }
    explicit Rational(const mpq_class &q) : v_(q) { v_.canonicalize(); }

    // Accepts "p", "p/q" and decimal-free signs, e.g. "-3/4".
    static Rational parse(const std::string &s);

    Int num() const { return Int(v_.get_num()); }
    Int den() const { return Int(v_.get_den()); }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }

    Rational abs() const { return Rational(mpq_class(::abs(v_))); }
    Rational inverse() const {
        if (is_zero()) throw std::domain_error("division by zero rational");
        return Rational(mpq_class(1 / v_));
    }
    Rational pow(long e) const;

    double to_double() const { return v_.get_d(); }
    std::string str() const;

    friend Rational operator+(const Rational &a, const Rational &b) { return Rational(mpq_class(a.v_ + b.v_)); }
    friend Rational operator-(const Rational &a, const Rational &b) { return Rational(mpq_class(a.v_ - b.v_)); }
    friend Rational operator*(const Rational &a, const Rational &b) { return Rational(mpq_class(a.v_ * b.v_)); }
    friend Rational operator/(const Rational &a, const Rational &b) {
        if (b.is_zero()) throw std::domain_error("division by zero rational");
        return Rational(mpq_class(a.v_ / b.v_));
    }
    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational &operator+=(const Rational &b) { v_ += b.v_; return *this; }
    Rational &operator-=(const Rational &b) { v_ -= b.v_; return *this; }
    Rational &operator*=(const Rational &b) { v_ *= b.v_; return *this; }
    Rational &operator/=(const Rational &b) { *this = *this / b; return *this; }

    friend bool operator==(const Rational &a, const Rational &b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational &a, const Rational &b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational &a, const Rational &b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational &a, const Rational &b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational &a, const Rational &b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational &a, const Rational &b) { return a.v_ >= b.v_; }

private:
    mpq_class v_;
};

Int gcd(const Int &a, const Int &b);
Int lcm(const Int &a, const Int &b);

// Element of Q(i).
struct GaussianRational {
    Rational re, im;

    GaussianRational() = default;
    GaussianRational(Rational r) : re(std::move(r)) {}
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    GaussianRational(long r) : re(r) {}

    // Accepts the expression grammar restricted to constants, e.g. "1/2+3i".
    static GaussianRational parse(const std::string &s);

    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    bool is_real() const { return im.is_zero(); }
    GaussianRational conj() const { return {re, -im}; }
    Rational norm() const { return re * re + im * im; } // |z|^2, exact
    std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }
    std::string str() const;

    friend GaussianRational operator+(const GaussianRational &a, const GaussianRational &b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend GaussianRational operator-(const GaussianRational &a, const GaussianRational &b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend GaussianRational operator*(const GaussianRational &a, const GaussianRational &b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend GaussianRational operator/(const GaussianRational &a, const GaussianRational &b) {
        Rational n = b.norm();
        if (n.is_zero()) throw std::domain_error("division by zero Gaussian rational");
        GaussianRational p = a * b.conj();
        return {p.re / n, p.im / n};
    }
    GaussianRational operator-() const { return {-re, -im}; }
    friend bool operator==(const GaussianRational &a, const GaussianRational &b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussianRational &a, const GaussianRational &b) { return !(a == b); }
};

} // namespace qsys
