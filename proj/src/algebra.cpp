#include "qsys/algebra.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace qsys {

namespace {

// primitive over Z, positive leading (graded-lex) coefficient
Polynomial normalize_primitive(const Polynomial &p) {
    if (p.is_zero()) return p;
    Rational c = p.integer_content();
    Polynomial out = p * c.inverse();
    if (out.leading_coefficient().sign() < 0) out = -out;
    return out;
}

Polynomial lc_in(const Polynomial &p, const std::string &var) {
    auto cs = p.coeffs_in(var);
    return cs.empty() ? Polynomial{} : cs.back();
}

// pseudo-remainder of a by b with respect to var (b nonzero in var)
Polynomial prem(Polynomial a, const Polynomial &b, const std::string &var) {
    int db = b.degree_in(var);
    Polynomial lb = lc_in(b, var);
    Polynomial x = Polynomial::variable(var);
    while (!a.is_zero() && a.degree_in(var) >= db) {
        int da = a.degree_in(var);
        Polynomial la = lc_in(a, var);
        a = lb * a - la * x.pow(unsigned(da - db)) * b;
        // control coefficient growth
        Rational c = a.integer_content();
        if (!a.is_zero() && c != Rational(1)) a = a * c.inverse();
    }
    return a;
}

Polynomial gcd_impl(const Polynomial &p, const Polynomial &q);

Polynomial content_impl(const Polynomial &p, const std::string &var) {
    auto coeffs = p.coeffs_in(var);
    Polynomial c;
    for (const auto &co : coeffs) {
        if (co.is_zero()) continue;
        c = c.is_zero() ? normalize_primitive(co) : gcd_impl(c, co);
        if (c.is_constant()) break;
    }
    if (c.is_zero()) return Polynomial::constant(Rational(1));
    return c.is_constant() ? Polynomial::constant(Rational(1)) : c;
}

Polynomial gcd_impl(const Polynomial &p, const Polynomial &q) {
    if (p.is_zero()) return normalize_primitive(q);
    if (q.is_zero()) return normalize_primitive(p);
    if (p.is_constant() || q.is_constant()) return Polynomial::constant(Rational(1));

    // main variable: last shared one, if any
    std::string var;
    for (const auto &v : p.vars())
        if (q.uses(v)) var = v;
    if (var.empty()) return Polynomial::constant(Rational(1));

    Polynomial cp = content_impl(p, var);
    Polynomial cq = content_impl(q, var);
    Polynomial a = normalize_primitive(exact_div(p, cp));
    Polynomial b = normalize_primitive(exact_div(q, cq));
    Polynomial cont = gcd_impl(cp, cq);

    if (a.degree_in(var) < b.degree_in(var)) std::swap(a, b);
    while (!b.is_zero() && b.degree_in(var) > 0) {
        Polynomial r = prem(a, b, var);
        if (!r.is_zero()) r = normalize_primitive(exact_div(r, content_impl(r, var)));
        a = b;
        b = r;
    }
    Polynomial g = b.is_zero() ? a : Polynomial::constant(Rational(1));
    g = normalize_primitive(exact_div(g, content_impl(g, var)));
    return normalize_primitive(cont * g);
}

// joint integer normalization of a pair (keeps the ratio): integer
// coefficients, overall gcd 1, positive leading coefficient of `den`
void normalize_pair(Polynomial &num, Polynomial &den) {
    if (num.is_zero()) {
        den = Polynomial::constant(Rational(1));
        return;
    }
    Rational cn = num.integer_content();
    Rational cd = den.integer_content();
    Rational joint(gcd(cn.num(), cd.num()), lcm(cn.den(), cd.den()));
    num = num * joint.inverse();
    den = den * joint.inverse();
    if (den.leading_coefficient().sign() < 0) {
        num = -num;
        den = -den;
    }
}

} // namespace

Polynomial poly_gcd(const Polynomial &p, const Polynomial &q) {
    if (p.is_zero() && q.is_zero()) throw std::domain_error("gcd of zeros");
    return gcd_impl(p, q);
}

Polynomial poly_gcd(const Polynomial &p, const Polynomial &q, const std::string &var) {
    (void)var; // gcd is canonical; var only guides the spec's reading of it
    return poly_gcd(p, q);
}

Polynomial poly_lcm(const Polynomial &p, const Polynomial &q) {
    if (p.is_zero() || q.is_zero()) return {};
    Polynomial g = poly_gcd(p, q);
    return normalize_primitive(exact_div(p * q, g));
}

Polynomial content_in(const Polynomial &p, const std::string &var) { return content_impl(p, var); }

Polynomial primitive_part_in(const Polynomial &p, const std::string &var) {
    if (p.is_zero()) return p;
    return exact_div(p, content_impl(p, var));
}

Polynomial squarefree_part(const Polynomial &p) {
    if (p.is_zero() || p.is_constant()) return normalize_primitive(p);
    Polynomial r = normalize_primitive(p);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto &v : std::vector<std::string>(r.vars())) {
            Polynomial d = r.derivative(v);
            if (d.is_zero()) continue;
            Polynomial g = poly_gcd(r, d);
            if (!g.is_constant()) {
                r = normalize_primitive(exact_div(r, g));
                changed = true;
            }
        }
    }
    return r;
}

Polynomial poly_det(std::vector<std::vector<Polynomial>> mat) {
    std::size_t n = mat.size();
    if (n == 0) return Polynomial::constant(Rational(1));
    for (const auto &row : mat)
        if (row.size() != n) throw std::invalid_argument("determinant of non-square matrix");
    Polynomial prev = Polynomial::constant(Rational(1));
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (mat[k][k].is_zero()) {
            std::size_t pivot = k;
            for (std::size_t i = k + 1; i < n; ++i)
                if (!mat[i][k].is_zero()) {
                    pivot = i;
                    break;
                }
            if (pivot == k) return {};
            std::swap(mat[k], mat[pivot]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                mat[i][j] = exact_div(mat[k][k] * mat[i][j] - mat[i][k] * mat[k][j], prev);
        prev = mat[k][k];
    }
    Polynomial det = mat[n - 1][n - 1];
    return sign < 0 ? -det : det;
}

Polynomial resultant(const Polynomial &p, const Polynomial &q, const std::string &var) {
    int dp = p.degree_in(var);
    int dq = q.degree_in(var);
    if (dp < 1 || dq < 1) throw std::invalid_argument("resultant needs both degrees positive");
    auto cp = p.coeffs_in(var);
    auto cq = q.coeffs_in(var);
    std::size_t n = std::size_t(dp + dq);
    std::vector<std::vector<Polynomial>> syl(n, std::vector<Polynomial>(n));
    // p-rows first
    for (int i = 0; i < dq; ++i)
        for (int j = 0; j <= dp; ++j)
            syl[std::size_t(i)][std::size_t(i + j)] = cp[std::size_t(dp - j)];
    for (int i = 0; i < dp; ++i)
        for (int j = 0; j <= dq; ++j)
            syl[std::size_t(dq + i)][std::size_t(i + j)] = cq[std::size_t(dq - j)];
    return poly_det(std::move(syl));
}

// --- RationalFunction -------------------------------------------------------

RationalFunction::RationalFunction(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
    normalize();
}

void RationalFunction::normalize() {
    if (num_.is_zero()) {
        den_ = Polynomial::constant(Rational(1));
        return;
    }
    if (!den_.is_constant()) {
        Polynomial g = poly_gcd(num_, den_);
        if (!g.is_constant()) {
            num_ = exact_div(num_, g);
            den_ = exact_div(den_, g);
        }
    }
    normalize_pair(num_, den_);
}

RationalFunction operator+(const RationalFunction &a, const RationalFunction &b) {
    return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator-(const RationalFunction &a, const RationalFunction &b) {
    return RationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator*(const RationalFunction &a, const RationalFunction &b) {
    return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
}

RationalFunction operator/(const RationalFunction &a, const RationalFunction &b) {
    if (b.is_zero()) throw std::domain_error("division by zero rational function");
    return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
}

RationalFunction RationalFunction::operator-() const {
    RationalFunction out = *this;
    out.num_ = -out.num_;
    return out;
}

RationalFunction RationalFunction::derivative(const std::string &var) const {
    return RationalFunction(num_.derivative(var) * den_ - num_ * den_.derivative(var), den_ * den_);
}

RationalFunction RationalFunction::subst(const std::map<std::string, RationalFunction> &values) const {
    auto subst_poly = [&values](const Polynomial &p) {
        RationalFunction acc;
        for (const auto &[e, c] : p.terms()) {
            RationalFunction t{Rational(c)};
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                auto it = values.find(p.vars()[i]);
                RationalFunction base = it != values.end() ? it->second
                                                           : RationalFunction::variable(p.vars()[i]);
                for (int k = 0; k < e[i]; ++k) t = t * base;
            }
            acc = acc + t;
        }
        return acc;
    };
    RationalFunction n = subst_poly(num_);
    RationalFunction d = subst_poly(den_);
    if (d.is_zero()) throw std::domain_error("substitution sends denominator to zero");
    return n / d;
}

GaussianRational RationalFunction::eval(const std::map<std::string, GaussianRational> &point) const {
    GaussianRational d = den_.eval(point);
    if (d.is_zero()) throw std::domain_error("rational function pole at evaluation point");
    return num_.eval(point) / d;
}

std::complex<double> RationalFunction::eval(const std::map<std::string, std::complex<double>> &point) const {
    return num_.eval(point) / den_.eval(point);
}

std::string RationalFunction::str() const {
    if (is_polynomial()) {
        if (den_ == Polynomial::constant(Rational(1))) return num_.str();
        return "(" + num_.str() + ")/" + den_.str();
    }
    return "(" + num_.str() + ")/(" + den_.str() + ")";
}

// --- dense univariate over Q(t) ---------------------------------------------

static void rfpoly_trim(RFPoly &p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

RFPoly rfpoly_from(const Polynomial &p, const std::string &var) {
    RFPoly out;
    for (const auto &c : p.coeffs_in(var)) out.emplace_back(c);
    rfpoly_trim(out);
    return out;
}

Polynomial rfpoly_numerator_form(const RFPoly &p, const std::string &var, Polynomial *common_den) {
    Polynomial den = Polynomial::constant(Rational(1));
    for (const auto &c : p)
        if (!c.is_zero()) den = poly_lcm(den, c.den());
    Polynomial out;
    Polynomial x = Polynomial::variable(var);
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k].is_zero()) continue;
        out = out + p[k].num() * exact_div(den, p[k].den()) * x.pow(unsigned(k));
    }
    if (common_den) *common_den = den;
    return out;
}

int rfpoly_deg(const RFPoly &p) { return int(p.size()) - 1; }

RFPoly rfpoly_mul(const RFPoly &a, const RFPoly &b) {
    if (a.empty() || b.empty()) return {};
    RFPoly out(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            out[i + j] = out[i + j] + a[i] * b[j];
    rfpoly_trim(out);
    return out;
}

RFPoly rfpoly_sub(const RFPoly &a, const RFPoly &b) {
    RFPoly out = a;
    if (b.size() > out.size()) out.resize(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) out[i] = out[i] - b[i];
    rfpoly_trim(out);
    return out;
}

void rfpoly_divrem(const RFPoly &a, const RFPoly &b, RFPoly &q, RFPoly &r) {
    if (b.empty()) throw std::domain_error("univariate division by zero");
    r = a;
    rfpoly_trim(r);
    q.assign(a.size(), RationalFunction{});
    const RationalFunction &lb = b.back();
    while (int(r.size()) >= int(b.size())) {
        std::size_t shift = r.size() - b.size();
        RationalFunction f = r.back() / lb;
        q[shift] = f;
        for (std::size_t i = 0; i < b.size(); ++i) r[shift + i] = r[shift + i] - f * b[i];
        r.pop_back(); // top coefficient cancels exactly
        rfpoly_trim(r);
    }
    rfpoly_trim(q);
}

RFPoly rfpoly_ext_gcd(const RFPoly &a, const RFPoly &b, RFPoly &s, RFPoly &t) {
    RFPoly r0 = a, r1 = b;
    rfpoly_trim(r0);
    rfpoly_trim(r1);
    RFPoly s0 = {RationalFunction{Rational(1)}}, s1 = {};
    RFPoly t0 = {}, t1 = {RationalFunction{Rational(1)}};
    while (!r1.empty()) {
        RFPoly q, r;
        rfpoly_divrem(r0, r1, q, r);
        RFPoly s2 = rfpoly_sub(s0, rfpoly_mul(q, s1));
        RFPoly t2 = rfpoly_sub(t0, rfpoly_mul(q, t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    s = s0;
    t = t0;
    return r0;
}

// --- elimination lemma -------------------------------------------------------

EliminationResult eliminate_on_hypersurface(const RationalFunction &R, const Polynomial &S,
                                            const std::string &x) {
    int d = S.degree_in(x);
    if (d < 1) throw std::invalid_argument("hypersurface polynomial must have positive degree in " + x);
    if (try_exact_div(R.den(), S)) throw std::invalid_argument("denominator of R divisible by S");

    RFPoly S_rf = rfpoly_from(S, x);
    RFPoly B_rf = rfpoly_from(R.den(), x);
    RFPoly A_rf = rfpoly_from(R.num(), x);

    RFPoly cof_s, cof_b;
    RFPoly g = rfpoly_ext_gcd(S_rf, B_rf, cof_s, cof_b);
    if (rfpoly_deg(g) > 0) throw std::domain_error("denominator vanishes identically on hypersurface");
    if (g.empty()) throw std::domain_error("degenerate elimination input");
    RationalFunction c = g[0];

    // 1/B == cof_b / c on {S = 0}; reduce A*cof_b mod S
    RFPoly q, w;
    rfpoly_divrem(rfpoly_mul(A_rf, cof_b), S_rf, q, w);
    for (auto &coeff : w) coeff = coeff / c;

    Polynomial Qden;
    Polynomial U = rfpoly_numerator_form(w, x, &Qden);
    if (U.is_zero()) {
        Qden = Polynomial::constant(Rational(1));
    } else {
        Polynomial g2 = poly_gcd(U, Qden);
        if (!g2.is_constant()) {
            U = exact_div(U, g2);
            Qden = exact_div(Qden, g2);
        }
    }
    normalize_pair(U, Qden);

    if (U.degree_in(x) > d - 1) throw std::logic_error("elimination failed to reduce degree");
    auto divisible = [&S](const Polynomial &p) { return p.is_zero() || bool(try_exact_div(p, S)); };
    if (!divisible(U * R.den() - Qden * R.num())) {
        // S may carry an x-content (vertical components of the hypersurface);
        // U*B - Q*A is divisible by the primitive part only, and one content
        // factor restores divisibility by S itself
        Polynomial cont = content_in(S, x);
        if (cont.is_constant()) throw std::logic_error("elimination identity S | (U*B - Q*A) failed");
        U = U * cont;
        Qden = Qden * cont;
        normalize_pair(U, Qden);
        if (!divisible(U * R.den() - Qden * R.num()))
            throw std::logic_error("elimination identity S | (U*B - Q*A) failed");
    }

    EliminationResult out;
    out.U = U;
    out.Q = Qden;
    out.max_coefficient = std::max(U.max_integer_coefficient(), Qden.max_integer_coefficient());
    return out;
}

// --- characteristic polynomials ---------------------------------------------

Polynomial char_poly(const std::vector<std::vector<Rational>> &M, const std::string &var) {
    std::size_t n = M.size();
    for (const auto &row : M)
        if (row.size() != n) throw std::invalid_argument("char_poly of non-square matrix");
    Polynomial lambda = Polynomial::variable(var);
    std::vector<std::vector<Polynomial>> mat(n, std::vector<Polynomial>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            mat[i][j] = -Polynomial::constant(M[i][j]);
            if (i == j) mat[i][j] = mat[i][j] + lambda;
        }
    return poly_det(std::move(mat));
}

std::vector<GaussianRational> char_poly_gaussian(const std::vector<std::vector<GaussianRational>> &M) {
    std::size_t n = M.size();
    for (const auto &row : M)
        if (row.size() != n) throw std::invalid_argument("char_poly of non-square matrix");
    using Mat = std::vector<std::vector<GaussianRational>>;
    auto mul = [n](const Mat &a, const Mat &b) {
        Mat c(n, std::vector<GaussianRational>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t j = 0; j < n; ++j)
                    c[i][j] = c[i][j] + a[i][k] * b[k][j];
        return c;
    };
    auto trace = [n](const Mat &a) {
        GaussianRational t;
        for (std::size_t i = 0; i < n; ++i) t = t + a[i][i];
        return t;
    };
    // Faddeev-LeVerrier: coefficients of det(lambda I - M), ascending order
    std::vector<GaussianRational> c(n + 1);
    c[n] = GaussianRational(Rational(1));
    Mat Ak = M;
    for (std::size_t k = 1; k <= n; ++k) {
        if (k > 1) {
            Mat shifted = Ak;
            for (std::size_t i = 0; i < n; ++i) shifted[i][i] = shifted[i][i] + c[n - k + 1];
            Ak = mul(M, shifted);
        }
        GaussianRational ck = -(trace(Ak) / GaussianRational(Rational(long(k))));
        c[n - k] = ck;
    }
    return c;
}

// --- rational roots ----------------------------------------------------------

namespace {

Int pollard_rho(const Int &n) {
    // Brent's cycle variant; n odd composite
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(0xC0FFEEUL);
    while (true) {
        Int y = rng.get_z_range(n - 3) + 2;
        Int cc = rng.get_z_range(n - 2) + 1;
        Int x = y, d(1);
        Int saved_x;
        int power = 1, lam = 0;
        auto f = [&n, &cc](const Int &v) {
            Int r = (v * v + cc) % n;
            return r;
        };
        while (d == 1) {
            if (power == lam) {
                x = y;
                power *= 2;
                lam = 0;
            }
            y = f(y);
            ++lam;
            d = gcd(::abs(x - y), n);
        }
        if (d != n) return d;
    }
}

void factor_into(Int n, std::vector<Int> &primes) {
    if (n <= 1) return;
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L}) {
        while (n % p == 0) {
            primes.emplace_back(p);
            n /= p;
        }
    }
    Int d(17);
    while (d * d <= n && d < 100000) {
        while (n % d == 0) {
            primes.push_back(d);
            n /= d;
        }
        d += 2;
    }
    if (n == 1) return;
    if (mpz_probab_prime_p(n.get_mpz_t(), 30)) {
        primes.push_back(n);
        return;
    }
    if (mpz_sizeinbase(n.get_mpz_t(), 2) > 128)
        throw std::domain_error("coefficient too large to factor for rational-root candidates");
    Int f = pollard_rho(n);
    factor_into(f, primes);
    factor_into(n / f, primes);
}

} // namespace

std::vector<Int> divisors(const Int &n) {
    if (n == 0) throw std::invalid_argument("divisors of zero");
    std::vector<Int> primes;
    factor_into(::abs(n), primes);
    std::sort(primes.begin(), primes.end());
    std::vector<Int> divs = {Int(1)};
    std::size_t i = 0;
    while (i < primes.size()) {
        std::size_t j = i;
        while (j < primes.size() && primes[j] == primes[i]) ++j;
        std::size_t mult = j - i;
        std::size_t base_count = divs.size();
        Int pk(1);
        for (std::size_t k = 1; k <= mult; ++k) {
            pk *= primes[i];
            for (std::size_t b = 0; b < base_count; ++b) {
                divs.push_back(divs[b] * pk);
                if (divs.size() > 200000) throw std::domain_error("too many divisor candidates");
            }
        }
        i = j;
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

namespace {

std::vector<Rational> dense_coeffs(const Polynomial &p, std::string *var_out) {
    if (p.vars().size() > 1) throw std::invalid_argument("expected univariate polynomial");
    std::string var = p.vars().empty() ? "x" : p.vars()[0];
    if (var_out) *var_out = var;
    int d = std::max(p.total_degree(), 0);
    std::vector<Rational> c(std::size_t(d) + 1, Rational(0));
    for (const auto &[e, coeff] : p.terms()) c[e.empty() ? 0 : std::size_t(e[0])] = coeff;
    return c;
}

Rational horner(const std::vector<Rational> &c, const Rational &x) {
    Rational acc(0);
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
    return acc;
}

// divide by (x - r); exact when r is a root
std::vector<Rational> deflate(const std::vector<Rational> &c, const Rational &r) {
    std::vector<Rational> q(c.size() - 1);
    Rational carry = c.back();
    for (std::size_t k = c.size() - 1; k-- > 0;) {
        q[k] = carry;
        carry = c[k] + carry * r;
    }
    return q;
}

} // namespace

RationalRoots rational_roots(const Polynomial &p) {
    if (p.is_zero()) throw std::invalid_argument("rational_roots of the zero polynomial");
    RationalRoots out;
    std::string var;
    std::vector<Rational> c = dense_coeffs(p, &var);
    int degree = int(c.size()) - 1;
    if (degree == 0) {
        out.splits_over_q = true;
        out.deflated = p;
        return out;
    }

    // root at zero
    int zero_mult = 0;
    while (c.size() > 1 && c.front().is_zero()) {
        c.erase(c.begin());
        ++zero_mult;
    }
    if (zero_mult > 0) out.roots.emplace_back(Rational(0), zero_mult);

    if (c.size() > 1) {
        // clear to integer coefficients
        Int den_lcm(1);
        for (const auto &v : c) den_lcm = lcm(den_lcm, v.den());
        std::vector<Int> zc(c.size());
        for (std::size_t k = 0; k < c.size(); ++k) zc[k] = c[k].num() * (den_lcm / c[k].den());

        std::vector<Int> ps = divisors(zc.front());
        std::vector<Int> qs = divisors(zc.back());
        std::set<Rational> candidates;
        for (const auto &pp : ps)
            for (const auto &qq : qs) {
                candidates.insert(Rational(pp, qq));
                candidates.insert(Rational(-pp, qq));
            }
        for (const auto &r : candidates) {
            int mult = 0;
            while (c.size() > 1 && horner(c, r).is_zero()) {
                c = deflate(c, r);
                ++mult;
            }
            if (mult > 0) out.roots.emplace_back(r, mult);
            if (c.size() <= 1) break;
        }
    }

    std::sort(out.roots.begin(), out.roots.end(),
              [](const auto &a, const auto &b) { return a.first < b.first; });
    int total = 0;
    for (const auto &[r, m] : out.roots) total += m;
    out.splits_over_q = (total == degree);

    Polynomial rem;
    Polynomial x = Polynomial::variable(var);
    for (std::size_t k = 0; k < c.size(); ++k)
        rem = rem + Polynomial::constant(c[k]) * x.pow(unsigned(k));
    out.deflated = rem.is_zero() ? rem : exact_div(rem, Polynomial::constant(rem.integer_content()));
    return out;
}

int real_root_count(const Polynomial &p) {
    if (p.is_zero()) throw std::invalid_argument("real_root_count of the zero polynomial");
    if (p.vars().empty()) return 0;
    Polynomial sf = squarefree_part(p);
    std::vector<Rational> s0 = dense_coeffs(sf, nullptr);
    if (s0.size() <= 1) return 0;
    std::vector<Rational> s1(s0.size() - 1);
    for (std::size_t k = 1; k < s0.size(); ++k) s1[k - 1] = s0[k] * Rational(long(k));

    auto trim = [](std::vector<Rational> &v) {
        while (!v.empty() && v.back().is_zero()) v.pop_back();
    };
    auto rem = [&trim](std::vector<Rational> a, const std::vector<Rational> &b) {
        while (a.size() >= b.size() && !a.empty()) {
            Rational f = a.back() / b.back();
            std::size_t shift = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
            a.pop_back();
            trim(a);
        }
        return a;
    };

    std::vector<std::vector<Rational>> chain = {s0, s1};
    while (chain.back().size() > 1) {
        auto r = rem(chain[chain.size() - 2], chain.back());
        if (r.empty()) break;
        for (auto &v : r) v = -v;
        // positive rescale to tame growth
        Rational scale(0);
        for (const auto &v : r)
            if (!v.is_zero()) scale = scale.is_zero() ? v.abs() : std::min(scale, v.abs());
        if (!scale.is_zero())
            for (auto &v : r) v /= scale;
        chain.push_back(std::move(r));
    }

    auto sign_at_inf = [](const std::vector<Rational> &poly, int dir) {
        if (poly.empty()) return 0;
        int s = poly.back().sign();
        if (dir < 0 && (poly.size() - 1) % 2 == 1) s = -s;
        return s;
    };
    auto variations = [&](int dir) {
        int count = 0, prev = 0;
        for (const auto &poly : chain) {
            int s = sign_at_inf(poly, dir);
            if (s == 0) continue;
            if (prev != 0 && s != prev) ++count;
            prev = s;
        }
        return count;
    };
    return variations(-1) - variations(+1);
}

} // namespace qsys
