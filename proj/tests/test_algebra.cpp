#include "qsys/algebra.hpp"
#include "qsys/expr.hpp"

#include <doctest.h>

#include <complex>
#include <random>

using namespace qsys;

namespace {

Polynomial P(const std::string &s, const std::vector<std::string> &vars) {
    RationalFunction r = parse_rational_function(s, vars);
    REQUIRE(r.is_polynomial());
    return r.num() * r.den().constant_value().inverse();
}

RationalFunction RF(const std::string &s, const std::vector<std::string> &vars) {
    return parse_rational_function(s, vars);
}

// random polynomial, degree <= maxdeg, coefficients in [-5, 5]
Polynomial random_poly(std::mt19937_64 &rng, const std::vector<std::string> &vars, int maxdeg) {
    std::uniform_int_distribution<int> coeff(-5, 5);
    std::uniform_int_distribution<int> deg(0, maxdeg);
    Polynomial p;
    int terms = 1 + int(rng() % 5);
    for (int t = 0; t < terms; ++t) {
        Polynomial mono = Polynomial::constant(Rational(coeff(rng)));
        int budget = deg(rng);
        for (const auto &v : vars) {
            int e = budget > 0 ? int(rng() % unsigned(budget + 1)) : 0;
            budget -= e;
            mono = mono * Polynomial::variable(v).pow(unsigned(e));
        }
        p = p + mono;
    }
    if (p.is_zero()) p = Polynomial::variable(vars[0]) + Polynomial::constant(Rational(1));
    return p;
}

// Durand-Kerner roots of a univariate rational polynomial: the numeric oracle,
// independent of the exact algebra under test
std::vector<std::complex<double>> oracle_roots(const Polynomial &p) {
    auto cs = p.coeffs_in(p.vars().empty() ? "x" : p.vars()[0]);
    int deg = int(cs.size()) - 1;
    while (deg > 0 && cs[std::size_t(deg)].is_zero()) --deg;
    if (deg <= 0) return {};
    std::vector<std::complex<double>> c(std::size_t(deg) + 1);
    for (int i = 0; i <= deg; ++i) c[std::size_t(i)] = cs[std::size_t(i)].constant_value().to_double();
    std::vector<std::complex<double>> z(static_cast<std::size_t>(deg));
    for (int i = 0; i < deg; ++i) z[std::size_t(i)] = std::pow(std::complex<double>(0.4, 0.9), i + 1);
    for (int iter = 0; iter < 800; ++iter) {
        double moved = 0;
        for (int i = 0; i < deg; ++i) {
            std::complex<double> val = 0;
            for (int k = deg; k >= 0; --k) val = val * z[std::size_t(i)] + c[std::size_t(k)];
            std::complex<double> denom = c[std::size_t(deg)];
            for (int k = 0; k < deg; ++k)
                if (k != i) denom *= (z[std::size_t(i)] - z[std::size_t(k)]);
            std::complex<double> step = val / denom;
            z[std::size_t(i)] -= step;
            moved = std::max(moved, std::abs(step));
        }
        if (moved < 1e-13) break;
    }
    return z;
}

} // namespace

TEST_CASE("poly_gcd: spec examples") {
    CHECK(poly_gcd(P("t^2-1", {"t"}), P("t-1", {"t"}), "t") == P("t-1", {"t"}));
    CHECK(poly_gcd(P("t", {"t"}), P("1", {"t"}), "t") == P("1", {"t"}));
    // factor by hand: t^3-t = t(t-1)(t+1), t^2-2t+1 = (t-1)^2
    CHECK(poly_gcd(P("t^3-t", {"t"}), P("t^2-2*t+1", {"t"}), "t") == P("t-1", {"t"}));
    CHECK_THROWS_WITH(poly_gcd(Polynomial{}, Polynomial{}, "t"), "gcd of zeros");
}

TEST_CASE("resultant: spec examples, Sylvester with p-rows first") {
    CHECK(resultant(P("y^2-t", {"t", "y"}), P("y", {"t", "y"}), "y") == P("-t", {"t"}));
    CHECK(resultant(P("y-a", {"a", "b", "y"}), P("y-b", {"a", "b", "y"}), "y") == P("a-b", {"a", "b"}));
    CHECK(resultant(P("y^2-t", {"t", "y"}), P("2*y", {"t", "y"}), "y") == P("-4*t", {"t"}));
    CHECK_THROWS_WITH(resultant(P("y", {"y"}), P("1", {"y"}), "y"),
                      "resultant needs both degrees positive");
}

TEST_CASE("resultant vanishes exactly when the gcd has positive degree") {
    std::mt19937_64 rng(42);
    int checked = 0;
    for (int trial = 0; trial < 150; ++trial) {
        Polynomial p = random_poly(rng, {"x"}, 4);
        Polynomial q = random_poly(rng, {"x"}, 4);
        if (trial % 3 == 0) {
            Polynomial f = random_poly(rng, {"x"}, 2);
            if (f.degree_in("x") < 1) f = P("x-2", {"x"});
            p = p * f;
            q = q * f;
        }
        if (p.degree_in("x") < 1 || q.degree_in("x") < 1) continue;
        Polynomial res = resultant(p, q, "x");
        Polynomial g = poly_gcd(p, q, "x");
        CHECK(res.is_zero() == (g.degree_in("x") > 0));
        ++checked;
    }
    CHECK(checked > 80);
}

TEST_CASE("eliminate_on_hypersurface: spec examples") {
    SUBCASE("1/(2y) on y^2 = t") {
        auto el = eliminate_on_hypersurface(RF("1/(2*y)", {"t", "y"}), P("y^2-t", {"t", "y"}), "y");
        CHECK(el.U == P("y", {"t", "y"}));
        CHECK(el.Q == P("2*t", {"t"}));
    }
    SUBCASE("polynomial R already reduced") {
        auto el = eliminate_on_hypersurface(RF("3*y+t", {"t", "y"}), P("y^2-t", {"t", "y"}), "y");
        CHECK(el.U == P("3*y+t", {"t", "y"}));
        CHECK(el.Q == P("1", {"t"}));
    }
    SUBCASE("1/y on y^3 = t") {
        auto el = eliminate_on_hypersurface(RF("1/y", {"t", "y"}), P("y^3-t", {"t", "y"}), "y");
        CHECK(el.U == P("y^2", {"t", "y"}));
        CHECK(el.Q == P("t", {"t"}));
    }
    SUBCASE("denominator vanishing identically on the hypersurface") {
        CHECK_THROWS_WITH(
            eliminate_on_hypersurface(RF("1/(y^2-t)", {"t", "y"}), P("y^2-t", {"t", "y"}), "y"),
            doctest::Contains("denominator"));
    }
}

TEST_CASE("elimination identity S | (U*B - Q*A) on random instances") {
    std::mt19937_64 rng(7);
    int done = 0;
    for (int trial = 0; trial < 400 && done < 100; ++trial) {
        Polynomial S = random_poly(rng, {"t", "x"}, 4);
        int d = S.degree_in("x");
        if (d < 1) continue;
        Polynomial A = random_poly(rng, {"t", "x"}, 3);
        Polynomial B = random_poly(rng, {"t", "x"}, 3);
        if (B.is_zero() || try_exact_div(B, S)) continue;
        EliminationResult el;
        try {
            el = eliminate_on_hypersurface(RationalFunction(A, B), S, "x");
        } catch (const std::domain_error &) {
            continue; // Res_x(S, B) vanished identically: excluded by the lemma
        }
        CHECK(el.U.degree_in("x") <= d - 1);
        Polynomial check = el.U * B - el.Q * A;
        bool divisible = check.is_zero() || bool(try_exact_div(check, S));
        CHECK(divisible);
        CHECK(el.max_coefficient >= 0);
        ++done;
    }
    CHECK(done == 100);
}

TEST_CASE("char_poly: spec examples") {
    using Row = std::vector<Rational>;
    CHECK(char_poly({Row{Rational(1, 2), Rational(0)}, Row{Rational(0), Rational(-1, 2)}}) ==
          P("lambda^2-1/4", {"lambda"}));
    CHECK(char_poly({Row{Rational(0), Rational(1)}, Row{Rational(-1), Rational(0)}}) ==
          P("lambda^2+1", {"lambda"}));
    CHECK(char_poly({Row{Rational(0), Rational(1)}, Row{Rational(0), Rational(0)}}) ==
          P("lambda^2", {"lambda"}));
}

TEST_CASE("char_poly_gaussian matches the rational path on rational input") {
    GaussianRational z{Rational(0)}, one{Rational(1)};
    auto cg = char_poly_gaussian({{z, one}, {-one, z}});
    REQUIRE(cg.size() == 3);
    CHECK(cg[0] == one);
    CHECK(cg[1] == z);
    CHECK(cg[2] == one);
}

TEST_CASE("rational_roots: spec examples") {
    SUBCASE("lambda^2 - 1/4") {
        auto rr = rational_roots(P("x^2-1/4", {"x"}));
        REQUIRE(rr.roots.size() == 2);
        CHECK(rr.roots[0].first == Rational(-1, 2));
        CHECK(rr.roots[1].first == Rational(1, 2));
        CHECK(rr.splits_over_q);
    }
    SUBCASE("lambda^2 + 1") {
        auto rr = rational_roots(P("x^2+1", {"x"}));
        CHECK(rr.roots.empty());
        CHECK_FALSE(rr.splits_over_q);
    }
    SUBCASE("lambda^3 - 2 lambda^2 + lambda") {
        auto rr = rational_roots(P("x^3-2*x^2+x", {"x"}));
        REQUIRE(rr.roots.size() == 2);
        CHECK(rr.roots[0] == std::pair<Rational, int>(Rational(0), 1));
        CHECK(rr.roots[1] == std::pair<Rational, int>(Rational(1), 2));
        CHECK(rr.splits_over_q);
    }
}

TEST_CASE("rational_roots: exactness and deflation on random planted products") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> num(-6, 6);
    std::uniform_int_distribution<int> den(1, 4);
    for (int trial = 0; trial < 40; ++trial) {
        Polynomial p = P("1", {"x"});
        int k = 1 + int(rng() % 3);
        std::vector<Rational> planted;
        for (int i = 0; i < k; ++i) {
            int a = num(rng), b = den(rng);
            planted.emplace_back(a, b);
            p = p * (Polynomial::variable("x") * Rational(b) - Polynomial::constant(Rational(a)));
        }
        bool with_quad = rng() % 2 == 0;
        if (with_quad) p = p * P("x^2+1", {"x"});
        auto rr = rational_roots(p);
        for (const auto &[r, mult] : rr.roots) {
            CHECK(p.eval(std::map<std::string, Rational>{{"x", r}}).is_zero());
            CHECK(mult >= 1);
        }
        for (const auto &r : planted) {
            bool found = false;
            for (const auto &[root, mult] : rr.roots) found = found || root == r;
            CHECK(found);
        }
        CHECK(rr.splits_over_q == !with_quad);
        if (!rr.deflated.is_constant()) CHECK(rational_roots(rr.deflated).roots.empty());
    }
}

TEST_CASE("real_root_count: spec examples") {
    CHECK(real_root_count(P("x^2+1", {"x"})) == 0);
    CHECK(real_root_count(P("x^2-2", {"x"})) == 2);
    CHECK(real_root_count(P("x^3-x", {"x"})) == 3);
}

TEST_CASE("real_root_count agrees with the numeric oracle on random cubics/quartics") {
    std::mt19937_64 rng(23);
    int checked = 0;
    for (int trial = 0; trial < 900 && checked < 100; ++trial) {
        Polynomial p = random_poly(rng, {"x"}, 4);
        if (p.degree_in("x") < 3) continue;
        Polynomial sf = squarefree_part(p);
        auto roots = oracle_roots(sf);
        int real = 0;
        for (const auto &z : roots)
            if (std::abs(z.imag()) < 1e-7) ++real;
        CHECK(real_root_count(p) == real);
        ++checked;
    }
    CHECK(checked == 100);
}

TEST_CASE("resultant-vanishing iff common root, against the numeric oracle") {
    std::mt19937_64 rng(99);
    int checked = 0;
    for (int trial = 0; trial < 300 && checked < 60; ++trial) {
        Polynomial p = random_poly(rng, {"x"}, 4);
        Polynomial q = random_poly(rng, {"x"}, 4);
        if (trial % 2 == 0) {
            Polynomial f = Polynomial::variable("x") * Rational(2) - Polynomial::constant(Rational(3));
            p = p * f;
            q = q * f;
        }
        if (p.degree_in("x") < 1 || q.degree_in("x") < 1) continue;
        Polynomial res = resultant(p, q, "x");
        auto rp = oracle_roots(p);
        auto rq = oracle_roots(q);
        double closest = 1e9;
        for (const auto &a : rp)
            for (const auto &b : rq) closest = std::min(closest, std::abs(a - b));
        if (res.is_zero()) CHECK(closest < 1e-6);
        else if (closest > 1e-3) CHECK_FALSE(res.is_zero());
        ++checked;
    }
    CHECK(checked >= 60);
}

TEST_CASE("expression parser") {
    CHECK(RF("(t^2-1)/(t-1)", {"t"}) == RF("t+1", {"t"}));
    CHECK(parse_gaussian("1/2+3i") == GaussianRational(Rational(1, 2), Rational(3)));
    CHECK(parse_gaussian("-i^2") == GaussianRational(Rational(1)));
    CHECK(parse_gaussian("(1+i)*(1-i)") == GaussianRational(Rational(2)));
    CHECK_THROWS_AS(RF("t + s", {"t"}), ParseError);
    CHECK_THROWS_AS(RF("i*t", {"t"}), ParseError);
    CHECK_THROWS_AS(RF("1/(t-t)", {"t"}), ParseError);
    try {
        RF("t + %", {"t"});
        FAIL("no error");
    } catch (const ParseError &e) {
        CHECK(e.column == 5);
    }
}

TEST_CASE("rational function canonical form") {
    RationalFunction r = RF("(2*t+2)/(4*t-4)", {"t"});
    CHECK(r.num() == P("t+1", {"t"}));
    CHECK(r.den() == P("2*t-2", {"t"}));
    RationalFunction s = RF("1/(-t+2)", {"t"});
    CHECK(s.den() == P("t-2", {"t"}));
    CHECK(s.num() == P("-1", {"t"}));
}
