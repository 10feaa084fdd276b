#include "qsys/analytic.hpp"
#include "qsys/bounds.hpp"
#include "qsys/construct.hpp"
#include "qsys/expr.hpp"

#include <doctest.h>

using namespace qsys;

namespace {

RationalFunction RF(const std::string &s, const std::vector<std::string> &vars) {
    return parse_rational_function(s, vars);
}

Polynomial P(const std::string &s, const std::vector<std::string> &vars) { return RF(s, vars).num(); }

std::vector<Rational> residue_spectrum(const FuchsianSystem &f, std::size_t pole) {
    SpectrumFinding sf = analyze_residue(f.residues()[pole], "x");
    std::vector<Rational> out;
    for (const auto &[r, m] : sf.rational_eigenvalues)
        for (int k = 0; k < m; ++k) out.push_back(r);
    return out;
}

} // namespace

TEST_CASE("from_algebraic: y^2 = t") {
    AlgebraicSpec spec = AlgebraicSpec::make(P("y^2-t", {"t", "y"}), "y");
    MatrixOneForm omega = from_algebraic(spec);
    REQUIRE(omega.n() == 2);
    // dx1 = 0, dx2 = x2 dt/(2t)
    CHECK(omega.coeff(0, 0, 0).is_zero());
    CHECK(omega.coeff(0, 1, 0).is_zero());
    CHECK(omega.coeff(1, 0, 0).is_zero());
    CHECK(omega.coeff(1, 1, 0) == RF("1/(2*t)", {"t"}));
    // residue spectrum {0, 1/2} at t = 0
    ToFuchsianResult conv = to_fuchsian(omega);
    REQUIRE(conv.system.has_value());
    auto spec0 = residue_spectrum(*conv.system, 0);
    REQUIRE(spec0.size() == 2);
    CHECK(spec0[0] == Rational(0));
    CHECK(spec0[1] == Rational(1, 2));
}

TEST_CASE("from_algebraic: single-valued branch y = q(t)") {
    AlgebraicSpec spec = AlgebraicSpec::make(P("y-(t^3-2*t)", {"t", "y"}), "y");
    MatrixOneForm omega = from_algebraic(spec);
    REQUIRE(omega.n() == 2);
    CHECK(omega.coeff(1, 0, 0) == RF("3*t^2-2", {"t"})); // dx2 = q'(t) x1 dt
    CHECK(omega.coeff(1, 1, 0).is_zero());
}

TEST_CASE("from_algebraic: universal quadratic (chart t0 = 1)") {
    AlgebraicSpec spec = AlgebraicSpec::make(P("y^2+t1*y+t2", {"t1", "t2", "y"}), "y");
    Polynomial delta = algebraic_discriminant(spec);
    // Sylvester determinant of (y^2 + t1 y + t2, 2y + t1)
    CHECK((delta == P("t1^2-4*t2", {"t1", "t2"}) || delta == P("4*t2-t1^2", {"t1", "t2"})));
    MatrixOneForm omega = from_algebraic(spec);
    for (int i = 0; i < omega.n(); ++i)
        for (int j = 0; j < omega.n(); ++j)
            for (int k = 0; k < omega.m(); ++k) {
                const RationalFunction &r = omega.coeff(i, j, k);
                if (r.is_zero()) continue;
                // every denominator divides the discriminant
                CHECK(bool(try_exact_div(delta, r.den())));
            }
}

TEST_CASE("from_algebraic rejects non-squarefree P") {
    CHECK_THROWS_WITH(from_algebraic(AlgebraicSpec::make(P("y^2-2*t*y+t^2", {"t", "y"}), "y")),
                      doctest::Contains("squarefree"));
}

TEST_CASE("from_algebraic numeric branch check: x2(t)^2 = t along a path") {
    MatrixOneForm omega = from_algebraic(AlgebraicSpec::make(P("y^2-t", {"t", "y"}), "y"));
    LinearSystem lin = LinearSystem::from(omega);
    // seed at t0 = 1 with branch y(1) = 1: solution vector (1, y)
    Eigen::MatrixXcd X0 = Eigen::MatrixXcd::Identity(2, 2);
    std::vector<SamplePoint> samples;
    PathSpec path = PathSpec::polyline({{1.0, 0.0}, {2.0, 1.0}, {0.5, 2.0}, {4.0, 0.2}});
    integrate(lin, path, X0, kDefaultTol, &samples);
    for (const auto &s : samples) {
        Complex y = s.X(1, 1); // second basis column stays the (0, y) solution
        CHECK(std::abs(y * y - s.t) < 1e-10);
    }
}

TEST_CASE("euler") {
    FuchsianSystem f = euler_diag({Rational(0), Rational(3)});
    CHECK(f.pole_count() == 1);
    CHECK(f.poles()[0] == GaussianRational(Rational(0)));
    CHECK(f.residue_at_infinity()[1][1] == GaussianRational(Rational(-3)));
    QMat zero = {{Rational(0)}};
    CHECK_THROWS_WITH(euler(zero), doctest::Contains("nonzero"));
}

TEST_CASE("euler nilpotent: solutions 1 and ln t (regular, unipotent)") {
    QMat N = {{Rational(0), Rational(1)}, {Rational(0), Rational(0)}};
    FuchsianSystem f = euler(N);
    LinearSystem lin = LinearSystem::from(f);
    // X(t) = [[1, ln t],[0, 1]] from basepoint 1
    IntegrationResult res =
        integrate(lin, PathSpec::polyline({{1.0, 0.0}, {2.0, 0.0}}), Eigen::MatrixXcd::Identity(2, 2));
    CHECK(std::abs(res.X(0, 1) - std::log(2.0)) < 1e-10);
    MonodromyResult m = monodromy(lin, PathSpec::based_circle({2.0, 0.0}, {0.0, 0.0}, 1.0));
    CHECK(std::abs(m.eigenvalues[0] - 1.0) < 1e-8);
    CHECK(std::abs(m.eigenvalues[1] - 1.0) < 1e-8);
    CHECK(max_abs(m.matrix - Eigen::MatrixXcd::Identity(2, 2)) > 0.1); // genuine log block
}

TEST_CASE("hypergeometric") {
    SUBCASE("(1/2, 1/2, 1): unipotent spectrum at 0") {
        HypergeometricSystem hg = hypergeometric(Rational(1, 2), Rational(1, 2), Rational(1));
        auto s0 = residue_spectrum(hg.system, 0);
        REQUIRE(s0.size() == 2);
        CHECK(s0[0] == Rational(0));
        CHECK(s0[1] == Rational(0));
    }
    SUBCASE("two finite poles at 0 and 1") {
        HypergeometricSystem hg = hypergeometric(Rational(1, 3), Rational(2, 5), Rational(1, 7));
        REQUIRE(hg.system.pole_count() == 2);
        CHECK(hg.system.poles()[0] == GaussianRational(Rational(0)));
        CHECK(hg.system.poles()[1] == GaussianRational(Rational(1)));
        // exponents: {0, 1-c} at 0 and {0, c-a-b} at 1
        auto s0 = residue_spectrum(hg.system, 0);
        auto s1 = residue_spectrum(hg.system, 1);
        CHECK(s0[1] == Rational(6, 7));
        CHECK(s1[0] == Rational(1, 7) - Rational(1, 3) - Rational(2, 5));
    }
    SUBCASE("c = 1/3: spectrum {0, 2/3} at 0") {
        HypergeometricSystem hg = hypergeometric(Rational(1, 2), Rational(1, 2), Rational(1, 3));
        auto s0 = residue_spectrum(hg.system, 0);
        CHECK(s0[0] == Rational(0));
        CHECK(s0[1] == Rational(2, 3));
    }
}

TEST_CASE("direct_sum") {
    MatrixOneForm a = fuchsian_to_form(euler_diag({Rational(1, 2)}));
    MatrixOneForm b = fuchsian_to_form(euler_diag({Rational(1, 3)}));
    MatrixOneForm s = direct_sum(a, b);
    REQUIRE(s.n() == 2);
    CHECK(s.coeff(0, 0, 0) == RF("1/(2*t)", {"t"}));
    CHECK(s.coeff(1, 1, 0) == RF("1/(3*t)", {"t"}));
    CHECK(s.coeff(0, 1, 0).is_zero());
    // residue spectrum {1/2, 1/3} at 0
    ToFuchsianResult conv = to_fuchsian(s);
    auto spec0 = residue_spectrum(*conv.system, 0);
    CHECK(spec0[0] == Rational(1, 3));
    CHECK(spec0[1] == Rational(1, 2));
    // complexity(a (+) b) = max of the complexities
    ComplexityReport ca = complexity(a), cb = complexity(b), cs = complexity(s);
    CHECK(cs.s == std::max(ca.s, cb.s));
    CHECK(cs.d == std::max(ca.d, cb.d));
    // zero block adds a constant solution row
    MatrixOneForm zero1(1, {"t"});
    MatrixOneForm with_const = direct_sum(a, zero1);
    CHECK(with_const.n() == 2);
    CHECK(with_const.coeff(1, 1, 0).is_zero());
    // variable mismatch
    MatrixOneForm other(1, {"s"});
    CHECK_THROWS_WITH(direct_sum(a, other), doctest::Contains("variable"));
}

TEST_CASE("tensor product") {
    SUBCASE("Euler(1/2) (x) Euler(1/3) = Euler(5/6) for 1x1") {
        MatrixOneForm a = fuchsian_to_form(euler_diag({Rational(1, 2)}));
        MatrixOneForm b = fuchsian_to_form(euler_diag({Rational(1, 3)}));
        MatrixOneForm t = tensor_product(a, b);
        REQUIRE(t.n() == 1);
        CHECK(t.coeff(0, 0, 0) == RF("5/(6*t)", {"t"}));
    }
    SUBCASE("tensor with the 1x1 zero form is the identity") {
        MatrixOneForm a = fuchsian_to_form(euler_diag({Rational(1, 2), Rational(-1, 2)}));
        MatrixOneForm zero1(1, {"t"});
        MatrixOneForm t = tensor_product(a, zero1);
        REQUIRE(t.n() == 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) CHECK(t.coeff(i, j, 0) == a.coeff(i, j, 0));
    }
    SUBCASE("flatness preserved symbolically (two-variable fixture)") {
        // flat 2-variable forms: d log of coordinates
        MatrixOneForm a(1, {"t1", "t2"});
        a.set_coeff(0, 0, 0, RF("1/t1", {"t1", "t2"}));
        a.set_coeff(0, 0, 1, RF("2/t2", {"t1", "t2"}));
        MatrixOneForm b(1, {"t1", "t2"});
        b.set_coeff(0, 0, 0, RF("3/(t1-1)", {"t1", "t2"}));
        REQUIRE(flatness_residual(a).is_flat());
        REQUIRE(flatness_residual(b).is_flat());
        CHECK(flatness_residual(tensor_product(a, b)).is_flat());
        CHECK(flatness_residual(direct_sum(a, b)).is_flat());
    }
}

TEST_CASE("monomial extension") {
    SUBCASE("delta = 1: constant + coordinates + original block") {
        MatrixOneForm a = fuchsian_to_form(euler_diag({Rational(1, 2)}));
        MonomialExtension ext = monomial_extension(a, 1);
        // symbols: t and X_11 -> monomials {1, t, X}
        REQUIRE(ext.map.size() == 3);
        CHECK(ext.system.n() == 3);
        // row of the monomial "t": d t = 1 * dt on the constant coordinate
        int row_t = ext.map.position.at({1, 0});
        int col_1 = ext.map.position.at({0, 0});
        CHECK(ext.system.coeff(row_t, col_1, 0) == RationalFunction(Rational(1)));
    }
    SUBCASE("delta = 2 on Euler(1/2): X^2 is governed by Euler(1)") {
        MatrixOneForm a = fuchsian_to_form(euler_diag({Rational(1, 2)}));
        MonomialExtension ext = monomial_extension(a, 2);
        // components {1, t, t^2, X, tX, X^2}
        REQUIRE(ext.map.size() == 6);
        int row_x2 = ext.map.position.at({0, 2});
        CHECK(ext.system.coeff(row_x2, row_x2, 0) == RF("1/t", {"t"})); // 2 * (1/(2t))
        int row_tx = ext.map.position.at({1, 1});
        int col_x = ext.map.position.at({0, 1});
        CHECK(ext.system.coeff(row_tx, col_x, 0) == RationalFunction(Rational(1))); // Leibniz t-part
        CHECK(ext.system.coeff(row_tx, row_tx, 0) == RF("1/(2*t)", {"t"}));         // X-part
    }
    SUBCASE("dimension counts monomials of degree <= delta in m + n^2 symbols") {
        MatrixOneForm a = fuchsian_to_form(euler_diag({Rational(1, 2), Rational(1, 3)}));
        MonomialExtension ext = monomial_extension(a, 2);
        // m + n^2 = 1 + 4 = 5 symbols, C(5+2, 2) = 21
        CHECK(ext.system.n() == 21);
        CHECK(monomial_count(5, 2) == doctest::Approx(21.0));
    }
    SUBCASE("extension of a flat 2-variable form stays flat") {
        MatrixOneForm a(1, {"t1", "t2"});
        a.set_coeff(0, 0, 0, RF("1/t1", {"t1", "t2"}));
        a.set_coeff(0, 0, 1, RF("1/(t2-1)", {"t1", "t2"}));
        REQUIRE(flatness_residual(a).is_flat());
        MonomialExtension ext = monomial_extension(a, 2);
        CHECK(flatness_residual(ext.system).is_flat());
    }
}

TEST_CASE("pullback") {
    MatrixOneForm a = fuchsian_to_form(euler_diag({Rational(1, 2)}));
    SUBCASE("identity map leaves the form unchanged") {
        RationalMapSpec f = RationalMapSpec::make({"t"}, {"t"}, {RF("t", {"t"})});
        MatrixOneForm out = pullback(a, f);
        CHECK(out.coeff(0, 0, 0) == a.coeff(0, 0, 0));
    }
    SUBCASE("t = s^2 doubles the Euler residue") {
        RationalMapSpec f = RationalMapSpec::make({"s"}, {"t"}, {RF("s^2", {"s"})});
        MatrixOneForm out = pullback(a, f);
        CHECK(out.coeff(0, 0, 0) == RF("1/s", {"s"}));
    }
    SUBCASE("t = 1/s swaps the chart: Euler(-A)") {
        RationalMapSpec f = RationalMapSpec::make({"s"}, {"t"}, {RF("1/s", {"s"})});
        MatrixOneForm out = pullback(a, f);
        CHECK(out.coeff(0, 0, 0) == RF("-1/(2*s)", {"s"}));
    }
    SUBCASE("image inside the singular locus rejected") {
        RationalMapSpec f = RationalMapSpec::make({"s"}, {"t"}, {RationalFunction{}});
        CHECK_THROWS_WITH(pullback(a, f), doctest::Contains("singular locus"));
    }
    SUBCASE("pullback of a flat form is flat (two variables to two variables)") {
        MatrixOneForm flat2(1, {"t1", "t2"});
        flat2.set_coeff(0, 0, 0, RF("1/t1", {"t1", "t2"}));
        flat2.set_coeff(0, 0, 1, RF("1/t2", {"t1", "t2"}));
        REQUIRE(flatness_residual(flat2).is_flat());
        RationalMapSpec f = RationalMapSpec::make(
            {"s1", "s2"}, {"t1", "t2"},
            {RF("s1*s2", {"s1", "s2"}), RF("s1+s2^2", {"s1", "s2"})});
        CHECK(flatness_residual(pullback(flat2, f)).is_flat());
    }
}

TEST_CASE("construction echoes record input and output complexity") {
    MatrixOneForm a = fuchsian_to_form(euler_diag({Rational(1, 2)}));
    MatrixOneForm b = fuchsian_to_form(euler_diag({Rational(5)}));
    MatrixOneForm t = tensor_product(a, b);
    ConstructionEcho echo = make_echo("tensor", {complexity(a), complexity(b)}, complexity(t));
    CHECK(echo.operation == "tensor");
    REQUIRE(echo.inputs.size() == 2);
    CHECK(echo.inputs[1].s == 5);
    CHECK(echo.output.s >= 2);
}
