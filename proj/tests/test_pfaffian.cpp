#include "qsys/construct.hpp"
#include "qsys/expr.hpp"

#include <doctest.h>

#include <random>

using namespace qsys;

namespace {

RationalFunction RF(const std::string &s, const std::vector<std::string> &vars) {
    return parse_rational_function(s, vars);
}

MatrixOneForm constant_pair_form(const QMat &B, const QMat &C) {
    int n = int(B.size());
    MatrixOneForm omega(n, {"t1", "t2"});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            omega.set_coeff(i, j, 0, RationalFunction(B[std::size_t(i)][std::size_t(j)]));
            omega.set_coeff(i, j, 1, RationalFunction(C[std::size_t(i)][std::size_t(j)]));
        }
    return omega;
}

} // namespace

TEST_CASE("flatness residual") {
    SUBCASE("any m = 1 form is flat for degree reasons") {
        MatrixOneForm omega(2, {"t"});
        omega.set_coeff(0, 1, 0, RF("1/(t^2-1)", {"t"}));
        omega.set_coeff(1, 0, 0, RF("t^3", {"t"}));
        FlatnessResidual res = flatness_residual(omega);
        CHECK(res.wedge_pairs.empty());
        CHECK(res.is_flat());
    }
    SUBCASE("noncommuting constant pair: residual = BC - CB") {
        QMat B = {{Rational(0), Rational(1)}, {Rational(0), Rational(0)}};
        QMat C = {{Rational(0), Rational(0)}, {Rational(1), Rational(0)}};
        FlatnessResidual res = flatness_residual(constant_pair_form(B, C));
        REQUIRE(res.wedge_pairs.size() == 1);
        CHECK_FALSE(res.is_flat());
        // BC - CB = diag(1, -1); residual = -(Omega ^ Omega) here since dOmega = 0
        CHECK(res.coefficients[0][0][0] == RationalFunction(Rational(-1)));
        CHECK(res.coefficients[0][1][1] == RationalFunction(Rational(1)));
        CHECK(res.coefficients[0][0][1].is_zero());
    }
    SUBCASE("commuting diagonal pair is flat") {
        QMat B = {{Rational(1), Rational(0)}, {Rational(0), Rational(2)}};
        QMat C = {{Rational(3), Rational(0)}, {Rational(0), Rational(4)}};
        CHECK(flatness_residual(constant_pair_form(B, C)).is_flat());
    }
}

TEST_CASE("to_fuchsian") {
    SUBCASE("Euler form: pole 0, residue A, infinity residue -A") {
        MatrixOneForm omega(2, {"t"});
        omega.set_coeff(1, 1, 0, RF("3/t", {"t"}));
        ToFuchsianResult res = to_fuchsian(omega);
        REQUIRE(res.system.has_value());
        CHECK(res.system->pole_count() == 1);
        CHECK(res.system->poles()[0] == GaussianRational(Rational(0)));
        CHECK(res.system->residues()[0][1][1] == GaussianRational(Rational(3)));
        CHECK(res.residue_at_infinity[1][1] == GaussianRational(Rational(-3)));
        CHECK(res.infinity_singular);
    }
    SUBCASE("order-2 pole rejected with pole and order named") {
        MatrixOneForm omega(1, {"t"});
        omega.set_coeff(0, 0, 0, RF("1/(t-1)^2", {"t"}));
        ToFuchsianResult res = to_fuchsian(omega);
        CHECK_FALSE(res.system.has_value());
        CHECK(res.rejection.find("order 2") != std::string::npos);
        CHECK(res.rejection.find("at 1") != std::string::npos);
    }
    SUBCASE("sum-zero residues: infinity nonsingular") {
        MatrixOneForm omega(1, {"t"});
        omega.set_coeff(0, 0, 0, RF("1/(2*t) - 1/(2*(t-1))", {"t"}));
        ToFuchsianResult res = to_fuchsian(omega);
        REQUIRE(res.system.has_value());
        CHECK(res.system->pole_count() == 2);
        CHECK_FALSE(res.infinity_singular);
    }
    SUBCASE("Gaussian poles out of Q(i) rejected") {
        MatrixOneForm omega(1, {"t"});
        omega.set_coeff(0, 0, 0, RF("1/(t^2-2)", {"t"})); // poles at +-sqrt(2)
        ToFuchsianResult res = to_fuchsian(omega);
        CHECK_FALSE(res.system.has_value());
        CHECK(res.rejection.find("not in Q(i)") != std::string::npos);
    }
    SUBCASE("conjugate Q(i) pole pair accepted exactly") {
        MatrixOneForm omega(1, {"t"});
        omega.set_coeff(0, 0, 0, RF("1/(t^2+1)", {"t"})); // poles at +-i
        ToFuchsianResult res = to_fuchsian(omega);
        REQUIRE(res.system.has_value());
        REQUIRE(res.system->pole_count() == 2);
        // residue at t = i: 1/(2i) = -i/2
        CHECK(res.system->poles()[1] == GaussianRational(Rational(0), Rational(1)));
        CHECK(res.system->residues()[1][0][0] == GaussianRational(Rational(0), Rational(-1, 2)));
    }
    SUBCASE("polynomial entry means a higher-order pole at infinity") {
        MatrixOneForm omega(1, {"t"});
        omega.set_coeff(0, 0, 0, RF("t+1", {"t"}));
        ToFuchsianResult res = to_fuchsian(omega);
        CHECK_FALSE(res.system.has_value());
        CHECK(res.rejection.find("infinity") != std::string::npos);
    }
}

TEST_CASE("to_fuchsian round-trips fuchsian_to_form") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> small(-3, 3);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<GaussianRational> poles = {GaussianRational(Rational(0)),
                                               GaussianRational(Rational(1)),
                                               GaussianRational(Rational(small(rng), 2) + Rational(3))};
        std::vector<GMat> residues;
        for (int p = 0; p < 3; ++p) {
            GMat A = mat_zero<GaussianRational>(2);
            bool nonzero = false;
            for (auto &row : A)
                for (auto &v : row) {
                    v = GaussianRational(Rational(small(rng)));
                    nonzero = nonzero || !v.is_zero();
                }
            if (!nonzero) A[0][0] = GaussianRational(Rational(1));
            residues.push_back(A);
        }
        FuchsianSystem f(poles, residues);
        ToFuchsianResult back = to_fuchsian(fuchsian_to_form(f));
        REQUIRE(back.system.has_value());
        REQUIRE(back.system->pole_count() == 3);
        // identity on (poles, residues): pole order is canonical (sorted)
        for (std::size_t j = 0; j < 3; ++j) {
            bool found = false;
            for (std::size_t k = 0; k < 3; ++k)
                if (back.system->poles()[k] == poles[j] && back.system->residues()[k] == residues[j])
                    found = true;
            CHECK(found);
        }
        // sum rule: sum A_j + A_inf = 0
        GMat total = gmat_add(back.system->residue_sum(), back.system->residue_at_infinity());
        CHECK(mat_is_zero(total));
    }
}

TEST_CASE("complexity") {
    SUBCASE("3/(t-2): s = 3, d = 1") {
        MatrixOneForm omega(1, {"t"});
        omega.set_coeff(0, 0, 0, RF("3/(t-2)", {"t"}));
        ComplexityReport rep = complexity(omega);
        CHECK(rep.s == 3);
        CHECK(rep.d == 1);
        CHECK(rep.n == 1);
        CHECK(rep.m == 1);
    }
    SUBCASE("zero form floors s at 2") {
        MatrixOneForm omega(2, {"t"});
        ComplexityReport rep = complexity(omega);
        CHECK(rep.s == 2);
        CHECK(rep.d == 0);
    }
    SUBCASE("Euler diag(0,3)") {
        ComplexityReport rep = complexity(fuchsian_to_form(euler_diag({Rational(0), Rational(3)})));
        CHECK(rep.s == 3);
        CHECK(rep.d == 1);
        CHECK(rep.n == 2);
    }
    SUBCASE("invariant under permuting rows/columns and relabeling the variable") {
        MatrixOneForm omega(2, {"t"});
        omega.set_coeff(0, 1, 0, RF("5/(t-7)", {"t"}));
        omega.set_coeff(1, 0, 0, RF("t^2/3", {"t"}));
        MatrixOneForm swapped(2, {"u"});
        swapped.set_coeff(1, 0, 0, RF("5/(u-7)", {"u"}));
        swapped.set_coeff(0, 1, 0, RF("u^2/3", {"u"}));
        ComplexityReport a = complexity(omega), b = complexity(swapped);
        CHECK(a.s == b.s);
        CHECK(a.d == b.d);
    }
}

TEST_CASE("rho") {
    SUBCASE("two identity residues at 0 and 1: rho = 6") {
        GMat I2 = gmat_from({{Rational(1), Rational(0)}, {Rational(0), Rational(1)}});
        FuchsianSystem f({GaussianRational(Rational(0)), GaussianRational(Rational(1))}, {I2, I2});
        CHECK(rho(f) == doctest::Approx(6.0).epsilon(1e-12));
    }
    SUBCASE("single 1x1 pole: 2 + |A|") {
        FuchsianSystem f({GaussianRational(Rational(0))}, {gmat_from({{Rational(1)}})});
        CHECK(rho(f) == doctest::Approx(3.0).epsilon(1e-12));
    }
    SUBCASE("collision term dominates as poles approach") {
        auto make = [](const Rational &eps) {
            GMat A = gmat_from({{Rational(1)}});
            return FuchsianSystem({GaussianRational(Rational(0)), GaussianRational(eps)}, {A, A});
        };
        double r1 = rho(make(Rational(1, 10)));
        double r2 = rho(make(Rational(1, 1000)));
        CHECK(r2 > r1);
        CHECK(r2 == doctest::Approx(4.0 + 2000.0).epsilon(1e-9));
    }
    SUBCASE("invariant under pole permutation, decreasing in residue size") {
        GMat A = gmat_from({{Rational(2)}});
        GMat B = gmat_from({{Rational(1, 2)}});
        FuchsianSystem f({GaussianRational(Rational(0)), GaussianRational(Rational(1))}, {A, B});
        FuchsianSystem g({GaussianRational(Rational(1)), GaussianRational(Rational(0))}, {B, A});
        CHECK(rho(f) == doctest::Approx(rho(g)).epsilon(1e-14));
        GMat smaller = gmat_from({{Rational(1)}});
        FuchsianSystem h({GaussianRational(Rational(0)), GaussianRational(Rational(1))}, {smaller, B});
        CHECK(rho(h) < rho(f));
    }
}

TEST_CASE("singular locus") {
    SUBCASE("Euler: {t}") {
        SingularLocusDescription loc = singular_locus(fuchsian_to_form(euler_diag({Rational(1)})));
        REQUIRE(loc.components.size() == 1);
        CHECK(loc.components[0] == Polynomial::variable("t"));
    }
    SUBCASE("denominators t and t(t-1) split into {t, t-1}") {
        MatrixOneForm omega(2, {"t"});
        omega.set_coeff(0, 0, 0, RF("1/t", {"t"}));
        omega.set_coeff(1, 1, 0, RF("1/(t^2-t)", {"t"}));
        SingularLocusDescription loc = singular_locus(omega);
        REQUIRE(loc.components.size() == 2);
        Polynomial t = parse_rational_function("t", {"t"}).num();
        Polynomial t1 = parse_rational_function("t-1", {"t"}).num();
        CHECK((loc.components[0] == t || loc.components[1] == t));
        CHECK((loc.components[0] == t1 || loc.components[1] == t1));
    }
    SUBCASE("constant form: empty locus") {
        MatrixOneForm omega(1, {"t"});
        omega.set_coeff(0, 0, 0, RationalFunction(Rational(5)));
        CHECK(singular_locus(omega).components.empty());
    }
    SUBCASE("components pairwise coprime and squarefree") {
        MatrixOneForm omega(1, {"t1", "t2"});
        omega.set_coeff(0, 0, 0, RF("1/(t1^2*t2 - t1^2)", {"t1", "t2"}));
        omega.set_coeff(0, 0, 1, RF("1/(t1*t2^2)", {"t1", "t2"}));
        SingularLocusDescription loc = singular_locus(omega);
        for (std::size_t i = 0; i < loc.components.size(); ++i) {
            CHECK(loc.components[i] == squarefree_part(loc.components[i]));
            for (std::size_t j = i + 1; j < loc.components.size(); ++j)
                CHECK(poly_gcd(loc.components[i], loc.components[j]).is_constant());
        }
    }
}

TEST_CASE("FuchsianSystem invariants enforced") {
    GMat A = gmat_from({{Rational(1)}});
    GMat Z = gmat_from({{Rational(0)}});
    CHECK_THROWS_WITH(FuchsianSystem({GaussianRational(Rational(0))}, {Z}),
                      doctest::Contains("degenerate"));
    CHECK_THROWS_WITH(
        FuchsianSystem({GaussianRational(Rational(2)), GaussianRational(Rational(2))}, {A, A}),
        doctest::Contains("distinct"));
}
