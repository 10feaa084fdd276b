#include "qsys/construct.hpp"

#include <algorithm>
#include <numeric>

namespace qsys {

AlgebraicSpec AlgebraicSpec::make(Polynomial P, std::string y) {
    AlgebraicSpec spec;
    spec.d = P.degree_in(y);
    if (spec.d < 1) throw std::invalid_argument("P must have positive degree in " + y);
    spec.P = std::move(P);
    spec.y = std::move(y);
    return spec;
}

Polynomial algebraic_discriminant(const AlgebraicSpec &spec) {
    Polynomial Py = spec.P.derivative(spec.y);
    if (spec.d == 1) return Py; // linear case: no branching, lc plays the role of Delta
    Polynomial delta = resultant(spec.P, Py, spec.y);
    if (delta.is_zero()) throw std::domain_error("P not squarefree in " + spec.y);
    return delta;
}

MatrixOneForm from_algebraic(const AlgebraicSpec &spec) {
    // variables of the base space: everything but y
    std::vector<std::string> tvars;
    for (const auto &v : spec.P.vars())
        if (v != spec.y) tvars.push_back(v);
    if (tvars.empty())
        throw std::invalid_argument("algebraic equation must involve at least one base variable");

    (void)algebraic_discriminant(spec); // validates squarefreeness up front
    Polynomial Py = spec.P.derivative(spec.y);

    if (spec.d == 1) {
        // P = c1(t) y + c0(t), y = -c0/c1; basis (1, y)
        auto cs = spec.P.coeffs_in(spec.y);
        RationalFunction branch = RationalFunction(-cs[0], cs[1]);
        MatrixOneForm out(2, tvars);
        for (std::size_t k = 0; k < tvars.size(); ++k)
            out.set_coeff(1, 0, int(k), branch.derivative(tvars[k]));
        return out;
    }

    int d = spec.d;
    MatrixOneForm out(d, tvars);
    // row 0: d(1) = 0. Row j (j >= 1): d(y^j) = -j y^{j-1} / P' * sum_k P_k dt_k on {P=0}.
    for (int j = 1; j < d; ++j) {
        Polynomial yj1 = Polynomial::variable(spec.y).pow(unsigned(j - 1)) * Rational(long(j));
        for (std::size_t k = 0; k < tvars.size(); ++k) {
            Polynomial Pk = spec.P.derivative(tvars[k]);
            if (Pk.is_zero()) continue;
            RationalFunction r(-(yj1 * Pk), Py);
            EliminationResult el = eliminate_on_hypersurface(r, spec.P, spec.y);
            auto ucoeffs = el.U.coeffs_in(spec.y);
            for (std::size_t l = 0; l < ucoeffs.size(); ++l) {
                if (ucoeffs[l].is_zero()) continue;
                RationalFunction cur = out.coeff(j, int(l), int(k));
                out.set_coeff(j, int(l), int(k), cur + RationalFunction(ucoeffs[l], el.Q));
            }
        }
    }
    return out;
}

FuchsianSystem euler(const GMat &A) {
    if (mat_is_zero(A)) throw std::invalid_argument("Euler system needs a nonzero residue");
    return FuchsianSystem({GaussianRational(Rational(0))}, {A});
}

FuchsianSystem euler(const QMat &A) { return euler(gmat_from(A)); }

FuchsianSystem euler_diag(const std::vector<Rational> &spectrum) {
    QMat A(spectrum.size(), std::vector<Rational>(spectrum.size(), Rational(0)));
    for (std::size_t i = 0; i < spectrum.size(); ++i) A[i][i] = spectrum[i];
    return euler(A);
}

HypergeometricSystem hypergeometric(const Rational &a, const Rational &b, const Rational &c) {
    // A0 = [[0,1],[0,1-c]] at t=0, A1 = [[0,0],[a(1-b), c-a-b]] at t=1; the
    // first component then satisfies the hypergeometric equation with
    // parameters (a, b-1, c), whose Riemann scheme carries the exponent pairs
    // asserted below at the finite points.
    GaussianRational zero{Rational(0)}, one{Rational(1)};
    GMat A0 = {{zero, one}, {zero, GaussianRational(Rational(1) - c)}};
    GMat A1 = {{zero, zero},
               {GaussianRational(a * (Rational(1) - b)), GaussianRational(c - a - b)}};

    std::vector<GaussianRational> poles;
    std::vector<GMat> residues;
    poles.emplace_back(Rational(0));
    residues.push_back(A0); // never zero: upper-right entry is 1
    if (!mat_is_zero(A1)) {
        poles.emplace_back(Rational(1));
        residues.push_back(A1);
    }
    HypergeometricSystem out{FuchsianSystem(std::move(poles), std::move(residues)),
                             {Rational(0), Rational(1) - c},
                             {Rational(0), c - a - b},
                             {a, b}};
    return out;
}

MatrixOneForm direct_sum(const MatrixOneForm &omega, const MatrixOneForm &theta) {
    if (omega.variables() != theta.variables())
        throw std::invalid_argument("direct_sum: variable lists differ");
    int n = omega.n(), q = theta.n();
    MatrixOneForm out(n + q, omega.variables());
    for (int k = 0; k < omega.m(); ++k) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) out.set_coeff(i, j, k, omega.coeff(i, j, k));
        for (int i = 0; i < q; ++i)
            for (int j = 0; j < q; ++j) out.set_coeff(n + i, n + j, k, theta.coeff(i, j, k));
    }
    return out;
}

MatrixOneForm tensor_product(const MatrixOneForm &omega, const MatrixOneForm &theta) {
    if (omega.variables() != theta.variables())
        throw std::invalid_argument("tensor: variable lists differ");
    int n = omega.n(), q = theta.n();
    MatrixOneForm out(n * q, omega.variables());
    auto z = [q](int i, int j) { return i * q + j; };
    for (int k = 0; k < omega.m(); ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < q; ++j) {
                // d z_ij = sum_k Omega_ik z_kj + sum_l Theta_jl z_il
                for (int p = 0; p < n; ++p) {
                    if (omega.coeff(i, p, k).is_zero()) continue;
                    RationalFunction cur = out.coeff(z(i, j), z(p, j), k);
                    out.set_coeff(z(i, j), z(p, j), k, cur + omega.coeff(i, p, k));
                }
                for (int l = 0; l < q; ++l) {
                    if (theta.coeff(j, l, k).is_zero()) continue;
                    RationalFunction cur = out.coeff(z(i, j), z(i, l), k);
                    out.set_coeff(z(i, j), z(i, l), k, cur + theta.coeff(j, l, k));
                }
            }
    return out;
}

int MonomialIndexMap::index_of(const std::vector<int> &t_exponents, const Mat<int> &x_exponents) const {
    std::vector<int> e(std::size_t(m) + std::size_t(n) * std::size_t(n), 0);
    for (int k = 0; k < m; ++k) e[std::size_t(k)] = t_exponents[std::size_t(k)];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            e[std::size_t(m) + std::size_t(i) * std::size_t(n) + std::size_t(j)] =
                x_exponents[std::size_t(i)][std::size_t(j)];
    auto it = position.find(e);
    if (it == position.end()) throw std::out_of_range("monomial outside the extension");
    return it->second;
}

MonomialExtension monomial_extension(const MatrixOneForm &omega, int delta) {
    if (delta < 1) throw std::invalid_argument("monomial extension needs delta >= 1");
    int m = omega.m(), n = omega.n();
    std::size_t symbols = std::size_t(m) + std::size_t(n) * std::size_t(n);

    MonomialIndexMap map;
    map.m = m;
    map.n = n;
    map.delta = delta;
    // enumerate exponent vectors with |e| <= delta (graded lex)
    std::vector<int> e(symbols, 0);
    std::vector<std::vector<int>> all;
    auto rec = [&](auto &&self, std::size_t pos, int remaining) -> void {
        if (pos == symbols) {
            all.push_back(e);
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            e[pos] = v;
            self(self, pos + 1, remaining - v);
        }
        e[pos] = 0;
    };
    rec(rec, 0, delta);
    std::sort(all.begin(), all.end(), [](const std::vector<int> &a, const std::vector<int> &b) {
        int da = std::accumulate(a.begin(), a.end(), 0);
        int db = std::accumulate(b.begin(), b.end(), 0);
        if (da != db) return da < db;
        return a < b;
    });
    map.monomials = std::move(all);
    for (std::size_t i = 0; i < map.monomials.size(); ++i) map.position[map.monomials[i]] = int(i);

    MatrixOneForm sys(int(map.monomials.size()), omega.variables());
    auto xsym = [m, n](int i, int j) { return std::size_t(m) + std::size_t(i) * std::size_t(n) + std::size_t(j); };
    for (std::size_t row = 0; row < map.monomials.size(); ++row) {
        const std::vector<int> &mono = map.monomials[row];
        // t-part of the Leibniz rule: d t^alpha -> alpha_k t^{alpha - e_k} dt_k
        for (int k = 0; k < m; ++k) {
            if (mono[std::size_t(k)] == 0) continue;
            std::vector<int> target = mono;
            target[std::size_t(k)] -= 1;
            int col = map.position.at(target);
            RationalFunction cur = sys.coeff(int(row), col, k);
            sys.set_coeff(int(row), col, k, cur + RationalFunction(Rational(mono[std::size_t(k)])));
        }
        // X-part: replacing one X_ij factor via dX_ij = sum_l Omega_il X_lj
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                int beta = mono[xsym(i, j)];
                if (beta == 0) continue;
                for (int l = 0; l < n; ++l)
                    for (int k = 0; k < m; ++k) {
                        const RationalFunction &w = omega.coeff(i, l, k);
                        if (w.is_zero()) continue;
                        std::vector<int> target = mono;
                        target[xsym(i, j)] -= 1;
                        target[xsym(l, j)] += 1;
                        int col = map.position.at(target);
                        RationalFunction cur = sys.coeff(int(row), col, k);
                        sys.set_coeff(int(row), col, k, cur + RationalFunction(Rational(beta)) * w);
                    }
            }
    }
    return MonomialExtension{std::move(sys), std::move(map)};
}

RationalMapSpec RationalMapSpec::make(std::vector<std::string> source_vars,
                                      std::vector<std::string> target_vars,
                                      std::vector<RationalFunction> components) {
    if (components.size() != target_vars.size())
        throw std::invalid_argument("rational map needs one component per target variable");
    for (const auto &c : components) {
        for (const auto &v : c.num().vars())
            if (std::find(source_vars.begin(), source_vars.end(), v) == source_vars.end())
                throw std::invalid_argument("map component uses unknown source variable " + v);
        for (const auto &v : c.den().vars())
            if (std::find(source_vars.begin(), source_vars.end(), v) == source_vars.end())
                throw std::invalid_argument("map component uses unknown source variable " + v);
    }
    return RationalMapSpec{std::move(source_vars), std::move(target_vars), std::move(components)};
}

MatrixOneForm pullback(const MatrixOneForm &omega, const RationalMapSpec &f) {
    if (f.target_vars != omega.variables())
        throw std::invalid_argument("pullback: map target variables do not match the form");
    std::map<std::string, RationalFunction> subst;
    for (std::size_t k = 0; k < f.target_vars.size(); ++k) subst[f.target_vars[k]] = f.components[k];

    // df_k = sum_l (d f_k / d s_l) ds_l
    std::vector<std::vector<RationalFunction>> jac(f.components.size());
    for (std::size_t k = 0; k < f.components.size(); ++k)
        for (const auto &s : f.source_vars) jac[k].push_back(f.components[k].derivative(s));

    MatrixOneForm out(omega.n(), f.source_vars);
    for (int i = 0; i < omega.n(); ++i)
        for (int j = 0; j < omega.n(); ++j) {
            std::vector<RationalFunction> composed(std::size_t(omega.m()));
            for (int k = 0; k < omega.m(); ++k) {
                const RationalFunction &r = omega.coeff(i, j, k);
                if (r.is_zero()) continue;
                try {
                    composed[std::size_t(k)] = r.subst(subst);
                } catch (const std::domain_error &) {
                    throw std::domain_error("pullback image lies inside the singular locus (entry " +
                                            std::to_string(i) + "," + std::to_string(j) + ")");
                }
            }
            for (std::size_t l = 0; l < f.source_vars.size(); ++l) {
                RationalFunction acc;
                for (int k = 0; k < omega.m(); ++k) {
                    if (omega.coeff(i, j, k).is_zero() || jac[std::size_t(k)][l].is_zero()) continue;
                    acc = acc + composed[std::size_t(k)] * jac[std::size_t(k)][l];
                }
                out.set_coeff(i, j, int(l), acc);
            }
        }
    return out;
}

ConstructionEcho make_echo(const std::string &operation, const std::vector<ComplexityReport> &inputs,
                           const ComplexityReport &output) {
    return ConstructionEcho{operation, inputs, output};
}

ComplexityReport complexity(const FuchsianSystem &f) { return complexity(fuchsian_to_form(f)); }

} // namespace qsys
