#include "qsys/form.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qsys {

GMat gmat_from(const QMat &m) {
    GMat out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (const auto &v : m[i]) out[i].emplace_back(v);
    return out;
}

GMat gmat_add(const GMat &a, const GMat &b) {
    GMat out = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) out[i][j] = a[i][j] + b[i][j];
    return out;
}

GMat gmat_neg(const GMat &a) {
    GMat out = a;
    for (auto &row : out)
        for (auto &v : row) v = -v;
    return out;
}

GMat gmat_conj(const GMat &a) {
    GMat out = a;
    for (auto &row : out)
        for (auto &v : row) v = v.conj();
    return out;
}

bool gmat_is_real(const GMat &a) {
    for (const auto &row : a)
        for (const auto &v : row)
            if (!v.is_real()) return false;
    return true;
}

QMat gmat_real_part(const GMat &a) {
    QMat out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (const auto &v : a[i]) out[i].push_back(v.re);
    return out;
}

// --- FuchsianSystem -----------------------------------------------------------

FuchsianSystem::FuchsianSystem(std::vector<GaussianRational> poles, std::vector<GMat> residues)
    : poles_(std::move(poles)), residues_(std::move(residues)) {
    if (poles_.empty()) throw std::invalid_argument("Fuchsian system needs at least one pole");
    if (poles_.size() != residues_.size())
        throw std::invalid_argument("pole/residue count mismatch");
    n_ = int(residues_[0].size());
    for (std::size_t j = 0; j < residues_.size(); ++j) {
        if (int(residues_[j].size()) != n_)
            throw std::invalid_argument("residue matrices must share one dimension");
        for (const auto &row : residues_[j])
            if (int(row.size()) != n_) throw std::invalid_argument("residue matrix not square");
        if (mat_is_zero(residues_[j]))
            throw std::invalid_argument("zero residue at pole " + poles_[j].str() +
                                        " (degenerate singular point)");
    }
    for (std::size_t i = 0; i < poles_.size(); ++i)
        for (std::size_t j = i + 1; j < poles_.size(); ++j)
            if (poles_[i] == poles_[j])
                throw std::invalid_argument("poles must be pairwise distinct (" + poles_[i].str() + ")");
}

GMat FuchsianSystem::residue_sum() const {
    GMat s = mat_zero<GaussianRational>(std::size_t(n_));
    for (const auto &a : residues_) s = gmat_add(s, a);
    return s;
}

GMat FuchsianSystem::residue_at_infinity() const { return gmat_neg(residue_sum()); }

bool FuchsianSystem::infinity_singular() const { return !mat_is_zero(residue_sum()); }

// --- MatrixOneForm ------------------------------------------------------------

MatrixOneForm::MatrixOneForm(int n, std::vector<std::string> variables)
    : n_(n), vars_(std::move(variables)) {
    if (n_ < 1) throw std::invalid_argument("form dimension must be >= 1");
    if (vars_.empty()) throw std::invalid_argument("form needs at least one variable");
    for (std::size_t i = 0; i < vars_.size(); ++i)
        for (std::size_t j = i + 1; j < vars_.size(); ++j)
            if (vars_[i] == vars_[j]) throw std::invalid_argument("duplicate variable " + vars_[i]);
    entries_.assign(std::size_t(n_) * std::size_t(n_) * vars_.size(), RationalFunction{});
}

void MatrixOneForm::set_coeff(int i, int j, int k, RationalFunction value) {
    for (const auto &v : value.num().vars())
        if (std::find(vars_.begin(), vars_.end(), v) == vars_.end())
            throw std::invalid_argument("coefficient uses unknown variable " + v);
    for (const auto &v : value.den().vars())
        if (std::find(vars_.begin(), vars_.end(), v) == vars_.end())
            throw std::invalid_argument("coefficient uses unknown variable " + v);
    entries_[idx(i, j, k)] = std::move(value);
}

void MatrixOneForm::set_coeff(int i, int j, const std::string &var, RationalFunction value) {
    auto it = std::find(vars_.begin(), vars_.end(), var);
    if (it == vars_.end()) throw std::invalid_argument("unknown differential d" + var);
    set_coeff(i, j, int(it - vars_.begin()), std::move(value));
}

bool MatrixOneForm::is_zero() const {
    for (const auto &e : entries_)
        if (!e.is_zero()) return false;
    return true;
}

// --- flatness -------------------------------------------------------------------

bool FlatnessResidual::is_flat() const {
    for (const auto &mat : coefficients)
        if (!mat_is_zero(mat)) return false;
    return true;
}

FlatnessResidual flatness_residual(const MatrixOneForm &omega) {
    FlatnessResidual out;
    out.n = omega.n();
    out.m = omega.m();
    const auto &vars = omega.variables();
    for (int k = 0; k < out.m; ++k)
        for (int l = k + 1; l < out.m; ++l) {
            out.wedge_pairs.emplace_back(k, l);
            Mat<RationalFunction> coeff = mat_zero<RationalFunction>(std::size_t(out.n));
            for (int i = 0; i < out.n; ++i)
                for (int j = 0; j < out.n; ++j) {
                    // d(omega_ij) component: d/dt_k (R_ijl) - d/dt_l (R_ijk)
                    RationalFunction c = omega.coeff(i, j, l).derivative(vars[std::size_t(k)]) -
                                         omega.coeff(i, j, k).derivative(vars[std::size_t(l)]);
                    // (Omega ^ Omega)_ij on dt_k ^ dt_l: sum_p R_ipk R_pjl - R_ipl R_pjk
                    for (int p = 0; p < out.n; ++p)
                        c = c - (omega.coeff(i, p, k) * omega.coeff(p, j, l) -
                                 omega.coeff(i, p, l) * omega.coeff(p, j, k));
                    coeff[std::size_t(i)][std::size_t(j)] = c;
                }
            out.coefficients.push_back(std::move(coeff));
        }
    return out;
}

// --- exact root extraction over Q(i) ---------------------------------------------

namespace {

// best rational approximation with denominator <= bound (continued fractions)
std::optional<Rational> reconstruct_rational(double x, long bound, double tol) {
    if (!std::isfinite(x)) return std::nullopt;
    long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double v = x;
    for (int iter = 0; iter < 64; ++iter) {
        double fl = std::floor(v);
        if (fl > 2e18 || fl < -2e18) return std::nullopt;
        long a = long(fl);
        long p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > bound || q2 < 0) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        double rem = v - double(a);
        if (std::abs(double(p1) / double(q1) - x) < tol) break;
        if (rem < 1e-15) break;
        v = 1.0 / rem;
    }
    if (q1 == 0) return std::nullopt;
    if (std::abs(double(p1) / double(q1) - x) > tol) return std::nullopt;
    return Rational(p1, q1);
}

std::vector<std::complex<double>> numeric_roots(const std::vector<Rational> &coeffs) {
    // companion-matrix eigenvalues of a dense univariate polynomial
    int deg = int(coeffs.size()) - 1;
    while (deg > 0 && coeffs[std::size_t(deg)].is_zero()) --deg;
    if (deg <= 0) return {};
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
    double lead = coeffs[std::size_t(deg)].to_double();
    for (int i = 0; i < deg; ++i) {
        comp(i, deg - 1) = -coeffs[std::size_t(i)].to_double() / lead;
        if (i > 0) comp(i, i - 1) = 1.0;
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp);
    std::vector<std::complex<double>> out;
    for (int i = 0; i < deg; ++i) out.push_back(es.eigenvalues()(i));
    return out;
}

std::vector<Rational> dense_univariate(const Polynomial &p) {
    if (p.vars().size() > 1) throw std::invalid_argument("expected univariate polynomial");
    int d = std::max(p.total_degree(), 0);
    std::vector<Rational> c(std::size_t(d) + 1, Rational(0));
    for (const auto &[e, coeff] : p.terms()) c[e.empty() ? 0 : std::size_t(e[0])] = coeff;
    return c;
}

} // namespace

std::vector<std::pair<GaussianRational, int>> gaussian_roots(const Polynomial &p) {
    if (p.is_zero()) throw std::invalid_argument("gaussian_roots of the zero polynomial");
    std::vector<std::pair<GaussianRational, int>> out;
    RationalRoots rr = rational_roots(p);
    for (const auto &[r, m] : rr.roots) out.emplace_back(GaussianRational(r), m);

    Polynomial rem = rr.deflated;
    std::string var = p.vars().empty() ? "t" : p.vars()[0];
    while (rem.total_degree() > 0) {
        auto roots = numeric_roots(dense_univariate(rem));
        bool progressed = false;
        for (const auto &z : roots) {
            if (std::abs(z.imag()) < 1e-12) continue; // would have been a rational root
            auto re = reconstruct_rational(z.real(), 1000000, 1e-7);
            auto im = reconstruct_rational(z.imag(), 1000000, 1e-7);
            if (!re || !im || im->is_zero()) continue;
            GaussianRational cand(*re, *im);
            std::map<std::string, GaussianRational> pt = {{var, cand}};
            if (!rem.eval(pt).is_zero()) continue;
            // conjugate pair divides exactly: t^2 - 2 Re t + |z|^2
            Polynomial t = Polynomial::variable(var);
            Polynomial quad =
                t * t - Polynomial::constant(Rational(2) * *re) * t + Polynomial::constant(cand.norm());
            int mult = 0;
            while (true) {
                auto q = try_exact_div(rem, quad);
                if (!q) break;
                rem = *q;
                ++mult;
            }
            if (mult > 0) {
                out.emplace_back(cand, mult);
                out.emplace_back(cand.conj(), mult);
                progressed = true;
                break;
            }
        }
        if (!progressed) {
            std::ostringstream os;
            os << "pole not in Q(i): root of " << rem.str() << " near ";
            if (!roots.empty()) os << roots[0].real() << (roots[0].imag() < 0 ? "-" : "+")
                                   << std::abs(roots[0].imag()) << "i";
            throw std::domain_error(os.str());
        }
    }
    std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
        if (a.first.re != b.first.re) return a.first.re < b.first.re;
        return a.first.im < b.first.im;
    });
    return out;
}

// --- to_fuchsian ------------------------------------------------------------------

ToFuchsianResult to_fuchsian(const MatrixOneForm &omega) {
    ToFuchsianResult out;
    if (omega.m() != 1) {
        out.rejection = "to_fuchsian requires a one-variable form";
        return out;
    }
    const std::string &var = omega.variables()[0];
    int n = omega.n();

    // collect poles with orders from every entry
    std::map<std::pair<Rational, Rational>, GaussianRational> pole_set;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const RationalFunction &r = omega.coeff(i, j, 0);
            if (r.is_zero()) continue;
            int dn = r.num().total_degree();
            int dd = r.den().total_degree();
            if (dn >= dd) {
                std::ostringstream os;
                os << "pole of order " << (dn - dd + 2) << " at infinity (entry " << i << "," << j << ")";
                out.rejection = os.str();
                return out;
            }
            std::vector<std::pair<GaussianRational, int>> roots;
            try {
                roots = gaussian_roots(r.den());
            } catch (const std::domain_error &e) {
                out.rejection = e.what();
                return out;
            }
            for (const auto &[a, mult] : roots) {
                if (mult > 1) {
                    std::ostringstream os;
                    os << "pole of order " << mult << " at " << a.str() << " (entry " << i << "," << j << ")";
                    out.rejection = os.str();
                    return out;
                }
                pole_set.insert({{a.re, a.im}, a});
            }
        }

    if (pole_set.empty()) {
        out.rejection = "form is holomorphic (no finite poles); not a Fuchsian system";
        return out;
    }

    std::vector<GaussianRational> poles;
    for (const auto &[key, a] : pole_set) poles.push_back(a);

    std::vector<GMat> residues;
    for (const auto &a : poles) {
        GMat A = mat_zero<GaussianRational>(std::size_t(n));
        std::map<std::string, GaussianRational> pt = {{var, a}};
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const RationalFunction &r = omega.coeff(i, j, 0);
                if (r.is_zero()) continue;
                if (!r.den().eval(pt).is_zero()) continue;
                // simple pole: residue = num(a) / den'(a)
                GaussianRational dden = r.den().derivative(var).eval(pt);
                A[std::size_t(i)][std::size_t(j)] = r.num().eval(pt) / dden;
            }
        residues.push_back(std::move(A));
    }

    FuchsianSystem fs(std::move(poles), std::move(residues));
    out.infinity_singular = fs.infinity_singular();
    out.residue_at_infinity = fs.residue_at_infinity();
    out.system = std::move(fs);
    return out;
}

MatrixOneForm fuchsian_to_form(const FuchsianSystem &f, const std::string &var) {
    MatrixOneForm out(f.n(), {var});
    Polynomial t = Polynomial::variable(var);
    std::vector<bool> done(f.pole_count(), false);
    for (int i = 0; i < f.n(); ++i)
        for (int j = 0; j < f.n(); ++j) {
            RationalFunction acc;
            std::fill(done.begin(), done.end(), false);
            for (std::size_t p = 0; p < f.pole_count(); ++p) {
                if (done[p]) continue;
                const GaussianRational &a = f.poles()[p];
                const GaussianRational &A = f.residues()[p][std::size_t(i)][std::size_t(j)];
                if (a.is_real()) {
                    done[p] = true;
                    if (A.is_zero()) continue;
                    if (!A.is_real())
                        throw std::domain_error("system not defined over Q: complex residue at real pole " +
                                                a.str());
                    acc = acc + RationalFunction(Polynomial::constant(A.re),
                                                 t - Polynomial::constant(a.re));
                } else {
                    // need the conjugate pole with conjugate residue entry
                    std::size_t q = p;
                    for (std::size_t k = p + 1; k < f.pole_count(); ++k)
                        if (f.poles()[k] == a.conj()) q = k;
                    if (q == p)
                        throw std::domain_error("system not defined over Q: pole " + a.str() +
                                                " lacks its conjugate");
                    const GaussianRational &B = f.residues()[q][std::size_t(i)][std::size_t(j)];
                    if (B != A.conj())
                        throw std::domain_error("system not defined over Q: residues at " + a.str() +
                                                " and its conjugate are not conjugate");
                    done[p] = done[q] = true;
                    if (A.is_zero()) continue;
                    // A/(t-a) + conj(A)/(t-conj(a)) = (2 Re(A) t - 2 Re(A conj(a))) / (t^2 - 2 Re(a) t + |a|^2)
                    Polynomial num = Polynomial::constant(Rational(2) * A.re) * t -
                                     Polynomial::constant(Rational(2) * (A * a.conj()).re);
                    Polynomial den = t * t - Polynomial::constant(Rational(2) * a.re) * t +
                                     Polynomial::constant(a.norm());
                    acc = acc + RationalFunction(num, den);
                }
            }
            out.set_coeff(i, j, 0, acc);
        }
    return out;
}

// --- complexity / rho / singular locus ----------------------------------------------

ComplexityReport complexity(const MatrixOneForm &omega) {
    ComplexityReport rep;
    rep.n = omega.n();
    rep.m = omega.m();
    rep.s = 2; // floor (Thm hypotheses want s >= 2)
    rep.d = 0;
    for (int i = 0; i < omega.n(); ++i)
        for (int j = 0; j < omega.n(); ++j)
            for (int k = 0; k < omega.m(); ++k) {
                const RationalFunction &r = omega.coeff(i, j, k);
                if (r.is_zero()) continue;
                rep.s = std::max(rep.s, r.num().max_integer_coefficient());
                rep.s = std::max(rep.s, r.den().max_integer_coefficient());
                rep.d = std::max({rep.d, r.num().total_degree(), r.den().total_degree()});
            }
    return rep;
}

double rho(const FuchsianSystem &f) {
    double acc = 2.0;
    for (const auto &A : f.residues()) {
        double norm = 0.0;
        for (const auto &row : A)
            for (const auto &v : row) norm = std::max(norm, std::sqrt(v.norm().to_double()));
        acc += norm;
    }
    for (std::size_t i = 0; i < f.pole_count(); ++i)
        for (std::size_t j = 0; j < f.pole_count(); ++j) {
            if (i == j) continue;
            acc += 1.0 / std::sqrt((f.poles()[i] - f.poles()[j]).norm().to_double());
        }
    return acc;
}

SingularLocusDescription singular_locus(const MatrixOneForm &omega) {
    std::vector<Polynomial> work;
    for (int i = 0; i < omega.n(); ++i)
        for (int j = 0; j < omega.n(); ++j)
            for (int k = 0; k < omega.m(); ++k) {
                const RationalFunction &r = omega.coeff(i, j, k);
                if (r.is_zero() || r.den().is_constant()) continue;
                Polynomial sf = squarefree_part(r.den());
                if (std::find(work.begin(), work.end(), sf) == work.end()) work.push_back(sf);
            }

    // gcd-free basis: split until pairwise coprime
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < work.size() && !changed; ++i)
            for (std::size_t j = i + 1; j < work.size() && !changed; ++j) {
                Polynomial g = poly_gcd(work[i], work[j]);
                if (g.is_constant()) continue;
                Polynomial a = exact_div(work[i], g);
                Polynomial b = exact_div(work[j], g);
                std::vector<Polynomial> next;
                for (std::size_t k = 0; k < work.size(); ++k)
                    if (k != i && k != j) next.push_back(work[k]);
                for (Polynomial piece : {g, a, b})
                    if (!piece.is_constant() &&
                        std::find(next.begin(), next.end(), piece) == next.end())
                        next.push_back(piece);
                work = std::move(next);
                changed = true;
            }
    }
    std::sort(work.begin(), work.end());
    SingularLocusDescription out;
    out.components = std::move(work);
    return out;
}

} // namespace qsys
