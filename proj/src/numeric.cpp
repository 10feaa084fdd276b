#include "qsys/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace qsys {

Eigen::MatrixXcd NumericFuchsian::coefficient(Complex t) const {
    int dim = n();
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t j = 0; j < poles.size(); ++j) acc += residues[j] / (t - poles[j]);
    return acc;
}

NumericFuchsian NumericFuchsian::from(const FuchsianSystem &f) {
    NumericFuchsian out;
    for (const auto &a : f.poles()) out.poles.push_back(a.to_complex());
    for (const auto &A : f.residues()) {
        Eigen::MatrixXcd m(f.n(), f.n());
        for (int i = 0; i < f.n(); ++i)
            for (int j = 0; j < f.n(); ++j) m(i, j) = A[std::size_t(i)][std::size_t(j)].to_complex();
        out.residues.push_back(std::move(m));
    }
    return out;
}

namespace {

Complex horner(const std::vector<Complex> &c, Complex t) {
    Complex acc = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * t + c[k];
    return acc;
}

// expand P(base + u*dir) into complex coefficients of u
std::vector<Complex> compose_along_line(const Polynomial &p, const std::vector<std::string> &vars,
                                        const std::vector<Complex> &base, const std::vector<Complex> &dir) {
    std::vector<Complex> acc = {Complex(0.0, 0.0)};
    auto add = [](std::vector<Complex> &a, const std::vector<Complex> &b) {
        if (b.size() > a.size()) a.resize(b.size(), Complex(0.0, 0.0));
        for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
    };
    auto mul = [](const std::vector<Complex> &a, const std::vector<Complex> &b) {
        std::vector<Complex> out(a.size() + b.size() - 1, Complex(0.0, 0.0));
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
        return out;
    };
    for (const auto &[e, c] : p.terms()) {
        std::vector<Complex> term = {Complex(c.to_double(), 0.0)};
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            auto it = std::find(vars.begin(), vars.end(), p.vars()[i]);
            if (it == vars.end()) throw std::logic_error("variable missing from line restriction");
            std::size_t k = std::size_t(it - vars.begin());
            std::vector<Complex> lin = {base[k], dir[k]};
            for (int rep = 0; rep < e[i]; ++rep) term = mul(term, lin);
        }
        add(acc, term);
    }
    while (acc.size() > 1 && std::abs(acc.back()) == 0.0) acc.pop_back();
    return acc;
}

} // namespace

Eigen::MatrixXcd NumericRationalSystem::coefficient(Complex t) const {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (const auto &r : cells[std::size_t(i) * std::size_t(n) + std::size_t(j)])
                acc(i, j) += r.weight * horner(r.num, t) / horner(r.den, t);
    return acc;
}

std::vector<Complex> complex_poly_roots(const std::vector<Complex> &coeffs) {
    int deg = int(coeffs.size()) - 1;
    while (deg > 0 && std::abs(coeffs[std::size_t(deg)]) == 0.0) --deg;
    if (deg <= 0) return {};
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
    for (int i = 0; i < deg; ++i) {
        comp(i, deg - 1) = -coeffs[std::size_t(i)] / coeffs[std::size_t(deg)];
        if (i > 0) comp(i, i - 1) = 1.0;
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp);
    std::vector<Complex> out;
    for (int i = 0; i < deg; ++i) out.push_back(es.eigenvalues()(i));
    return out;
}

double max_abs(const Eigen::MatrixXcd &m) {
    double best = 0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) best = std::max(best, std::abs(m(i, j)));
    return best;
}

LinearSystem LinearSystem::from(const FuchsianSystem &f) { return from(NumericFuchsian::from(f)); }

LinearSystem LinearSystem::from(const NumericFuchsian &f) {
    LinearSystem out;
    out.singular_ = f.poles;
    out.impl_ = f;
    return out;
}

LinearSystem LinearSystem::from(const MatrixOneForm &omega) {
    if (omega.m() != 1) throw std::invalid_argument("direct numeric conversion needs m = 1");
    return restrict_to_line(omega, {Complex(0.0, 0.0)}, {Complex(1.0, 0.0)});
}

LinearSystem LinearSystem::restrict_to_line(const MatrixOneForm &omega, const std::vector<Complex> &base,
                                            const std::vector<Complex> &dir) {
    if (int(base.size()) != omega.m() || int(dir.size()) != omega.m())
        throw std::invalid_argument("line data must match the number of variables");
    NumericRationalSystem sys;
    sys.n = omega.n();
    sys.cells.resize(std::size_t(sys.n) * std::size_t(sys.n));
    const auto &vars = omega.variables();
    std::vector<Complex> pole_acc;
    for (int i = 0; i < sys.n; ++i)
        for (int j = 0; j < sys.n; ++j) {
            auto &cell = sys.cells[std::size_t(i) * std::size_t(sys.n) + std::size_t(j)];
            for (int k = 0; k < omega.m(); ++k) {
                if (std::abs(dir[std::size_t(k)]) == 0.0) continue;
                const RationalFunction &r = omega.coeff(i, j, k);
                if (r.is_zero()) continue;
                NumericRationalSystem::Ratio ratio;
                ratio.weight = dir[std::size_t(k)];
                ratio.num = compose_along_line(r.num(), vars, base, dir);
                ratio.den = compose_along_line(r.den(), vars, base, dir);
                if (ratio.den.size() == 1 && std::abs(ratio.den[0]) == 0.0)
                    throw std::domain_error("line lies inside the singular locus");
                for (const auto &root : complex_poly_roots(ratio.den)) pole_acc.push_back(root);
                cell.push_back(std::move(ratio));
            }
        }
    // dedupe poles
    std::vector<Complex> poles;
    for (const auto &p : pole_acc) {
        bool dup = false;
        for (const auto &q : poles)
            if (std::abs(p - q) < 1e-9 * (1.0 + std::abs(q))) dup = true;
        if (!dup) poles.push_back(p);
    }
    sys.poles = poles;
    LinearSystem out;
    out.singular_ = std::move(poles);
    out.impl_ = std::move(sys);
    return out;
}

int LinearSystem::dimension() const {
    if (std::holds_alternative<NumericFuchsian>(impl_)) return std::get<NumericFuchsian>(impl_).n();
    return std::get<NumericRationalSystem>(impl_).n;
}

Eigen::MatrixXcd LinearSystem::coefficient(Complex t) const {
    if (std::holds_alternative<NumericFuchsian>(impl_))
        return std::get<NumericFuchsian>(impl_).coefficient(t);
    return std::get<NumericRationalSystem>(impl_).coefficient(t);
}

const std::vector<Complex> &LinearSystem::singular_points() const { return singular_; }

double LinearSystem::distance_to_locus(Complex t) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto &s : singular_) best = std::min(best, std::abs(t - s));
    return best;
}

} // namespace qsys
