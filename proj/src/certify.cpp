#include "qsys/certify.hpp"

#include <cmath>
#include <sstream>

namespace qsys {

std::string verdict_name(Verdict v) {
    switch (v) {
    case Verdict::CertifiedQuasiunipotent: return "certified-quasiunipotent";
    case Verdict::CertifiedWeakOnly: return "certified-weak-only";
    case Verdict::Rejected: return "rejected";
    case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

std::optional<int> root_of_unity_order(std::complex<double> nu, int qmax, double tol, double circle_tol) {
    if (std::abs(std::abs(nu) - 1.0) > circle_tol) return std::nullopt;
    std::complex<double> power = nu;
    for (int q = 1; q <= qmax; ++q, power *= nu)
        if (std::abs(power - 1.0) < tol) return q;
    return std::nullopt;
}

SpectrumFinding analyze_residue(const GMat &residue, const std::string &location) {
    SpectrumFinding out;
    out.location = location;
    out.method = "residue-spectrum";
    std::size_t n = residue.size();

    auto coeffs = char_poly_gaussian(residue);
    bool real_char = true;
    for (const auto &c : coeffs)
        if (!c.is_real()) real_char = false;

    if (!real_char) {
        // an all-real spectrum would force a real characteristic polynomial
        out.verdict = Verdict::Rejected;
        out.notes.push_back("characteristic polynomial has nonreal coefficients");
        return out;
    }

    Polynomial chi;
    Polynomial lambda = Polynomial::variable("lambda");
    for (std::size_t k = 0; k < coeffs.size(); ++k)
        chi = chi + Polynomial::constant(coeffs[k].re) * lambda.pow(unsigned(k));

    RationalRoots rr = rational_roots(chi);
    out.splits_over_q = rr.splits_over_q;
    out.rational_eigenvalues = rr.roots;
    for (const auto &[r, mult] : rr.roots) {
        long den = r.den().get_si();
        out.monodromy_orders.push_back(int(den));
        (void)mult;
    }
    // resonance: eigenvalue pair with integer difference (repeats count)
    for (std::size_t i = 0; i < rr.roots.size() && !out.resonant; ++i) {
        if (rr.roots[i].second > 1) out.resonant = true;
        for (std::size_t j = i + 1; j < rr.roots.size() && !out.resonant; ++j)
            if ((rr.roots[i].first - rr.roots[j].first).is_integer()) out.resonant = true;
    }

    if (rr.splits_over_q) {
        out.real_spectrum = true;
        out.verdict = Verdict::CertifiedQuasiunipotent;
        if (out.resonant)
            out.notes.push_back("resonant spectrum: monodromy orders certified per eigenvalue only");
        return out;
    }

    int distinct_real = real_root_count(chi);
    int sf_degree = squarefree_part(chi).total_degree();
    out.real_spectrum = (distinct_real == sf_degree);
    out.verdict = out.real_spectrum ? Verdict::CertifiedWeakOnly : Verdict::Rejected;
    if (out.verdict == Verdict::CertifiedWeakOnly)
        out.notes.push_back("spectrum real but not rational: weak quasiunipotence only");
    else {
        std::ostringstream os;
        os << "only " << distinct_real << " of " << sf_degree
           << " distinct eigenvalues are real; spectrum leaves the unit circle";
        out.notes.push_back(os.str());
    }
    (void)n;
    return out;
}

namespace {

Verdict combine(const std::vector<Verdict> &parts) {
    if (parts.empty()) return Verdict::CertifiedQuasiunipotent; // vacuous
    bool any_rejected = false, any_inconclusive = false, any_weak = false;
    for (Verdict v : parts) {
        if (v == Verdict::Rejected) any_rejected = true;
        if (v == Verdict::Inconclusive) any_inconclusive = true;
        if (v == Verdict::CertifiedWeakOnly) any_weak = true;
    }
    if (any_rejected) return Verdict::Rejected;
    if (any_inconclusive) return Verdict::Inconclusive;
    if (any_weak) return Verdict::CertifiedWeakOnly;
    return Verdict::CertifiedQuasiunipotent;
}

} // namespace

QuasiunipotenceCertificate certify(const FuchsianSystem &f) {
    QuasiunipotenceCertificate cert;
    std::vector<Verdict> verdicts;
    for (std::size_t j = 0; j < f.pole_count(); ++j) {
        SpectrumFinding finding = analyze_residue(f.residues()[j], f.poles()[j].str());
        verdicts.push_back(finding.verdict);
        cert.findings.push_back(std::move(finding));
    }
    GMat at_inf = f.residue_at_infinity();
    if (mat_is_zero(at_inf)) {
        cert.notes.push_back("t=infinity nonsingular (residue sum is zero)");
    } else {
        SpectrumFinding finding = analyze_residue(at_inf, "infinity");
        verdicts.push_back(finding.verdict);
        cert.findings.push_back(std::move(finding));
    }
    cert.verdict = combine(verdicts);
    return cert;
}

QuasiunipotenceCertificate certify_general(const MatrixOneForm &omega,
                                           const std::vector<ComponentEvidence> &strategy, int qmax,
                                           double unity_tol) {
    QuasiunipotenceCertificate cert;
    SingularLocusDescription locus = singular_locus(omega);
    if (locus.components.empty()) {
        cert.verdict = Verdict::CertifiedQuasiunipotent;
        cert.notes.push_back("empty singular locus: certified vacuously");
        return cert;
    }
    if (strategy.size() != locus.components.size())
        throw std::invalid_argument("strategy must cover every component of the singular locus (" +
                                    std::to_string(locus.components.size()) + " components)");

    std::vector<Verdict> verdicts;
    for (std::size_t c = 0; c < locus.components.size(); ++c) {
        const std::string where = "component {" + locus.components[c].str() + " = 0}";
        const ComponentEvidence &ev = strategy[c];
        if (ev.residue) {
            SpectrumFinding finding = analyze_residue(*ev.residue, where);
            finding.notes.push_back("transversal residue supplied (Euler restriction)");
            verdicts.push_back(finding.verdict);
            cert.findings.push_back(std::move(finding));
        } else if (ev.loop_eigenvalues) {
            SpectrumFinding finding;
            finding.location = where;
            finding.method = "numeric-loop";
            bool off_circle = false;
            for (const auto &nu : *ev.loop_eigenvalues) {
                if (std::abs(std::abs(nu) - 1.0) > 1e-4) {
                    off_circle = true;
                    std::ostringstream os;
                    os << "eigenvalue with |nu| = " << std::abs(nu) << " clearly off the unit circle";
                    finding.notes.push_back(os.str());
                    continue;
                }
                auto order = root_of_unity_order(nu, qmax, unity_tol, 1e-4);
                std::ostringstream os;
                if (order) {
                    os << "candidate order " << *order << " (numeric, not certified)";
                    finding.monodromy_orders.push_back(*order);
                } else {
                    os << "no root-of-unity order <= " << qmax << " found numerically";
                }
                finding.notes.push_back(os.str());
            }
            // floating point can reject but never certify
            finding.verdict = off_circle ? Verdict::Rejected : Verdict::Inconclusive;
            if (!off_circle) finding.notes.push_back("inconclusive-numeric: tolerance-limited evidence");
            verdicts.push_back(finding.verdict);
            cert.findings.push_back(std::move(finding));
        } else {
            SpectrumFinding finding;
            finding.location = where;
            finding.method = "none";
            finding.verdict = Verdict::Inconclusive;
            finding.notes.push_back("no residue and no numeric loop supplied for this component");
            verdicts.push_back(finding.verdict);
            cert.findings.push_back(std::move(finding));
        }
    }
    cert.verdict = combine(verdicts);
    return cert;
}

} // namespace qsys
