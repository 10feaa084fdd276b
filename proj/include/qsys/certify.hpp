#pragma once

#include "qsys/form.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace qsys {

enum class Verdict { CertifiedQuasiunipotent, CertifiedWeakOnly, Rejected, Inconclusive };

std::string verdict_name(Verdict v);

// Smallest q <= qmax with |nu^q - 1| < tol, after the unit-circle test
// ||nu|-1| <= circle_tol.
std::optional<int> root_of_unity_order(std::complex<double> nu, int qmax, double tol,
                                       double circle_tol);

struct SpectrumFinding {
    std::string location; // pole or component description
    std::string method;   // "residue-spectrum", "numeric-loop", "none"
    std::vector<std::pair<Rational, int>> rational_eigenvalues; // with multiplicities
    std::vector<int> monodromy_orders; // denominators of the rational eigenvalues
    bool splits_over_q = false;
    bool real_spectrum = false;
    bool resonant = false; // two eigenvalues differ by an integer
    Verdict verdict = Verdict::Inconclusive;
    std::vector<std::string> notes;
};

struct QuasiunipotenceCertificate {
    Verdict verdict = Verdict::Inconclusive;
    std::vector<SpectrumFinding> findings;
    std::vector<std::string> notes;
};

// Algebraic certification from the residue spectra of a Fuchsian system
// (finite poles and infinity). Never returns Inconclusive.
QuasiunipotenceCertificate certify(const FuchsianSystem &f);

// Spectrum analysis of one residue matrix (the transversal Euler model).
SpectrumFinding analyze_residue(const GMat &residue, const std::string &location);

// Checking data for one irreducible component of the singular locus: either a
// transversal residue (algebraic certainty) or numerically computed small-loop
// monodromy eigenvalues (can reject or stay inconclusive, never certify).
struct ComponentEvidence {
    std::optional<GMat> residue;
    std::optional<std::vector<std::complex<double>>> loop_eigenvalues;
};

QuasiunipotenceCertificate certify_general(const MatrixOneForm &omega,
                                           const std::vector<ComponentEvidence> &strategy,
                                           int qmax = 128, double unity_tol = 1e-6);

} // namespace qsys
