#pragma once

#include "qsys/algebra.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qsys {

template <typename T> using Mat = std::vector<std::vector<T>>;

template <typename T> Mat<T> mat_zero(std::size_t n) { return Mat<T>(n, std::vector<T>(n)); }

template <typename T> bool mat_is_zero(const Mat<T> &m) {
    for (const auto &row : m)
        for (const auto &v : row)
            if (!v.is_zero()) return false;
    return true;
}

using GMat = Mat<GaussianRational>;
using QMat = Mat<Rational>;

GMat gmat_from(const QMat &m);
GMat gmat_add(const GMat &a, const GMat &b);
GMat gmat_neg(const GMat &a);
GMat gmat_conj(const GMat &a);
bool gmat_is_real(const GMat &a);
QMat gmat_real_part(const GMat &a);

// --- Fuchsian systems on the line (eq. shape sum_j A_j dt/(t-a_j)) ----------

class FuchsianSystem {
public:
    FuchsianSystem(std::vector<GaussianRational> poles, std::vector<GMat> residues);

    int n() const { return n_; }
    std::size_t pole_count() const { return poles_.size(); }
    const std::vector<GaussianRational> &poles() const { return poles_; }
    const std::vector<GMat> &residues() const { return residues_; }

    GMat residue_sum() const;
    GMat residue_at_infinity() const; // minus the sum of the finite residues
    bool infinity_singular() const;   // sum of residues nonzero

private:
    int n_;
    std::vector<GaussianRational> poles_;
    std::vector<GMat> residues_;
};

// --- matrix 1-forms on m variables ------------------------------------------

// Omega entries: entry(i,j) = sum_k coeff(i,j,k) dt_k, coefficients in Q(t).
class MatrixOneForm {
public:
    MatrixOneForm(int n, std::vector<std::string> variables);

    int n() const { return n_; }
    int m() const { return int(vars_.size()); }
    const std::vector<std::string> &variables() const { return vars_; }

    const RationalFunction &coeff(int i, int j, int k) const { return entries_[idx(i, j, k)]; }
    void set_coeff(int i, int j, int k, RationalFunction value);
    void set_coeff(int i, int j, const std::string &var, RationalFunction value);

    bool is_zero() const;

private:
    std::size_t idx(int i, int j, int k) const {
        return (std::size_t(i) * std::size_t(n_) + std::size_t(j)) * vars_.size() + std::size_t(k);
    }
    int n_;
    std::vector<std::string> vars_;
    std::vector<RationalFunction> entries_;
};

// dOmega - Omega ^ Omega, as coefficients of dt_k ^ dt_l for k < l.
struct FlatnessResidual {
    int n = 0, m = 0;
    // residual[pair_index(k,l)][i][j]
    std::vector<Mat<RationalFunction>> coefficients;
    std::vector<std::pair<int, int>> wedge_pairs; // (k,l), k < l
    bool is_flat() const;
};
FlatnessResidual flatness_residual(const MatrixOneForm &omega);

// Fuchsian-shape recognition for m = 1 forms.
struct ToFuchsianResult {
    std::optional<FuchsianSystem> system; // empty iff rejected
    std::string rejection;                // human-readable reason when rejected
    bool infinity_singular = false;
    GMat residue_at_infinity;
};
ToFuchsianResult to_fuchsian(const MatrixOneForm &omega);

// Inverse direction: Omega = sum_j A_j dt/(t - a_j). Requires the result to be
// defined over Q (complex poles must come in conjugate pairs with conjugate
// residues).
MatrixOneForm fuchsian_to_form(const FuchsianSystem &f, const std::string &var = "t");

struct ComplexityReport {
    Int s;        // largest |integer coefficient|, floored at 2
    int d = 0;    // max total degree of the P_ijk, Q_ijk
    int n = 0, m = 0;
};
ComplexityReport complexity(const MatrixOneForm &omega);

// rho = 2 + sum_j |A_j| + sum_{i != j} 1/|a_i - a_j| (max-abs-entry norm,
// ordered pairs counted twice).
double rho(const FuchsianSystem &f);

struct SingularLocusDescription {
    std::vector<Polynomial> components; // squarefree, pairwise coprime
};
SingularLocusDescription singular_locus(const MatrixOneForm &omega);

// Exact roots of a univariate rational-coefficient polynomial over Q(i).
// Throws std::domain_error naming the offending root when one is not Q(i).
std::vector<std::pair<GaussianRational, int>> gaussian_roots(const Polynomial &p_univariate);

} // namespace qsys
