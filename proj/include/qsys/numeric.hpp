#pragma once

#include "qsys/form.hpp"
#include "qsys/geometry.hpp"

#include <Eigen/Dense>

#include <memory>
#include <variant>
#include <vector>

namespace qsys {

// Floating-point Fuchsian data (also what the Schlesinger flow emits).
struct NumericFuchsian {
    std::vector<Complex> poles;
    std::vector<Eigen::MatrixXcd> residues;

    int n() const { return residues.empty() ? 0 : int(residues[0].rows()); }
    Eigen::MatrixXcd coefficient(Complex t) const; // A(t) = sum A_j/(t-a_j)

    static NumericFuchsian from(const FuchsianSystem &f);
};

// m = 1 rational coefficient matrix with complex coefficients; the cells are
// sums of weighted num/den ratios (one per original dt_k after restriction).
struct NumericRationalSystem {
    struct Ratio {
        std::vector<Complex> num, den; // ascending powers
        Complex weight{1.0, 0.0};
    };
    int n = 0;
    std::vector<std::vector<Ratio>> cells; // n*n, row-major
    std::vector<Complex> poles;            // union of denominator roots

    Eigen::MatrixXcd coefficient(Complex t) const;
};

// What the analytic engine integrates: dX = A(t) X dt along complex paths.
class LinearSystem {
public:
    static LinearSystem from(const FuchsianSystem &f);
    static LinearSystem from(const NumericFuchsian &f);
    static LinearSystem from(const MatrixOneForm &omega); // m == 1 only
    // restriction of an m-variable form to the affine line t(u) = base + u*dir
    static LinearSystem restrict_to_line(const MatrixOneForm &omega, const std::vector<Complex> &base,
                                         const std::vector<Complex> &dir);

    int dimension() const;
    Eigen::MatrixXcd coefficient(Complex t) const;
    const std::vector<Complex> &singular_points() const;
    double distance_to_locus(Complex t) const;

private:
    std::variant<NumericFuchsian, NumericRationalSystem> impl_;
    std::vector<Complex> singular_;
};

// roots of a complex-coefficient univariate polynomial (companion matrix)
std::vector<Complex> complex_poly_roots(const std::vector<Complex> &coeffs);

// convenience norms
double max_abs(const Eigen::MatrixXcd &m);

} // namespace qsys
