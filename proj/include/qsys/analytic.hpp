#pragma once

#include "qsys/certify.hpp"
#include "qsys/numeric.hpp"

#include <functional>
#include <optional>

namespace qsys {

constexpr double kDefaultTol = 1e-12;

struct IntegrationResult {
    Eigen::MatrixXcd X;
    double error_estimate = 0;      // accumulated local error estimates
    Complex trace_integral{0, 0};   // int tr(A) dt along the path
    double abel_residual = 0;       // |det X_end - det X0 exp(trace_integral)|
    long steps = 0;
};

// One accepted integrator step on the path (used for boundary tracing).
struct SamplePoint {
    Complex t;
    Eigen::MatrixXcd X;
    std::size_t segment = 0;
    double u = 0; // parameter within the segment
};

// Transport of a fundamental solution along a path. The determinant is checked
// against the Abel/Liouville identity; X0 must be invertible.
IntegrationResult integrate(const LinearSystem &sys, const PathSpec &path, const Eigen::MatrixXcd &X0,
                            double tol = kDefaultTol, std::vector<SamplePoint> *samples = nullptr);

struct MonodromyResult {
    Eigen::MatrixXcd matrix;
    double error_estimate = 0;
    double abel_residual = 0;
    std::vector<Complex> eigenvalues;
    std::vector<double> unit_circle_deviation;
    std::vector<std::optional<int>> candidate_orders;
};

MonodromyResult monodromy(const LinearSystem &sys, const PathSpec &loop, double tol = kDefaultTol,
                          int qmax = 64, double unity_tol = 1e-6);

struct MonodromyAll {
    std::vector<std::size_t> pole_order;      // system pole indices, sorted by argument from base
    std::vector<MonodromyResult> small_loops; // parallel to pole_order
    MonodromyResult infinity_loop;            // big clockwise circle (small loop around infinity)
    double product_residual = 0;              // ||M_1 ... M_p M_inf - I||_maxabs
};

// One spider of small loops from a common basepoint, plus the loop around
// infinity and the fundamental-group product check.
MonodromyAll monodromy_all(const NumericFuchsian &sys, Complex basepoint, double tol = kDefaultTol);

std::vector<std::optional<int>> root_of_unity_test(const std::vector<Complex> &eigenvalues, int qmax,
                                                   double tol);

struct GrowthEstimate {
    double exponent = 0;          // least-squares N in |X|+|X^-1| ~ dist^-N
    bool superpolynomial = false; // overflow before the window completed
    int points_used = 0;
};

// Slope of log(|X|+|X^-1|) against -log dist along a geometric ray toward the
// singular point; the fit window is [near_dist, far_dist] in distance units.
GrowthEstimate growth_exponent(const LinearSystem &sys, Complex singular_point, Complex start,
                               double near_dist, double far_dist, double tol = kDefaultTol);

struct ZeroCount {
    int count = 0;
    double winding_residual = 0; // distance of the raw phase integral to 2*pi*count
    int refinement_depth = 0;
    int dilations = 0;
    bool reliable = true;
    Eigen::MatrixXcd combination;
};

// Argument-principle count (with multiplicity) of f = sum c_ij X_ij inside the
// triangle; X is transported from the basepoint, so T must contain it.
ZeroCount count_zeros(const LinearSystem &sys, const Eigen::MatrixXcd &c, const Triangle &T,
                      Complex basepoint, double tol = kDefaultTol);

// Deterministic parallel map: worker count from QSYS_THREADS (default: hardware).
int worker_count();
void parallel_for(std::size_t jobs, const std::function<void(std::size_t)> &body);

} // namespace qsys
