#pragma once

#include "qsys/analytic.hpp"

#include <string>
#include <vector>

namespace qsys {

// Piecewise-linear pole motion over tau in [0,1] (waypoints equally spaced).
struct PoleTrajectory {
    std::vector<Complex> waypoints;

    Complex at(double tau) const;
    Complex velocity(double tau) const; // constant per linear piece
};

struct ConfigurationPath {
    std::vector<PoleTrajectory> trajectories;    // one per pole
    std::vector<Eigen::MatrixXcd> initial_residues;

    void validate() const; // distinct poles for tau in [0,1), square residues
};

struct FlowEvent {
    double tau = 0;
    std::string kind; // near-collision | residue-growth | resonant-initial-data | step-failure
    std::string detail;
};

struct FlowCheckpoint {
    double tau = 0;
    NumericFuchsian system;
};

struct FlowOptions {
    double tol = 1e-10;
    int checkpoints = 17;
    bool freeze_residues = false;       // negative control: not isomonodromic
    double collision_ratio = 1e-2;      // event when min gap < ratio * initial min gap
    double growth_factor = 10.0;        // event per factor of residue-norm growth
};

struct FlowResult {
    std::vector<FlowCheckpoint> checkpoints;
    std::vector<FlowEvent> events;
    bool completed = false;
};

// Integrate dA_i/dtau = -sum_{j != i} [A_i, A_j] (da_i - da_j)/(a_i - a_j)
// along the pole trajectories; emits checkpoints and an event log. A step
// failure (movable singularity of the nonlinear flow) returns the partial
// trajectory with a step-failure event.
FlowResult flow(const ConfigurationPath &path, const FlowOptions &options = {});

struct IsomonodromyReport {
    double max_single_loop_drift = 0;  // char-poly coefficients of each small loop
    double max_pair_product_drift = 0; // traces of adjacent-pair products
    double residue_charpoly_drift = 0; // isospectrality of the A_i themselves
    std::vector<std::string> notes;
};

// Conjugacy invariants compared across checkpoints; loops are per-pole-index
// circles from a fixed basepoint. Throws when a loop would cross a moving pole.
IsomonodromyReport isomonodromy_check(const FlowResult &result, Complex basepoint,
                                      double tol = kDefaultTol);

} // namespace qsys
