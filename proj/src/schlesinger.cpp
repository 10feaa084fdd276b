#include "qsys/schlesinger.hpp"

#include <cmath>
#include <sstream>

namespace qsys {

Complex PoleTrajectory::at(double tau) const {
    if (waypoints.empty()) throw std::invalid_argument("empty trajectory");
    if (waypoints.size() == 1) return waypoints[0];
    double scaled = tau * double(waypoints.size() - 1);
    std::size_t k = std::min(std::size_t(scaled), waypoints.size() - 2);
    double frac = scaled - double(k);
    return waypoints[k] + frac * (waypoints[k + 1] - waypoints[k]);
}

Complex PoleTrajectory::velocity(double tau) const {
    if (waypoints.size() <= 1) return {0, 0};
    double scaled = tau * double(waypoints.size() - 1);
    std::size_t k = std::min(std::size_t(scaled), waypoints.size() - 2);
    return (waypoints[k + 1] - waypoints[k]) * double(waypoints.size() - 1);
}

void ConfigurationPath::validate() const {
    if (trajectories.empty()) throw std::invalid_argument("no pole trajectories");
    if (trajectories.size() != initial_residues.size())
        throw std::invalid_argument("trajectory/residue count mismatch");
    Eigen::Index n = initial_residues[0].rows();
    for (const auto &A : initial_residues)
        if (A.rows() != n || A.cols() != n)
            throw std::invalid_argument("initial residues must be square matrices of one size");
    // collisions allowed only at the limit endpoint tau = 1
    const int grid = 257;
    for (int g = 0; g < grid; ++g) {
        double tau = double(g) / grid; // stops short of 1.0
        for (std::size_t i = 0; i < trajectories.size(); ++i)
            for (std::size_t j = i + 1; j < trajectories.size(); ++j)
                if (std::abs(trajectories[i].at(tau) - trajectories[j].at(tau)) < 1e-12) {
                    std::ostringstream os;
                    os << "poles " << i << " and " << j << " collide at tau = " << tau;
                    throw std::invalid_argument(os.str());
                }
    }
}

namespace {

constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561, A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176,
                 A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784, B6 = 11.0 / 84;
constexpr double E1 = B1 - 5179.0 / 57600, E3 = B3 - 7571.0 / 16695, E4 = B4 - 393.0 / 640,
                 E5 = B5 + 92097.0 / 339200, E6 = B6 - 187.0 / 2100, E7 = -1.0 / 40;
constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;

using State = std::vector<Eigen::MatrixXcd>;

State rhs(const ConfigurationPath &path, double tau, const State &A) {
    std::size_t p = A.size();
    State out(p);
    std::vector<Complex> pos(p), vel(p);
    for (std::size_t i = 0; i < p; ++i) {
        pos[i] = path.trajectories[i].at(tau);
        vel[i] = path.trajectories[i].velocity(tau);
        out[i] = Eigen::MatrixXcd::Zero(A[0].rows(), A[0].cols());
    }
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) {
            if (i == j) continue;
            Complex gap = pos[i] - pos[j];
            Complex factor = (vel[i] - vel[j]) / gap;
            out[i] -= (A[i] * A[j] - A[j] * A[i]) * factor;
        }
    return out;
}

State axpy(const State &x, double h, std::initializer_list<std::pair<double, const State *>> terms) {
    State out = x;
    for (const auto &[w, k] : terms)
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += h * w * (*k)[i];
    return out;
}

double state_max_abs(const State &s) {
    double best = 0;
    for (const auto &m : s) best = std::max(best, max_abs(m));
    return best;
}

double min_gap(const ConfigurationPath &path, double tau) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < path.trajectories.size(); ++i)
        for (std::size_t j = i + 1; j < path.trajectories.size(); ++j)
            best = std::min(best, std::abs(path.trajectories[i].at(tau) - path.trajectories[j].at(tau)));
    return best;
}

NumericFuchsian snapshot(const ConfigurationPath &path, double tau, const State &A) {
    NumericFuchsian out;
    for (std::size_t i = 0; i < path.trajectories.size(); ++i) {
        out.poles.push_back(path.trajectories[i].at(tau));
        out.residues.push_back(A[i]);
    }
    return out;
}

} // namespace

FlowResult flow(const ConfigurationPath &path, const FlowOptions &options) {
    path.validate();
    FlowResult out;
    std::size_t p = path.trajectories.size();

    // resonance warning on the initial data
    for (std::size_t i = 0; i < p; ++i) {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(path.initial_residues[i]);
        auto ev = es.eigenvalues();
        for (Eigen::Index a = 0; a < ev.size(); ++a)
            for (Eigen::Index b = a + 1; b < ev.size(); ++b) {
                Complex diff = ev(a) - ev(b);
                if (std::abs(diff.imag()) < 1e-9 &&
                    std::abs(diff.real() - std::round(diff.real())) < 1e-9) {
                    std::ostringstream os;
                    os << "residue " << i << " has eigenvalues differing by an integer";
                    out.events.push_back({0.0, "resonant-initial-data", os.str()});
                    a = ev.size(); // one warning per residue
                    break;
                }
            }
    }

    State A = path.initial_residues;
    double initial_gap = min_gap(path, 0.0);
    double initial_norm = std::max(state_max_abs(A), 1e-300);
    bool collision_flagged = false;
    int growth_decade = 0;

    int n_ckpt = std::max(options.checkpoints, 2);
    std::vector<double> ckpt_taus;
    for (int k = 0; k < n_ckpt; ++k) ckpt_taus.push_back(double(k) / (n_ckpt - 1));
    std::size_t next_ckpt = 0;

    double tau = 0;
    double h = 1e-3;
    long steps = 0;
    bool failed = false;
    while (tau < 1.0 && !failed) {
        while (next_ckpt < ckpt_taus.size() && ckpt_taus[next_ckpt] <= tau + 1e-15) {
            out.checkpoints.push_back({ckpt_taus[next_ckpt], snapshot(path, ckpt_taus[next_ckpt], A)});
            ++next_ckpt;
        }
        if (next_ckpt < ckpt_taus.size()) h = std::min(h, ckpt_taus[next_ckpt] - tau);
        h = std::min(h, 1.0 - tau);
        if (h < 1e-14) {
            if (1.0 - tau < 1e-12) break;
            out.events.push_back({tau, "step-failure",
                                  "step collapse (movable singularity of the nonlinear flow)"});
            failed = true;
            break;
        }
        if (options.freeze_residues) {
            tau += h;
            h = std::min(1e-2, h * 2);
            continue;
        }
        State k1 = rhs(path, tau, A);
        State k2 = rhs(path, tau + C2 * h, axpy(A, h, {{A21, &k1}}));
        State k3 = rhs(path, tau + C3 * h, axpy(A, h, {{A31, &k1}, {A32, &k2}}));
        State k4 = rhs(path, tau + C4 * h, axpy(A, h, {{A41, &k1}, {A42, &k2}, {A43, &k3}}));
        State k5 = rhs(path, tau + C5 * h, axpy(A, h, {{A51, &k1}, {A52, &k2}, {A53, &k3}, {A54, &k4}}));
        State k6 = rhs(path, tau + h,
                       axpy(A, h, {{A61, &k1}, {A62, &k2}, {A63, &k3}, {A64, &k4}, {A65, &k5}}));
        State y5 = axpy(A, h, {{B1, &k1}, {B3, &k3}, {B4, &k4}, {B5, &k5}, {B6, &k6}});
        State k7 = rhs(path, tau + h, y5);
        State errs = axpy(State(A.size(), Eigen::MatrixXcd::Zero(A[0].rows(), A[0].cols())), h,
                          {{E1, &k1}, {E3, &k3}, {E4, &k4}, {E5, &k5}, {E6, &k6}, {E7, &k7}});
        double scale = options.tol * (1.0 + std::max(state_max_abs(A), state_max_abs(y5)));
        double err = state_max_abs(errs) / scale;
        if (err <= 1.0) {
            A = y5;
            tau += h;
            ++steps;
            if (steps > 2'000'000) {
                out.events.push_back({tau, "step-failure", "step budget exhausted"});
                failed = true;
                break;
            }
            double gap = min_gap(path, std::min(tau, 1.0 - 1e-12));
            if (!collision_flagged && gap < options.collision_ratio * initial_gap) {
                collision_flagged = true;
                std::ostringstream os;
                os << "min pole gap " << gap << " below " << options.collision_ratio << " x initial";
                out.events.push_back({tau, "near-collision", os.str()});
            }
            double norm = state_max_abs(A);
            while (norm > initial_norm * std::pow(options.growth_factor, growth_decade + 1)) {
                ++growth_decade;
                std::ostringstream os;
                os << "max residue norm " << norm << " exceeds " << growth_decade
                   << " growth decades over initial " << initial_norm;
                out.events.push_back({tau, "residue-growth", os.str()});
            }
        }
        double factor = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
        h = std::min(h, 0.05);
    }
    while (!failed && next_ckpt < ckpt_taus.size()) {
        out.checkpoints.push_back({ckpt_taus[next_ckpt], snapshot(path, ckpt_taus[next_ckpt], A)});
        ++next_ckpt;
    }
    out.completed = !failed;
    return out;
}

IsomonodromyReport isomonodromy_check(const FlowResult &result, Complex basepoint, double tol) {
    if (result.checkpoints.size() < 2)
        throw std::invalid_argument("need at least two checkpoints to compare invariants");
    IsomonodromyReport rep;
    std::size_t p = result.checkpoints[0].system.poles.size();
    int n = result.checkpoints[0].system.n();

    // loops must stay deformable: the basepoint may never come close to a pole
    for (const auto &ck : result.checkpoints)
        for (std::size_t i = 0; i < p; ++i)
            if (std::abs(ck.system.poles[i] - basepoint) < 1e-6) {
                std::ostringstream os;
                os << "loop basepoint crossed by pole " << i << " at tau = " << ck.tau;
                throw std::invalid_argument(os.str());
            }

    // reference invariants from the first checkpoint
    std::vector<std::vector<Complex>> ref_char(p);
    std::vector<Complex> ref_pair(p);
    bool first = true;

    std::vector<Eigen::MatrixXcd> monos(p);
    for (const auto &ck : result.checkpoints) {
        LinearSystem sys = LinearSystem::from(ck.system);
        for (std::size_t i = 0; i < p; ++i) {
            double r = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < p; ++j)
                if (j != i) r = std::min(r, std::abs(ck.system.poles[j] - ck.system.poles[i]));
            if (!std::isfinite(r)) r = 1.0;
            r *= 0.5;
            r = std::min(r, 0.5 * std::abs(basepoint - ck.system.poles[i]));
            PathSpec loop = PathSpec::based_circle(basepoint, ck.system.poles[i], r, true);
            monos[i] = monodromy(sys, loop, tol).matrix;
        }
        for (std::size_t i = 0; i < p; ++i) {
            // char-poly coefficients via eigenvalues (conjugacy invariants)
            Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(monos[i]);
            std::vector<Complex> coeffs(std::size_t(n) + 1, Complex(0, 0));
            coeffs[0] = 1.0;
            std::size_t used = 1;
            for (Eigen::Index e = 0; e < es.eigenvalues().size(); ++e) {
                Complex lam = es.eigenvalues()(e);
                for (std::size_t k = used; k-- > 0;) coeffs[k + 1] = coeffs[k + 1] - lam * coeffs[k];
                ++used;
            }
            Complex pair_trace = (monos[i] * monos[(i + 1) % p]).trace();
            if (first) {
                ref_char[i] = coeffs;
                ref_pair[i] = pair_trace;
            } else {
                for (std::size_t k = 0; k < coeffs.size(); ++k)
                    rep.max_single_loop_drift =
                        std::max(rep.max_single_loop_drift, std::abs(coeffs[k] - ref_char[i][k]));
                rep.max_pair_product_drift =
                    std::max(rep.max_pair_product_drift, std::abs(pair_trace - ref_pair[i]));
            }
        }
        first = false;
    }

    // isospectrality of the residues themselves (char-poly coefficients)
    auto charpoly_coeffs = [n](const Eigen::MatrixXcd &m) {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m);
        std::vector<Complex> coeffs(std::size_t(n) + 1, Complex(0, 0));
        coeffs[0] = 1.0;
        std::size_t used = 1;
        for (Eigen::Index e = 0; e < es.eigenvalues().size(); ++e) {
            Complex lam = es.eigenvalues()(e);
            for (std::size_t k = used; k-- > 0;) coeffs[k + 1] = coeffs[k + 1] - lam * coeffs[k];
            ++used;
        }
        return coeffs;
    };
    std::vector<std::vector<Complex>> ref_res(p);
    first = true;
    for (const auto &ck : result.checkpoints) {
        for (std::size_t i = 0; i < p; ++i) {
            std::vector<Complex> coeffs = charpoly_coeffs(ck.system.residues[i]);
            if (first) {
                ref_res[i] = coeffs;
            } else {
                double scale = 1.0;
                for (const auto &v : ref_res[i]) scale = std::max(scale, std::abs(v));
                for (std::size_t k = 0; k < coeffs.size(); ++k)
                    rep.residue_charpoly_drift =
                        std::max(rep.residue_charpoly_drift, std::abs(coeffs[k] - ref_res[i][k]) / scale);
            }
        }
        first = false;
    }
    return rep;
}

} // namespace qsys
