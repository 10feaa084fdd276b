#include "qsys/analytic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

namespace qsys {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string nearest_singular_name(const LinearSystem &sys, Complex t) {
    double best = std::numeric_limits<double>::infinity();
    Complex who{0, 0};
    for (const auto &s : sys.singular_points()) {
        double d = std::abs(t - s);
        if (d < best) {
            best = d;
            who = s;
        }
    }
    std::ostringstream os;
    if (std::isfinite(best))
        os << who.real() << (who.imag() < 0 ? "-" : "+") << std::abs(who.imag()) << "i";
    else
        os << "(no finite singular point)";
    return os.str();
}

// Dormand-Prince 5(4) tableau
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

struct RhsEval {
    Eigen::MatrixXcd dX;
    Complex ds;
};

} // namespace

IntegrationResult integrate(const LinearSystem &sys, const PathSpec &path, const Eigen::MatrixXcd &X0,
                            double tol, std::vector<SamplePoint> *samples) {
    int n = sys.dimension();
    if (X0.rows() != n || X0.cols() != n) throw std::invalid_argument("X0 dimension mismatch");
    Complex det0 = X0.determinant();
    if (std::abs(det0) < 1e-300) throw std::invalid_argument("X0 is not invertible");
    if (path.segments.empty()) throw std::invalid_argument("empty path");

    IntegrationResult out;
    out.X = X0;
    Complex s{0, 0}; // trace integral

    auto rhs = [&sys](const PathSegment &seg, double u, const Eigen::MatrixXcd &X, RhsEval &ev) {
        Complex t = seg.at(u);
        Complex v = seg.velocity(u);
        Eigen::MatrixXcd A = sys.coefficient(t) * v;
        ev.dX = A * X;
        ev.ds = A.trace();
    };

    if (samples) samples->push_back({path.segments.front().at(0.0), out.X, 0, 0.0});

    for (std::size_t si = 0; si < path.segments.size(); ++si) {
        const PathSegment &seg = path.segments[si];
        double u = 0.0;
        double h = 0.1; // in segment parameter units
        RhsEval k1, k2, k3, k4, k5, k6, k7;
        rhs(seg, u, out.X, k1);
        while (u < 1.0) {
            if (1.0 - u < 1e-12) break; // parameter exhausted to rounding
            // ceilings: remaining parameter, and locus clearance divided by 4
            double dist = sys.distance_to_locus(seg.at(u));
            if (dist <= 0 || !std::isfinite(dist)) dist = std::numeric_limits<double>::infinity();
            double speed = std::abs(seg.velocity(u)) + 1e-300;
            double h_geom = dist / (4.0 * speed);
            h = std::min({h, 1.0 - u, h_geom});
            if (h < 1e-13) {
                throw std::runtime_error("integration step collapse near singular point " +
                                         nearest_singular_name(sys, seg.at(u)));
            }
            // DP5 stages
            Eigen::MatrixXcd X = out.X;
            rhs(seg, u + C2 * h, X + h * (A21 * k1.dX), k2);
            rhs(seg, u + C3 * h, X + h * (A31 * k1.dX + A32 * k2.dX), k3);
            rhs(seg, u + C4 * h, X + h * (A41 * k1.dX + A42 * k2.dX + A43 * k3.dX), k4);
            rhs(seg, u + C5 * h, X + h * (A51 * k1.dX + A52 * k2.dX + A53 * k3.dX + A54 * k4.dX), k5);
            rhs(seg, u + h, X + h * (A61 * k1.dX + A62 * k2.dX + A63 * k3.dX + A64 * k4.dX + A65 * k5.dX),
                k6);
            Eigen::MatrixXcd X5 =
                X + h * (B1 * k1.dX + B3 * k3.dX + B4 * k4.dX + B5 * k5.dX + B6 * k6.dX);
            rhs(seg, u + h, X5, k7);
            Eigen::MatrixXcd errm =
                h * (E1 * k1.dX + E3 * k3.dX + E4 * k4.dX + E5 * k5.dX + E6 * k6.dX + E7 * k7.dX);
            // error measured relative to each solution column: columns decay
            // and regrow independently near poles, and a matrix-wide scale
            // would let absolute error seep into the small ones
            double err = 0;
            for (Eigen::Index j = 0; j < X.cols(); ++j) {
                double colnorm = std::max(X.col(j).cwiseAbs().maxCoeff(),
                                          X5.col(j).cwiseAbs().maxCoeff());
                double scale = tol * (1e-280 + colnorm);
                err = std::max(err, errm.col(j).cwiseAbs().maxCoeff() / scale);
            }

            if (err <= 1.0) {
                // accept; trace integral via the same quadrature weights
                Complex ds = h * (B1 * k1.ds + B3 * k3.ds + B4 * k4.ds + B5 * k5.ds + B6 * k6.ds);
                s += ds;
                out.X = X5;
                u += h;
                out.error_estimate += err * tol;
                out.steps++;
                k1 = k7; // FSAL
                if (samples) samples->push_back({seg.at(u), out.X, si, u});
                if (out.steps > 5'000'000)
                    throw std::runtime_error("integration exceeded the step budget");
            }
            double factor = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
            h *= std::clamp(factor, 0.2, 5.0);
            h = std::min(h, 1.0);
        }
    }

    out.trace_integral = s;
    Complex expected = det0 * std::exp(s);
    out.abel_residual = std::abs(out.X.determinant() - expected);
    return out;
}

MonodromyResult monodromy(const LinearSystem &sys, const PathSpec &loop, double tol, int qmax,
                          double unity_tol) {
    if (!loop.closed(1e-9)) throw std::invalid_argument("monodromy needs a closed loop");
    int n = sys.dimension();
    IntegrationResult res = integrate(sys, loop, Eigen::MatrixXcd::Identity(n, n), tol);
    MonodromyResult out;
    out.matrix = res.X; // X(base) = I, so the continued solution is the monodromy factor
    out.error_estimate = res.error_estimate;
    out.abel_residual = res.abel_residual;
    if (std::abs(out.matrix.determinant()) < 1e-300)
        throw std::runtime_error("monodromy matrix is numerically singular");
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(out.matrix);
    for (int i = 0; i < n; ++i) {
        Complex nu = es.eigenvalues()(i);
        out.eigenvalues.push_back(nu);
        out.unit_circle_deviation.push_back(std::abs(std::abs(nu) - 1.0));
        out.candidate_orders.push_back(root_of_unity_order(nu, qmax, unity_tol, 1e-4));
    }
    return out;
}

std::vector<std::optional<int>> root_of_unity_test(const std::vector<Complex> &eigenvalues, int qmax,
                                                   double tol) {
    std::vector<std::optional<int>> out;
    for (const auto &nu : eigenvalues) out.push_back(root_of_unity_order(nu, qmax, tol, tol));
    return out;
}

MonodromyAll monodromy_all(const NumericFuchsian &sys, Complex basepoint, double tol) {
    MonodromyAll out;
    std::size_t p = sys.poles.size();
    if (p == 0) throw std::invalid_argument("monodromy_all needs at least one pole");
    LinearSystem lin = LinearSystem::from(sys);
    for (const auto &a : sys.poles)
        if (std::abs(a - basepoint) < 1e-12)
            throw std::invalid_argument("basepoint sits on a singular point");

    // sort poles by argument seen from the basepoint (counterclockwise spider)
    std::vector<std::size_t> order(p);
    for (std::size_t i = 0; i < p; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        double ai = std::arg(sys.poles[i] - basepoint);
        double aj = std::arg(sys.poles[j] - basepoint);
        if (ai != aj) return ai < aj;
        return std::abs(sys.poles[i] - basepoint) < std::abs(sys.poles[j] - basepoint);
    });
    out.pole_order = order;

    // small-loop radii: half distance to the nearest other pole (capped by the
    // distance to the basepoint)
    for (std::size_t idx : order) {
        double r = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < p; ++j)
            if (j != idx) r = std::min(r, std::abs(sys.poles[j] - sys.poles[idx]));
        if (!std::isfinite(r)) r = std::abs(basepoint - sys.poles[idx]); // single pole
        r *= 0.5;
        r = std::min(r, 0.5 * std::abs(basepoint - sys.poles[idx]));
        PathSpec loop = PathSpec::based_circle(basepoint, sys.poles[idx], r, true);
        out.small_loops.push_back(monodromy(lin, loop, tol));
    }

    // loop around infinity: big circle traversed clockwise
    double R = 0;
    for (const auto &a : sys.poles) R = std::max(R, std::abs(a - basepoint));
    R = 2.0 * R + 1.0;
    PathSpec big;
    Complex entry = basepoint + Complex(R, 0);
    big.segments.push_back(PathSegment::line(basepoint, entry));
    big.segments.push_back(PathSegment::full_circle(basepoint, R, 0.0, false));
    big.segments.push_back(PathSegment::line(entry, basepoint));
    out.infinity_loop = monodromy(lin, big, tol);

    int n = sys.n();
    Eigen::MatrixXcd prod = Eigen::MatrixXcd::Identity(n, n);
    for (const auto &ml : out.small_loops) prod = prod * ml.matrix;
    prod = prod * out.infinity_loop.matrix;
    out.product_residual = max_abs(prod - Eigen::MatrixXcd::Identity(n, n));
    return out;
}

GrowthEstimate growth_exponent(const LinearSystem &sys, Complex singular_point, Complex start,
                               double near_dist, double far_dist, double tol) {
    GrowthEstimate out;
    if (!(near_dist > 0) || !(far_dist > near_dist)) throw std::invalid_argument("bad fit window");
    double d0 = std::abs(start - singular_point);
    if (d0 <= near_dist) throw std::invalid_argument("start point already inside the fit window");

    int n = sys.dimension();
    Eigen::MatrixXcd X = Eigen::MatrixXcd::Identity(n, n);
    Complex dir = (start - singular_point);
    double ratio = 0.85;
    std::vector<double> xs, ys;
    Complex prev = start;
    for (double scale = 1.0; scale * d0 > 0.5 * near_dist; scale *= ratio) {
        Complex next = singular_point + dir * scale;
        if (std::abs(next - prev) > 0) {
            PathSpec hop = PathSpec::polyline({prev, next});
            IntegrationResult res;
            try {
                res = integrate(sys, hop, X, tol);
            } catch (const std::runtime_error &) {
                out.superpolynomial = true;
                break;
            }
            X = res.X;
            prev = next;
        }
        double dist = std::abs(next - singular_point);
        double xnorm = max_abs(X);
        double inv_norm;
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(X);
        if (!lu.isInvertible() || xnorm > 1e120) {
            out.superpolynomial = true;
            break;
        }
        inv_norm = max_abs(lu.inverse());
        double size = xnorm + inv_norm;
        if (!std::isfinite(size) || size > 1e120) {
            out.superpolynomial = true;
            break;
        }
        if (dist <= far_dist && dist >= near_dist) {
            xs.push_back(-std::log(dist));
            ys.push_back(std::log(size));
        }
    }
    out.points_used = int(xs.size());
    if (xs.size() >= 2) {
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            mx += xs[i];
            my += ys[i];
        }
        mx /= double(xs.size());
        my /= double(xs.size());
        double sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sxx += (xs[i] - mx) * (xs[i] - mx);
            sxy += (xs[i] - mx) * (ys[i] - my);
        }
        out.exponent = sxx > 0 ? sxy / sxx : 0.0;
    } else if (!out.superpolynomial) {
        throw std::runtime_error("growth fit window produced fewer than two samples");
    }
    return out;
}

// --- zero counting -----------------------------------------------------------

namespace {

Complex combination_value(const Eigen::MatrixXcd &c, const Eigen::MatrixXcd &X) {
    return (c.array() * X.array()).sum();
}

struct BoundarySample {
    Complex t;
    Complex f;
    Eigen::MatrixXcd X;
    std::size_t segment;
    double u;
};

// trace f along the triangle boundary, then recursively refine phase gaps
class BoundaryTracer {
public:
    BoundaryTracer(const LinearSystem &sys, const Eigen::MatrixXcd &c, double tol)
        : sys_(sys), c_(c), tol_(tol) {}

    int depth = 0;

    std::vector<BoundarySample> trace(const std::vector<PathSegment> &edges,
                                      const Eigen::MatrixXcd &X_start) {
        std::vector<BoundarySample> samples;
        Eigen::MatrixXcd X = X_start;
        samples.push_back({edges.front().at(0.0), combination_value(c_, X), X, 0, 0.0});
        for (std::size_t e = 0; e < edges.size(); ++e) {
            std::vector<SamplePoint> pts;
            PathSpec one;
            one.segments = {edges[e]};
            IntegrationResult res = integrate(sys_, one, X, tol_, &pts);
            for (std::size_t i = 1; i < pts.size(); ++i)
                samples.push_back({pts[i].t, combination_value(c_, pts[i].X), pts[i].X, e, pts[i].u});
            X = res.X;
        }
        refine(samples, edges);
        return samples;
    }

private:
    void refine(std::vector<BoundarySample> &samples, const std::vector<PathSegment> &edges) {
        for (int round = 0; round < 40; ++round) {
            bool changed = false;
            std::vector<BoundarySample> next;
            next.reserve(samples.size());
            for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
                next.push_back(samples[i]);
                const BoundarySample &a = samples[i];
                const BoundarySample &b = samples[i + 1];
                double dphi = std::arg(b.f / a.f);
                if (std::abs(dphi) < kPi / 2) continue;
                // a may be the tail of the previous edge; then it coincides
                // with the start of b's edge and carries the right transport
                double ua = a.segment == b.segment ? a.u : 0.0;
                double umid = 0.5 * (ua + b.u);
                if (umid - ua < 1e-12) continue;
                PathSegment sub = edges[b.segment];
                PathSpec hop;
                if (sub.kind == PathSegment::Kind::Arc) {
                    PathSegment piece = sub;
                    piece.theta0 = sub.theta0 + ua * sub.dtheta;
                    piece.dtheta = (umid - ua) * sub.dtheta;
                    piece.a = sub.at(ua);
                    piece.b = sub.at(umid);
                    hop.segments = {piece};
                } else {
                    hop.segments = {PathSegment::line(sub.at(ua), sub.at(umid))};
                }
                IntegrationResult res = integrate(sys_, hop, a.X, tol_);
                next.push_back({sub.at(umid), combination_value(c_, res.X), res.X, b.segment, umid});
                changed = true;
            }
            next.push_back(samples.back());
            samples = std::move(next);
            if (!changed) return;
            ++depth;
        }
    }

    const LinearSystem &sys_;
    const Eigen::MatrixXcd &c_;
    double tol_;
};

} // namespace

ZeroCount count_zeros(const LinearSystem &sys, const Eigen::MatrixXcd &c, const Triangle &T,
                      Complex basepoint, double tol) {
    if (max_abs(c) == 0.0) throw std::invalid_argument("zero coefficient combination");
    if (c.rows() != sys.dimension() || c.cols() != sys.dimension())
        throw std::invalid_argument("combination matrix dimension mismatch");
    if (!T.contains(basepoint)) throw std::invalid_argument("basepoint outside the triangle");

    ZeroCount out;
    out.combination = c;

    Triangle tri = T;
    for (int attempt = 0;; ++attempt) {
        // singular points must stay outside (and off) the closed triangle
        for (const auto &s : sys.singular_points()) {
            double d = tri.boundary_distance(s);
            bool inside = d < 1e-9 ? true : tri.contains(s);
            if (inside || d < 1e-9) {
                std::ostringstream os;
                os << "triangle touches singular point " << s.real() << (s.imag() < 0 ? "-" : "+")
                   << std::abs(s.imag()) << "i";
                throw std::invalid_argument(os.str());
            }
        }

        auto edges = tri.boundary();
        // transport X from the basepoint to the first vertex
        int n = sys.dimension();
        PathSpec approach = PathSpec::polyline({basepoint, tri.vertices[0]});
        IntegrationResult ap = integrate(sys, approach, Eigen::MatrixXcd::Identity(n, n), tol);

        BoundaryTracer tracer(sys, c, tol);
        std::vector<BoundarySample> samples = tracer.trace(edges, ap.X);
        out.refinement_depth = tracer.depth;

        double fmax = 0, fmin = std::numeric_limits<double>::infinity();
        for (const auto &s : samples) {
            fmax = std::max(fmax, std::abs(s.f));
            fmin = std::min(fmin, std::abs(s.f));
        }
        if (fmax < 1e-280) throw std::invalid_argument("combination vanishes identically on the boundary");

        if (fmin < 1e-8 * fmax) {
            if (attempt >= 3) throw std::runtime_error("zero on boundary persists after 3 dilations");
            tri = T.dilated(1.0 + std::pow(2.0, -(attempt + 1)));
            out.dilations = attempt + 1;
            continue;
        }

        double total = 0;
        for (std::size_t i = 0; i + 1 < samples.size(); ++i)
            total += std::arg(samples[i + 1].f / samples[i].f);
        double winding = total / (2 * kPi);
        out.count = int(std::lround(winding));
        out.winding_residual = std::abs(total - 2 * kPi * out.count);
        double closure = std::abs(samples.back().f - samples.front().f);
        out.reliable = out.winding_residual < 0.1 * 2 * kPi && closure < 1e-5 * fmax && out.count >= 0;
        return out;
    }
}

int worker_count() {
    if (const char *env = std::getenv("QSYS_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

void parallel_for(std::size_t jobs, const std::function<void(std::size_t)> &body) {
    int workers = std::min<std::size_t>(std::size_t(worker_count()), jobs);
    if (workers <= 1) {
        for (std::size_t i = 0; i < jobs; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> cursor{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                while (true) {
                    std::size_t i = cursor.fetch_add(1);
                    if (i >= jobs) break;
                    body(i);
                }
            } catch (...) {
                errors[std::size_t(w)] = std::current_exception();
            }
        });
    for (auto &th : pool) th.join();
    for (const auto &err : errors)
        if (err) std::rethrow_exception(err);
}

} // namespace qsys
