#include "qsys/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qsys {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

PathSegment PathSegment::line(Complex from, Complex to) {
    PathSegment s;
    s.kind = Kind::Line;
    s.a = from;
    s.b = to;
    return s;
}

PathSegment PathSegment::arc_bulge(Complex from, Complex to, double bulge) {
    if (bulge == 0.0) return line(from, to);
    PathSegment s;
    s.kind = Kind::Arc;
    s.a = from;
    s.b = to;
    double theta = 4.0 * std::atan(bulge);
    Complex mid = (from + to) / 2.0;
    Complex chord = to - from;
    // center on the perpendicular bisector: M + i*(B-A)/2 * cot(theta/2)
    double tan_half = std::tan(theta / 2.0);
    if (tan_half == 0.0) throw std::invalid_argument("degenerate arc bulge");
    s.center = mid + Complex(0, 1) * chord / (2.0 * tan_half);
    s.radius = std::abs(from - s.center);
    s.theta0 = std::arg(from - s.center);
    s.dtheta = theta;
    return s;
}

PathSegment PathSegment::full_circle(Complex center, double radius, double start_angle, bool ccw) {
    PathSegment s;
    s.kind = Kind::Arc;
    s.center = center;
    s.radius = radius;
    s.theta0 = start_angle;
    s.dtheta = ccw ? 2.0 * kPi : -2.0 * kPi;
    s.a = center + std::polar(radius, start_angle);
    s.b = s.a;
    return s;
}

Complex PathSegment::at(double u) const {
    if (kind == Kind::Line) return a + u * (b - a);
    return center + std::polar(radius, theta0 + u * dtheta);
}

Complex PathSegment::velocity(double u) const {
    if (kind == Kind::Line) return b - a;
    return Complex(0, dtheta) * std::polar(radius, theta0 + u * dtheta);
}

double PathSegment::length() const {
    if (kind == Kind::Line) return std::abs(b - a);
    return radius * std::abs(dtheta);
}

double PathSegment::distance_to(Complex p) const {
    if (kind == Kind::Line) {
        Complex d = b - a;
        double len2 = std::norm(d);
        if (len2 == 0.0) return std::abs(p - a);
        double u = std::clamp(((p - a) * std::conj(d)).real() / len2, 0.0, 1.0);
        return std::abs(p - (a + u * d));
    }
    // angle of p within the swept sector?
    double ang = std::arg(p - center);
    double start = theta0, sweep = dtheta;
    double rel = ang - start;
    double two_pi = 2.0 * kPi;
    rel = std::fmod(std::fmod(rel, two_pi) + two_pi, two_pi); // into [0, 2pi)
    bool inside;
    if (sweep >= 0)
        inside = rel <= sweep;
    else
        inside = (rel - two_pi) >= sweep;
    if (inside) return std::abs(std::abs(p - center) - radius);
    return std::min(std::abs(p - a), std::abs(p - b));
}

bool PathSpec::closed(double eps) const {
    if (segments.empty()) return false;
    return std::abs(start() - end()) <= eps * (1.0 + length());
}

double PathSpec::length() const {
    double acc = 0;
    for (const auto &s : segments) acc += s.length();
    return acc;
}

PathSpec PathSpec::reversed() const {
    PathSpec out;
    out.margin = margin;
    for (auto it = segments.rbegin(); it != segments.rend(); ++it) {
        PathSegment s = *it;
        if (s.kind == PathSegment::Kind::Line) {
            std::swap(s.a, s.b);
        } else {
            std::swap(s.a, s.b);
            s.theta0 = s.theta0 + s.dtheta;
            s.dtheta = -s.dtheta;
        }
        out.segments.push_back(s);
    }
    return out;
}

PathSpec PathSpec::polyline(const std::vector<Complex> &points, bool close) {
    if (points.size() < 2) throw std::invalid_argument("polyline needs at least two points");
    PathSpec out;
    for (std::size_t i = 0; i + 1 < points.size(); ++i)
        out.segments.push_back(PathSegment::line(points[i], points[i + 1]));
    if (close && std::abs(points.back() - points.front()) > 0)
        out.segments.push_back(PathSegment::line(points.back(), points.front()));
    return out;
}

PathSpec PathSpec::based_circle(Complex base, Complex center, double radius, bool ccw) {
    PathSpec out;
    Complex dir = center - base;
    double dist = std::abs(dir);
    if (dist <= radius) throw std::invalid_argument("based_circle: basepoint inside the circle");
    Complex entry = center - dir / dist * radius;
    if (std::abs(entry - base) > 0) out.segments.push_back(PathSegment::line(base, entry));
    out.segments.push_back(PathSegment::full_circle(center, radius, std::arg(entry - center), ccw));
    if (std::abs(entry - base) > 0) out.segments.push_back(PathSegment::line(entry, base));
    return out;
}

std::vector<PathSegment> Triangle::boundary() const {
    std::vector<PathSegment> out;
    for (int e = 0; e < 3; ++e)
        out.push_back(PathSegment::arc_bulge(vertices[std::size_t(e)], vertices[std::size_t((e + 1) % 3)],
                                             bulges[std::size_t(e)]));
    return out;
}

Complex Triangle::centroid() const { return (vertices[0] + vertices[1] + vertices[2]) / 3.0; }

int Triangle::boundary_winding(Complex p) const {
    double total = 0.0;
    for (const auto &seg : boundary()) {
        // unwrap arg(z(u) - p) with adaptive subdivision
        int n = 64;
        bool ok = false;
        for (int attempt = 0; attempt < 12 && !ok; ++attempt, n *= 2) {
            double acc = 0.0;
            double prev = std::arg(seg.at(0.0) - p);
            ok = true;
            for (int i = 1; i <= n; ++i) {
                double cur = std::arg(seg.at(double(i) / n) - p);
                double d = cur - prev;
                while (d > kPi) d -= 2.0 * kPi;
                while (d < -kPi) d += 2.0 * kPi;
                if (std::abs(d) > kPi / 2) {
                    ok = false;
                    break;
                }
                acc += d;
                prev = cur;
            }
            if (ok) total += acc;
        }
        if (!ok) throw std::domain_error("winding number undefined: point on or too close to the boundary");
    }
    return int(std::lround(total / (2.0 * kPi)));
}

double Triangle::boundary_distance(Complex p) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto &seg : boundary()) best = std::min(best, seg.distance_to(p));
    return best;
}

Triangle Triangle::dilated(double factor) const {
    Triangle out = *this;
    Complex c = centroid();
    for (auto &v : out.vertices) v = c + factor * (v - c);
    return out;
}

} // namespace qsys
