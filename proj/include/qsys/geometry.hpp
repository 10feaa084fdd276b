#pragma once

#include <array>
#include <complex>
#include <vector>

namespace qsys {

using Complex = std::complex<double>;

// One path piece, parametrized over u in [0,1].
struct PathSegment {
    enum class Kind { Line, Arc };
    Kind kind = Kind::Line;
    Complex a, b;          // endpoints (also kept for arcs)
    Complex center;        // arc data
    double radius = 0;
    double theta0 = 0;     // start angle
    double dtheta = 0;     // signed sweep; positive = counterclockwise

    static PathSegment line(Complex from, Complex to);
    // bulge = tan(sweep/4); positive sweeps counterclockwise
    static PathSegment arc_bulge(Complex from, Complex to, double bulge);
    static PathSegment full_circle(Complex center, double radius, double start_angle, bool ccw);

    Complex at(double u) const;
    Complex velocity(double u) const;
    double length() const;
    double distance_to(Complex p) const;
};

struct PathSpec {
    std::vector<PathSegment> segments;
    double margin = 0; // declared clearance from the singular locus

    Complex start() const { return segments.front().at(0.0); }
    Complex end() const { return segments.back().at(1.0); }
    bool closed(double eps = 1e-12) const;
    double length() const;
    PathSpec reversed() const;

    static PathSpec polyline(const std::vector<Complex> &points, bool close = false);
    // loop: base -> circle entry -> full circle -> back
    static PathSpec based_circle(Complex base, Complex center, double radius, bool ccw = true);
};

// Area bounded by three arcs/segments (bulge 0 = straight edge), positively
// oriented boundary v0 -> v1 -> v2 -> v0.
struct Triangle {
    std::array<Complex, 3> vertices;
    std::array<double, 3> bulges{0.0, 0.0, 0.0};

    std::vector<PathSegment> boundary() const;
    Complex centroid() const;
    int boundary_winding(Complex p) const; // winding number of the boundary around p
    bool contains(Complex p) const { return boundary_winding(p) != 0; }
    double boundary_distance(Complex p) const;
    Triangle dilated(double factor) const; // about the centroid
};

} // namespace qsys
