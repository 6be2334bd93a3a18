#pragma once

#include <vector>

#include "nht/space.hpp"

namespace nht {

// A broken geodesic through marked points, parametrized by arclength.
struct PiecewisePath {
    SpaceModel model;
    std::vector<Point> anchors;
    std::vector<double> cum;  // cum[k] = arclength up to anchor k

    static PiecewisePath through(const SpaceModel& model, std::vector<Point> anchors);
    double length() const { return cum.empty() ? 0.0 : cum.back(); }
    Point at(double s) const;
};

struct LocalQgReport {
    bool pass = true;
    double worst_margin = -1e300;  // max of |b-a| - (lambda d + eps); <= 0 passes
    double worst_a = 0, worst_b = 0;
    double worst_ratio = 0;  // max |b-a| / (lambda d + eps)
};

// Slides windows of width T along the path and tests the (lambda, eps)
// quasigeodesic inequality on sampled parameter pairs.
LocalQgReport local_qg_check(const PiecewisePath& path, double T, double lambda, double eps,
                             double step = -1.0);

// sup over samples of [a,b] of the distance to the segment [c,d]
double sup_dist_to_segment(const SpaceModel& m, const Point& a, const Point& b, const Point& c,
                           const Point& d, double step);

// sup over samples of [a,b] of the distance to the whole path
double sup_dist_to_path(const SpaceModel& m, const Point& a, const Point& b,
                        const PiecewisePath& path, double step);

// longest contiguous arclength of [a,b] staying within radius R of [c,d]
double max_survived_arclength(const SpaceModel& m, const Point& a, const Point& b, const Point& c,
                              const Point& d, double R, double step);

// sampled Hausdorff distance between a path and the geodesic joining p to q
double hausdorff_to_geodesic(const PiecewisePath& path, const Point& p, const Point& q, double step);

}  // namespace nht
