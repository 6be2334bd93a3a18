#include "nht/path.hpp"

#include <algorithm>
#include <cmath>

namespace nht {

PiecewisePath PiecewisePath::through(const SpaceModel& model, std::vector<Point> anchors) {
    PiecewisePath p{model, std::move(anchors), {}};
    p.cum.resize(p.anchors.size());
    double acc = 0.0;
    for (size_t k = 0; k < p.anchors.size(); ++k) {
        if (k > 0) acc += dist(model, p.anchors[k - 1], p.anchors[k]);
        p.cum[k] = acc;
    }
    return p;
}

Point PiecewisePath::at(double s) const {
    if (anchors.empty()) throw std::logic_error("empty path");
    if (anchors.size() == 1 || s <= 0) return anchors.front();
    if (s >= length()) return anchors.back();
    size_t k = std::upper_bound(cum.begin(), cum.end(), s) - cum.begin();
    k = std::min(k, anchors.size() - 1);
    double seg = cum[k] - cum[k - 1];
    if (seg <= 0) return anchors[k];
    double t = (s - cum[k - 1]) / seg;
    return geodesic_point(model, anchors[k - 1], anchors[k], t);
}

LocalQgReport local_qg_check(const PiecewisePath& path, double T, double lambda, double eps,
                             double step) {
    LocalQgReport rep;
    double L = path.length();
    if (L <= 0) {
        rep.worst_margin = -eps;
        return rep;
    }
    if (step <= 0) step = std::max(T / 64.0, L / 4096.0);
    int nsteps = static_cast<int>(std::floor(L / step)) + 1;
    std::vector<Point> samples;
    samples.reserve(nsteps + 1);
    for (int i = 0; i <= nsteps; ++i) samples.push_back(path.at(std::min(i * step, L)));
    const double tol = 1e-9;
    int wmax = static_cast<int>(std::ceil(T / step));
    for (int i = 0; i <= nsteps; ++i) {
        double a = std::min(i * step, L);
        for (int j = i + 1; j <= std::min(i + wmax, nsteps); ++j) {
            double b = std::min(j * step, L);
            if (b - a > T + tol) break;
            double d = dist(path.model, samples[i], samples[j]);
            double bound = lambda * d + eps;
            double margin = (b - a) - bound;
            if (margin > rep.worst_margin) {
                rep.worst_margin = margin;
                rep.worst_a = a;
                rep.worst_b = b;
            }
            double ratio = (b - a) / std::max(bound, 1e-12);
            rep.worst_ratio = std::max(rep.worst_ratio, ratio);
            if (margin > tol) rep.pass = false;
        }
    }
    return rep;
}

double sup_dist_to_segment(const SpaceModel& m, const Point& a, const Point& b, const Point& c,
                           const Point& d, double step) {
    double len = dist(m, a, b);
    int n = std::max(1, static_cast<int>(std::ceil(len / std::max(step, 1e-9))));
    double worst = 0.0;
    for (int i = 0; i <= n; ++i) {
        Point p = geodesic_point(m, a, b, static_cast<double>(i) / n);
        worst = std::max(worst, dist_to_segment(m, p, c, d));
    }
    return worst;
}

double sup_dist_to_path(const SpaceModel& m, const Point& a, const Point& b,
                        const PiecewisePath& path, double step) {
    double len = dist(m, a, b);
    int n = std::max(1, static_cast<int>(std::ceil(len / std::max(step, 1e-9))));
    double worst = 0.0;
    for (int i = 0; i <= n; ++i) {
        Point p = geodesic_point(m, a, b, static_cast<double>(i) / n);
        double best = 1e300;
        for (size_t k = 0; k + 1 < path.anchors.size(); ++k)
            best = std::min(best, dist_to_segment(m, p, path.anchors[k], path.anchors[k + 1]));
        worst = std::max(worst, best);
    }
    return worst;
}

double max_survived_arclength(const SpaceModel& m, const Point& a, const Point& b, const Point& c,
                              const Point& d, double R, double step) {
    double len = dist(m, a, b);
    if (len <= 0) return 0.0;
    int n = std::max(1, static_cast<int>(std::ceil(len / std::max(step, 1e-9))));
    double ds = len / n;
    double run = 0.0, best = 0.0;
    for (int i = 0; i <= n; ++i) {
        Point p = geodesic_point(m, a, b, static_cast<double>(i) / n);
        if (dist_to_segment(m, p, c, d) <= R) {
            run += (i == 0) ? 0.0 : ds;
            best = std::max(best, run);
        } else {
            run = 0.0;
        }
    }
    return best;
}

double hausdorff_to_geodesic(const PiecewisePath& path, const Point& p, const Point& q, double step) {
    const SpaceModel& m = path.model;
    double worst = 0.0;
    double L = path.length();
    int n = std::max(1, static_cast<int>(std::ceil(L / std::max(step, 1e-9))));
    std::vector<Point> psamples;
    for (int i = 0; i <= n; ++i) psamples.push_back(path.at(L * i / n));
    for (const auto& s : psamples) worst = std::max(worst, dist_to_segment(m, s, p, q));
    double glen = dist(m, p, q);
    int gn = std::max(1, static_cast<int>(std::ceil(glen / std::max(step, 1e-9))));
    for (int i = 0; i <= gn; ++i) {
        Point g = geodesic_point(m, p, q, static_cast<double>(i) / gn);
        double best = 1e300;
        for (const auto& s : psamples) best = std::min(best, dist(m, g, s));
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace nht
