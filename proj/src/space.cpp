#include "nht/space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nht {

namespace {

constexpr double kVerticalEps = 1e-12;

double acosh_safe(double x) { return std::acosh(std::max(1.0, x)); }

void check_kind(const SpaceModel& m, const Point& p) {
    if (m.kind != p.kind) throw ModelMismatchError{};
}

// raw (unscaled) metrics ----------------------------------------------------

double h2_dist_raw(std::complex<double> z, std::complex<double> w) {
    double num = std::norm(z - w);
    double den = 2.0 * z.imag() * w.imag();
    return acosh_safe(1.0 + num / den);
}

double h3_dist_raw(const PointH3& p, const PointH3& q) {
    double num = std::norm(p.z - q.z) + (p.t - q.t) * (p.t - q.t);
    double den = 2.0 * p.t * q.t;
    return acosh_safe(1.0 + num / den);
}

Rat tree_depth_exact(const TreePoint& p) { return Rat(static_cast<long>(p.word.size())) - p.offset; }

// Point at exact depth d on the root path of `w` (0 <= d <= |w|).
TreePoint tree_point_at_depth(const Word& w, const Rat& d) {
    Rat fl = d;
    mpz_class num = fl.get_num(), den = fl.get_den();
    mpz_class q = num / den;  // floor for nonnegative d
    long k = q.get_si();
    if (Rat(q) == d) return TreePoint{w.prefix(static_cast<size_t>(k)), Rat(0)};
    return TreePoint{w.prefix(static_cast<size_t>(k + 1)), Rat(k + 1) - d};
}

// H2 geodesic parametrization helpers. A geodesic is either the vertical
// line through both points or the semicircle with real center c, radius r;
// u = ln tan(theta/2) is an arclength coordinate along the semicircle.
struct H2Geo {
    bool vertical;
    double x;             // vertical: the common real part
    double c, r;          // semicircle
    double coord(std::complex<double> z) const {
        if (vertical) return std::log(z.imag());
        double theta = std::atan2(z.imag(), z.real() - c);
        return std::log(std::tan(theta / 2.0));
    }
    std::complex<double> at(double u) const {
        if (vertical) return {x, std::exp(u)};
        double theta = 2.0 * std::atan(std::exp(u));
        return {c + r * std::cos(theta), r * std::sin(theta)};
    }
};

H2Geo h2_geodesic(std::complex<double> p, std::complex<double> q) {
    double span = std::max({1.0, std::abs(p), std::abs(q)});
    if (std::abs(p.real() - q.real()) < kVerticalEps * span) return {true, p.real(), 0, 0};
    double c = (std::norm(p) - std::norm(q)) / (2.0 * (p.real() - q.real()));
    double r = std::abs(p - std::complex<double>(c, 0));
    return {false, 0, c, r};
}

std::complex<double> h2_geodesic_point_raw(std::complex<double> p, std::complex<double> q, double t) {
    H2Geo g = h2_geodesic(p, q);
    double up = g.coord(p), uq = g.coord(q);
    return g.at((1.0 - t) * up + t * uq);
}

// Distance from z to the segment of an H2 geodesic between a and b, exact up
// to the closed forms: map the geodesic to the imaginary axis first.
double h2_dist_to_segment_raw(std::complex<double> z, std::complex<double> a, std::complex<double> b) {
    H2Geo g = h2_geodesic(a, b);
    std::complex<double> w, wa, wb;
    if (g.vertical) {
        w = z - g.x;
        wa = a - g.x;
        wb = b - g.x;
    } else {
        auto mob = [&](std::complex<double> u) { return (u - (g.c - g.r)) / ((g.c + g.r) - u); };
        w = mob(z);
        wa = mob(a);
        wb = mob(b);
    }
    double lo = std::abs(wa), hi = std::abs(wb);
    if (lo > hi) std::swap(lo, hi);
    double absw = std::abs(w);
    if (absw >= lo && absw <= hi) return acosh_safe(absw / w.imag());
    std::complex<double> end = (absw < lo) ? std::complex<double>(0, lo) : std::complex<double>(0, hi);
    return h2_dist_raw(w, end);
}

}  // namespace

Rat tree_dist_exact(const TreePoint& p, const TreePoint& q) {
    Rat dp = tree_depth_exact(p), dq = tree_depth_exact(q);
    Rat cp(static_cast<long>(p.word.common_prefix_len(q.word)));
    Rat m = std::min({cp, dp, dq});
    return dp + dq - 2 * m;
}

double tree_depth(const TreePoint& p) { return rat_to_double(tree_depth_exact(p)); }

double dist(const SpaceModel& m, const Point& p, const Point& q) {
    check_kind(m, p);
    check_kind(m, q);
    double raw;
    switch (m.kind) {
        case ModelKind::H2: raw = h2_dist_raw(p.h2p().z, q.h2p().z); break;
        case ModelKind::H3: raw = h3_dist_raw(p.h3p(), q.h3p()); break;
        case ModelKind::FreeTree: raw = rat_to_double(tree_dist_exact(p.treep(), q.treep())); break;
        default: throw std::logic_error("bad model kind");
    }
    return raw / m.scale;
}

Point geodesic_point(const SpaceModel& m, const Point& p, const Point& q, double t) {
    check_kind(m, p);
    check_kind(m, q);
    switch (m.kind) {
        case ModelKind::H2:
            return Point::h2(h2_geodesic_point_raw(p.h2p().z, q.h2p().z, t));
        case ModelKind::H3: {
            const PointH3& a = p.h3p();
            const PointH3& b = q.h3p();
            double L = std::abs(b.z - a.z);
            if (L < kVerticalEps * std::max({1.0, a.t, b.t})) {
                double ty = std::exp((1.0 - t) * std::log(a.t) + t * std::log(b.t));
                return Point::h3(a.z, ty);
            }
            std::complex<double> e = (b.z - a.z) / L;
            std::complex<double> w = h2_geodesic_point_raw({0.0, a.t}, {L, b.t}, t);
            return Point::h3(a.z + e * w.real(), w.imag());
        }
        case ModelKind::FreeTree: {
            Rat d = tree_dist_exact(p.treep(), q.treep());
            if (d == 0) return p;
            return tree_point_along(p, q, rat_from_double(t) * d);
        }
        default: throw std::logic_error("bad model kind");
    }
}

Point tree_point_along(const Point& a, const Point& b, const Rat& s_raw) {
    const TreePoint& p = a.treep();
    const TreePoint& q = b.treep();
    Rat da = tree_depth_exact(p), db = tree_depth_exact(q);
    Rat cp(static_cast<long>(p.word.common_prefix_len(q.word)));
    Rat mm = std::min({cp, da, db});
    Rat up = da - mm;
    if (s_raw <= up) return Point{ModelKind::FreeTree, tree_point_at_depth(p.word, da - s_raw)};
    return Point{ModelKind::FreeTree, tree_point_at_depth(q.word, mm + (s_raw - up))};
}

double gromov_product(const SpaceModel& m, const Point& p, const Point& q, const Point& base) {
    double v = 0.5 * (dist(m, base, p) + dist(m, base, q) - dist(m, p, q));
    return std::max(0.0, v);
}

double dist_to_segment(const SpaceModel& m, const Point& p, const Point& a, const Point& b) {
    check_kind(m, p);
    switch (m.kind) {
        case ModelKind::H2:
            return h2_dist_to_segment_raw(p.h2p().z, a.h2p().z, b.h2p().z) / m.scale;
        case ModelKind::FreeTree: {
            // in a tree the distance to a geodesic equals the Gromov product
            Rat v = (tree_dist_exact(p.treep(), a.treep()) + tree_dist_exact(p.treep(), b.treep()) -
                     tree_dist_exact(a.treep(), b.treep())) / 2;
            return rat_to_double(v) / m.scale;
        }
        case ModelKind::H3: {
            // convexity of t -> d(p, gamma(t)); ternary search
            double lo = 0.0, hi = 1.0;
            for (int it = 0; it < 90; ++it) {
                double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
                double f1 = dist(m, p, geodesic_point(m, a, b, m1));
                double f2 = dist(m, p, geodesic_point(m, a, b, m2));
                if (f1 < f2) hi = m2;
                else lo = m1;
            }
            return dist(m, p, geodesic_point(m, a, b, 0.5 * (lo + hi)));
        }
        default: throw std::logic_error("bad model kind");
    }
}

Point closest_point_on_segment(const SpaceModel& m, const Point& p, const Point& a, const Point& b) {
    // distance to p is unimodal along any geodesic
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 80; ++it) {
        double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        double f1 = dist(m, p, geodesic_point(m, a, b, m1));
        double f2 = dist(m, p, geodesic_point(m, a, b, m2));
        if (f1 < f2) hi = m2;
        else lo = m1;
    }
    return geodesic_point(m, a, b, 0.5 * (lo + hi));
}

Point random_point(const SpaceModel& m, Rng& rng) {
    switch (m.kind) {
        case ModelKind::H2: {
            double re = rng.uniform(-2.0, 2.0);
            double im = std::exp(rng.uniform(-1.5, 1.5));
            return Point::h2({re, im});
        }
        case ModelKind::H3: {
            double re = rng.uniform(-2.0, 2.0);
            double ii = rng.uniform(-2.0, 2.0);
            double t = std::exp(rng.uniform(-1.5, 1.5));
            return Point::h3({re, ii}, t);
        }
        case ModelKind::FreeTree: {
            int len = rng.uniform_int(0, 10);
            std::vector<int> letters;
            int prev = 0;
            for (int i = 0; i < len; ++i) {
                int c;
                do {
                    int g = rng.uniform_int(1, m.rank);
                    c = rng.uniform() < 0.5 ? g : -g;
                } while (c == -prev);
                letters.push_back(c);
                prev = c;
            }
            return Point::tree(Word(letters));
        }
        default: throw std::logic_error("bad model kind");
    }
}

double estimate_thinness(const SpaceModel& m, int trials, uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    Rng rng(seed);
    double worst = 0.0;
    const int samples_per_side = 24;
    for (int t = 0; t < trials; ++t) {
        Point a = random_point(m, rng), b = random_point(m, rng), c = random_point(m, rng);
        const Point* tri[3] = {&a, &b, &c};
        for (int side = 0; side < 3; ++side) {
            const Point& p = *tri[side];
            const Point& q = *tri[(side + 1) % 3];
            const Point& o = *tri[(side + 2) % 3];
            for (int j = 0; j < samples_per_side; ++j) {
                double tt = (j + 0.5) / samples_per_side;
                Point s = geodesic_point(m, p, q, tt);
                double d = std::min(dist_to_segment(m, s, p, o), dist_to_segment(m, s, q, o));
                worst = std::max(worst, d);
            }
        }
    }
    return worst;
}

// --- tangents and exponential map ---

namespace {

std::complex<double> h2_unit_tangent_raw(std::complex<double> z, std::complex<double> w) {
    double span = std::max({1.0, std::abs(z), std::abs(w)});
    if (std::abs(z.real() - w.real()) < kVerticalEps * span)
        return {0.0, w.imag() > z.imag() ? 1.0 : -1.0};
    H2Geo g = h2_geodesic(z, w);
    std::complex<double> tau = std::complex<double>(0, 1) * (z - std::complex<double>(g.c, 0));
    tau /= std::abs(tau);
    return g.coord(w) > g.coord(z) ? tau : -tau;
}

std::complex<double> h2_exp_raw(std::complex<double> z, std::complex<double> dir, double len) {
    if (std::abs(dir.real()) < 1e-14) {
        double y = z.imag() * std::exp(dir.imag() > 0 ? len : -len);
        return {z.real(), y};
    }
    double c = z.real() + z.imag() * dir.imag() / dir.real();
    double r = std::abs(z - std::complex<double>(c, 0));
    H2Geo g{false, 0, c, r};
    double spin = dir.real() * (-(z.imag())) + dir.imag() * (z.real() - c);
    double u = g.coord(z) + (spin > 0 ? len : -len);
    return g.at(u);
}

}  // namespace

Tangent unit_tangent(const SpaceModel& m, const Point& from, const Point& to) {
    check_kind(m, from);
    check_kind(m, to);
    switch (m.kind) {
        case ModelKind::H2:
            return {h2_unit_tangent_raw(from.h2p().z, to.h2p().z), 0.0};
        case ModelKind::H3: {
            const PointH3& a = from.h3p();
            const PointH3& b = to.h3p();
            double L = std::abs(b.z - a.z);
            if (L < kVerticalEps * std::max({1.0, a.t, b.t})) return {0.0, b.t > a.t ? 1.0 : -1.0};
            std::complex<double> e = (b.z - a.z) / L;
            std::complex<double> tau = h2_unit_tangent_raw({0.0, a.t}, {L, b.t});
            return {e * tau.real(), tau.imag()};
        }
        default: throw std::logic_error("tangents only defined for H2/H3");
    }
}

Point exp_map(const SpaceModel& m, const Point& p, const Tangent& dir, double len) {
    check_kind(m, p);
    double raw_len = len * m.scale;
    switch (m.kind) {
        case ModelKind::H2:
            return Point::h2(h2_exp_raw(p.h2p().z, dir.vz, raw_len));
        case ModelKind::H3: {
            const PointH3& a = p.h3p();
            double h = std::abs(dir.vz);
            if (h < 1e-14) return Point::h3(a.z, a.t * std::exp(dir.vt > 0 ? raw_len : -raw_len));
            std::complex<double> e = dir.vz / h;
            std::complex<double> w = h2_exp_raw({0.0, a.t}, {h, dir.vt}, raw_len);
            return Point::h3(a.z + e * w.real(), w.imag());
        }
        default: throw std::logic_error("exp_map only defined for H2/H3");
    }
}

}  // namespace nht
