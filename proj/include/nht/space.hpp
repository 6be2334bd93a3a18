#pragma once

#include <complex>
#include <cstdint>
#include <variant>
#include <vector>

#include "nht/rational.hpp"
#include "nht/word.hpp"

namespace nht {

enum class ModelKind { H2, H3, FreeTree };

// A metric model space. Distances are reported as raw/scale; delta is the
// declared hyperbolicity constant of the scaled metric.
struct SpaceModel {
    ModelKind kind = ModelKind::H2;
    int rank = 2;        // FreeTree only
    double scale = 1.0;  // > 0
    double delta = 1.0;  // >= 0; FreeTree has delta == 0

    static SpaceModel h2(double scale = 1.0, double delta = 1.0) { return {ModelKind::H2, 0, scale, delta}; }
    static SpaceModel h3(double scale = 1.0, double delta = 1.0) { return {ModelKind::H3, 0, scale, delta}; }
    static SpaceModel tree(int rank, double scale = 1.0) { return {ModelKind::FreeTree, rank, scale, 0.0}; }

    SpaceModel rescaled(double factor) const {  // divide reported lengths by factor
        SpaceModel m = *this;
        m.scale *= factor;
        return m;
    }
    bool same_kind(const SpaceModel& o) const { return kind == o.kind && (kind != ModelKind::FreeTree || rank == o.rank); }
};

struct PointH2 {
    std::complex<double> z;  // Im z > 0
};

struct PointH3 {
    std::complex<double> z;
    double t;  // > 0
};

// A point of the Cayley tree of the rank-m free group: the vertex `word`
// pulled back by `offset` toward its parent (offset in [0,1), exact).
// Vertex points have offset 0.
struct TreePoint {
    Word word;
    Rat offset = Rat(0);
};

struct Point {
    ModelKind kind = ModelKind::H2;
    std::variant<PointH2, PointH3, TreePoint> v;

    static Point h2(std::complex<double> z) { return {ModelKind::H2, PointH2{z}}; }
    static Point h3(std::complex<double> z, double t) { return {ModelKind::H3, PointH3{z, t}}; }
    static Point tree(Word w, Rat off = Rat(0)) { return {ModelKind::FreeTree, TreePoint{std::move(w), std::move(off)}}; }
    static Point tree_root() { return tree(Word{}); }

    const PointH2& h2p() const { return std::get<PointH2>(v); }
    const PointH3& h3p() const { return std::get<PointH3>(v); }
    const TreePoint& treep() const { return std::get<TreePoint>(v); }
};

struct Segment {
    Point a, b;
};

struct ModelMismatchError : std::runtime_error {
    ModelMismatchError() : std::runtime_error("points/isometries from different model kinds") {}
};

// --- metric operations (all reported in the scaled metric, raw/scale) ---

double dist(const SpaceModel& m, const Point& p, const Point& q);
Point geodesic_point(const SpaceModel& m, const Point& p, const Point& q, double t);
double gromov_product(const SpaceModel& m, const Point& p, const Point& q, const Point& base);

// Distance from p to the geodesic segment [a,b].
double dist_to_segment(const SpaceModel& m, const Point& p, const Point& a, const Point& b);

// Point of [a,b] nearest to p.
Point closest_point_on_segment(const SpaceModel& m, const Point& p, const Point& a, const Point& b);

// Exact tree distance in raw (scale-1) units.
Rat tree_dist_exact(const TreePoint& p, const TreePoint& q);
double tree_depth(const TreePoint& p);

// Point at exact raw arclength s from a along the tree geodesic [a, b].
Point tree_point_along(const Point& a, const Point& b, const Rat& s_raw);

// Monte-Carlo estimate of the thin-triangles constant: the maximal observed
// distance from a point of one side to the union of the other two sides.
double estimate_thinness(const SpaceModel& m, int trials, uint64_t seed);

// --- tangent vectors and the exponential map (H2/H3 only) ---
// Tangents are Euclidean-unit directions at a point; hyperbolic step lengths
// are taken in the scaled metric.

struct Tangent {
    std::complex<double> vz;  // H2: the direction; H3: horizontal part
    double vt = 0.0;          // H3 vertical part
};

Tangent unit_tangent(const SpaceModel& m, const Point& from, const Point& to);
Point exp_map(const SpaceModel& m, const Point& p, const Tangent& dir, double len);

// --- deterministic sampling (independent of libstdc++ distributions) ---

class Rng {
public:
    explicit Rng(uint64_t seed) : s_(seed ? seed : 0x9e3779b97f4a7c15ull) {}
    uint64_t next_u64() {
        // splitmix64
        uint64_t z = (s_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int uniform_int(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(next_u64() % static_cast<uint64_t>(hi - lo + 1));
    }

private:
    uint64_t s_;
};

Point random_point(const SpaceModel& m, Rng& rng);

}  // namespace nht
