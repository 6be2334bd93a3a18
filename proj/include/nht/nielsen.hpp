#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nht/isometry.hpp"
#include "nht/space.hpp"

namespace nht {

// An n-tuple of isometries with a basepoint; norm is the summed displacement.
struct GenTuple {
    SpaceModel model;
    std::vector<Isometry> els;
    Point base;
    double norm = 0.0;

    static GenTuple make(SpaceModel model, std::vector<Isometry> els, Point base);
    GenTuple with_base(Point new_base) const { return make(model, els, std::move(new_base)); }
    size_t size() const { return els.size(); }
    std::string fingerprint() const;  // elements only; basepoint-independent
};

double tuple_norm(const GenTuple& M);

// Elementary Nielsen moves. N2 is the plain right multiplication g_i <- g_i g_j;
// the general forms g_i <- g_i g_j^-1 and g_i <- g_j^± g_i are recorded as N4
// macro moves with single-letter words.
struct Move {
    enum Kind { N1, N2, N3, N4 } kind;
    int i = 0, j = 0;       // 1-based
    int eps = 1;            // N4 exponent of g_i
    Word left, right;       // N4 words over indices != i

    static Move n1(int i) { return {N1, i, 0, 1, {}, {}}; }
    static Move n2(int i, int j) { return {N2, i, j, 1, {}, {}}; }
    static Move n3(int i, int j) { return {N3, i, j, 1, {}, {}}; }
    static Move n4(int i, int eps, Word left, Word right) { return {N4, i, 0, eps, std::move(left), std::move(right)}; }

    std::string encode() const;  // deterministic; also the tie-break key
    bool operator<(const Move& o) const { return encode() < o.encode(); }
    bool operator==(const Move& o) const { return encode() == o.encode(); }
};

struct MoveChain {
    std::vector<Move> moves;
    std::string initial_fp, final_fp;
};

struct BadMoveError : std::runtime_error {
    explicit BadMoveError(const std::string& what) : std::runtime_error(what) {}
};

GenTuple apply_move(const GenTuple& M, const Move& m);
Move invert_move(const Move& m);
GenTuple replay(const MoveChain& chain, const GenTuple& M);

struct SearchConfig {
    double epsilon = 1e-6;   // required strict norm decrease
    int conjDepth = 2;       // max length of enumerated N4 words
    int powerDepth = 64;     // max power g_j^k tried as a one-sided N4 word
    int projTopK = 6;        // projection-ranked candidates kept per side
    int maxIters = 10000;
    int treeRadius = 3;      // basepoint scan radius in trees
    int basepointIters = 120;
};

// One strictly norm-decreasing move, or nullopt. Candidates: all one-letter
// products on either side, plus N4 pairs (h, h') with h, h' ranked by how
// close their orbit points come to the near-midpoints of [x, g_i x].
std::optional<Move> improving_move_search(const GenTuple& M, const SearchConfig& cfg);

std::pair<GenTuple, MoveChain> greedy_minimize(const GenTuple& M, const SearchConfig& cfg);

// Coordinate descent on the basepoint: exact vertex scan in trees, damped
// gradient steps along the displacement field in H2/H3.
Point optimize_basepoint(const GenTuple& M, const SearchConfig& cfg);

}  // namespace nht
