#include "nht/nielsen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace nht {

GenTuple GenTuple::make(SpaceModel model, std::vector<Isometry> els, Point base) {
    GenTuple t{std::move(model), std::move(els), std::move(base), 0.0};
    t.norm = tuple_norm(t);
    return t;
}

double tuple_norm(const GenTuple& M) {
    double s = 0.0;
    for (const auto& g : M.els) s += displacement(M.model, g, M.base);
    return s;
}

std::string GenTuple::fingerprint() const {
    std::string payload;
    for (const auto& g : els) {
        payload += isometry_repr(g);
        payload += ';';
    }
    return fingerprint_hex(payload);
}

std::string Move::encode() const {
    char buf[64];
    switch (kind) {
        case N1: std::snprintf(buf, sizeof(buf), "N1|%02d", i); return buf;
        case N2: std::snprintf(buf, sizeof(buf), "N2|%02d|%02d", i, j); return buf;
        case N3: std::snprintf(buf, sizeof(buf), "N3|%02d|%02d", i, j); return buf;
        case N4: {
            std::snprintf(buf, sizeof(buf), "N4|%02d|%+d|", i, eps);
            return std::string(buf) + left.str() + "|" + right.str();
        }
    }
    return "";
}

namespace {

void check_index(const GenTuple& M, int i) {
    if (i < 1 || i > static_cast<int>(M.size())) throw BadMoveError("move index out of range");
}

void check_word_avoids(const Word& w, int i, size_t n) {
    for (int c : w.letters()) {
        int idx = std::abs(c);
        if (idx == i) throw BadMoveError("N4 word references the moved index");
        if (idx < 1 || idx > static_cast<int>(n)) throw BadMoveError("N4 word index out of range");
    }
}

}  // namespace

GenTuple apply_move(const GenTuple& M, const Move& m) {
    check_index(M, m.i);
    std::vector<Isometry> els = M.els;
    switch (m.kind) {
        case Move::N1:
            els[m.i - 1] = invert(els[m.i - 1]);
            break;
        case Move::N2:
            check_index(M, m.j);
            if (m.i == m.j) throw BadMoveError("N2 requires i != j");
            els[m.i - 1] = compose(els[m.i - 1], els[m.j - 1]);
            break;
        case Move::N3:
            check_index(M, m.j);
            if (m.i == m.j) throw BadMoveError("N3 requires i != j");
            std::swap(els[m.i - 1], els[m.j - 1]);
            break;
        case Move::N4: {
            check_word_avoids(m.left, m.i, M.size());
            check_word_avoids(m.right, m.i, M.size());
            Isometry gi = m.eps > 0 ? M.els[m.i - 1] : invert(M.els[m.i - 1]);
            Isometry l = eval_word(M.els, m.left);
            Isometry r = eval_word(M.els, m.right);
            els[m.i - 1] = compose(compose(l, gi), r);
            break;
        }
    }
    return GenTuple::make(M.model, std::move(els), M.base);
}

Move invert_move(const Move& m) {
    switch (m.kind) {
        case Move::N1: return m;
        case Move::N3: return m;
        case Move::N2: return Move::n4(m.i, 1, Word{}, Word::letter(m.j, -1));
        case Move::N4:
            if (m.eps > 0) return Move::n4(m.i, 1, m.left.inverse(), m.right.inverse());
            return Move::n4(m.i, -1, m.right, m.left);
    }
    throw BadMoveError("bad move kind");
}

GenTuple replay(const MoveChain& chain, const GenTuple& M) {
    if (!chain.initial_fp.empty() && chain.initial_fp != M.fingerprint())
        throw BadMoveError("chain initial fingerprint does not match tuple");
    GenTuple cur = M;
    for (const auto& mv : chain.moves) cur = apply_move(cur, mv);
    return cur;
}

namespace {

struct Candidate {
    double decrease;
    Move move;
};

// deterministic "better" relation: larger decrease, then smaller encoding
bool better(const Candidate& a, const Candidate& b) {
    if (a.decrease != b.decrease) return a.decrease > b.decrease;
    return a.move.encode() < b.move.encode();
}

// words over indices != i of length <= depth, with the isometries they evaluate to
void enumerate_words(const GenTuple& M, int skip, int depth, Word w, const Isometry& val,
                     std::vector<std::pair<Word, Isometry>>& out) {
    if (depth == 0) return;
    for (int j = 1; j <= static_cast<int>(M.size()); ++j) {
        if (j == skip) continue;
        for (int e : {1, -1}) {
            if (!w.empty() && w.letters().back() == -((e > 0) ? j : -j)) continue;
            Word nw = w * Word::letter(j, e);
            if (nw.size() <= w.size()) continue;  // cancelled
            Isometry nv = compose(val, e > 0 ? M.els[j - 1] : invert(M.els[j - 1]));
            out.push_back({nw, nv});
            enumerate_words(M, skip, depth - 1, nw, nv, out);
        }
    }
}

// candidate one-sided multipliers ranked by proximity of their orbit point
// to `target` (the Lemma-19 style choice of \bar h)
std::vector<std::pair<Word, Isometry>> ranked_pool(const GenTuple& M, int i, const Point& target,
                                                   const SearchConfig& cfg) {
    std::vector<std::pair<Word, Isometry>> all;
    enumerate_words(M, i, cfg.conjDepth, Word{}, Isometry::identity(M.els[0].kind, M.els[0].mode), all);
    // powers of single other generators reach much deeper than conjDepth
    for (int j = 1; j <= static_cast<int>(M.size()); ++j) {
        if (j == i) continue;
        for (int e : {1, -1}) {
            Isometry base = e > 0 ? M.els[j - 1] : invert(M.els[j - 1]);
            Isometry acc = base;
            Word w = Word::letter(j, e);
            for (int k = 2; k <= cfg.powerDepth; ++k) {
                acc = compose(acc, base);
                w = w * Word::letter(j, e);
                if (static_cast<int>(w.size()) <= cfg.conjDepth) continue;  // already enumerated
                all.push_back({w, acc});
            }
        }
    }
    std::vector<std::pair<double, size_t>> ranked;
    ranked.reserve(all.size());
    for (size_t k = 0; k < all.size(); ++k)
        ranked.push_back({dist(M.model, apply(all[k].second, M.base), target), k});
    std::sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return all[a.second].first < all[b.second].first;
    });
    std::vector<std::pair<Word, Isometry>> out;
    for (size_t k = 0; k < ranked.size() && static_cast<int>(out.size()) < cfg.projTopK; ++k)
        out.push_back(all[ranked[k].second]);
    return out;
}

}  // namespace

std::optional<Move> improving_move_search(const GenTuple& M, const SearchConfig& cfg) {
    if (M.size() == 0) return std::nullopt;
    std::optional<Candidate> best;
    auto consider = [&](double old_disp, const Isometry& candidate, Move mv) {
        double dec = old_disp - displacement(M.model, candidate, M.base);
        if (dec <= cfg.epsilon) return;
        Candidate c{dec, std::move(mv)};
        if (!best || better(c, *best)) best = std::move(c);
    };

    for (int i = 1; i <= static_cast<int>(M.size()); ++i) {
        const Isometry& gi = M.els[i - 1];
        double old_disp = displacement(M.model, gi, M.base);
        if (old_disp <= cfg.epsilon) continue;  // already trivial at x

        // single-letter products on either side
        for (int j = 1; j <= static_cast<int>(M.size()); ++j) {
            if (j == i) continue;
            const Isometry& gj = M.els[j - 1];
            Isometry gj_inv = invert(gj);
            consider(old_disp, compose(gi, gj), Move::n2(i, j));
            consider(old_disp, compose(gi, gj_inv), Move::n4(i, 1, Word{}, Word::letter(j, -1)));
            consider(old_disp, compose(gj, gi), Move::n4(i, 1, Word::letter(j, 1), Word{}));
            consider(old_disp, compose(gj_inv, gi), Move::n4(i, 1, Word::letter(j, -1), Word{}));
        }

        if (M.size() < 2) continue;
        Point gx = apply(gi, M.base);
        Point gix = apply(invert(gi), M.base);
        Point mid_l = geodesic_point(M.model, M.base, gx, 0.5);
        Point mid_r = geodesic_point(M.model, M.base, gix, 0.5);
        auto pool_l = ranked_pool(M, i, mid_l, cfg);
        auto pool_r = ranked_pool(M, i, mid_r, cfg);
        pool_l.push_back({Word{}, Isometry::identity(gi.kind, gi.mode)});
        pool_r.push_back({Word{}, Isometry::identity(gi.kind, gi.mode)});
        for (const auto& [hw, hv] : pool_l) {
            for (const auto& [rw, rv] : pool_r) {
                if (hw.empty() && rw.empty()) continue;
                Isometry cand = compose(compose(invert(hv), gi), rv);
                consider(old_disp, cand, Move::n4(i, 1, hw.inverse(), rw));
            }
        }
    }
    if (!best) return std::nullopt;
    return best->move;
}

std::pair<GenTuple, MoveChain> greedy_minimize(const GenTuple& M, const SearchConfig& cfg) {
    MoveChain chain;
    chain.initial_fp = M.fingerprint();
    GenTuple cur = M;
    for (int it = 0; it < cfg.maxIters; ++it) {
        auto mv = improving_move_search(cur, cfg);
        if (!mv) break;
        GenTuple next = apply_move(cur, *mv);
        if (next.norm >= cur.norm - cfg.epsilon) break;  // guards against a non-decreasing proposal
        chain.moves.push_back(*mv);
        cur = std::move(next);
    }
    chain.final_fp = cur.fingerprint();
    return {cur, chain};
}

namespace {

Point tree_optimize(const GenTuple& M, const SearchConfig& cfg) {
    TreePoint start = M.base.treep();
    Word cur = start.word;  // scan vertices; drop any edge offset
    auto norm_at = [&](const Word& v) {
        Point p = Point::tree(v);
        double s = 0.0;
        for (const auto& g : M.els) s += displacement(M.model, g, p);
        return s;
    };
    double cur_norm = norm_at(cur);
    for (int round = 0; round < 50; ++round) {
        Word best = cur;
        double best_norm = cur_norm;
        // breadth-first over the ball of radius treeRadius, deterministic order
        std::deque<Word> queue{cur};
        std::set<std::vector<int>> seen{cur.letters()};
        std::vector<Word> ball;
        while (!queue.empty()) {
            Word w = queue.front();
            queue.pop_front();
            ball.push_back(w);
            if (tree_dist_exact(TreePoint{w, 0}, TreePoint{cur, 0}) >= cfg.treeRadius) continue;
            for (int j = 1; j <= M.model.rank; ++j) {
                for (int e : {1, -1}) {
                    Word nw = w * Word::letter(j, e);
                    if (nw.size() <= w.size()) continue;  // backtracking edge: still a new vertex?
                    if (seen.insert(nw.letters()).second) queue.push_back(nw);
                }
            }
            // also step toward the root
            if (!w.empty()) {
                Word pw = w.prefix(w.size() - 1);
                if (seen.insert(pw.letters()).second) queue.push_back(pw);
            }
        }
        for (const auto& v : ball) {
            double nv = norm_at(v);
            if (nv < best_norm - 1e-12) {
                best_norm = nv;
                best = v;
            }
        }
        if (best == cur) break;
        cur = best;
        cur_norm = best_norm;
    }
    return Point::tree(cur);
}

Point float_optimize(const GenTuple& M, const SearchConfig& cfg) {
    Point x = M.base;
    auto norm_at = [&](const Point& p) {
        double s = 0.0;
        for (const auto& g : M.els) s += displacement(M.model, g, p);
        return s;
    };
    double fx = norm_at(x);
    double step = 0.5;
    for (int it = 0; it < cfg.basepointIters && step > 1e-9; ++it) {
        // descent direction: sum of unit tangents toward g x and g^-1 x
        std::complex<double> dz{0, 0};
        double dt = 0.0;
        bool any = false;
        for (const auto& g : M.els) {
            Point gx = apply(g, x);
            if (dist(M.model, x, gx) < 1e-12) continue;
            Tangent t1 = unit_tangent(M.model, x, gx);
            Tangent t2 = unit_tangent(M.model, x, apply(invert(g), x));
            dz += t1.vz + t2.vz;
            dt += t1.vt + t2.vt;
            any = true;
        }
        double mag = std::sqrt(std::norm(dz) + dt * dt);
        if (!any || mag < 1e-10) break;
        Tangent dir{dz / mag, dt / mag};
        Point cand = exp_map(M.model, x, dir, step * mag / (2.0 * M.size()));
        double fc = norm_at(cand);
        if (fc < fx - 1e-14) {
            x = cand;
            fx = fc;
            step = std::min(step * 1.2, 4.0);
        } else {
            step *= 0.5;
        }
    }
    return x;
}

}  // namespace

Point optimize_basepoint(const GenTuple& M, const SearchConfig& cfg) {
    if (M.size() == 0) return M.base;
    if (M.model.kind == ModelKind::FreeTree) return tree_optimize(M, cfg);
    return float_optimize(M, cfg);
}

}  // namespace nht
