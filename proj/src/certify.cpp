#include "nht/certify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace nht {

namespace {

Word gn_power(int n, int eps) { return Word::letter(n, eps); }

// point at scaled arclength s from A along [A, B]; exact in trees
Point point_at(const SpaceModel& m, const Point& A, const Point& B, double s) {
    if (m.kind == ModelKind::FreeTree)
        return tree_point_along(A, B, rat_from_double(s) * rat_from_double(m.scale));
    double d = dist(m, A, B);
    if (d <= 0 || s <= 0) return A;
    if (s >= d) return B;
    return geodesic_point(m, A, B, s / d);
}

Point point_at_exact(const SpaceModel& m, const Point& A, const Point& B, const Rat& s_scaled) {
    if (m.kind == ModelKind::FreeTree)
        return tree_point_along(A, B, s_scaled * rat_from_double(m.scale));
    return point_at(m, A, B, rat_to_double(s_scaled));
}

}  // namespace

// --- decomposition ---

Word Decomposition::w(int i) const { return h[i - 1] * gn_power(n, eps[i - 1]); }
Word Decomposition::v(int i) const { return gn_power(n, eps[i - 1]) * h[i]; }
Word Decomposition::z(int i) const { return h[i - 1] * gn_power(n, eps[i - 1]) * h[i]; }
Word Decomposition::y(int i) const {
    return gn_power(n, eps[i - 1]) * h[i] * gn_power(n, eps[i]);
}

Word Decomposition::reassemble() const {
    Word out = h[0];
    for (int i = 1; i <= l(); ++i) out = out * gn_power(n, eps[i - 1]) * h[i];
    return out;
}

Decomposition decompose(const std::vector<int>& letters, int n) {
    for (size_t i = 0; i + 1 < letters.size(); ++i)
        if (letters[i] == -letters[i + 1]) throw std::invalid_argument("word is not freely reduced");
    for (int c : letters)
        if (c == 0 || std::abs(c) > n) throw std::invalid_argument("letter exceeds tuple size");
    Decomposition d;
    d.u = Word(letters);
    d.n = n;
    std::vector<int> cur;
    for (int c : letters) {
        if (std::abs(c) == n) {
            d.h.push_back(Word(cur));
            cur.clear();
            d.eps.push_back(c > 0 ? 1 : -1);
        } else {
            cur.push_back(c);
        }
    }
    d.h.push_back(Word(cur));
    d.valid = true;
    for (int i = 0; i + 1 < d.l(); ++i)
        if (d.eps[i] == -d.eps[i + 1] && d.h[i + 1].empty()) d.valid = false;
    return d;
}

Decomposition decompose(const Word& u, int n) { return decompose(u.letters(), n); }

// --- stable parts ---

StablePart stable_part(const Isometry& h, int eps, const Isometry& gn, int N, CertifyCtx& ctx) {
    const SpaceModel& m = ctx.model;
    const Point& x = ctx.base;
    double d2 = ctx.sched.d2(ctx.n - 1);
    double d44 = ctx.sched.d4(ctx.n - 1, d2 + 11);
    double L = displacement(m, gn, x);
    double threshold = 4.0 * N + 2.0 * d2 + 2.0 * d44 + 10.0;
    if (L < threshold) {
        std::ostringstream os;
        os << "stable part undefined: |g_n|_x = " << L << " < threshold " << threshold;
        throw StablePartUndefined(os.str());
    }
    Isometry gne = eps > 0 ? gn : invert(gn);
    Isometry w = compose(h, gne);
    Point wx = apply(w, x);
    StablePart out;
    out.N = N;

    bool exact_tree = (m.kind == ModelKind::FreeTree);
    Rat Lr(0);  // exact |g_n|_x in scaled units
    if (exact_tree)
        Lr = tree_dist_exact(x.treep(), apply(gne, x).treep()) / rat_from_double(m.scale);

    if (is_identity(h)) {
        out.case_tag = 1;
        if (exact_tree) {
            Rat base = Lr / 2 - Rat(N) - rat_from_double(d2);
            out.s = point_at_exact(m, x, wx, base);
            out.t = point_at_exact(m, x, wx, base + Rat(N));
        } else {
            out.s = point_at(m, x, wx, L / 2 - N - d2);
            out.t = point_at(m, x, wx, L / 2 - d2);
        }
    } else {
        Point hx = apply(h, x);
        // case 2 test: start of the terminal segment of h[x, g_n^eps x] within
        // 2 of [x, wx]; distance to a segment is convex, so the endpoint decides
        Point term_start = point_at(m, wx, hx, L / 2 + N + d2);
        if (dist_to_segment(m, term_start, x, wx) <= 2.0 + 1e-9) {
            out.case_tag = 2;
            if (exact_tree) {
                Rat from_end = Lr / 2 + Rat(N) + rat_from_double(d2);
                out.s = point_at_exact(m, wx, hx, from_end);
                out.t = point_at_exact(m, wx, hx, from_end - Rat(N));
            } else {
                out.s = point_at(m, wx, hx, L / 2 + N + d2);
                out.t = point_at(m, wx, hx, L / 2 + d2);
            }
        } else {
            out.case_tag = 3;
            double hlen = dist(m, x, hx);
            double prod = 0.5 * (hlen + dist(m, x, wx) - dist(m, hx, wx));
            if (prod < d44 + N) {
                std::ostringstream os;
                os << "stable part case 3 undefined: d(x, r) = " << prod << " < " << (d44 + N);
                throw StablePartUndefined(os.str());
            }
            if (exact_tree) {
                Rat scale = rat_from_double(m.scale);
                Rat prodr = (tree_dist_exact(x.treep(), hx.treep()) +
                             tree_dist_exact(x.treep(), wx.treep()) -
                             tree_dist_exact(hx.treep(), wx.treep())) / (2 * scale);
                Rat base = prodr - rat_from_double(d44) - Rat(N);
                out.s = point_at_exact(m, x, hx, base);
                out.t = point_at_exact(m, x, hx, base + Rat(N));
            } else {
                out.s = point_at(m, x, hx, prod - d44 - N);
                out.t = point_at(m, x, hx, prod - d44);
            }
        }
    }
    out.placement_defect =
        std::max(dist_to_segment(m, out.s, x, wx), dist_to_segment(m, out.t, x, wx));
    return out;
}

StablePart stable_part_v(const Isometry& h_next, int eps, const Isometry& gn, int N,
                         CertifyCtx& ctx) {
    // v = g_n^eps h; considered as the inverse of w = h^-1 g_n^-eps
    StablePart sp = stable_part(invert(h_next), -eps, gn, N, ctx);
    Isometry v = compose(eps > 0 ? gn : invert(gn), h_next);
    StablePart out;
    out.case_tag = sp.case_tag;
    out.N = sp.N;
    out.s = apply(v, sp.t);
    out.t = apply(v, sp.s);
    out.placement_defect = sp.placement_defect;
    return out;
}

// --- sigma_N ---

BrokenPath build_sigma(const Word& u, const std::vector<Isometry>& els, CertifyCtx& ctx) {
    int n = static_cast<int>(els.size());
    Decomposition dec = decompose(u, n);
    if (dec.l() == 0) throw std::invalid_argument("sigma requires at least one distinguished letter");
    const Isometry& gn = els[n - 1];
    BrokenPath out;
    out.dec = dec;
    out.N = ctx.N;
    out.els = els;

    std::vector<Point> anchors{ctx.base};
    Isometry W = Isometry::identity(els[0].kind, els[0].mode);
    for (int i = 1; i <= dec.l(); ++i) {
        Isometry hi = eval_word(els, dec.h[i - 1]);
        Isometry hnext = eval_word(els, dec.h[i]);
        StablePart spw = stable_part(hi, dec.eps[i - 1], gn, ctx.N, ctx);
        StablePart spv = stable_part_v(hnext, dec.eps[i - 1], gn, ctx.N, ctx);
        Isometry Wh = compose(W, hi);
        anchors.push_back(apply(W, spw.s));
        anchors.push_back(apply(W, spw.t));
        anchors.push_back(apply(Wh, spv.s));
        anchors.push_back(apply(Wh, spv.t));
        out.cases.push_back(spw.case_tag);
        out.cases.push_back(spv.case_tag);
        W = compose(Wh, dec.eps[i - 1] > 0 ? gn : invert(gn));
    }
    Isometry full = compose(W, eval_word(els, dec.h[dec.l()]));
    anchors.push_back(apply(full, ctx.base));
    out.path = PiecewisePath::through(ctx.model, std::move(anchors));
    return out;
}

// --- qi probe ---

int adapted_lmax(int n_gens, int Lmax, long budget) {
    long count = 0;
    long width = 2L * n_gens;
    int level = 0;
    for (int len = 1; len <= Lmax; ++len) {
        count += width;
        if (count > budget) break;
        level = len;
        width *= (2L * n_gens - 1);
    }
    return std::max(level, 1);
}

namespace {

struct ProbeState {
    const GenTuple* M;
    const CertifyCtx* ctx;
    QiProbe* out;
    long nodes = 0;
    long budget;
    std::vector<double> gen_disp;
    std::vector<int> letters;

    bool dfs(const Isometry& cur, int len, int last, double maxgen, int Lmax) {
        if (len > 0) {
            double disp = displacement(M->model, cur, M->base);
            if (disp < out->min_disp_by_len[len]) out->min_disp_by_len[len] = disp;
            out->thm3_stat = std::min(out->thm3_stat, disp - maxgen);
            if (disp < ctx->shortTol && !out->counterexample) {
                out->counterexample = Word(letters);
                out->counterexample_disp = disp;
            }
        }
        if (len == Lmax) return true;
        int n = static_cast<int>(M->size());
        for (int j = 1; j <= n; ++j) {
            for (int e : {1, -1}) {
                int letter = e > 0 ? j : -j;
                if (letter == -last) continue;
                if (++nodes > budget) {
                    out->partial = true;
                    return false;
                }
                letters.push_back(letter);
                Isometry next = compose(cur, e > 0 ? M->els[j - 1] : invert(M->els[j - 1]));
                bool ok = dfs(next, len + 1, letter, std::max(maxgen, gen_disp[j - 1]), Lmax);
                letters.pop_back();
                if (!ok) return false;
            }
        }
        return true;
    }
};

}  // namespace

QiProbe qi_probe(const GenTuple& M, int Lmax, const CertifyCtx& ctx) {
    QiProbe out;
    out.Lmax = Lmax;
    out.min_disp_by_len.assign(Lmax + 1, 1e300);
    ProbeState st{&M, &ctx, &out, 0, ctx.wordBudget, {}, {}};
    for (const auto& g : M.els) st.gen_disp.push_back(displacement(M.model, g, M.base));
    st.dfs(Isometry::identity(M.els[0].kind, M.els[0].mode), 0, 0, 0.0, Lmax);

    double alpha = 1e300;
    for (int k = 1; k <= Lmax; ++k) {
        if (out.min_disp_by_len[k] >= 1e300) continue;
        alpha = std::min(alpha, out.min_disp_by_len[k] / k);
    }
    out.alpha = (alpha >= 1e300) ? 0.0 : std::max(0.0, alpha);
    double beta = 0.0;
    for (int k = 1; k <= Lmax; ++k) {
        if (out.min_disp_by_len[k] >= 1e300) continue;
        beta = std::max(beta, out.alpha * k - out.min_disp_by_len[k]);
    }
    out.beta = beta;
    return out;
}

// --- ping-pong certificate ---

namespace {

// exact Nielsen cancellation conditions for tree tuples
bool tree_nielsen_reduced(const GenTuple& M, double* min_slack) {
    int n = static_cast<int>(M.size());
    std::vector<Word> sym;
    for (int i = 0; i < n; ++i) sym.push_back(M.els[i].tree_word());
    for (int i = 0; i < n; ++i) sym.push_back(M.els[i].tree_word().inverse());
    for (const auto& w : sym)
        if (w.empty()) return false;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (sym[i] == sym[j] || sym[i] == sym[j + n]) return false;
    auto inv_of = [&](int a) { return (a + n) % (2 * n); };
    for (int a = 0; a < 2 * n; ++a) {
        for (int b = 0; b < 2 * n; ++b) {
            if (b == inv_of(a)) continue;
            Word ab = sym[a] * sym[b];
            if (ab.size() < std::max(sym[a].size(), sym[b].size())) return false;
        }
    }
    double slack = 1e300;
    for (int a = 0; a < 2 * n; ++a) {
        for (int b = 0; b < 2 * n; ++b) {
            if (b == inv_of(a)) continue;
            Word ab = sym[a] * sym[b];
            for (int c = 0; c < 2 * n; ++c) {
                if (c == inv_of(b)) continue;
                Word abc = ab * sym[c];
                double lhs = static_cast<double>(abc.size());
                double rhs = static_cast<double>(sym[a].size()) - static_cast<double>(sym[b].size()) +
                             static_cast<double>(sym[c].size());
                if (lhs <= rhs) return false;
                slack = std::min(slack, lhs - rhs);
            }
        }
    }
    if (min_slack) *min_slack = slack;
    return true;
}

}  // namespace

std::optional<FreeCertificate> pingpong_certificate(const GenTuple& M, CertifyCtx& ctx) {
    int n = static_cast<int>(M.size());
    if (n == 0) return std::nullopt;
    for (const auto& g : M.els)
        if (is_identity(g)) throw std::invalid_argument("ping-pong certificate with a trivial element");

    std::vector<Isometry> sym;
    for (const auto& g : M.els) sym.push_back(g);
    for (const auto& g : M.els) sym.push_back(invert(g));
    auto inv_of = [&](int a) { return (a + n) % (2 * n); };

    FreeCertificate cert;
    cert.delta = M.model.delta;
    cert.products.assign(2 * n, std::vector<double>(2 * n, -1.0));
    double P = 0.0;
    std::vector<Point> orbit;
    for (const auto& s : sym) orbit.push_back(apply(s, M.base));
    for (int a = 0; a < 2 * n; ++a) {
        for (int b = 0; b < 2 * n; ++b) {
            if (b == inv_of(a)) continue;
            double p = gromov_product(M.model, orbit[inv_of(a)], orbit[b], M.base);
            cert.products[a][b] = p;
            P = std::max(P, p);
        }
    }
    double m = 1e300;
    for (const auto& g : M.els) m = std::min(m, displacement(M.model, g, M.base));
    cert.max_product = P;
    cert.min_displacement = m;

    double margin_geo = m / 2.0 - 2.0 * M.model.delta - P;
    bool geometric = margin_geo > ctx.margin;
    bool combinatorial = false;
    double comb_slack = 0.0;
    if (!geometric && M.model.kind == ModelKind::FreeTree) {
        combinatorial = tree_nielsen_reduced(M, &comb_slack);
    }
    if (!geometric && !combinatorial) return std::nullopt;
    cert.margin = geometric ? margin_geo : comb_slack / M.model.scale;
    cert.margin_kind = geometric ? "gromov" : "nielsen_reduced";

    // sampled orbit broken paths must be m-local near-geodesics
    cert.orbit_eps = 4.0 * P + 8.0 * M.model.delta;
    {
        int sample_len = std::min(4, ctx.Lmax);
        int checked = 0;
        std::vector<int> stack;
        std::vector<Point> anchors{M.base};
        std::vector<Isometry> prefix{Isometry::identity(M.els[0].kind, M.els[0].mode)};
        // deterministic DFS, capped
        std::function<bool(int)> rec = [&](int last) -> bool {
            if (static_cast<int>(stack.size()) == sample_len) {
                PiecewisePath path = PiecewisePath::through(M.model, anchors);
                auto rep = local_qg_check(path, m, 1.0, cert.orbit_eps,
                                          std::max(m / 32.0, 1e-3));
                if (!rep.pass) cert.orbit_check_pass = false;
                ++checked;
                return checked < 40 && cert.orbit_check_pass;
            }
            for (int j = 1; j <= n && checked < 40; ++j) {
                for (int e : {1, -1}) {
                    int letter = e > 0 ? j : -j;
                    if (letter == -last) continue;
                    Isometry next = compose(prefix.back(), e > 0 ? M.els[j - 1] : invert(M.els[j - 1]));
                    stack.push_back(letter);
                    prefix.push_back(next);
                    anchors.push_back(apply(next, M.base));
                    bool cont = rec(letter);
                    stack.pop_back();
                    prefix.pop_back();
                    anchors.pop_back();
                    if (!cont) return false;
                }
            }
            return true;
        };
        rec(0);
        if (!cert.orbit_check_pass) return std::nullopt;
    }

    int lmax = adapted_lmax(n, ctx.Lmax, ctx.wordBudget);
    QiProbe probe = qi_probe(M, lmax, ctx);
    if (probe.counterexample) return std::nullopt;
    cert.alpha = probe.alpha;
    cert.beta = probe.beta;
    cert.Lmax_checked = probe.Lmax;
    return cert;
}

// --- quadrilateral decompositions ---

QuadPair quad_pair(const SpaceModel& m, const Isometry& g, const Isometry& h, const Point& x) {
    Point gx = apply(g, x);
    Point ghx = apply(compose(g, h), x);
    double lg = dist(m, x, gx), lh = dist(m, gx, ghx), lgh = dist(m, x, ghx);
    QuadPair out;
    auto eval_at = [&](double from_gx) {
        Point r = point_at(m, gx, x, from_gx);
        double a = dist(m, x, r) + dist(m, r, gx);
        double b = dist(m, gx, r) + dist(m, r, ghx);
        double c = dist(m, x, r) + dist(m, r, ghx);
        double slack = std::min({lg + 2 - a, lh + 2 - b, lgh + 2 - c});
        return std::tuple<double, Point, double, double, double>(slack, r, a, b, c);
    };
    double prod = gromov_product(m, x, ghx, gx);
    auto [slack, r, a, b, c] = eval_at(prod);
    if (slack < 0 && lg > 0) {
        // slide r along [gx, x] to rebalance; the slack is concave in position
        double lo = 0, hi = lg;
        for (int it = 0; it < 48; ++it) {
            double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
            if (std::get<0>(eval_at(m1)) < std::get<0>(eval_at(m2))) lo = m1;
            else hi = m2;
        }
        auto best = eval_at(0.5 * (lo + hi));
        if (std::get<0>(best) > slack) std::tie(slack, r, a, b, c) = best;
    }
    out.r = r;
    out.len_g = a;
    out.len_h = b;
    out.len_gh = c;
    out.slack = slack;
    return out;
}

QuadTriple quad_triple(const SpaceModel& m, const Isometry& g, const Isometry& h, const Isometry& f,
                       const Point& x, double step) {
    Point A = apply(g, x);
    Point B = apply(compose(g, h), x);
    Point C = apply(compose(compose(g, h), f), x);
    double lg = dist(m, x, A), lh = dist(m, A, B), lf = dist(m, B, C), lghf = dist(m, x, C);

    auto frac = [](double s, double d) { return d > 1e-15 ? std::clamp(s / d, 0.0, 1.0) : 0.0; };

    // case 1: the middle tracks [A, B]
    double a1 = gromov_product(m, x, B, A);
    double b1 = gromov_product(m, A, C, B);
    Point p1, q1;
    if (a1 + b1 <= lh) {
        p1 = geodesic_point(m, A, B, frac(a1, lh));
        q1 = geodesic_point(m, A, B, frac(lh - b1, lh));
    } else {
        double mid = 0.5 * (a1 + lh - b1);
        p1 = q1 = geodesic_point(m, A, B, frac(mid, lh));
    }
    double c1g = dist(m, x, p1) + dist(m, p1, A);
    double c1h = dist(m, A, p1) + dist(m, p1, q1) + dist(m, q1, B);
    double c1f = dist(m, B, q1) + dist(m, q1, C);
    double c1w = dist(m, x, p1) + dist(m, p1, q1) + dist(m, q1, C);
    double slack1 = std::min({lg + 4 - c1g, lh + 4 - c1h, lf + 4 - c1f, lghf + 4 - c1w});

    // case 2: [x, A] and [B, C] fellow-travel through [p, q]
    double a2 = gromov_product(m, A, C, x);        // d(x, p)
    double b2 = gromov_product(m, B, C, A);        // d(A, q)
    Point p2, q2;
    if (a2 + b2 <= lg) {
        p2 = geodesic_point(m, x, A, frac(a2, lg));
        q2 = geodesic_point(m, x, A, frac(lg - b2, lg));
    } else {
        double mid = 0.5 * (a2 + lg - b2);
        p2 = q2 = geodesic_point(m, x, A, frac(mid, lg));
    }
    double c2g = dist(m, x, p2) + dist(m, p2, q2) + dist(m, q2, A);
    double c2h = dist(m, A, q2) + dist(m, q2, B);
    double c2f = dist(m, B, q2) + dist(m, q2, p2) + dist(m, p2, C);
    double c2w = dist(m, x, p2) + dist(m, p2, C);
    double within_xg = sup_dist_to_segment(m, p2, q2, x, A, step);
    double within_hf = sup_dist_to_segment(m, p2, q2, B, C, step);
    double slack2 = std::min({lg + 4 - c2g, lh + 4 - c2h, lf + 4 - c2f, lghf + 4 - c2w,
                              4 - within_xg, 4 - within_hf});

    QuadTriple out;
    out.slack_case1 = slack1;
    out.slack_case2 = slack2;
    out.pq_within_xg = within_xg;
    out.pq_within_hf = within_hf;
    if (slack1 >= slack2) {
        out.chosen_case = 1;
        out.p = p1;
        out.q = q1;
        out.len_g = c1g;
        out.len_h = c1h;
        out.len_f = c1f;
        out.len_ghf = c1w;
    } else {
        out.chosen_case = 2;
        out.p = p2;
        out.q = q2;
        out.len_g = c2g;
        out.len_h = c2h;
        out.len_f = c2f;
        out.len_ghf = c2w;
    }
    return out;
}

Cor17Report quad_cor17(const SpaceModel& m, const Isometry& g, const Isometry& h, const Isometry& f,
                       const Point& x, double tau_start, double D, double step) {
    Point A = apply(g, x);
    Point B = apply(compose(g, h), x);
    Point C = apply(compose(compose(g, h), f), x);
    double total = dist(m, x, C);
    double s0 = std::clamp(tau_start, 0.0, std::max(0.0, total - 3 * D));
    Point ta = point_at(m, x, C, s0);
    Point tb = point_at(m, x, C, std::min(total, s0 + 3 * D));
    Cor17Report rep;
    rep.required = D - 40;
    const Point* segs[3][2] = {{&x, &A}, {&A, &B}, {&B, &C}};
    for (int k = 0; k < 3; ++k) {
        double surv = max_survived_arclength(m, ta, tb, *segs[k][0], *segs[k][1], 24.0, step);
        if (surv > rep.survived) {
            rep.survived = surv;
            rep.which = k;
        }
    }
    rep.pass = rep.survived >= rep.required;
    return rep;
}

// --- position predicates ---

namespace {

PredicateItem make_item(const std::string& name, double lhs, double rhs) {
    PredicateItem it;
    it.name = name;
    it.margin = lhs - rhs;
    it.pass = it.margin >= -1e-9;
    return it;
}

}  // namespace

PredicateReport position_predicates(const BrokenPath& sigma, CertifyCtx& ctx) {
    PredicateReport rep;
    const SpaceModel& m = ctx.model;
    const Point& x = ctx.base;
    const auto& els = sigma.els;
    int n = static_cast<int>(els.size());
    const Isometry& gn = els[n - 1];
    int N = sigma.N;
    double d2 = ctx.sched.d2(ctx.n - 1);
    double d44 = ctx.sched.d4(ctx.n - 1, d2 + 11);
    double L = displacement(m, gn, x);
    double step = ctx.sample_step();
    const auto& anchors = sigma.path.anchors;
    int l = sigma.dec.l();
    const Point& S1 = anchors[1];
    const Point& Tl = anchors[4 * l];
    const Point& ux = anchors.back();

    {
        auto qg = local_qg_check(sigma.path, N, 1.0, 100.0, std::max(step, N / 64.0));
        PredicateItem it;
        it.name = "lemma27_1_local_qg";
        it.pass = qg.pass;
        it.margin = -qg.worst_margin;
        rep.items.push_back(it);
    }
    double rhs2 = L / 2 - 2.0 * N - 2 * d2 - d44 - 24;
    rep.items.push_back(make_item("lemma27_2", dist(m, x, S1), rhs2));
    double h1len = displacement(m, eval_word(els, sigma.dec.h[0]), x);
    rep.items.push_back(
        make_item("lemma27_3", dist(m, x, S1), h1len - L / 2 - N - d2 - d44 - 10));
    rep.items.push_back(make_item("lemma27_4", dist(m, Tl, ux), rhs2));
    double hllen = displacement(m, eval_word(els, sigma.dec.h[l]), x);
    rep.items.push_back(
        make_item("lemma27_5", dist(m, Tl, ux), hllen - L / 2 - N - d2 - d44 - 10));

    // Lemma 24: per product z_i, both stable parts hug the two-leg path
    // [x, a] u [a, z_i x], with a the projection of the g_n-midpoint
    for (int i = 1; i <= l; ++i) {
        Isometry hi = eval_word(els, sigma.dec.h[i - 1]);
        Isometry hnext = eval_word(els, sigma.dec.h[i]);
        Isometry zi = eval_word(els, sigma.dec.z(i));
        StablePart spw = stable_part(hi, sigma.dec.eps[i - 1], gn, N, ctx);
        StablePart spv = stable_part_v(hnext, sigma.dec.eps[i - 1], gn, N, ctx);
        Point zx = apply(zi, x);
        Isometry gne = sigma.dec.eps[i - 1] > 0 ? gn : invert(gn);
        Point mid = apply(hi, geodesic_point(m, x, apply(gne, x), 0.5));
        Point a = closest_point_on_segment(m, mid, x, zx);
        double s1 = sup_dist_to_segment(m, spw.s, spw.t, x, a, step);
        Point hs = apply(hi, spv.s), ht = apply(hi, spv.t);
        double s2 = sup_dist_to_segment(m, hs, ht, a, zx, step);
        PredicateItem it = make_item("lemma24_" + std::to_string(i), 15.0, std::max(s1, s2));
        rep.items.push_back(it);
    }

    // Lemma 25: per product y_i
    for (int i = 1; i + 1 <= l; ++i) {
        Isometry gni = sigma.dec.eps[i - 1] > 0 ? gn : invert(gn);
        Isometry hnext = eval_word(els, sigma.dec.h[i]);
        Isometry gni1 = sigma.dec.eps[i] > 0 ? gn : invert(gn);
        QuadTriple qt = quad_triple(m, gni, hnext, gni1, x, step);
        Point yx = apply(eval_word(els, sigma.dec.y(i)), x);
        StablePart spv = stable_part_v(hnext, sigma.dec.eps[i - 1], gn, N, ctx);
        rep.items.push_back(make_item("lemma25_" + std::to_string(i) + "a", 15.0,
                                      sup_dist_to_segment(m, spv.s, spv.t, x, qt.p, step)));
        double hl = displacement(m, hnext, x);
        double bound = hl - L - 2.0 * N - 2 * d44 - 2 * d2;
        PredicateItem mid;
        mid.name = "lemma25_" + std::to_string(i) + "b";
        if (bound > 0) {
            Point a = apply(gni, x);
            Point b = apply(compose(gni, hnext), x);
            double surv = max_survived_arclength(m, a, b, qt.p, qt.q, 15.0, step);
            mid.margin = surv - bound;
            mid.pass = mid.margin >= -1e-9;
        } else {
            mid.applicable = false;
            mid.note = "vacuous: bound nonpositive";
        }
        rep.items.push_back(mid);
        // the w_{i+1} stable part, translated by g_n^{eps_i}
        StablePart spw_next = stable_part(hnext, sigma.dec.eps[i], gn, N, ctx);
        Point ws = apply(gni, spw_next.s), wt = apply(gni, spw_next.t);
        rep.items.push_back(make_item("lemma25_" + std::to_string(i) + "c", 15.0,
                                      sup_dist_to_segment(m, ws, wt, qt.q, yx, step)));
    }

    // Thm 11(2): [x, ux] in the d2(n)-neighborhood of the syllable path
    {
        std::vector<Point> syl{x};
        Isometry cur = Isometry::identity(els[0].kind, els[0].mode);
        for (int i = 1; i <= l; ++i) {
            if (!sigma.dec.h[i - 1].empty()) {
                cur = compose(cur, eval_word(els, sigma.dec.h[i - 1]));
                syl.push_back(apply(cur, x));
            }
            cur = compose(cur, sigma.dec.eps[i - 1] > 0 ? gn : invert(gn));
            syl.push_back(apply(cur, x));
        }
        if (!sigma.dec.h[l].empty()) {
            cur = compose(cur, eval_word(els, sigma.dec.h[l]));
            syl.push_back(apply(cur, x));
        }
        PiecewisePath sylpath = PiecewisePath::through(m, syl);
        double sup = sup_dist_to_path(m, x, ux, sylpath, step);
        double d2n = ctx.n >= 2 ? ctx.sched.d2(ctx.n) : ctx.sched.c0();
        rep.items.push_back(make_item("thm11_2", d2n, sup));

        // Prop 13(4): long subsegments meet a syllable segment within 2L+100
        double Tpred = std::max(static_cast<double>(N), ctx.sched.base().N1);
        double ulen = dist(m, x, ux);
        PredicateItem p4;
        p4.name = "prop13_4";
        if (ulen >= 10 * Tpred) {
            double worst = 1e300;
            int windows = 3;
            for (int wdx = 0; wdx < windows; ++wdx) {
                double start = (ulen - 10 * Tpred) * wdx / std::max(1, windows - 1);
                Point wa = point_at(m, x, ux, start);
                Point wb = point_at(m, x, ux, start + 10 * Tpred);
                double best = 0.0;
                for (size_t k = 0; k + 1 < sylpath.anchors.size(); ++k) {
                    best = std::max(best, max_survived_arclength(m, sylpath.anchors[k],
                                                                 sylpath.anchors[k + 1], wa, wb,
                                                                 2 * ctx.sched.base().L + 100, step));
                }
                worst = std::min(worst, best);
            }
            p4.margin = worst - Tpred;
            p4.pass = p4.margin >= -1e-9;
        } else {
            p4.applicable = false;
            p4.note = "inapplicable: |u|_x below 10T";
        }
        rep.items.push_back(p4);
    }

    // Lemma 19 half-survival on the decomposition products
    for (int i = 1; i <= l; ++i) {
        if (sigma.dec.h[i - 1].empty()) continue;
        Isometry hi = eval_word(els, sigma.dec.h[i - 1]);
        Isometry gne = sigma.dec.eps[i - 1] > 0 ? gn : invert(gn);
        QuadPair qp = quad_pair(m, hi, gne, x);
        double hlen = displacement(m, hi, x);
        Point wx = apply(compose(hi, gne), x);
        PredicateItem a = make_item("lemma19_" + std::to_string(i) + "_left",
                                    dist(m, x, qp.r), hlen / 2 - 3);
        PredicateItem b = make_item("lemma19_" + std::to_string(i) + "_right",
                                    dist(m, qp.r, wx), L / 2 - (3 + d2));
        rep.items.push_back(a);
        rep.items.push_back(b);
    }

    // minimality probe: a strictly improving move means the half-survival
    // bounds cannot all hold
    {
        GenTuple M = GenTuple::make(m, els, x);
        auto mv = improving_move_search(M, ctx.search);
        PredicateItem it;
        it.name = "minimality_probe";
        it.pass = !mv.has_value();
        if (mv) it.note = "improving move exists: " + mv->encode();
        rep.items.push_back(it);
    }

    rep.all_pass = true;
    for (const auto& it : rep.items)
        if (it.applicable && !it.pass) rep.all_pass = false;
    if (!rep.all_pass) {
        std::ostringstream os;
        os << "a position predicate failed: the tuple is Nielsen-equivalent to one with a short "
              "element (Lemmas 24/25)";
        if (N >= ctx.sched.base().N1 && ctx.n >= 2)
            os << "; bound k(N,n) = " << k_of(N, ctx.n, ctx.sched);
        os << "; run minimization";
        rep.advice = os.str();
    }
    return rep;
}

}  // namespace nht
