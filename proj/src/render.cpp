#include "nht/render.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace nht {

namespace {

struct Svg {
    std::ostringstream body;
    double w, h;
    Svg(double w, double h) : w(w), h(h) {}
    void circle(double x, double y, double r, const std::string& fill) {
        body << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"" << r << "\" fill=\"" << fill
             << "\"/>\n";
    }
    void line(double x1, double y1, double x2, double y2, const std::string& stroke, double sw) {
        body << "<line x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2 << "\" y2=\"" << y2
             << "\" stroke=\"" << stroke << "\" stroke-width=\"" << sw << "\"/>\n";
    }
    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke,
                  double sw) {
        body << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << sw
             << "\" points=\"";
        for (auto& [x, y] : pts) body << x << "," << y << " ";
        body << "\"/>\n";
    }
    void text(double x, double y, const std::string& s) {
        body << "<text x=\"" << x << "\" y=\"" << y << "\" font-size=\"11\" font-family=\"monospace\">"
             << s << "</text>\n";
    }
    std::string str() const {
        std::ostringstream os;
        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
           << "\" viewBox=\"0 0 " << w << " " << h << "\">\n<rect width=\"100%\" height=\"100%\" "
           << "fill=\"white\"/>\n"
           << body.str() << "</svg>\n";
        return os.str();
    }
};

std::vector<std::pair<Word, Point>> orbit_ball(const GenTuple& M, int depth) {
    std::vector<std::pair<Word, Point>> out{{Word{}, M.base}};
    std::vector<std::pair<Word, Isometry>> frontier{{Word{}, Isometry::identity(M.els[0].kind, M.els[0].mode)}};
    for (int d = 0; d < depth; ++d) {
        std::vector<std::pair<Word, Isometry>> next;
        for (const auto& [w, iso] : frontier) {
            for (int j = 1; j <= static_cast<int>(M.size()); ++j) {
                for (int e : {1, -1}) {
                    int letter = e > 0 ? j : -j;
                    if (!w.empty() && w.letters().back() == -letter) continue;
                    Word nw = w * Word::letter(j, e);
                    Isometry niso = compose(iso, e > 0 ? M.els[j - 1] : invert(M.els[j - 1]));
                    next.push_back({nw, niso});
                    out.push_back({nw, apply(niso, M.base)});
                }
            }
        }
        frontier = std::move(next);
        if (out.size() > 4000) break;
    }
    return out;
}

std::string render_h2(const Dichotomy& d, int depth) {
    const GenTuple& M = d.final_tuple;
    auto orbit = orbit_ball(M, depth);
    double min_re = -1, max_re = 1, max_im = 2;
    for (const auto& [w, p] : orbit) {
        min_re = std::min(min_re, p.h2p().z.real());
        max_re = std::max(max_re, p.h2p().z.real());
        max_im = std::max(max_im, p.h2p().z.imag());
    }
    double span = std::max(max_re - min_re, 1.0);
    double W = 860, H = 560, pad = 40;
    double k = std::min((W - 2 * pad) / span, (H - 2 * pad) / max_im);
    auto px = [&](std::complex<double> z) {
        return std::pair<double, double>{pad + (z.real() - min_re) * k, H - pad - z.imag() * k};
    };
    Svg svg(W, H);
    svg.line(0, H - pad, W, H - pad, "#444", 1.5);  // boundary line

    // axes / fixed-point markers of the tuple entries
    for (size_t i = 0; i < M.size(); ++i) {
        ElementClass cls = translation_length(M.model, M.els[i]);
        CMat2d mat = M.els[i].approx_matrix();
        double a = mat.a.real(), b = mat.b.real(), c = mat.c.real(), dd = mat.d.real();
        if (cls.type == IsoClass::Hyperbolic) {
            if (std::abs(c) < 1e-12) {
                double xi = b / (dd - a);
                auto [x1, y1] = px({xi, 0});
                svg.line(x1, y1, x1, pad, "#2266cc", 1.0);
            } else {
                double disc = std::sqrt(std::max(0.0, (a + dd) * (a + dd) - 4));
                double xi1 = (a - dd - disc) / (2 * c), xi2 = (a - dd + disc) / (2 * c);
                if (xi1 > xi2) std::swap(xi1, xi2);
                double cc = 0.5 * (xi1 + xi2), r = 0.5 * (xi2 - xi1);
                std::vector<std::pair<double, double>> arc;
                for (int t = 0; t <= 64; ++t) {
                    double th = M_PI * t / 64;
                    arc.push_back(px({cc + r * std::cos(th), r * std::sin(th)}));
                }
                svg.polyline(arc, "#2266cc", 1.0);
            }
        } else if (cls.type == IsoClass::Parabolic && std::abs(c) > 1e-12) {
            auto [x1, y1] = px({(a - dd) / (2 * c), 0});
            svg.circle(x1, y1, 4, "#cc8822");
        }
    }

    for (const auto& [w, p] : orbit) svg.circle(px(p.h2p().z).first, px(p.h2p().z).second, 2.2, "#333");
    auto [bx, by] = px(M.base.h2p().z);
    svg.circle(bx, by, 4, "#cc2222");

    if (d.outcome == Outcome::ShortElement && !is_identity(M.els[0])) {
        Point wp = apply(M.els[0], M.base);
        std::vector<std::pair<double, double>> seg;
        for (int t = 0; t <= 32; ++t)
            seg.push_back(px(geodesic_point(M.model, M.base, wp, t / 32.0).h2p().z));
        svg.polyline(seg, "#cc2222", 2.0);
    }
    std::string label = d.outcome == Outcome::Free ? "free: orbit ball + axes"
                        : d.outcome == Outcome::ShortElement
                            ? "short element at index 1 (highlighted displacement)"
                            : "inconclusive";
    svg.text(pad, 20, label);
    return svg.str();
}

std::string render_tree(const Dichotomy& d, int depth) {
    const GenTuple& M = d.final_tuple;
    int rank = M.model.rank;
    double W = 860, H = 860;
    Svg svg(W, H);
    double cx = W / 2, cy = H / 2;
    double step0 = 150;

    std::map<std::vector<int>, std::pair<double, double>> pos;
    struct Item { Word w; double angle, spread; int depth; };
    std::vector<Item> queue{{Word{}, 0, 2 * M_PI, 0}};
    pos[{}] = {cx, cy};
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        Item it = queue[qi];
        if (it.depth >= depth) continue;
        auto [x0, y0] = pos[it.w.letters()];
        int branches = (it.depth == 0) ? 2 * rank : 2 * rank - 1;
        int bi = 0;
        for (int j = 1; j <= rank; ++j) {
            for (int e : {1, -1}) {
                int letter = e > 0 ? j : -j;
                if (!it.w.empty() && it.w.letters().back() == -letter) continue;
                double ang = it.angle - it.spread / 2 + it.spread * (bi + 0.5) / branches;
                ++bi;
                Word nw = it.w * Word::letter(j, e);
                double r = step0 * std::pow(0.45, it.depth);
                double nx = x0 + r * std::cos(ang), ny = y0 + r * std::sin(ang);
                pos[nw.letters()] = {nx, ny};
                svg.line(x0, y0, nx, ny, "#bbb", 1.0);
                queue.push_back({nw, ang, it.spread / branches * 1.8, it.depth + 1});
            }
        }
    }
    // highlight the orbit of the subgroup generated by the final tuple
    auto orbit = orbit_ball(M, depth);
    for (const auto& [w, p] : orbit) {
        const TreePoint& tp = p.treep();
        auto it = pos.find(tp.word.letters());
        if (it != pos.end()) svg.circle(it->second.first, it->second.second, 4, "#cc2222");
    }
    auto base_it = pos.find(M.base.treep().word.letters());
    if (base_it != pos.end()) svg.circle(base_it->second.first, base_it->second.second, 5, "#2266cc");
    std::string label = d.outcome == Outcome::Free ? "free: subgroup orbit highlighted"
                        : d.outcome == Outcome::ShortElement ? "short element found (index 1)"
                                                             : "inconclusive";
    svg.text(20, 20, label);
    return svg.str();
}

}  // namespace

std::string render_svg(const Dichotomy& d, int depth) {
    switch (d.final_tuple.model.kind) {
        case ModelKind::H2: return render_h2(d, depth);
        case ModelKind::FreeTree: return render_tree(d, depth);
        default: throw std::invalid_argument("rendering unsupported for this model");
    }
}

}  // namespace nht
