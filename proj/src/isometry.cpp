#include "nht/isometry.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace nht {

namespace {

constexpr double kClassTol = 1e-9;

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

template <class S>
Mat2<S> canon(Mat2<S> m) {
    m.canonicalize();
    return m;
}

Mat2d renorm(Mat2d m) {
    double det = m.det();
    if (std::abs(det - 1.0) > 1e-13 && det > 0) {
        double s = std::sqrt(det);
        m.a /= s; m.b /= s; m.c /= s; m.d /= s;
    }
    m.canonicalize();
    return m;
}

CMat2d renorm(CMat2d m) {
    std::complex<double> det = m.det();
    if (std::abs(det - 1.0) > 1e-13) {
        std::complex<double> s = std::sqrt(det);
        m.a /= s; m.b /= s; m.c /= s; m.d /= s;
    }
    m.canonicalize();
    return m;
}

std::complex<double> mobius(const CMat2d& m, std::complex<double> z) {
    return (m.a * z + m.b) / (m.c * z + m.d);
}

PointH3 h3_action(const CMat2d& m, const PointH3& p) {
    std::complex<double> cz_d = m.c * p.z + m.d;
    double den = std::norm(cz_d) + std::norm(m.c) * p.t * p.t;
    std::complex<double> num = (m.a * p.z + m.b) * std::conj(cz_d) + m.a * std::conj(m.c) * p.t * p.t;
    return {num / den, p.t / den};
}

}  // namespace

Isometry Isometry::h2(Mat2d m, Word prov) { return {ModelKind::H2, NumMode::Float, canon(m), std::move(prov)}; }
Isometry Isometry::h2_exact(Mat2q m, Word prov) { return {ModelKind::H2, NumMode::Exact, canon(m), std::move(prov)}; }
Isometry Isometry::h3(CMat2d m, Word prov) { return {ModelKind::H3, NumMode::Float, canon(m), std::move(prov)}; }
Isometry Isometry::h3_exact(CMat2q m, Word prov) { return {ModelKind::H3, NumMode::Exact, canon(m), std::move(prov)}; }
Isometry Isometry::tree(Word w, Word prov) { return {ModelKind::FreeTree, NumMode::Exact, std::move(w), std::move(prov)}; }

Isometry Isometry::identity(ModelKind kind, NumMode mode) {
    switch (kind) {
        case ModelKind::H2:
            return mode == NumMode::Exact ? h2_exact(Mat2q::identity()) : h2(Mat2d::identity());
        case ModelKind::H3:
            return mode == NumMode::Exact ? h3_exact(CMat2q::identity()) : h3(CMat2d::identity());
        case ModelKind::FreeTree: return tree(Word{});
    }
    throw std::logic_error("bad kind");
}

CMat2d Isometry::approx_matrix() const {
    if (auto* m = std::get_if<Mat2d>(&concrete)) return to_cmat(*m);
    if (auto* m = std::get_if<Mat2q>(&concrete)) return to_cmat(*m);
    if (auto* m = std::get_if<CMat2d>(&concrete)) return *m;
    if (auto* m = std::get_if<CMat2q>(&concrete)) return to_cmat(*m);
    throw std::logic_error("tree isometry has no matrix");
}

Point apply(const Isometry& g, const Point& p) {
    if (g.kind != p.kind) throw ModelMismatchError{};
    switch (g.kind) {
        case ModelKind::H2: {
            CMat2d m = g.approx_matrix();
            // real coefficients: use the real Mobius formula
            double a = m.a.real(), b = m.b.real(), c = m.c.real(), d = m.d.real();
            std::complex<double> z = p.h2p().z;
            return Point::h2((a * z + b) / (c * z + d));
        }
        case ModelKind::H3: {
            PointH3 out = h3_action(g.approx_matrix(), p.h3p());
            return Point::h3(out.z, out.t);
        }
        case ModelKind::FreeTree: {
            const TreePoint& tp = p.treep();
            const Word& w = g.tree_word();
            Word u = w * tp.word;
            if (tp.offset == 0) return Point::tree(u, Rat(0));
            Word parent = tp.word.prefix(tp.word.size() - 1);
            Word v = w * parent;
            if (u.size() > v.size()) return Point::tree(u, tp.offset);
            return Point::tree(v, Rat(1) - tp.offset);
        }
    }
    throw std::logic_error("bad kind");
}

Isometry compose(const Isometry& g, const Isometry& h) {
    if (g.kind != h.kind || g.mode != h.mode) throw ModelMismatchError{};
    Isometry out = g;
    out.provenance = g.provenance * h.provenance;
    if (auto* a = std::get_if<Mat2d>(&g.concrete)) out.concrete = renorm(*a * std::get<Mat2d>(h.concrete));
    else if (auto* b = std::get_if<Mat2q>(&g.concrete)) out.concrete = canon(*b * std::get<Mat2q>(h.concrete));
    else if (auto* c = std::get_if<CMat2d>(&g.concrete)) out.concrete = renorm(*c * std::get<CMat2d>(h.concrete));
    else if (auto* d = std::get_if<CMat2q>(&g.concrete)) out.concrete = canon(*d * std::get<CMat2q>(h.concrete));
    else out.concrete = g.tree_word() * h.tree_word();
    return out;
}

Isometry invert(const Isometry& g) {
    Isometry out = g;
    out.provenance = g.provenance.inverse();
    if (auto* a = std::get_if<Mat2d>(&g.concrete)) out.concrete = canon(a->inverse());
    else if (auto* b = std::get_if<Mat2q>(&g.concrete)) out.concrete = canon(b->inverse());
    else if (auto* c = std::get_if<CMat2d>(&g.concrete)) out.concrete = canon(c->inverse());
    else if (auto* d = std::get_if<CMat2q>(&g.concrete)) out.concrete = canon(d->inverse());
    else out.concrete = g.tree_word().inverse();
    return out;
}

bool is_identity(const Isometry& g, double float_tol) {
    if (g.kind == ModelKind::FreeTree) return g.tree_word().empty();
    if (g.mode == NumMode::Exact) {
        if (auto* m = std::get_if<Mat2q>(&g.concrete)) {
            Mat2q c = canon(*m);
            return c == Mat2q::identity();
        }
        CMat2q c = canon(std::get<CMat2q>(g.concrete));
        return c == CMat2q::identity();
    }
    return dist_to_pm_identity(g.approx_matrix()) < float_tol;
}

bool same_element(const Isometry& g, const Isometry& h, double float_tol) {
    if (g.kind != h.kind) return false;
    if (g.kind == ModelKind::FreeTree) return g.tree_word() == h.tree_word();
    if (g.mode == NumMode::Exact && h.mode == NumMode::Exact) {
        if (auto* a = std::get_if<Mat2q>(&g.concrete)) return canon(*a) == canon(std::get<Mat2q>(h.concrete));
        return canon(std::get<CMat2q>(g.concrete)) == canon(std::get<CMat2q>(h.concrete));
    }
    CMat2d a = g.approx_matrix(), b = h.approx_matrix();
    CMat2d diff{a.a - b.a, a.b - b.b, a.c - b.c, a.d - b.d};
    CMat2d sum{a.a + b.a, a.b + b.b, a.c + b.c, a.d + b.d};
    return std::min(op_norm(diff), op_norm(sum)) < float_tol;
}

double displacement(const SpaceModel& m, const Isometry& g, const Point& x) {
    return dist(m, x, apply(g, x));
}

ElementClass translation_length(const SpaceModel& m, const Isometry& g) {
    if (g.kind == ModelKind::FreeTree) {
        const Word& w = g.tree_word();
        if (w.empty()) return {IsoClass::Identity, 0.0};
        return {IsoClass::Hyperbolic, static_cast<double>(w.cyclic_reduction().size()) / m.scale};
    }
    if (is_identity(g)) return {IsoClass::Identity, 0.0};
    if (g.kind == ModelKind::H2) {
        bool parabolic, hyperbolic;
        double abstr;
        if (g.mode == NumMode::Exact) {
            Rat tr = std::get<Mat2q>(g.concrete).trace();
            Rat atr = tr < 0 ? -tr : tr;
            parabolic = (atr == 2);
            hyperbolic = (atr > 2);
            abstr = rat_to_double(atr);
        } else {
            abstr = std::abs(std::get<Mat2d>(g.concrete).trace());
            parabolic = std::abs(abstr - 2.0) < kClassTol;
            hyperbolic = !parabolic && abstr > 2.0;
        }
        if (parabolic) return {IsoClass::Parabolic, 0.0};
        if (!hyperbolic) return {IsoClass::Elliptic, 0.0};
        return {IsoClass::Hyperbolic, 2.0 * std::acosh(abstr / 2.0) / m.scale};
    }
    // H3: trace decides; non-real trace means loxodromic
    std::complex<double> tr;
    bool real_trace, parabolic, elliptic;
    if (g.mode == NumMode::Exact) {
        CRat t = std::get<CMat2q>(g.concrete).trace();
        real_trace = (t.im == 0);
        Rat atr = t.re < 0 ? -t.re : t.re;
        parabolic = real_trace && atr == 2;
        elliptic = real_trace && atr < 2;
        tr = t.to_complex();
    } else {
        tr = std::get<CMat2d>(g.concrete).trace();
        real_trace = std::abs(tr.imag()) < kClassTol;
        parabolic = real_trace && std::abs(std::abs(tr.real()) - 2.0) < kClassTol;
        elliptic = real_trace && !parabolic && std::abs(tr.real()) < 2.0;
    }
    if (parabolic) return {IsoClass::Parabolic, 0.0};
    if (elliptic) return {IsoClass::Elliptic, 0.0};
    std::complex<double> mu = tr / 2.0 + std::sqrt(tr * tr / 4.0 - 1.0);
    double am = std::max(std::abs(mu), 1.0 / std::abs(mu));
    return {IsoClass::Hyperbolic, 2.0 * std::log(am) / m.scale};
}

namespace {

// fixed points of the Mobius map on the boundary: roots of c z^2 + (d-a) z - b
std::pair<std::complex<double>, std::complex<double>> boundary_fixed_points(const CMat2d& m) {
    std::complex<double> disc = std::sqrt((m.d - m.a) * (m.d - m.a) + 4.0 * m.b * m.c);
    std::complex<double> r1 = (m.a - m.d + disc) / (2.0 * m.c);
    std::complex<double> r2 = (m.a - m.d - disc) / (2.0 * m.c);
    return {r1, r2};
}

Point h2_axis_foot(const CMat2d& m, const Point& x) {
    double a = m.a.real(), b = m.b.real(), c = m.c.real(), d = m.d.real();
    std::complex<double> z = x.h2p().z;
    if (std::abs(c) < 1e-12) {
        double xi = b / (d - a);
        return Point::h2({xi, std::abs(z - xi)});
    }
    auto [r1, r2] = boundary_fixed_points(m);
    double xi1 = r1.real(), xi2 = r2.real();
    if (xi1 > xi2) std::swap(xi1, xi2);
    std::complex<double> w = (z - xi1) / (xi2 - z);
    std::complex<double> ws(0.0, std::abs(w));
    return Point::h2((ws * xi2 + xi1) / (ws + 1.0));
}

Point h3_axis_foot(const CMat2d& m, const Point& x) {
    const PointH3& p = x.h3p();
    if (std::abs(m.c) < 1e-12) {
        std::complex<double> xi = m.b / (m.d - m.a);
        return Point::h3(xi, std::sqrt(std::norm(p.z - xi) + p.t * p.t));
    }
    auto [xi1, xi2] = boundary_fixed_points(m);
    CMat2d T{1.0, -xi1, 1.0, -xi2};
    T = renorm(T);
    PointH3 q = h3_action(T, p);
    PointH3 foot_std{{0.0, 0.0}, std::sqrt(std::norm(q.z) + q.t * q.t)};
    PointH3 foot = h3_action(T.inverse(), foot_std);
    return Point::h3(foot.z, foot.t);
}

// y for a parabolic: push toward the fixed point until the displacement is
// comfortably below 1
Point parabolic_point(const SpaceModel& model, const CMat2d& m, const Point& x) {
    std::complex<double> xi;
    CMat2d T;
    if (std::abs(m.c) < 1e-12) {
        T = CMat2d::identity();
    } else {
        xi = (m.a - m.d) / (2.0 * m.c);
        T = {0.0, -1.0, 1.0, -xi};
    }
    CMat2d conj = T * m * T.inverse();
    std::complex<double> beta = conj.b / conj.d;
    double y = std::max(2.0 * std::abs(beta), 1.0);
    if (model.kind == ModelKind::H2) {
        std::complex<double> w(0.0, y);
        std::complex<double> Ti_w = mobius(T.inverse(), w);
        (void)x;
        return Point::h2(Ti_w);
    }
    PointH3 std_pt{{0.0, 0.0}, y};
    PointH3 out = h3_action(T.inverse(), std_pt);
    return Point::h3(out.z, out.t);
}

}  // namespace

AxisPoint axis_point(const SpaceModel& m, const Isometry& g, const Point& x, int power) {
    ElementClass cls = translation_length(m, g);
    if (cls.type == IsoClass::Identity) throw std::invalid_argument("axis_point of the identity");

    Point y = x;
    if (g.kind == ModelKind::FreeTree) {
        // [x, gx] meets the axis in a segment of length ||g||; the entry point
        // is the projection of x
        Point gx = apply(g, x);
        Rat d = tree_dist_exact(x.treep(), gx.treep());
        Rat ell(static_cast<long>(g.tree_word().cyclic_reduction().size()));
        Rat s = (d - ell) / 2;
        y = (d == 0) ? x : tree_point_along(x, gx, s);
    } else if (g.kind == ModelKind::H2) {
        CMat2d mat = g.approx_matrix();
        switch (cls.type) {
            case IsoClass::Hyperbolic: y = h2_axis_foot(mat, x); break;
            case IsoClass::Elliptic: {
                auto [r1, r2] = boundary_fixed_points(mat);
                y = Point::h2(r1.imag() > 0 ? r1 : r2);
                break;
            }
            case IsoClass::Parabolic: y = parabolic_point(m, mat, x); break;
            default: break;
        }
    } else {
        CMat2d mat = g.approx_matrix();
        switch (cls.type) {
            case IsoClass::Hyperbolic:
            case IsoClass::Elliptic: y = h3_axis_foot(mat, x); break;
            case IsoClass::Parabolic: y = parabolic_point(m, mat, x); break;
            default: break;
        }
    }

    AxisPoint out;
    out.y = y;
    out.local_path.push_back({x, y});
    Point cur = y;
    Point gcur = apply(g, y);
    for (int j = 0; j < power; ++j) {
        out.local_path.push_back({cur, gcur});
        cur = gcur;
        gcur = apply(g, gcur);
    }
    // cur is now g^power y; close off with [g^power y, g^power x]
    Point gk_x = x;
    for (int j = 0; j < power; ++j) gk_x = apply(g, gk_x);
    out.local_path.push_back({cur, gk_x});
    return out;
}

Isometry eval_word(const std::vector<Isometry>& gens, const Word& w) {
    if (gens.empty()) throw std::invalid_argument("eval_word over empty tuple");
    Isometry acc = Isometry::identity(gens[0].kind, gens[0].mode);
    for (int c : w.letters()) {
        size_t idx = static_cast<size_t>(std::abs(c)) - 1;
        if (idx >= gens.size()) throw std::out_of_range("word letter exceeds tuple size");
        acc = compose(acc, c > 0 ? gens[idx] : invert(gens[idx]));
    }
    return acc;
}

std::string isometry_repr(const Isometry& g) {
    std::ostringstream os;
    os << static_cast<int>(g.kind) << '|' << static_cast<int>(g.mode) << '|';
    if (auto* a = std::get_if<Mat2d>(&g.concrete)) {
        os << fmt_double(a->a) << ',' << fmt_double(a->b) << ',' << fmt_double(a->c) << ',' << fmt_double(a->d);
    } else if (auto* b = std::get_if<Mat2q>(&g.concrete)) {
        os << rat_to_string(b->a) << ',' << rat_to_string(b->b) << ',' << rat_to_string(b->c) << ',' << rat_to_string(b->d);
    } else if (auto* c = std::get_if<CMat2d>(&g.concrete)) {
        for (auto e : {c->a, c->b, c->c, c->d}) os << fmt_double(e.real()) << '+' << fmt_double(e.imag()) << "i,";
    } else if (auto* d = std::get_if<CMat2q>(&g.concrete)) {
        for (const auto& e : {d->a, d->b, d->c, d->d}) os << rat_to_string(e.re) << '+' << rat_to_string(e.im) << "i,";
    } else {
        os << g.tree_word().str();
    }
    os << '|' << g.provenance.str();
    return os.str();
}

}  // namespace nht
