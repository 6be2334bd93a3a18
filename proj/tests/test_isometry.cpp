#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nht/isometry.hpp"
#include "oracles.hpp"

using namespace nht;

namespace {

Isometry h2q(long a, long b, long c, long d, Word prov = Word{}) {
    return Isometry::h2_exact({Rat(a), Rat(b), Rat(c), Rat(d)}, std::move(prov));
}

Isometry random_h2(Rng& rng, double min_abstrace = 2.1) {
    // conjugate of a diagonal hyperbolic by a random SL2R element
    for (;;) {
        double l = rng.uniform(0.3, 2.0);
        Mat2d D{std::exp(l), 0, 0, std::exp(-l)};
        double a = rng.uniform(-1, 1), b = rng.uniform(-1, 1), c = rng.uniform(-1, 1);
        double d = (1 + b * c) / (a == 0 ? 1e-3 : a);
        Mat2d P{a == 0 ? 1e-3 : a, b, c, d};
        double det = P.det();
        double s = std::sqrt(std::abs(det));
        if (det <= 0 || s < 1e-3) continue;
        P.a /= s; P.b /= s; P.c /= s; P.d /= s;
        Mat2d G = P * D * P.inverse();
        if (std::abs(G.trace()) >= min_abstrace) return Isometry::h2(G);
    }
}

}  // namespace

TEST_CASE("mobius apply") {
    SpaceModel m = SpaceModel::h2();
    Isometry shift = h2q(1, 1, 0, 1);  // z -> z + 1
    Point i = Point::h2({0, 1});
    Point out = apply(shift, i);
    CHECK(out.h2p().z.real() == doctest::Approx(1.0));
    CHECK(out.h2p().z.imag() == doctest::Approx(1.0));
    CHECK(apply(Isometry::identity(ModelKind::H2, NumMode::Exact), i).h2p().z == i.h2p().z);
    (void)m;
}

TEST_CASE("tree apply is left multiplication") {
    Point root = Point::tree_root();
    Isometry a = Isometry::tree(Word::parse("a"));
    CHECK(apply(a, root).treep().word == Word::parse("a"));
    // interior points ride along edges, exactly
    Point mid = Point::tree(Word::parse("b"), Rat(1, 2));
    Isometry binv = Isometry::tree(Word::parse("B"));
    Point img = apply(binv, mid);
    CHECK(img.treep().word == Word::parse("B"));
    CHECK(img.treep().offset == Rat(1, 2));
}

TEST_CASE("apply preserves distances") {
    SpaceModel models[] = {SpaceModel::h2(), SpaceModel::h3()};
    Rng rng(11);
    for (const auto& m : models) {
        for (int it = 0; it < 30; ++it) {
            Point p = random_point(m, rng), q = random_point(m, rng);
            Isometry g;
            if (m.kind == ModelKind::H2) {
                g = random_h2(rng);
            } else {
                g = Isometry::h3(CMat2d{{1, 0}, {0.5, 0.5}, {0, 0}, {1, 0}});
            }
            CHECK(dist(m, apply(g, p), apply(g, q)) == doctest::Approx(dist(m, p, q)).epsilon(1e-9));
        }
    }
}

TEST_CASE("compose and invert") {
    Isometry A = h2q(1, 1, 0, 1, Word::letter(1, 1));
    Isometry B = h2q(1, 0, 1, 1, Word::letter(2, 1));
    Isometry id = compose(A, invert(A));
    CHECK(is_identity(id));
    CHECK(id.provenance.empty());

    // [[1,1],[0,1]] * [[1,0],[1,1]]^-1 = [[0,1],[-1,1]] mod sign
    Isometry C = compose(A, invert(B));
    const Mat2q& mc = std::get<Mat2q>(C.concrete);
    CHECK(mc == Mat2q{Rat(0), Rat(1), Rat(-1), Rat(1)});
    CHECK(C.provenance == Word({1, -2}));

    Isometry ta = Isometry::tree(Word::parse("ab"));
    Isometry tb = Isometry::tree(Word::parse("B"));
    CHECK(compose(ta, tb).tree_word() == Word::parse("a"));
}

TEST_CASE("displacement examples") {
    SpaceModel m = SpaceModel::h2();
    Point i = Point::h2({0, 1});
    Isometry shift = h2q(1, 1, 0, 1);
    CHECK(displacement(m, shift, i) == doctest::Approx(std::acosh(1.5)).epsilon(1e-12));
    CHECK(displacement(m, Isometry::identity(ModelKind::H2, NumMode::Exact), i) == 0.0);
    SpaceModel t = SpaceModel::tree(2);
    CHECK(displacement(t, Isometry::tree(Word::parse("ab")), Point::tree_root()) == 2.0);
}

TEST_CASE("translation length classification") {
    SpaceModel m = SpaceModel::h2();
    ElementClass hyp = translation_length(m, Isometry::h2(Mat2d{2, 0, 0, 0.5}));
    CHECK(hyp.type == IsoClass::Hyperbolic);
    CHECK(hyp.translation_length == doctest::Approx(std::log(4.0)).epsilon(1e-12));

    ElementClass par = translation_length(m, h2q(1, 1, 0, 1));
    CHECK(par.type == IsoClass::Parabolic);
    CHECK(par.translation_length == 0.0);

    ElementClass ell = translation_length(m, h2q(0, 1, -1, 1));  // trace 1
    CHECK(ell.type == IsoClass::Elliptic);

    ElementClass idc = translation_length(m, h2q(-1, 0, 0, -1));
    CHECK(idc.type == IsoClass::Identity);

    SpaceModel t = SpaceModel::tree(2);
    Isometry w = Isometry::tree(Word::parse("abab"));
    ElementClass tc = translation_length(t, w);
    CHECK(tc.type == IsoClass::Hyperbolic);
    CHECK(tc.translation_length == oracle::cyclic_reduced_len(Word::parse("abab")));
    Isometry conj = Isometry::tree(Word::parse("babA"));  // b(aba^-1), cyclic red. ab
    CHECK(translation_length(t, conj).translation_length ==
          oracle::cyclic_reduced_len(Word::parse("babA")));
}

TEST_CASE("translation length scales") {
    SpaceModel m = SpaceModel::h2(7.0);
    ElementClass hyp = translation_length(m, Isometry::h2(Mat2d{2, 0, 0, 0.5}));
    CHECK(hyp.translation_length == doctest::Approx(std::log(4.0) / 7.0).epsilon(1e-12));
}

TEST_CASE("closed form equals numeric axis minimization") {
    SpaceModel m = SpaceModel::h2();
    Rng rng(99);
    for (int it = 0; it < 100; ++it) {
        Isometry g = random_h2(rng);
        double closed = translation_length(m, g).translation_length;
        double numeric = oracle::min_axis_displacement(m, g);
        CHECK(std::abs(closed - numeric) < 1e-6);
    }
}

TEST_CASE("conjugation invariance of translation length") {
    SpaceModel m = SpaceModel::h2();
    Rng rng(7);
    for (int it = 0; it < 1000; ++it) {
        Isometry g = random_h2(rng);
        Isometry h = random_h2(rng, 2.0);
        Isometry conj = compose(compose(h, g), invert(h));
        CHECK(translation_length(m, conj).translation_length ==
              doctest::Approx(translation_length(m, g).translation_length).epsilon(1e-9));
    }
    SpaceModel t = SpaceModel::tree(2);
    Isometry w = Isometry::tree(Word::parse("ab"));
    Isometry c = Isometry::tree(Word::parse("bba"));
    CHECK(translation_length(t, compose(compose(c, w), invert(c))).translation_length ==
          translation_length(t, w).translation_length);
}

TEST_CASE("power law for hyperbolic elements") {
    SpaceModel m = SpaceModel::h2();
    Rng rng(13);
    for (int it = 0; it < 40; ++it) {
        Isometry g = random_h2(rng);
        double base = translation_length(m, g).translation_length;
        Isometry p = g;
        for (int k = 2; k <= 4; ++k) {
            p = compose(p, g);
            CHECK(translation_length(m, p).translation_length ==
                  doctest::Approx(k * base).epsilon(1e-9));
        }
    }
}

TEST_CASE("displacement dominates translation length") {
    SpaceModel m = SpaceModel::h2();
    Rng rng(21);
    for (int it = 0; it < 200; ++it) {
        Isometry g = random_h2(rng);
        Point x = random_point(m, rng);
        CHECK(displacement(m, g, x) >= translation_length(m, g).translation_length - 1e-9);
    }
}

TEST_CASE("provenance soundness under composed operations") {
    std::vector<Isometry> gens{h2q(1, 2, 0, 1, Word::letter(1, 1)),
                               h2q(1, 0, 2, 1, Word::letter(2, 1))};
    Rng rng(3);
    Isometry acc = Isometry::identity(ModelKind::H2, NumMode::Exact);
    for (int it = 0; it < 60; ++it) {
        int pick = rng.uniform_int(0, 1);
        bool inv = rng.uniform() < 0.5;
        acc = compose(acc, inv ? invert(gens[pick]) : gens[pick]);
        Isometry replayed = eval_word(gens, acc.provenance);
        CHECK(same_element(acc, replayed));
        const Mat2q& lhs = std::get<Mat2q>(acc.concrete);
        const Mat2q& rhs = std::get<Mat2q>(replayed.concrete);
        CHECK(lhs == rhs);  // exact, after canonicalization
    }
}

TEST_CASE("axis point for a hyperbolic element projects onto the axis") {
    SpaceModel m = SpaceModel::h2();
    Isometry g = Isometry::h2(Mat2d{2, 0, 0, 0.5});  // z -> 4z, axis = imaginary axis
    Point x = Point::h2({1, 1});
    AxisPoint ap = axis_point(m, g, x);
    CHECK(ap.y.h2p().z.real() == doctest::Approx(0.0).epsilon(1e-9));
    double disp = displacement(m, g, ap.y);
    double len = translation_length(m, g).translation_length;
    CHECK(disp == doctest::Approx(len).epsilon(1e-9));
    CHECK(disp <= len + 1.0);
    // foot of the perpendicular from 1+i is i*sqrt(2)
    CHECK(ap.y.h2p().z.imag() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
    // the local path has 1 + k + 1 pieces
    CHECK(ap.local_path.size() == 6);
}

TEST_CASE("axis point for elliptic and parabolic") {
    SpaceModel m = SpaceModel::h2();
    Isometry rot = h2q(0, 1, -1, 0);  // order-2 rotation fixing i
    Point x = Point::h2({0, 1});
    AxisPoint ap = axis_point(m, rot, x);
    CHECK(displacement(m, rot, ap.y) == doctest::Approx(0.0).epsilon(1e-9));

    Isometry par = h2q(1, 1, 0, 1);
    AxisPoint pp = axis_point(m, par, x);
    CHECK(displacement(m, par, pp.y) <= 1.0);

    Isometry par2 = h2q(1, 0, 2, 1);  // parabolic fixing 0
    AxisPoint pp2 = axis_point(m, par2, Point::h2({0.3, 2.0}));
    CHECK(displacement(m, par2, pp2.y) <= 1.0);

    CHECK_THROWS_AS(axis_point(m, Isometry::identity(ModelKind::H2, NumMode::Exact), x),
                    std::invalid_argument);
}

TEST_CASE("axis point in trees") {
    SpaceModel t = SpaceModel::tree(2);
    Isometry g = Isometry::tree(Word::parse("ab"));
    AxisPoint ap = axis_point(t, g, Point::tree_root());
    CHECK(ap.y.treep().word.empty());  // root lies on the axis of a cyclically reduced word
    CHECK(displacement(t, g, ap.y) == 2.0);

    // off-axis point: conjugated word, basepoint at root
    Isometry conj = Isometry::tree(Word::parse("babA"));
    AxisPoint ap2 = axis_point(t, conj, Point::tree_root());
    CHECK(displacement(t, conj, ap2.y) ==
          doctest::Approx(translation_length(t, conj).translation_length));
}

TEST_CASE("h3 loxodromic translation and axis") {
    SpaceModel m = SpaceModel::h3();
    Isometry g = Isometry::h3(CMat2d{{2, 0}, {0, 0}, {0, 0}, {0.5, 0}});
    ElementClass c = translation_length(m, g);
    CHECK(c.type == IsoClass::Hyperbolic);
    CHECK(c.translation_length == doctest::Approx(std::log(4.0)).epsilon(1e-9));
    AxisPoint ap = axis_point(m, g, Point::h3({1, 1}, 1));
    CHECK(displacement(m, g, ap.y) == doctest::Approx(c.translation_length).epsilon(1e-6));
}

TEST_CASE("float identity threshold") {
    Isometry near_id = Isometry::h2(Mat2d{1 + 1e-10, 1e-10, 0, 1 - 1e-10});
    CHECK(is_identity(near_id));
    Isometry not_id = Isometry::h2(Mat2d{1 + 1e-4, 0, 0, 1.0 / (1 + 1e-4)});
    CHECK(!is_identity(not_id));
}
