#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "nht/matrix.hpp"
#include "nht/space.hpp"
#include "nht/word.hpp"

namespace nht {

enum class NumMode { Float, Exact };

enum class IsoClass { Identity, Elliptic, Parabolic, Hyperbolic };

struct ElementClass {
    IsoClass type = IsoClass::Identity;
    double translation_length = 0.0;  // scaled metric; > 0 iff Hyperbolic
};

// A concrete isometry of a model space together with its formal provenance
// word over the original generator symbols.
struct Isometry {
    ModelKind kind = ModelKind::H2;
    NumMode mode = NumMode::Float;
    std::variant<Mat2d, Mat2q, CMat2d, CMat2q, Word> concrete;
    Word provenance;

    static Isometry h2(Mat2d m, Word prov = Word{});
    static Isometry h2_exact(Mat2q m, Word prov = Word{});
    static Isometry h3(CMat2d m, Word prov = Word{});
    static Isometry h3_exact(CMat2q m, Word prov = Word{});
    static Isometry tree(Word concrete_word, Word prov = Word{});
    static Isometry identity(ModelKind kind, NumMode mode);

    const Word& tree_word() const { return std::get<Word>(concrete); }
    CMat2d approx_matrix() const;
    bool is_matrix() const { return kind != ModelKind::FreeTree; }
};

Point apply(const Isometry& g, const Point& p);
Isometry compose(const Isometry& g, const Isometry& h);
Isometry invert(const Isometry& g);
bool is_identity(const Isometry& g, double float_tol = 1e-8);
bool same_element(const Isometry& g, const Isometry& h, double float_tol = 1e-8);

double displacement(const SpaceModel& m, const Isometry& g, const Point& x);
ElementClass translation_length(const SpaceModel& m, const Isometry& g);

struct AxisPoint {
    Point y;                        // displacement(g, y) <= ||g|| + 1
    std::vector<Segment> local_path;  // [x,y], [g^j y, g^{j+1} y], [g^k y, g^k x]
};

// Lemma-12 style axis approximation. Throws on the identity.
AxisPoint axis_point(const SpaceModel& m, const Isometry& g, const Point& x, int power = 4);

// Evaluates a word over a tuple of isometries (letter +-i refers to gens[i-1]).
Isometry eval_word(const std::vector<Isometry>& gens, const Word& w);

std::string isometry_repr(const Isometry& g);  // canonical serialization for fingerprints

}  // namespace nht
