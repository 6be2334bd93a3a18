#include "nht/json_io.hpp"

#include <stdexcept>

namespace nht {

namespace {

// matrix entries: numbers, "p/q" strings, or [re, im] pairs
double entry_double(const ordered_json& e) {
    if (e.is_number()) return e.get<double>();
    if (e.is_string()) return rat_to_double(rat_parse(e.get<std::string>()));
    throw std::invalid_argument("bad real matrix entry");
}

Rat entry_rat(const ordered_json& e) {
    if (e.is_number_integer()) return Rat(e.get<long>());
    if (e.is_number()) return rat_from_double(e.get<double>());
    if (e.is_string()) return rat_parse(e.get<std::string>());
    throw std::invalid_argument("bad rational matrix entry");
}

std::complex<double> entry_complex(const ordered_json& e) {
    if (e.is_array()) return {entry_double(e[0]), entry_double(e[1])};
    return {entry_double(e), 0.0};
}

CRat entry_crat(const ordered_json& e) {
    if (e.is_array()) return {entry_rat(e[0]), entry_rat(e[1])};
    return {entry_rat(e), Rat(0)};
}

ordered_json rat_json(const Rat& r) { return rat_to_string(r); }

}  // namespace

ordered_json point_to_json(const Point& p) {
    ordered_json j;
    switch (p.kind) {
        case ModelKind::H2:
            j["re"] = p.h2p().z.real();
            j["im"] = p.h2p().z.imag();
            break;
        case ModelKind::H3:
            j["re"] = p.h3p().z.real();
            j["im"] = p.h3p().z.imag();
            j["t"] = p.h3p().t;
            break;
        case ModelKind::FreeTree:
            j["word"] = p.treep().word.str();
            j["offset"] = rat_json(p.treep().offset);
            break;
    }
    return j;
}

Point point_from_json(const ordered_json& j, ModelKind kind) {
    switch (kind) {
        case ModelKind::H2:
            return Point::h2({j.at("re").get<double>(), j.at("im").get<double>()});
        case ModelKind::H3:
            return Point::h3({j.at("re").get<double>(), j.at("im").get<double>()},
                             j.at("t").get<double>());
        case ModelKind::FreeTree: {
            Word w = Word::parse(j.at("word").get<std::string>());
            Rat off = j.contains("offset") ? rat_parse(j.at("offset").get<std::string>()) : Rat(0);
            return Point::tree(std::move(w), std::move(off));
        }
    }
    throw std::logic_error("bad kind");
}

ordered_json isometry_to_json(const Isometry& g) {
    ordered_json j;
    if (g.kind == ModelKind::FreeTree) {
        j["word"] = g.tree_word().str();
    } else {
        ordered_json rows = ordered_json::array();
        auto push_real = [&](auto a, auto b, auto c, auto d, auto fmt) {
            rows.push_back(ordered_json::array({fmt(a), fmt(b)}));
            rows.push_back(ordered_json::array({fmt(c), fmt(d)}));
        };
        if (auto* md = std::get_if<Mat2d>(&g.concrete)) {
            push_real(md->a, md->b, md->c, md->d, [](double x) { return ordered_json(x); });
            j["field"] = "real";
            j["mode"] = "float";
        } else if (auto* mq = std::get_if<Mat2q>(&g.concrete)) {
            push_real(mq->a, mq->b, mq->c, mq->d,
                      [](const Rat& x) { return ordered_json(rat_to_string(x)); });
            j["field"] = "real";
            j["mode"] = "rational";
        } else if (auto* cd = std::get_if<CMat2d>(&g.concrete)) {
            push_real(cd->a, cd->b, cd->c, cd->d, [](std::complex<double> x) {
                return ordered_json::array({x.real(), x.imag()});
            });
            j["field"] = "complex";
            j["mode"] = "float";
        } else {
            auto* cq = std::get_if<CMat2q>(&g.concrete);
            push_real(cq->a, cq->b, cq->c, cq->d, [](const CRat& x) {
                return ordered_json::array({rat_to_string(x.re), rat_to_string(x.im)});
            });
            j["field"] = "complex";
            j["mode"] = "rational";
        }
        j["entries"] = ordered_json::array({rows[0], rows[1]});
    }
    j["provenance"] = g.provenance.str();
    return j;
}

Isometry isometry_from_json(const ordered_json& j, ModelKind kind, NumMode mode) {
    Word prov = j.contains("provenance") ? Word::parse(j.at("provenance").get<std::string>()) : Word{};
    if (kind == ModelKind::FreeTree) {
        return Isometry::tree(Word::parse(j.at("word").get<std::string>()), std::move(prov));
    }
    const auto& e = j.at("entries");
    if (kind == ModelKind::H2) {
        if (mode == NumMode::Exact) {
            Mat2q m{entry_rat(e[0][0]), entry_rat(e[0][1]), entry_rat(e[1][0]), entry_rat(e[1][1])};
            if (m.det() != 1) throw std::invalid_argument("matrix determinant must be 1");
            return Isometry::h2_exact(std::move(m), std::move(prov));
        }
        Mat2d m{entry_double(e[0][0]), entry_double(e[0][1]), entry_double(e[1][0]),
                entry_double(e[1][1])};
        if (std::abs(m.det() - 1.0) > 1e-9) throw std::invalid_argument("matrix determinant must be 1");
        return Isometry::h2(m, std::move(prov));
    }
    if (mode == NumMode::Exact) {
        CMat2q m{entry_crat(e[0][0]), entry_crat(e[0][1]), entry_crat(e[1][0]), entry_crat(e[1][1])};
        if (!(m.det() == CRat(1))) throw std::invalid_argument("matrix determinant must be 1");
        return Isometry::h3_exact(std::move(m), std::move(prov));
    }
    CMat2d m{entry_complex(e[0][0]), entry_complex(e[0][1]), entry_complex(e[1][0]),
             entry_complex(e[1][1])};
    if (std::abs(m.det() - std::complex<double>(1, 0)) > 1e-9)
        throw std::invalid_argument("matrix determinant must be 1");
    return Isometry::h3(m, std::move(prov));
}

ordered_json move_to_json(const Move& m) {
    ordered_json j;
    switch (m.kind) {
        case Move::N1: j["kind"] = "N1"; j["i"] = m.i; break;
        case Move::N2: j["kind"] = "N2"; j["i"] = m.i; j["j"] = m.j; break;
        case Move::N3: j["kind"] = "N3"; j["i"] = m.i; j["j"] = m.j; break;
        case Move::N4:
            j["kind"] = "N4";
            j["i"] = m.i;
            j["eps"] = m.eps;
            j["left"] = m.left.str();
            j["right"] = m.right.str();
            break;
    }
    return j;
}

Move move_from_json(const ordered_json& j) {
    std::string k = j.at("kind").get<std::string>();
    if (k == "N1") return Move::n1(j.at("i").get<int>());
    if (k == "N2") return Move::n2(j.at("i").get<int>(), j.at("j").get<int>());
    if (k == "N3") return Move::n3(j.at("i").get<int>(), j.at("j").get<int>());
    if (k == "N4")
        return Move::n4(j.at("i").get<int>(), j.at("eps").get<int>(),
                        Word::parse(j.at("left").get<std::string>()),
                        Word::parse(j.at("right").get<std::string>()));
    throw std::invalid_argument("bad move kind: " + k);
}

ordered_json chain_to_json(const MoveChain& c) {
    ordered_json j;
    j["initial_fp"] = c.initial_fp;
    j["final_fp"] = c.final_fp;
    ordered_json arr = ordered_json::array();
    for (const auto& m : c.moves) arr.push_back(move_to_json(m));
    j["moves"] = arr;
    return j;
}

MoveChain chain_from_json(const ordered_json& j) {
    MoveChain c;
    c.initial_fp = j.value("initial_fp", "");
    c.final_fp = j.value("final_fp", "");
    for (const auto& m : j.at("moves")) c.moves.push_back(move_from_json(m));
    return c;
}

ordered_json model_to_json(const SpaceModel& m) {
    ordered_json j;
    switch (m.kind) {
        case ModelKind::H2: j["kind"] = "H2"; break;
        case ModelKind::H3: j["kind"] = "H3"; break;
        case ModelKind::FreeTree:
            j["kind"] = "FreeTree";
            j["rank"] = m.rank;
            break;
    }
    j["scale"] = m.scale;
    j["delta"] = m.delta;
    return j;
}

SpaceModel model_from_json(const ordered_json& j) {
    std::string k = j.at("kind").get<std::string>();
    SpaceModel m;
    if (k == "H2") m.kind = ModelKind::H2;
    else if (k == "H3") m.kind = ModelKind::H3;
    else if (k == "FreeTree") m.kind = ModelKind::FreeTree;
    else throw std::invalid_argument("bad model kind: " + k);
    if (m.kind == ModelKind::FreeTree) {
        m.rank = j.at("rank").get<int>();
        if (m.rank < 1 || m.rank > 26) throw std::invalid_argument("tree rank must be in 1..26");
        m.delta = 0.0;
    } else {
        m.delta = j.value("delta", 1.0);
        if (m.delta <= 0) throw std::invalid_argument("declared delta must be > 0 for float models");
    }
    m.scale = j.value("scale", 1.0);
    if (m.scale <= 0) throw std::invalid_argument("scale must be > 0");
    return m;
}

ordered_json certificate_to_json(const FreeCertificate& c) {
    ordered_json j;
    j["margin"] = c.margin;
    j["margin_kind"] = c.margin_kind;
    j["min_displacement"] = c.min_displacement;
    j["max_product"] = c.max_product;
    j["delta"] = c.delta;
    j["alpha"] = c.alpha;
    j["beta"] = c.beta;
    j["lmax_checked"] = c.Lmax_checked;
    j["orbit_check_pass"] = c.orbit_check_pass;
    j["orbit_eps"] = c.orbit_eps;
    ordered_json table = ordered_json::array();
    for (const auto& row : c.products) table.push_back(row);
    j["products"] = table;
    return j;
}

ordered_json probe_to_json(const QiProbe& p) {
    ordered_json j;
    j["alpha"] = p.alpha;
    j["beta"] = p.beta;
    j["lmax"] = p.Lmax;
    j["partial"] = p.partial;
    j["thm11_3_stat"] = p.thm3_stat;
    if (p.counterexample) {
        j["counterexample"] = p.counterexample->str();
        j["counterexample_displacement"] = p.counterexample_disp;
    } else {
        j["counterexample"] = nullptr;
    }
    std::vector<double> mins;
    for (size_t k = 1; k < p.min_disp_by_len.size(); ++k)
        mins.push_back(p.min_disp_by_len[k] >= 1e300 ? -1.0 : p.min_disp_by_len[k]);
    j["min_displacement_by_length"] = mins;
    return j;
}

ordered_json predicates_to_json(const PredicateReport& r) {
    ordered_json j;
    j["all_pass"] = r.all_pass;
    j["advice"] = r.advice;
    ordered_json items = ordered_json::array();
    for (const auto& it : r.items) {
        ordered_json e;
        e["name"] = it.name;
        e["pass"] = it.pass;
        e["applicable"] = it.applicable;
        e["margin"] = it.margin;
        if (!it.note.empty()) e["note"] = it.note;
        items.push_back(e);
    }
    j["items"] = items;
    return j;
}

}  // namespace nht
