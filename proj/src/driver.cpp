#include "nht/driver.hpp"

#include <chrono>
#include <cmath>

namespace nht {

namespace {

Point default_basepoint(const SpaceModel& m) {
    switch (m.kind) {
        case ModelKind::H2: return Point::h2({0.0, 1.0});
        case ModelKind::H3: return Point::h3({0.0, 0.0}, 1.0);
        case ModelKind::FreeTree: return Point::tree_root();
    }
    throw std::logic_error("bad kind");
}

SearchConfig search_config(const ReduceConfig& cfg) {
    SearchConfig s;
    s.epsilon = cfg.epsilon;
    s.conjDepth = cfg.conjDepth;
    s.powerDepth = cfg.powerDepth;
    s.projTopK = cfg.projTopK;
    s.maxIters = cfg.maxIters;
    s.treeRadius = cfg.treeRadius;
    return s;
}

ReduceConfig config_from_json(const ordered_json& j) {
    ReduceConfig c;
    c.epsilon = j.value("epsilon", c.epsilon);
    c.conjDepth = j.value("conjDepth", c.conjDepth);
    c.powerDepth = j.value("powerDepth", c.powerDepth);
    c.projTopK = j.value("projTopK", c.projTopK);
    c.maxIters = j.value("maxIters", c.maxIters);
    c.outerIters = j.value("outerIters", c.outerIters);
    c.Lmax = j.value("Lmax", c.Lmax);
    c.margin = j.value("margin", c.margin);
    c.shortBound = j.value("shortBound", c.shortBound);
    c.seed = j.value("seed", c.seed);
    c.treeRadius = j.value("treeRadius", c.treeRadius);
    c.step = j.value("step", c.step);
    c.sigmaN = j.value("sigmaN", c.sigmaN);
    c.wordBudget = j.value("wordBudget", c.wordBudget);
    c.shortenC = j.value("shortenC", c.shortenC);
    if (j.contains("scheduleBase")) {
        const auto& b = j.at("scheduleBase");
        c.baseK = b.value("K", c.baseK);
        c.baseL = b.value("L", c.baseL);
        c.baseN0 = b.value("N0", c.baseN0);
        c.c0 = b.value("c0", c.c0);
    }
    return c;
}

ordered_json config_to_json(const ReduceConfig& c) {
    ordered_json j;
    j["epsilon"] = c.epsilon;
    j["conjDepth"] = c.conjDepth;
    j["powerDepth"] = c.powerDepth;
    j["projTopK"] = c.projTopK;
    j["maxIters"] = c.maxIters;
    j["outerIters"] = c.outerIters;
    j["Lmax"] = c.Lmax;
    j["margin"] = c.margin;
    j["shortBound"] = c.shortBound;
    j["seed"] = c.seed;
    j["treeRadius"] = c.treeRadius;
    j["step"] = c.step;
    j["sigmaN"] = c.sigmaN;
    j["wordBudget"] = c.wordBudget;
    j["shortenC"] = c.shortenC;
    j["scheduleBase"] = {{"K", c.baseK}, {"L", c.baseL}, {"N0", c.baseN0}, {"c0", c.c0}};
    return j;
}

}  // namespace

InputSpec spec_from_json(const ordered_json& j) {
    InputSpec s;
    s.model = model_from_json(j.at("model"));
    if (j.contains("config")) s.cfg = config_from_json(j.at("config"));

    // every JSON number is a dyadic rational, so inputs default to exact
    // rationals; float mode requires the explicit flag
    std::string mode = j.value("mode", "rational");
    s.mode = (mode == "float") ? NumMode::Float : NumMode::Exact;
    if (s.model.kind == ModelKind::FreeTree) s.mode = NumMode::Exact;

    int idx = 1;
    for (const auto& g : j.at("generators")) {
        Isometry iso = isometry_from_json(g, s.model.kind, s.mode);
        if (iso.provenance.empty()) iso.provenance = Word::letter(idx, 1);
        s.gens.push_back(std::move(iso));
        ++idx;
    }
    if (s.gens.empty()) throw std::invalid_argument("spec needs at least one generator");
    if (s.model.kind == ModelKind::FreeTree) {
        for (const auto& g : s.gens)
            if (g.tree_word().max_index() > s.model.rank)
                throw std::invalid_argument("tree word exceeds model rank");
    }
    if (j.contains("basepoint") && !j.at("basepoint").is_null())
        s.basepoint = point_from_json(j.at("basepoint"), s.model.kind);
    return s;
}

ordered_json spec_to_json(const InputSpec& s) {
    ordered_json j;
    j["model"] = model_to_json(s.model);
    j["mode"] = s.mode == NumMode::Float ? "float" : "rational";
    ordered_json gens = ordered_json::array();
    for (const auto& g : s.gens) gens.push_back(isometry_to_json(g));
    j["generators"] = gens;
    if (s.basepoint) j["basepoint"] = point_to_json(*s.basepoint);
    j["config"] = config_to_json(s.cfg);
    return j;
}

CertifyCtx make_ctx(const SpaceModel& working, const Point& base, int n, const ReduceConfig& cfg) {
    CertifyCtx ctx;
    ctx.model = working;
    ctx.base = base;
    ctx.n = n;
    ctx.sched = ConstantSchedule(BaseConstants::from(cfg.baseK, cfg.baseL, cfg.baseN0), cfg.c0);
    ctx.N = cfg.sigmaN > 0 ? cfg.sigmaN
                           : std::max(2, static_cast<int>(std::ceil(ctx.sched.base().N1)));
    ctx.margin = cfg.margin;
    ctx.Lmax = cfg.Lmax;
    ctx.shortTol = cfg.shortBound > 0 ? cfg.shortBound : 1e-6;
    ctx.step = cfg.step;
    ctx.wordBudget = cfg.wordBudget;
    ctx.search = search_config(cfg);
    return ctx;
}

namespace {

// index (0-based) of the entry with smallest working translation length,
// provided it is within `bound`; -1 otherwise
int find_short_entry(const GenTuple& M, double bound) {
    int best = -1;
    double best_len = 0;
    for (size_t i = 0; i < M.size(); ++i) {
        ElementClass c = translation_length(M.model, M.els[i]);
        if (c.translation_length <= bound + 1e-15) {
            if (best < 0 || c.translation_length < best_len) {
                best = static_cast<int>(i);
                best_len = c.translation_length;
            }
        }
    }
    return best;
}

void fill_lengths(Dichotomy& d) {
    const GenTuple& M = d.final_tuple;
    SpaceModel user = d.user_model;
    GenTuple user_view = GenTuple::make(user, M.els, M.base);
    d.norm_user = user_view.norm;
    d.displacements_user.clear();
    d.translations_user.clear();
    for (const auto& g : M.els) {
        d.displacements_user.push_back(displacement(user, g, M.base));
        d.translations_user.push_back(translation_length(user, g).translation_length);
    }
}

}  // namespace

Dichotomy reduce(const InputSpec& spec) {
    auto t0 = std::chrono::steady_clock::now();
    if (spec.gens.empty()) throw std::invalid_argument("empty generator tuple");
    SpaceModel user = spec.model;
    SpaceModel working = user;
    if (user.kind != ModelKind::FreeTree) {
        if (user.delta <= 0) throw std::invalid_argument("declared delta must be > 0");
        working.scale = user.scale * user.delta;  // "the scaled version of X"
        working.delta = 1.0;
    }

    Dichotomy d;
    d.user_model = user;
    d.working_model = working;
    d.cfg = spec.cfg;

    Point base = spec.basepoint ? *spec.basepoint : default_basepoint(user);
    GenTuple M = GenTuple::make(working, spec.gens, base);
    d.chain.initial_fp = M.fingerprint();
    SearchConfig scfg = search_config(spec.cfg);
    CertifyCtx ctx = make_ctx(working, base, static_cast<int>(M.size()), spec.cfg);
    if (static_cast<int>(M.size()) >= 2 && ctx.N >= ctx.sched.base().N1)
        d.k_reference = k_of(std::max<double>(ctx.N, ctx.sched.base().N1),
                             static_cast<int>(M.size()), ctx.sched);

    double shortBound = spec.cfg.shortBound;
    bool done = false;
    for (int iter = 0; iter < spec.cfg.outerIters && !done; ++iter) {
        d.iterations = iter + 1;
        Point better = optimize_basepoint(M, scfg);
        bool base_moved = dist(working, better, M.base) > spec.cfg.epsilon;
        M = M.with_base(better);
        ctx.base = better;

        auto [reduced, seg] = greedy_minimize(M, scfg);
        M = reduced;
        for (auto& mv : seg.moves) d.chain.moves.push_back(mv);

        int short_idx = find_short_entry(M, shortBound);
        if (short_idx >= 0) {
            if (short_idx != 0) {
                Move front = Move::n3(1, short_idx + 1);
                M = apply_move(M, front);
                d.chain.moves.push_back(front);
            }
            d.outcome = Outcome::ShortElement;
            d.witness_index = 1;
            ElementClass c = translation_length(working, M.els[0]);
            d.witness_class = c.type;
            d.witness_translation_working = c.translation_length;
            d.witness_translation_user = translation_length(user, M.els[0]).translation_length;
            d.witness_displacement_user = displacement(user, M.els[0], M.base);
            done = true;
            break;
        }

        bool has_trivial = false;
        for (const auto& g : M.els) has_trivial = has_trivial || is_identity(g);
        if (!has_trivial) {
            auto cert = pingpong_certificate(M, ctx);
            if (cert) {
                d.outcome = Outcome::Free;
                d.certificate = cert;
                done = true;
                break;
            }
        }
        if (!base_moved && seg.moves.empty()) break;  // converged in neither state
    }

    d.final_tuple = M;
    d.basepoint = M.base;
    d.chain.final_fp = M.fingerprint();
    fill_lengths(d);

    if (!done) {
        d.outcome = Outcome::Inconclusive;
        int lmax = adapted_lmax(static_cast<int>(M.size()), spec.cfg.Lmax, spec.cfg.wordBudget);
        d.probe = qi_probe(M, lmax, ctx);
        if (static_cast<int>(M.size()) >= 2) {
            try {
                BrokenPath sigma = build_sigma(Word::letter(static_cast<int>(M.size()), 1), M.els, ctx);
                d.predicates = position_predicates(sigma, ctx);
            } catch (const StablePartUndefined& e) {
                d.note = std::string("sigma diagnostics unavailable: ") + e.what();
            } catch (const std::exception& e) {
                d.note = std::string("sigma diagnostics failed: ") + e.what();
            }
        }
        if (d.probe && d.probe->counterexample)
            d.note += (d.note.empty() ? "" : "; ") +
                      std::string("qi probe found a short word: ") + d.probe->counterexample->str();
    } else if (d.outcome == Outcome::Free) {
        // exhaustiveness guard: a Free outcome must never coexist with a
        // counterexample word
        int lmax = adapted_lmax(static_cast<int>(M.size()), spec.cfg.Lmax, spec.cfg.wordBudget);
        d.probe = qi_probe(M, lmax, ctx);
        if (d.probe->counterexample) {
            d.outcome = Outcome::Inconclusive;
            d.certificate.reset();
            d.note = "certificate retracted: qi probe found " + d.probe->counterexample->str();
        }
    }

    d.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                       .count();
    return d;
}

Dichotomy epsilon_shorten(const InputSpec& spec, double eps) {
    if (eps <= 0) throw std::invalid_argument("eps must be > 0");
    InputSpec s = spec;
    if (spec.model.kind == ModelKind::FreeTree) {
        s.cfg.shortBound = eps;  // tree metric is the working metric
    } else {
        if (eps < 1e-9) throw std::invalid_argument("eps below numeric tolerance: unsupported");
        if (spec.model.delta > eps / spec.cfg.shortenC)
            throw std::invalid_argument(
                "unsupported: declared delta exceeds eps / C; rescale the model first");
        s.cfg.shortBound = eps / spec.model.delta;  // working units
    }
    return reduce(s);
}

ordered_json report_json(const Dichotomy& d) {
    ordered_json j;
    switch (d.outcome) {
        case Outcome::Free: j["outcome"] = "free"; break;
        case Outcome::ShortElement: j["outcome"] = "short_element"; break;
        case Outcome::Inconclusive: j["outcome"] = "inconclusive"; break;
    }
    ordered_json tuple = ordered_json::array();
    for (const auto& g : d.final_tuple.els) tuple.push_back(isometry_to_json(g));
    j["tuple"] = tuple;
    j["chain"] = chain_to_json(d.chain);
    j["basepoint"] = point_to_json(d.basepoint);
    j["model"] = model_to_json(d.user_model);
    j["working_model"] = model_to_json(d.working_model);

    ordered_json lengths;
    lengths["norm"] = d.norm_user;
    lengths["displacements"] = d.displacements_user;
    lengths["translation_lengths"] = d.translations_user;
    if (d.outcome == Outcome::ShortElement) {
        lengths["witness_translation_length"] = d.witness_translation_user;
        lengths["witness_displacement"] = d.witness_displacement_user;
    }
    j["lengths"] = lengths;

    ordered_json constants;
    constants["scheduleBase"] = {{"K", d.cfg.baseK}, {"L", d.cfg.baseL}, {"N0", d.cfg.baseN0},
                                 {"c0", d.cfg.c0}};
    constants["N1"] = 1000.0 * d.cfg.baseL * d.cfg.baseK * d.cfg.baseK * d.cfg.baseN0;
    constants["k_reference"] = d.k_reference;
    constants["margin_config"] = d.cfg.margin;
    constants["short_bound_working"] = d.cfg.shortBound;
    j["constants"] = constants;

    if (d.certificate) j["certificate"] = certificate_to_json(*d.certificate);
    else j["certificate"] = nullptr;
    if (d.outcome == Outcome::ShortElement) {
        ordered_json w;
        w["index"] = d.witness_index;
        switch (d.witness_class) {
            case IsoClass::Identity: w["class"] = "identity"; break;
            case IsoClass::Elliptic: w["class"] = "elliptic"; break;
            case IsoClass::Parabolic: w["class"] = "parabolic"; break;
            case IsoClass::Hyperbolic: w["class"] = "hyperbolic"; break;
        }
        w["translation_length_user"] = d.witness_translation_user;
        w["translation_length_working"] = d.witness_translation_working;
        j["witness"] = w;
    }

    ordered_json diag;
    diag["iterations"] = d.iterations;
    diag["note"] = d.note;
    if (d.probe) diag["qi_probe"] = probe_to_json(*d.probe);
    if (d.predicates) diag["position_predicates"] = predicates_to_json(*d.predicates);
    j["diagnostics"] = diag;
    if (d.cfg.timings) j["timings"] = {{"elapsed_ms", d.elapsed_ms}};
    return j;
}

int exit_code(const Dichotomy& d) {
    switch (d.outcome) {
        case Outcome::Free: return 0;
        case Outcome::ShortElement: return 2;
        case Outcome::Inconclusive: return 3;
    }
    return 1;
}

}  // namespace nht
