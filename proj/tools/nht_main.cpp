#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "nht/driver.hpp"
#include "nht/render.hpp"

namespace {

nht::ordered_json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return nht::ordered_json::parse(in);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

void emit(const nht::ordered_json& j, const std::string& out_path) {
    std::string text = j.dump(2) + "\n";
    if (out_path.empty()) std::cout << text;
    else write_text(out_path, text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nielsen reduction toolkit for isometric actions on hyperbolic model spaces"};
    app.require_subcommand(1);

    std::string spec_path, out_path, svg_path, report_path, base_path;
    double eps = 0;
    int n_arg = 2;
    double c_arg = 1.0, N_arg = -1;
    int depth = 3;

    auto* cmd_reduce = app.add_subcommand("reduce", "run the dichotomy on a spec");
    cmd_reduce->add_option("spec", spec_path, "input spec JSON")->required();
    cmd_reduce->add_option("--out", out_path, "report JSON path (default stdout)");
    cmd_reduce->add_option("--svg", svg_path, "also render an SVG figure");
    bool timings = false;
    cmd_reduce->add_flag("--timings", timings, "include timings in the report");

    auto* cmd_certify = app.add_subcommand("certify", "certificate attempt without minimization");
    cmd_certify->add_option("spec", spec_path, "input spec JSON")->required();
    cmd_certify->add_option("--out", out_path, "report JSON path (default stdout)");

    auto* cmd_shorten = app.add_subcommand("shorten", "epsilon-shortening (Corollary-style run)");
    cmd_shorten->add_option("spec", spec_path, "input spec JSON")->required();
    cmd_shorten->add_option("--eps", eps, "target translation length")->required();
    cmd_shorten->add_option("--out", out_path, "report JSON path (default stdout)");

    auto* cmd_constants = app.add_subcommand("constants", "emit the constant schedule");
    cmd_constants->add_option("--n", n_arg, "tuple size")->required();
    cmd_constants->add_option("--c", c_arg, "parameter c (default 1)");
    cmd_constants->add_option("--N", N_arg, "N for k(N, n); default N1");
    cmd_constants->add_option("--base", base_path, "base constants JSON {K, L, N0, c0}");
    cmd_constants->add_option("--out", out_path, "output path (default stdout)");

    auto* cmd_render = app.add_subcommand("render", "render a report JSON to SVG");
    cmd_render->add_option("report", report_path, "report JSON path")->required();
    cmd_render->add_option("--out", out_path, "SVG output path")->required();
    cmd_render->add_option("--depth", depth, "orbit ball depth");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_reduce) {
            nht::InputSpec spec = nht::spec_from_json(read_json(spec_path));
            spec.cfg.timings = timings;
            nht::Dichotomy d = nht::reduce(spec);
            emit(nht::report_json(d), out_path);
            if (!svg_path.empty()) write_text(svg_path, nht::render_svg(d, depth));
            return nht::exit_code(d);
        }
        if (*cmd_certify) {
            nht::InputSpec spec = nht::spec_from_json(read_json(spec_path));
            nht::SpaceModel working = spec.model;
            if (working.kind != nht::ModelKind::FreeTree) {
                working.scale = spec.model.scale * spec.model.delta;
                working.delta = 1.0;
            }
            nht::Point base = spec.basepoint ? *spec.basepoint
                                             : (working.kind == nht::ModelKind::FreeTree
                                                    ? nht::Point::tree_root()
                                                    : (working.kind == nht::ModelKind::H2
                                                           ? nht::Point::h2({0, 1})
                                                           : nht::Point::h3({0, 0}, 1)));
            nht::GenTuple M = nht::GenTuple::make(working, spec.gens, base);
            nht::CertifyCtx ctx =
                nht::make_ctx(working, base, static_cast<int>(M.size()), spec.cfg);
            auto cert = nht::pingpong_certificate(M, ctx);
            nht::ordered_json j;
            j["certified"] = cert.has_value();
            j["certificate"] = cert ? nht::certificate_to_json(*cert) : nht::ordered_json(nullptr);
            emit(j, out_path);
            return cert ? 0 : 3;
        }
        if (*cmd_shorten) {
            nht::InputSpec spec = nht::spec_from_json(read_json(spec_path));
            nht::Dichotomy d = nht::epsilon_shorten(spec, eps);
            emit(nht::report_json(d), out_path);
            return nht::exit_code(d);
        }
        if (*cmd_constants) {
            nht::ReduceConfig cfg;
            if (!base_path.empty()) {
                auto b = read_json(base_path);
                cfg.baseK = b.value("K", cfg.baseK);
                cfg.baseL = b.value("L", cfg.baseL);
                cfg.baseN0 = b.value("N0", cfg.baseN0);
                cfg.c0 = b.value("c0", cfg.c0);
            }
            nht::ConstantSchedule sched(nht::BaseConstants::from(cfg.baseK, cfg.baseL, cfg.baseN0),
                                        cfg.c0);
            nht::ordered_json j;
            j["base"] = {{"K", sched.base().K}, {"L", sched.base().L}, {"N0", sched.base().N0},
                         {"N1", sched.base().N1}, {"c0", sched.c0()}};
            nht::ordered_json rows = nht::ordered_json::array();
            for (int nn = 2; nn <= n_arg; ++nn) {
                nht::schedule_step(nn, c_arg, sched);
                nht::ordered_json row;
                row["n"] = nn;
                row["c"] = c_arg;
                row["T"] = sched.T(nn, c_arg);
                row["d1"] = sched.d1(nn, c_arg);
                row["d2"] = sched.d2(nn);
                row["d3"] = sched.d3(nn);
                row["d4"] = sched.d4(nn, c_arg);
                double N = N_arg > 0 ? N_arg : sched.base().N1;
                row["N"] = N;
                row["k"] = nht::k_of(N, nn, sched);
                rows.push_back(row);
            }
            j["rows"] = rows;
            emit(j, out_path);
            return 0;
        }
        if (*cmd_render) {
            auto rj = read_json(report_path);
            // rebuild enough state to draw: model, tuple, basepoint, outcome
            nht::SpaceModel user = nht::model_from_json(rj.at("model"));
            nht::SpaceModel working = nht::model_from_json(rj.at("working_model"));
            nht::NumMode mode = nht::NumMode::Exact;
            if (!rj.at("tuple").empty() && rj.at("tuple")[0].contains("mode"))
                mode = rj.at("tuple")[0].at("mode") == "float" ? nht::NumMode::Float
                                                               : nht::NumMode::Exact;
            std::vector<nht::Isometry> els;
            for (const auto& g : rj.at("tuple"))
                els.push_back(nht::isometry_from_json(g, user.kind, mode));
            nht::Point base = nht::point_from_json(rj.at("basepoint"), user.kind);
            nht::Dichotomy d;
            d.user_model = user;
            d.working_model = working;
            d.final_tuple = nht::GenTuple::make(working, els, base);
            d.basepoint = base;
            std::string oc = rj.at("outcome").get<std::string>();
            d.outcome = oc == "free" ? nht::Outcome::Free
                        : oc == "short_element" ? nht::Outcome::ShortElement
                                                : nht::Outcome::Inconclusive;
            write_text(out_path, nht::render_svg(d, depth));
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
