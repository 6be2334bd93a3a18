#pragma once

#include <optional>
#include <string>

#include "nht/certify.hpp"
#include "nht/json_io.hpp"
#include "nht/nielsen.hpp"

namespace nht {

struct ReduceConfig {
    double epsilon = 1e-6;
    int conjDepth = 2;
    int powerDepth = 64;
    int projTopK = 6;
    int maxIters = 10000;
    int outerIters = 25;
    int Lmax = 8;
    double margin = 0.1;
    double shortBound = 1e-6;  // working-metric translation length gate
    uint64_t seed = 12345;
    int treeRadius = 3;
    double step = 0.05;
    int sigmaN = -1;  // -1: smallest admissible integer >= N1
    double baseK = 1.0, baseL = 1.0, baseN0 = 1.0, c0 = 10.0;
    long wordBudget = 200000;
    double shortenC = 10.0;  // epsilon_shorten requires delta <= eps / shortenC
    bool timings = false;
};

struct InputSpec {
    SpaceModel model;  // user scale; delta as declared
    NumMode mode = NumMode::Exact;
    std::vector<Isometry> gens;
    std::optional<Point> basepoint;
    ReduceConfig cfg;
};

InputSpec spec_from_json(const ordered_json& j);
ordered_json spec_to_json(const InputSpec& s);

enum class Outcome { Free, ShortElement, Inconclusive };

struct Dichotomy {
    Outcome outcome = Outcome::Inconclusive;
    GenTuple final_tuple;  // working model coordinates
    MoveChain chain;
    Point basepoint;
    std::optional<FreeCertificate> certificate;
    int witness_index = 0;  // 1-based; ShortElement puts the witness first
    IsoClass witness_class = IsoClass::Identity;
    double witness_translation_user = 0, witness_translation_working = 0;
    double witness_displacement_user = 0;
    std::optional<QiProbe> probe;
    std::optional<PredicateReport> predicates;
    std::string note;
    SpaceModel user_model, working_model;
    ReduceConfig cfg;
    int iterations = 0;
    double norm_user = 0;
    std::vector<double> displacements_user, translations_user;
    double k_reference = 0;  // k(N1, n) when defined
    double elapsed_ms = 0;
};

Dichotomy reduce(const InputSpec& spec);
Dichotomy epsilon_shorten(const InputSpec& spec, double eps);

ordered_json report_json(const Dichotomy& d);
int exit_code(const Dichotomy& d);  // 0 Free, 2 ShortElement, 3 Inconclusive

CertifyCtx make_ctx(const SpaceModel& working, const Point& base, int n, const ReduceConfig& cfg);

}  // namespace nht
