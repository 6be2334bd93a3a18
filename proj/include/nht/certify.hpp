#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nht/constants.hpp"
#include "nht/nielsen.hpp"
#include "nht/path.hpp"

namespace nht {

// Shared context for the verification layer: the model, basepoint, tuple
// size, schedule, and sampling/search parameters.
struct CertifyCtx {
    SpaceModel model;
    Point base;
    int n = 2;  // tuple size; schedule lookups use n-1
    ConstantSchedule sched;
    int N = 2;  // stable part parameter, >= base N1
    double margin = 0.1;
    int Lmax = 8;
    double shortTol = 1e-6;
    double step = 0.05;
    long wordBudget = 200000;
    SearchConfig search;

    double sample_step() const { return std::min(step, N / 200.0); }
};

// --- syllable decomposition (Convention 22) ---

struct Decomposition {
    Word u;
    int n = 0;  // distinguished index
    std::vector<Word> h;    // h_1 .. h_{l+1}
    std::vector<int> eps;   // eps_1 .. eps_l
    bool valid = true;

    int l() const { return static_cast<int>(eps.size()); }
    Word w(int i) const;  // h_i g_n^{eps_i}            (1-based)
    Word v(int i) const;  // g_n^{eps_i} h_{i+1}
    Word z(int i) const;  // h_i g_n^{eps_i} h_{i+1}
    Word y(int i) const;  // g_n^{eps_i} h_{i+1} g_n^{eps_{i+1}}
    Word reassemble() const;
};

Decomposition decompose(const std::vector<int>& letters, int n);  // validates free reduction
Decomposition decompose(const Word& u, int n);

// --- stable parts (Definition 20) ---

struct StablePartUndefined : std::runtime_error {
    explicit StablePartUndefined(const std::string& why) : std::runtime_error(why) {}
};

struct StablePart {
    Point s, t;        // oriented along the travel direction of the product
    int case_tag = 1;  // 1, 2, 3
    int N = 0;
    double placement_defect = 0;  // max endpoint distance to [x, wx]
};

// Stable part of w = h g_n^eps relative N. Throws StablePartUndefined when
// |g_n|_x is below the defining threshold (the short-element branch applies).
StablePart stable_part(const Isometry& h, int eps, const Isometry& gn, int N, CertifyCtx& ctx);

// Mirrored construction for v = g_n^eps h via inversion.
StablePart stable_part_v(const Isometry& h_next, int eps, const Isometry& gn, int N, CertifyCtx& ctx);

// --- the broken path sigma_N (Convention 26) ---

struct BrokenPath {
    PiecewisePath path;       // x, S_1, T_1, S'_1, T'_1, ..., T'_l, ux
    std::vector<int> cases;   // case tags, one per stable part in order
    Decomposition dec;
    int N = 0;
    std::vector<Isometry> els;  // the tuple the path was built from
};

BrokenPath build_sigma(const Word& u, const std::vector<Isometry>& els, CertifyCtx& ctx);

// --- certificates and probes ---

struct QiProbe {
    double alpha = 0.0, beta = 0.0;
    std::optional<Word> counterexample;
    double counterexample_disp = 0.0;
    bool partial = false;
    double thm3_stat = 1e300;  // min over words of |u|_x - max_j |g_{i_j}|_x
    std::vector<double> min_disp_by_len;
    int Lmax = 0;
};

QiProbe qi_probe(const GenTuple& M, int Lmax, const CertifyCtx& ctx);

// Largest word length whose full enumeration fits the node budget.
int adapted_lmax(int n_gens, int Lmax, long budget);

struct FreeCertificate {
    double margin = 0.0;            // > 0
    std::string margin_kind;        // "gromov" | "nielsen_reduced"
    double min_displacement = 0.0;
    double max_product = 0.0;
    std::vector<std::vector<double>> products;  // -1 marks excluded pairs
    double delta = 0.0;
    double alpha = 0.0, beta = 0.0;
    int Lmax_checked = 0;
    bool orbit_check_pass = true;
    double orbit_eps = 0.0;
};

// The freeness gate: the pairwise Gromov-product margin (or, for exact tree
// tuples, the exact cancellation conditions), a local quasigeodesic check on
// sampled orbit paths, and a clean qi_probe.
std::optional<FreeCertificate> pingpong_certificate(const GenTuple& M, CertifyCtx& ctx);

// --- position predicates (Lemmas 24/25/27, Thm 11(2), Prop 13(4)) ---

struct PredicateItem {
    std::string name;
    bool pass = true;
    bool applicable = true;
    double margin = 0.0;
    std::string note;
};

struct PredicateReport {
    std::vector<PredicateItem> items;
    bool all_pass = true;
    std::string advice;
};

PredicateReport position_predicates(const BrokenPath& sigma, CertifyCtx& ctx);

// --- thin quadrilateral decompositions (Lemmas 15/16, Cor 17) ---

struct QuadPair {
    Point r;
    double len_g = 0, len_h = 0, len_gh = 0;  // broken path lengths
    double slack = 0;                         // min over the three +2 bounds
};

QuadPair quad_pair(const SpaceModel& m, const Isometry& g, const Isometry& h, const Point& x);

struct QuadTriple {
    int chosen_case = 1;
    Point p, q;
    double slack_case1 = 0, slack_case2 = 0;
    double len_g = 0, len_h = 0, len_f = 0, len_ghf = 0;
    double pq_within_xg = 0, pq_within_hf = 0;  // case-2 containment radii
};

QuadTriple quad_triple(const SpaceModel& m, const Isometry& g, const Isometry& h, const Isometry& f,
                       const Point& x, double step = 0.05);

struct Cor17Report {
    double survived = 0.0;  // best length found within the 24-neighborhood
    double required = 0.0;  // D - 40
    bool pass = true;
    int which = -1;  // 0: [x,gx], 1: g[x,hx], 2: gh[x,fx]
};

Cor17Report quad_cor17(const SpaceModel& m, const Isometry& g, const Isometry& h, const Isometry& f,
                       const Point& x, double tau_start, double D, double step = 0.05);

}  // namespace nht
