#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>

#include "nht/space.hpp"

namespace nht {

// The coarse-geometry base constants. N1 is always derived as 1000*L*K^2*N0.
struct BaseConstants {
    double K = 1.0, L = 1.0, N0 = 1.0;
    double N1 = 1000.0;

    static BaseConstants from(double K, double L, double N0) {
        if (K < 1 || L < 1 || N0 <= 0) throw std::invalid_argument("base constants must satisfy K,L >= 1, N0 > 0");
        return {K, L, N0, 1000.0 * L * K * K * N0};
    }
};

// Recursive schedule of the induction constants. Base case n = 1 seeds every
// d with a single configurable value c0. Entries are memoized as they are
// requested, so the tabulated rows double as the recursion's cache.
class ConstantSchedule {
public:
    ConstantSchedule() = default;
    ConstantSchedule(BaseConstants base, double c0 = 10.0) : base_(base), c0_(c0) {}

    const BaseConstants& base() const { return base_; }
    double c0() const { return c0_; }

    double d1(int n, double c);
    double d2(int n);
    double d3(int n);
    double d4(int n, double c);
    double T(int n, double c);
    double c1(int n, double T);
    double c2(int n);
    double c3(int n);

    const std::map<std::pair<int, double>, double>& d1_table() const { return d1_; }
    const std::map<std::pair<int, double>, double>& d4_table() const { return d4_; }
    const std::map<int, double>& d2_table() const { return d2_; }
    const std::map<int, double>& d3_table() const { return d3_; }

private:
    void check(int n, double c) const {
        if (n < 1) throw std::domain_error("schedule index n must be >= 1");
        if (c <= 0) throw std::domain_error("schedule parameter c must be > 0");
    }
    BaseConstants base_;
    double c0_ = 10.0;
    std::map<std::pair<int, double>, double> d1_, d4_;
    std::map<int, double> d2_, d3_;
};

// k(N, n) = 6N + 2 d2(n-1) + d3(n-1) + 4 d4(n-1, d2(n-1)+11) + 35, N >= N1.
double k_of(double N, int n, ConstantSchedule& sched);

// Materializes the row-n entries for parameter c (requires n >= 2).
ConstantSchedule& schedule_step(int n, double c, ConstantSchedule& sched);

// Empirical Morse-lemma estimates from sampled quasigeodesics.
struct MorseEstimate {
    double H = 0.0;  // max observed Hausdorff distance path <-> chord geodesic
    double L = 0.0;  // 2H: closeness of two quasigeodesics with common endpoints
    double T = 0.0;  // smallest grid window at which local implies global on the sample
    double K = 1.0;  // worst global (K,K) fit at that window
    int paths = 0;
};

MorseEstimate estimate_morse(const SpaceModel& model, double lambda, double eps, int samples,
                             uint64_t seed);

}  // namespace nht
