#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nht/constants.hpp"

using namespace nht;

TEST_CASE("base constants derive N1") {
    BaseConstants b = BaseConstants::from(2, 3, 5);
    CHECK(b.N1 == 1000.0 * 3 * 2 * 2 * 5);
    BaseConstants u = BaseConstants::from(1, 1, 1);
    CHECK(u.N1 == 1000.0);
    CHECK_THROWS_AS(BaseConstants::from(0.5, 1, 1), std::invalid_argument);
}

TEST_CASE("k reproduces 6N + 35 at zeroed sub-constants") {
    ConstantSchedule sched(BaseConstants::from(1, 1, 0.5), 0.0);  // N1 = 500, base d = 0
    CHECK(k_of(1000, 2, sched) == 6 * 1000 + 35);
    CHECK(k_of(500, 2, sched) == 6 * 500 + 35);
    CHECK_THROWS_AS(k_of(499, 2, sched), std::domain_error);
    CHECK_THROWS_AS(k_of(1000, 1, sched), std::domain_error);
}

TEST_CASE("k is monotone in N over a grid") {
    ConstantSchedule sched(BaseConstants::from(1, 2, 0.001), 5.0);
    for (int n = 2; n <= 4; ++n) {
        double prev = -1;
        for (int i = 0; i < 100; ++i) {
            double N = sched.base().N1 + i * 13.7;
            double k = k_of(N, n, sched);
            CHECK(k >= prev);
            prev = k;
        }
    }
}

TEST_CASE("independent re-evaluation of k matches") {
    ConstantSchedule sched(BaseConstants::from(1, 1, 0.002), 1.0);
    double N = sched.base().N1;
    double direct = k_of(N, 3, sched);
    double manual = 6 * N + 2 * sched.d2(2) + sched.d3(2) + 4 * sched.d4(2, sched.d2(2) + 11) + 35;
    CHECK(direct == manual);
}

TEST_CASE("schedule step substitutions") {
    // c = 1, L = 10: the third argument of T's max is 2c + 2(2L+100) + 1 = 243
    ConstantSchedule sched(BaseConstants::from(1, 10, 0.01), 1.0);  // N1 = 100
    CHECK(sched.T(2, 1.0) == 243.0);

    // c2(n) = d2(n-1) + 100 + L with d2(1) = 0, L = 10 gives 110
    ConstantSchedule zero(BaseConstants::from(1, 10, 0.01), 0.0);
    CHECK(zero.c2(2) == 110.0);

    // d1(n,c) = c1(n, T) = max{k(3T, n), d1(n-1, T)}
    double T = sched.T(2, 1.0);
    CHECK(sched.d1(2, 1.0) == std::max(k_of(3 * T, 2, sched), sched.d1(1, T)));
    // d4(n,c) = max{10T, d4(n-1,c)}
    CHECK(sched.d4(2, 1.0) == std::max(10 * T, sched.d4(1, 1.0)));
    // c3 carries the K(2L+2) term
    ConstantSchedule kbase(BaseConstants::from(3, 10, 0.01), 0.0);
    double expect = 4 * kbase.base().N1 + kbase.d3(1) + 4 * kbase.d2(1) +
                    2 * kbase.d4(1, kbase.d2(1) + 11) + 49 + 2 * 10 + 3 * (2 * 10 + 2);
    CHECK(kbase.c3(2) == expect);
}

TEST_CASE("schedule chain n = 2..4 is nondecreasing in d4 and deterministic") {
    ConstantSchedule a(BaseConstants::from(1, 1, 0.002), 1.0);
    ConstantSchedule b(BaseConstants::from(1, 1, 0.002), 1.0);
    double prev = 0;
    for (int n = 2; n <= 4; ++n) {
        schedule_step(n, 1.0, a);
        schedule_step(n, 1.0, b);
        CHECK(a.d4(n, 1.0) == b.d4(n, 1.0));
        CHECK(a.d4(n, 1.0) >= prev);
        prev = a.d4(n, 1.0);
        CHECK(a.d1(n, 1.0) == b.d1(n, 1.0));
        CHECK(a.d2(n) == b.d2(n));
        CHECK(a.d3(n) == b.d3(n));
    }
    // idempotent
    schedule_step(3, 1.0, a);
    CHECK(a.d4(3, 1.0) == b.d4(3, 1.0));
    CHECK_THROWS_AS(schedule_step(1, 1.0, a), std::domain_error);
    CHECK_THROWS_AS(schedule_step(2, -1.0, a), std::domain_error);
}

TEST_CASE("morse estimates vanish for genuine geodesics") {
    MorseEstimate tree = estimate_morse(SpaceModel::tree(2), 1.0, 0.0, 40, 7);
    CHECK(tree.H < 1e-12);
    CHECK(tree.K == 1.0);

    MorseEstimate h2 = estimate_morse(SpaceModel::h2(), 1.0, 0.0, 60, 7);
    CHECK(h2.H < 1e-6);
    CHECK(h2.K == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("morse estimates are finite and seed-deterministic") {
    MorseEstimate a = estimate_morse(SpaceModel::h2(), 2.0, 10.0, 300, 99);
    MorseEstimate b = estimate_morse(SpaceModel::h2(), 2.0, 10.0, 300, 99);
    CHECK(a.paths > 0);
    CHECK(std::isfinite(a.H));
    CHECK(a.H == b.H);  // bit-identical rerun
    CHECK(a.T == b.T);
    CHECK(a.K == b.K);
    CHECK(a.L == 2 * a.H);
}
