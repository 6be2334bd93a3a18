#include "nht/constants.hpp"

#include <algorithm>
#include <cmath>

#include "nht/path.hpp"

namespace nht {

double ConstantSchedule::d2(int n) {
    check(n, 1);
    if (n == 1) return c0_;
    auto it = d2_.find(n);
    if (it != d2_.end()) return it->second;
    double v = c2(n);
    d2_[n] = v;
    return v;
}

double ConstantSchedule::d3(int n) {
    check(n, 1);
    if (n == 1) return c0_;
    auto it = d3_.find(n);
    if (it != d3_.end()) return it->second;
    double v = c3(n);
    d3_[n] = v;
    return v;
}

double ConstantSchedule::d4(int n, double c) {
    check(n, c);
    if (n == 1) return c0_;
    auto key = std::make_pair(n, c);
    auto it = d4_.find(key);
    if (it != d4_.end()) return it->second;
    double v = std::max(10.0 * T(n, c), d4(n - 1, c));
    d4_[key] = v;
    return v;
}

double ConstantSchedule::d1(int n, double c) {
    check(n, c);
    if (n == 1) return c0_;
    auto key = std::make_pair(n, c);
    auto it = d1_.find(key);
    if (it != d1_.end()) return it->second;
    double v = c1(n, T(n, c));
    d1_[key] = v;
    return v;
}

double ConstantSchedule::T(int n, double c) {
    check(n, c);
    if (n < 2) throw std::domain_error("T(n, c) requires n >= 2");
    double L = base_.L;
    return std::max({base_.N1, d4(n - 1, c + 2 * L + 100 + 1), 2 * c + 2 * (2 * L + 100) + 1});
}

double ConstantSchedule::c1(int n, double T) {
    if (n < 2) throw std::domain_error("c1 requires n >= 2");
    return std::max(k_of(3 * T, n, *this), d1(n - 1, T));
}

double ConstantSchedule::c2(int n) {
    if (n < 2) throw std::domain_error("c2 requires n >= 2");
    return d2(n - 1) + 100 + base_.L;
}

double ConstantSchedule::c3(int n) {
    if (n < 2) throw std::domain_error("c3 requires n >= 2");
    double L = base_.L, K = base_.K;
    return 4 * base_.N1 + d3(n - 1) + 4 * d2(n - 1) + 2 * d4(n - 1, d2(n - 1) + 11) + 49 + 2 * L +
           K * (2 * L + 2);
}

double k_of(double N, int n, ConstantSchedule& sched) {
    if (n < 2) throw std::domain_error("k(N, n) requires n >= 2");
    if (N < sched.base().N1) throw std::domain_error("k(N, n) requires N >= N1");
    return 6 * N + 2 * sched.d2(n - 1) + sched.d3(n - 1) + 4 * sched.d4(n - 1, sched.d2(n - 1) + 11) +
           35;
}

ConstantSchedule& schedule_step(int n, double c, ConstantSchedule& sched) {
    if (n < 2) throw std::domain_error("schedule_step requires n >= 2");
    if (c <= 0) throw std::domain_error("schedule_step requires c > 0");
    sched.T(n, c);
    sched.d1(n, c);
    sched.d2(n);
    sched.d3(n);
    sched.d4(n, c);
    return sched;
}

namespace {

Point jitter(const SpaceModel& m, const Point& p, double amount, Rng& rng) {
    if (amount <= 0 || m.kind == ModelKind::FreeTree) return p;
    double phi = rng.uniform(0, 2 * M_PI);
    Tangent dir;
    if (m.kind == ModelKind::H2) {
        dir = {{std::cos(phi), std::sin(phi)}, 0.0};
    } else {
        double cz = rng.uniform(-1, 1);
        double s = std::sqrt(std::max(0.0, 1 - cz * cz));
        dir = {{s * std::cos(phi), s * std::sin(phi)}, cz};
    }
    return exp_map(m, p, dir, rng.uniform() * amount);
}

double global_k_fit(const PiecewisePath& path, double step) {
    // smallest K with |b-a| <= K d + K on sampled pairs
    double L = path.length();
    if (L <= 0) return 1.0;
    int n = std::max(2, static_cast<int>(L / std::max(step, 1e-9)));
    n = std::min(n, 200);
    double worst = 1.0;
    for (int i = 0; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            double a = L * i / n, b = L * j / n;
            double d = dist(path.model, path.at(a), path.at(b));
            worst = std::max(worst, (b - a) / (d + 1.0));
        }
    }
    return worst;
}

}  // namespace

MorseEstimate estimate_morse(const SpaceModel& model, double lambda, double eps, int samples,
                             uint64_t seed) {
    Rng rng(seed);
    MorseEstimate est;
    std::vector<PiecewisePath> paths;
    for (int s = 0; s < samples; ++s) {
        std::vector<Point> anchors;
        bool perturbed = (s % 2 == 0);
        if (perturbed) {
            Point p = random_point(model, rng), q = random_point(model, rng);
            int k = 8;
            for (int i = 0; i <= k; ++i) {
                Point a = geodesic_point(model, p, q, static_cast<double>(i) / k);
                if (i > 0 && i < k) a = jitter(model, a, std::min(eps / 8.0, 2.0), rng);
                anchors.push_back(a);
            }
        } else {
            int legs = rng.uniform_int(3, 6);
            for (int i = 0; i <= legs; ++i) anchors.push_back(random_point(model, rng));
        }
        PiecewisePath path = PiecewisePath::through(model, anchors);
        if (path.length() <= 1e-9) continue;
        auto rep = local_qg_check(path, path.length(), lambda, eps);
        if (!rep.pass) continue;  // keep only genuine (lambda,eps)-quasigeodesics
        paths.push_back(std::move(path));
    }
    est.paths = static_cast<int>(paths.size());

    double step = 0.1;
    for (const auto& p : paths) {
        double h = hausdorff_to_geodesic(p, p.anchors.front(), p.anchors.back(), step);
        est.H = std::max(est.H, h);
    }
    est.L = 2.0 * est.H;

    const double grid[] = {1, 2, 5, 10, 20, 50, 100, 200, 500};
    const double Kcap = 2.0 * (lambda + 1.0);
    est.T = grid[sizeof(grid) / sizeof(grid[0]) - 1];
    est.K = 1.0;
    for (double T : grid) {
        double worstK = 1.0;
        bool any = false;
        for (const auto& p : paths) {
            auto rep = local_qg_check(p, std::min(T, p.length()), lambda, eps);
            if (!rep.pass) continue;
            any = true;
            worstK = std::max(worstK, global_k_fit(p, step));
        }
        if (any && worstK <= Kcap) {
            est.T = T;
            est.K = worstK;
            break;
        }
        if (!any) {
            est.T = T;
            break;
        }
    }
    return est;
}

}  // namespace nht
