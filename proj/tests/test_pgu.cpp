#include <doctest.h>

#include <cmath>

#include "snnrx/pgu.hpp"

using namespace snnrx;
using namespace snnrx::pgu;

TEST_CASE("rosenbrock values") {
    CHECK(rosenbrock(1.0, 1.0) == 0.0);
    CHECK(rosenbrock(0.0, 0.0) == 1.0);
    CHECK(rosenbrock(1.8, 1.9) == doctest::Approx(180.2));
}

TEST_CASE("damped_diff") {
    CHECK(damped_diff(2.0, 2.0, 0.1) == 0.0);
    CHECK(damped_diff(2.0, 5.0, 0.1) == doctest::Approx(-3.0));  // improvement, undamped
    CHECK(damped_diff(5.0, 2.0, 0.1) == doctest::Approx(0.3));   // deterioration, damped

    RandomStream rng(71, "dd");
    for (int i = 0; i < 200; ++i) {
        const double a = std::abs(rng.normal()) * 3.0;
        const double b = std::abs(rng.normal()) * 3.0;
        const double d = damped_diff(a, b, 0.05);
        CHECK(d * (a - b) >= 0.0);  // never changes sign
    }
}

TEST_CASE("sample_policy coupled variance") {
    PguConfig cfg;
    cfg.sigma2_pi = 0.04;
    cfg.batch = 200000;
    RandomStream rng(72, "policy");
    const std::vector<double> theta{1.0, -2.0};

    // ell < 1 shrinks the search radius: sigma2_c = sigma2_pi * ell
    auto vars = sample_policy(theta, 0.25, cfg, rng);
    double v = 0.0;
    for (const auto& t : vars) v += (t[0] - theta[0]) * (t[0] - theta[0]);
    v /= static_cast<double>(vars.size());
    CHECK(v == doctest::Approx(0.04 * 0.25).epsilon(0.03));

    // large ell is capped at sigma2_pi
    vars = sample_policy(theta, 4.0, cfg, rng);
    v = 0.0;
    for (const auto& t : vars) v += (t[1] - theta[1]) * (t[1] - theta[1]);
    v /= static_cast<double>(vars.size());
    CHECK(v == doctest::Approx(0.04).epsilon(0.03));

    CHECK_THROWS(sample_policy(theta, -1.0, cfg, rng));
}

TEST_CASE("pgu_step update formula") {
    PguConfig cfg;
    cfg.batch = 1;
    cfg.nu = 0.5;
    cfg.alpha_damp = 0.1;
    cfg.sigma2_pi = 0.01;
    const std::vector<double> theta{0.3, -0.8};

    SUBCASE("single improving variation moves a quarter of the way") {
        std::vector<double> seen;
        const Evaluator ev = [&](const std::vector<double>& t) {
            if (t == theta) return 1.0;
            seen = t;
            return 0.5;
        };
        RandomStream rng(73, "pgu-f");
        const auto next = pgu_step(theta, ev, cfg, rng);
        // theta' = theta - nu * ((0.5-1.0)/1.0) * (theta~ - theta)
        for (std::size_t i = 0; i < 2; ++i)
            CHECK(next[i] == doctest::Approx(theta[i] + 0.25 * (seen[i] - theta[i])));
    }
    SUBCASE("identically scoring variations leave theta unchanged") {
        const Evaluator ev = [](const std::vector<double>&) { return 2.0; };
        RandomStream rng(74, "pgu-c");
        const auto next = pgu_step(theta, ev, cfg, rng);
        CHECK(next == theta);
    }
    SUBCASE("non-finite and negative evaluations are rejected") {
        RandomStream rng(75, "pgu-e");
        CHECK_THROWS(pgu_step(theta, [](const std::vector<double>&) { return -1.0; }, cfg, rng));
        CHECK_THROWS(pgu_step(
            theta, [](const std::vector<double>&) { return std::nan(""); }, cfg, rng));
    }
}

TEST_CASE("with alpha_damp = 1 the update is the baseline-subtracted form") {
    PguConfig cfg;
    cfg.batch = 8;
    cfg.nu = 0.2;
    cfg.alpha_damp = 1.0;
    cfg.sigma2_pi = 0.05;
    const std::vector<double> theta{1.5, 0.5};
    const Evaluator ev = [](const std::vector<double>& t) { return rosenbrock(t[0], t[1]); };

    RandomStream r1(76, "pgu-base"), r2(76, "pgu-base");
    const auto got = pgu_step(theta, ev, cfg, r1);

    // reference: theta - nu * sum (l(var)-l(theta))/l(theta) * (var - theta)
    const double ell = ev(theta);
    const auto vars = sample_policy(theta, ell, cfg, r2);
    std::vector<double> expect = theta;
    for (const auto& var : vars) {
        const double c = (ev(var) - ell) / ell;
        for (std::size_t i = 0; i < 2; ++i) expect[i] -= cfg.nu * c * (var[i] - theta[i]);
    }
    for (std::size_t i = 0; i < 2; ++i) CHECK(got[i] == doctest::Approx(expect[i]));
}

TEST_CASE("translation equivariance") {
    PguConfig cfg;
    cfg.batch = 10;
    cfg.nu = 0.3;
    cfg.alpha_damp = 1e-2;
    cfg.sigma2_pi = 0.02;
    const std::vector<double> c{0.7, -1.3};

    std::vector<double> a{1.8, 1.9};
    std::vector<double> b{1.8 + c[0], 1.9 + c[1]};
    const Evaluator f = [](const std::vector<double>& t) { return rosenbrock(t[0], t[1]); };
    const Evaluator g = [&](const std::vector<double>& t) {
        return rosenbrock(t[0] - c[0], t[1] - c[1]);
    };
    RandomStream ra(77, "pgu-t"), rb(77, "pgu-t");
    for (int e = 0; e < 50; ++e) {
        a = pgu_step(a, f, cfg, ra);
        b = pgu_step(b, g, cfg, rb);
        for (std::size_t i = 0; i < 2; ++i) CHECK(b[i] - c[i] == doctest::Approx(a[i]).epsilon(1e-10));
    }
}

TEST_CASE("rosenbrock trajectories are mostly monotone after burn-in") {
    PguConfig cfg;
    cfg.batch = 40;
    cfg.nu = 0.5;
    cfg.sigma2_pi = 0.1;
    cfg.alpha_damp = 1e-4;
    const Evaluator ev = [](const std::vector<double>& t) { return rosenbrock(t[0], t[1]); };

    for (uint64_t s = 0; s < 10; ++s) {
        RandomStream rng(78, "pgu-mono", s);
        std::vector<double> theta{1.8, 1.9};
        std::size_t non_increasing = 0, total = 0;
        double prev = ev(theta);
        for (int e = 0; e < 600; ++e) {
            theta = pgu_step(theta, ev, cfg, rng);
            const double now = ev(theta);
            if (e >= 100) {
                // once at the numerical floor the descent is over; jitter
                // around ~1e-14 does not count against monotonicity
                non_increasing += now <= prev || now < 1e-8;
                ++total;
            }
            prev = now;
        }
        CHECK(static_cast<double>(non_increasing) / static_cast<double>(total) >= 0.8);
    }
}
