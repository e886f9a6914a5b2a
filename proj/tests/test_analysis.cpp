#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"

using namespace routegame;
using namespace testsupport;

TEST_CASE("sweep of the diamond is strictly decreasing") {
    auto bundle = diamond();
    SweepOptions opts;
    opts.solver = Solver::homogeneous;
    auto sweep = sweep_alpha(bundle.network, bundle.demand, {0.0, 0.5, 1.0}, opts);
    REQUIRE(sweep.samples.size() == 3);
    CHECK(sweep.samples[0].j_max == doctest::Approx(8.0).epsilon(1e-8));
    CHECK(sweep.samples[1].j_max == doctest::Approx(7.0).epsilon(1e-8));
    CHECK(sweep.samples[2].j_max == doctest::Approx(6.0).epsilon(1e-8));
    CHECK(sweep.nonincreasing);
    CHECK_FALSE(sweep.paradox);

    opts.solver = Solver::support_enum;
    auto lp_sweep = sweep_alpha(bundle.network, bundle.demand, {0.0, 0.5, 1.0}, opts);
    for (int k = 0; k < 3; ++k) {
        CHECK(lp_sweep.samples[k].j_min ==
              doctest::Approx(sweep.samples[k].j_min).epsilon(1e-6));
        CHECK(lp_sweep.samples[k].j_max ==
              doctest::Approx(sweep.samples[k].j_max).epsilon(1e-6));
    }
}

TEST_CASE("weak paradox fires before the strong one on the braess example") {
    auto bundle = load_network(data_file("ex3.json"));
    SweepOptions opts;
    opts.paradox = ParadoxMode::weak;
    auto weak = sweep_alpha(bundle.network, bundle.demand, {0.0, 0.1}, opts);
    CHECK(weak.paradox);
    CHECK(weak.samples[1].j_max > weak.samples[0].j_max + 1e-3);

    opts.paradox = ParadoxMode::strong;
    auto strong = sweep_alpha(bundle.network, bundle.demand, {0.0, 0.1}, opts);
    CHECK_FALSE(strong.paradox); // J_min stays at the baseline at alpha = 0.1

    auto full = sweep_alpha(bundle.network, bundle.demand, {0.0, 0.5, 1.0}, opts);
    CHECK(full.paradox); // by alpha = 1 even the minimum exceeds the baseline
}

TEST_CASE("strong paradox on the heterogeneous wheatstone network") {
    auto bundle = load_network(data_file("ex4.json"));
    SweepOptions opts;
    auto sweep = sweep_alpha(bundle.network, bundle.demand, {0.0, 1.0 / 3.0, 1.0}, opts);
    CHECK(sweep.paradox);
    CHECK(sweep.samples[2].j_min > sweep.samples[0].j_max + 1e-3);
    CHECK_FALSE(sweep.nonincreasing);
    CHECK(sweep.paradox_low == 0);
    CHECK(sweep.paradox_high == 2);
}

TEST_CASE("sweep orders its samples by the swept coordinate") {
    auto bundle = diamond();
    SweepOptions opts;
    opts.solver = Solver::homogeneous;
    auto sweep = sweep_alpha(bundle.network, bundle.demand, {1.0, 0.0, 0.5}, opts);
    REQUIRE(sweep.samples.size() == 3);
    CHECK(sweep.samples[0].alpha == 0.0);
    CHECK(sweep.samples[1].alpha == 0.5);
    CHECK(sweep.samples[2].alpha == 1.0);
    CHECK(sweep.nonincreasing);
}

TEST_CASE("sweep propagates solver errors with the grid point") {
    auto bundle = load_network(data_file("ex4.json"));
    SweepOptions opts;
    opts.solver = Solver::homogeneous; // heterogeneous mu
    CHECK_THROWS_AS(sweep_alpha(bundle.network, bundle.demand, {0.0, 0.5}, opts),
                    HeterogeneityError);
    CHECK_THROWS_AS(sweep_alpha(bundle.network, bundle.demand, {0.0, 1.5}, opts), DomainError);
}

TEST_CASE("lambda of a linear link") {
    // e~(x) = x up to a vanishing intercept.
    std::vector<LinkParams> family = {bpr(1e-12, 1e12, 1, 1, 1)};
    CHECK(lambda_of_family(family, {1.0}) == doctest::Approx(0.25).epsilon(1e-9));

    // Constant delays: numerator is zero.
    std::vector<LinkParams> constant = {bpr(2.0, 0.0, 1, 1, 1)};
    CHECK(lambda_of_family(constant, {1.5}) == 0.0);

    // Zero flow: 0/0 is 0.
    CHECK(lambda_of_family(family, {0.0}) == 0.0);
}

TEST_CASE("golden-section maximization matches the closed form per link") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double beta = 1 + static_cast<int>(unit(rng) * 4) % 4;
        LinkParams p = bpr(0.2 + 3 * unit(rng), 0.1 + 1.5 * unit(rng), beta,
                           0.4 + 2 * unit(rng), 1.0);
        const double v = 0.1 + 3 * unit(rng);
        const double ev = reduced_delay(p, v);
        // max over x of (e~(v) - e~(x)) x has maximizer v (beta+1)^(-1/beta).
        const double term = p.free_flow * p.congestion * std::pow(v / p.cap_regular, beta) * v *
                            (beta / (beta + 1.0)) * std::pow(beta + 1.0, -1.0 / beta);
        const double expected = term / (ev * v);
        CHECK(lambda_of_family({p}, {v}) == doctest::Approx(expected).epsilon(1e-8));
    }
}

TEST_CASE("polynomial class constants") {
    CHECK(lambda_class_bound(1) == 0.25);
    CHECK(1.0 / (1.0 - lambda_class_bound(2)) == doctest::Approx(1.626).epsilon(1e-3));
    CHECK(1.0 / (1.0 - lambda_class_bound(4)) == doctest::Approx(2.151).epsilon(5e-4));
    CHECK_THROWS_AS(lambda_class_bound(0), DomainError);
    CHECK_THROWS_AS(lambda_class_bound(5), DomainError);
}

TEST_CASE("instance lambda never exceeds the class constant") {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        const int degree = 1 + static_cast<int>(unit(rng) * 4) % 4;
        std::vector<LinkParams> family;
        std::vector<double> flows;
        const int links = 1 + static_cast<int>(unit(rng) * 5) % 5;
        for (int l = 0; l < links; ++l) {
            const double beta = 1 + static_cast<int>(unit(rng) * degree) % degree;
            family.push_back(bpr(0.2 + 3 * unit(rng), 1.5 * unit(rng), beta,
                                 0.4 + 2 * unit(rng), 1.0));
            flows.push_back(3 * unit(rng));
        }
        CHECK(lambda_of_family(family, flows) <= lambda_class_bound(degree) + 1e-9);
    }
}

TEST_CASE("sweeps carry the class bound when it applies") {
    auto triangle = load_network(data_file("ex5.json"));
    SweepOptions opts;
    opts.od_index = 0;
    auto sweep = sweep_alpha(triangle.network, triangle.demand, {0.0, 0.5, 1.0}, opts);
    REQUIRE(sweep.j_baseline.has_value());
    CHECK(*sweep.j_baseline == doctest::Approx(10676.0).epsilon(1e-6));
    CHECK(*sweep.bound == doctest::Approx(10676.0 * 4.0 / 3.0).epsilon(1e-6));
    CHECK(*sweep.eta_lower == doctest::Approx(10829.0 / 10676.0).epsilon(1e-6));

    auto wheatstone = load_network(data_file("ex4.json"));
    auto het = sweep_alpha(wheatstone.network, wheatstone.demand, {0.0, 1.0}, SweepOptions{});
    CHECK_FALSE(het.bound.has_value());
    CHECK_FALSE(het.eta_lower.has_value());
}

TEST_CASE("bound report on the triangle network") {
    auto bundle = load_network(data_file("ex5.json"));
    std::vector<double> grid;
    for (int k = 0; k <= 10; ++k) grid.push_back(k / 10.0);
    auto rep = autonomy_bound_check(bundle.network, bundle.demand, grid, 0);
    CHECK(rep.j_baseline == doctest::Approx(10676.0).epsilon(1e-6));
    CHECK(rep.lambda == 0.25);
    CHECK(rep.factor == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(rep.max_ratio == doctest::Approx(10829.0 / 10676.0).epsilon(1e-6));
    CHECK(rep.satisfied);
    CHECK(rep.eta_lower == rep.max_ratio);
}

TEST_CASE("bound check requires homogeneous asymmetry") {
    auto bundle = load_network(data_file("ex4.json"));
    CHECK_THROWS_AS(autonomy_bound_check(bundle.network, bundle.demand, {0.0, 1.0}),
                    HeterogeneityError);
}

TEST_CASE("all-regular grid gives ratio one") {
    auto bundle = diamond();
    auto rep = autonomy_bound_check(bundle.network, bundle.demand, {0.0});
    CHECK(rep.max_ratio == doctest::Approx(1.0).epsilon(1e-9));
}
