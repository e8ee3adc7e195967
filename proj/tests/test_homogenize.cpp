#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "brinkhom/homogenize.hpp"
#include "brinkhom/rng.hpp"
#include "brinkhom/stokeslet.hpp"

using namespace brinkhom;

namespace {

constexpr double kSixPi = 6.0 * std::numbers::pi;

CubeCovering covering_of(const ParticleCloud& cloud, double lambda, int d) {
    WeightedPoints pts;
    pts.points = cloud.centers;
    pts.weights.assign(cloud.n, 1.0);
    return build_covering(pts, lambda, d);
}

}  // namespace

TEST_CASE("test field vanishes outside its support ball") {
    TestField w({0.5, 0.5, 0.5}, 0.3, {0, 0, 1});
    CHECK(norm(w.value({0.81, 0.5, 0.5})) == 0.0);
    CHECK(frobenius_norm(w.gradient({0.5, 0.85, 0.5})) == 0.0);
    CHECK(norm(w.value({0.6, 0.5, 0.5})) > 0.0);
    Box s = w.support();
    CHECK(s.lo.x == doctest::Approx(0.2));
    CHECK(s.hi.z == doctest::Approx(0.8));
    CHECK_THROWS_AS(TestField({0, 0, 0}, 0.0, {1, 0, 0}), std::invalid_argument);
}

TEST_CASE("test field is divergence free") {
    TestField w({0.5, 0.5, 0.5}, 0.4, {1.0, -2.0, 0.5});
    CounterRng rng(3);
    for (int t = 0; t < 200; ++t) {
        const Vec3 x = Vec3{0.5, 0.5, 0.5} + (0.38 * rng.next_double()) * rng.unit_vector();
        const Mat3 g = w.gradient(x);
        const double scale = std::max(1.0, frobenius_norm(g));
        CHECK(std::abs(trace(g)) <= 1e-12 * scale);
    }
}

TEST_CASE("test field gradient matches finite differences") {
    TestField w({0.4, 0.6, 0.5}, 0.3, {0.7, 0.1, -1.2});
    CounterRng rng(5);
    const double h = 1e-6 * w.scale();
    for (int t = 0; t < 50; ++t) {
        const Vec3 x = w.center() + (0.9 * rng.next_double() * w.scale()) * rng.unit_vector();
        const Mat3 g = w.gradient(x);
        Mat3 fd{};
        for (int j = 0; j < 3; ++j) {
            Vec3 e{};
            e[j] = h;
            const Vec3 up = w.value(x + e);
            const Vec3 um = w.value(x - e);
            for (int i = 0; i < 3; ++i) fd[i][j] = (up[i] - um[i]) / (2.0 * h);
        }
        Mat3 diff = g;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) diff[i][j] -= fd[i][j];
        CHECK(frobenius_norm(diff) <= 1e-6 * std::max(1.0, frobenius_norm(g)));
    }
}

TEST_CASE("sampled sup norms dominate point evaluations") {
    TestField w({0.5, 0.5, 0.5}, 0.25, {2.0, 0.0, 1.0});
    CHECK(w.w_inf() > 0.0);
    CHECK(w.grad_w_inf() > w.w_inf());  // scale < 1 pushes the gradient up
    CHECK(w.w1inf_norm() == w.grad_w_inf());
    CounterRng rng(7);
    for (int t = 0; t < 500; ++t) {
        const Vec3 x = w.center() + (rng.next_double() * w.scale()) * rng.unit_vector();
        CHECK(norm(w.value(x)) <= w.w_inf() * (1.0 + 1e-6));
        CHECK(frobenius_norm(w.gradient(x)) <= w.grad_w_inf() * (1.0 + 1e-6));
    }
}

TEST_CASE("cell_average of a constant field") {
    auto cloud = gen_periodic(2, [](const Vec3&) { return Vec3{1, 0, 0}; });
    auto cov = covering_of(cloud, 0.4, 3);
    const CellKey key = cov.cell_of(cloud.centers[0]);
    const Vec3 c{1.5, -2.0, 0.25};
    const Vec3 avg = cell_average(cov, key, 4, [&](const Vec3&) { return c; });
    CHECK(norm(avg - c) <= 1e-14 * norm(c));
}

TEST_CASE("cell_average kills a linear field centered on the cell") {
    auto cloud = gen_periodic(2, [](const Vec3&) { return Vec3{1, 0, 0}; });
    auto cov = covering_of(cloud, 0.4, 3);
    const CellKey key = cov.cell_of(cloud.centers[2]);
    const Vec3 xc = cov.cell_center(key);
    const Vec3 avg = cell_average(cov, key, 4, [&](const Vec3& x) { return x - xc; });
    CHECK(norm(avg) <= 1e-13);
}

TEST_CASE("cell_average of a far stokeslet matches dense sampling") {
    auto cloud = gen_periodic(2, [](const Vec3&) { return Vec3{1, 0, 0}; });
    auto cov = covering_of(cloud, 0.4, 3);
    const CellKey key = cov.cell_of(cloud.centers[0]);
    const Vec3 src{10.0, 0.0, 0.0};
    auto field = [&](const Vec3& x) { return u_single(1.0, {1, 0, 0}, x - src); };
    const Vec3 coarse = cell_average(cov, key, 4, field);
    const Vec3 dense = cell_average(cov, key, 4, field, 40);
    CHECK(norm(coarse - dense) <= 1e-6);
}

TEST_CASE("cell_average rejects bad parameters") {
    auto cloud = gen_periodic(2, [](const Vec3&) { return Vec3{1, 0, 0}; });
    auto cov = covering_of(cloud, 0.4, 3);
    const CellKey key = cov.cell_of(cloud.centers[0]);
    auto f = [](const Vec3&) { return Vec3{}; };
    CHECK_THROWS_AS(cell_average(cov, key, 1, f), std::invalid_argument);
    // two midpoints per axis all fall in the core for delta = 4
    CHECK_THROWS_WITH_AS(cell_average(cov, key, 4, f, 2), "cell_average: degenerate annulus",
                         std::invalid_argument);
}

TEST_CASE("interior_drag_sum with zero velocities") {
    auto cloud = gen_periodic(3, [](const Vec3&) { return Vec3{}; });
    auto cov = covering_of(cloud, 0.3, 3);
    TestField w({0.5, 0.5, 0.5}, 0.45, {0, 0, 1});
    CHECK(interior_drag_sum(cloud, cov, w) == 0.0);
}

TEST_CASE("interior_drag_sum for a single interior particle") {
    auto cloud = make_cloud(unit_box(), {{0.5, 0.5, 0.5}}, {{0.0, 1.0, 0.0}});
    auto cov = covering_of(cloud, 0.4, 3);
    REQUIRE(cov.corridor_indices.empty());
    TestField w({0.35, 0.5, 0.5}, 0.3, {0.0, 0.0, 2.0});
    const double expect = kSixPi * dot(w.value(cloud.centers[0]), cloud.velocities[0]);
    CHECK(expect != 0.0);
    CHECK(interior_drag_sum(cloud, cov, w) == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("re-adding corridor terms restores the full drag sum") {
    CounterRng rng(11);
    RandomDiluteConfig cfg;
    cfg.seed = 13;
    auto cloud = gen_random_dilute(200, 0.02, unit_box(), cfg,
                                   [&](const Vec3&) { return rng.unit_vector(); });
    auto cov = covering_of(cloud, 0.2, 4);
    TestField w({0.5, 0.5, 0.5}, 0.45, {1.0, 1.0, 0.0});

    double full = 0.0;
    for (std::size_t i = 0; i < cloud.n; ++i)
        full += dot(w.value(cloud.centers[i]), cloud.velocities[i]);
    full *= kSixPi / static_cast<double>(cloud.n);

    double corridor = 0.0;
    for (std::size_t i : cov.corridor_indices)
        corridor += dot(w.value(cloud.centers[i]), cloud.velocities[i]);
    corridor *= kSixPi / static_cast<double>(cloud.n);

    CHECK(interior_drag_sum(cloud, cov, w) + corridor ==
          doctest::Approx(full).epsilon(1e-12));
}

TEST_CASE("sigma_field is zero on cells without interior particles") {
    // one particle far from the test-field support contributes w = 0
    auto cloud = make_cloud(Box{{0, 0, 0}, {4, 4, 4}}, {{3.5, 3.5, 3.5}, {0.5, 0.5, 0.5}},
                            {{1, 0, 0}, {1, 0, 0}});
    auto cov = covering_of(cloud, 0.4, 3);
    TestField w({0.5, 0.5, 0.5}, 0.3, {0, 1, 0});
    auto sigma = sigma_field(cloud, cov, w, 4);
    CHECK(norm(sigma.at(cov.cell_of(cloud.centers[0]))) == 0.0);
}

TEST_CASE("sigma_field L1 mass is at most the sup of w") {
    RandomDiluteConfig cfg;
    cfg.seed = 17;
    auto cloud = gen_random_dilute(300, 0.02, unit_box(), cfg,
                                   [](const Vec3&) { return Vec3{1, 0, 0}; });
    const int delta = 4;
    auto cov = covering_of(cloud, 0.25, delta - 1);
    TestField w({0.5, 0.5, 0.5}, 0.4, {0.0, 3.0, 0.0});
    auto sigma = sigma_field(cloud, cov, w, delta);
    const double vol = annulus_volume(cov.lambda, delta);
    double mass = 0.0;
    for (const auto& [key, s] : sigma) mass += norm(s) * vol;
    CHECK(mass <= w.w_inf() * (1.0 + 1e-12));
}

TEST_CASE("annulus_volume closed form") {
    CHECK(annulus_volume(1.0, 4) == doctest::Approx(37.0 / 64.0));
    CHECK(annulus_volume(0.5, 2) == doctest::Approx(0.125 * 7.0 / 8.0));
}

TEST_CASE("budget_p21 arithmetic") {
    CHECK(budget_p21(0, 512, 0.0625, 1.0) == 0.0);
    // sqrt(8/512) (1/512 + sqrt(8 / 32))
    CHECK(budget_p21(8, 512, 0.0625, 1.0) == doctest::Approx(0.062744140625).epsilon(1e-15));
    CHECK(budget_p21(8, 512, 0.125, 1.0) < budget_p21(8, 512, 0.0625, 1.0));
    CHECK(budget_p21(8, 512, 0.0625, 2.0) ==
          doctest::Approx(2.0 * budget_p21(8, 512, 0.0625, 1.0)));
}

TEST_CASE("budget_p41 arithmetic") {
    // N=1000, lambda=0.2, d_min=0.1, delta=4, M=1, E=1
    const double bracket = 0.25 + 4.0 * 0.04 + std::cbrt(4.0) * 100.0 * 0.0016 +
                           100.0 * 0.00032 / (std::pow(4.0, 2.0 / 3.0) * 0.1) + 0.008 / 0.1;
    const double expect = 2.0 * std::sqrt(bracket);
    CHECK(budget_p41(1000, 0.2, 0.1, 4, 1, 1.0, 1.0) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(expect == doctest::Approx(1.866522169675322).epsilon(1e-12));

    // lambda -> 0: only the 1/delta term survives
    CHECK(budget_p41(1000, 1e-12, 0.1, 4, 1, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-9));

    CHECK_THROWS_AS(budget_p41(1000, 0.2, 0.1, 3, 1, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("budget_p41 has an interior minimizing delta") {
    double best = 1e300;
    int best_delta = 0;
    for (int d = 4; d <= 40; ++d) {
        const double v = budget_p41(1000, 0.2, 0.1, d, 1, 1.0, 1.0);
        if (v < best) {
            best = v;
            best_delta = d;
        }
    }
    CHECK(best_delta > 4);
    CHECK(best_delta < 40);
}

TEST_CASE("weak form experiment vanishes for a motionless cloud") {
    auto cloud = gen_periodic(4, [](const Vec3&) { return Vec3{}; });
    TestField w({0.5, 0.5, 0.5}, 0.45, {0, 0, 1});
    auto rep = weak_form_experiment(cloud, w);
    CHECK(rep.n == 64);
    CHECK(rep.lhs == 0.0);
    CHECK(std::abs(rep.rhs) <= 1e-8);
    CHECK(rep.residual <= 1e-8);
    CHECK(rep.interior_sum == 0.0);
    CHECK(std::abs(rep.cell_avg_sum) <= 1e-12);
}

TEST_CASE("weak form experiment rejects delta below four") {
    auto cloud = gen_periodic(2, [](const Vec3&) { return Vec3{1, 0, 0}; });
    TestField w({0.5, 0.5, 0.5}, 0.4, {0, 0, 1});
    WeakFormConfig cfg;
    cfg.delta = 3;
    CHECK_THROWS_AS(weak_form_experiment(cloud, w, cfg), std::invalid_argument);
}
