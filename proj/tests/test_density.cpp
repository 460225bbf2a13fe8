#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "iso/density.hpp"

using namespace iso;

namespace {

constexpr double kPi = std::numbers::pi;

double uniform(std::mt19937_64& eng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(eng() >> 11) * 0x1.0p-53);
}

// closed form of the lower envelope for K = 0, N = 2, D = 1:
// f(x) = 2x(1-x)/(x^2 - x + 1)
double envelope_021(double x) { return 2.0 * x * (1.0 - x) / (x * x - x + 1.0); }

CurvatureParams draw_params(std::mt19937_64& eng) {
    const double K = uniform(eng, -2.0, 2.0);
    const double N = uniform(eng, 1.2, 5.0);
    double D = uniform(eng, 0.3, 3.0);
    if (K > 0.0) D = std::min(D, 0.95 * CurvatureParams::max_diameter(K, N));
    return {K, N, D};
}

}  // namespace

TEST_CASE("lower envelope spot values") {
    CHECK(lower_envelope({0, 2, 1}, 0.5) == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
    CHECK(lower_envelope({0, 2, 1}, 0.25) == doctest::Approx(6.0 / 13.0).epsilon(1e-10));
    CHECK(lower_envelope({0, 2, 1}, 0.0) == 0.0);
    CHECK(lower_envelope({0, 2, 1}, 1.0) == 0.0);
    CHECK(lower_envelope({-1, 3.5, 2}, 0.0) == 0.0);
    CHECK(lower_envelope({1, 2, kPi}, kPi / 2) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK_THROWS_AS((void)lower_envelope({0, 2, 1}, -0.1), std::domain_error);
    CHECK_THROWS_AS((void)lower_envelope({0, 2, 1}, 1.1), std::domain_error);
}

TEST_CASE("lower envelope closed form, symmetry and interior monotonicity") {
    std::mt19937_64 eng(17);
    for (int i = 1; i < 40; ++i) {
        const double x = i / 40.0;
        CHECK(lower_envelope({0, 2, 1}, x) ==
              doctest::Approx(envelope_021(x)).epsilon(1e-10));
    }
    for (int rep = 0; rep < 60; ++rep) {
        const auto p = draw_params(eng);
        const double x = uniform(eng, 0.0, p.D);
        CHECK(lower_envelope(p, x) ==
              doctest::Approx(lower_envelope(p, p.D - x)).epsilon(1e-11));
    }
    // strict increase on (0, D/2)
    for (const auto& p : {CurvatureParams{0, 2, 1}, {0, 3.5, 1}, {-1, 2, 1},
                          {1, 2, 2.5}}) {
        double prev = 0.0;
        for (int i = 1; i <= 50; ++i) {
            const double x = 0.5 * p.D * i / 51.0;
            const double fx = lower_envelope(p, x);
            CHECK(fx > prev + 1e-12);
            prev = fx;
        }
    }
}

TEST_CASE("model density spot values") {
    const ModelDensity h({0, 2, 1}, 0.5);
    CHECK(h(0.5) == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
    CHECK(h(0.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-10));
    CHECK(h(1.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-10));
    CHECK(h.bend_value() == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
    CHECK(h.bending_point() == 0.5);

    const ModelDensity rigid({1, 2, kPi}, kPi / 2);
    CHECK(rigid(kPi / 4) == doctest::Approx(std::sin(kPi / 4) / 2.0).epsilon(1e-10));

    CHECK_THROWS_AS(ModelDensity({0, 2, 1}, 0.0), std::domain_error);
    CHECK_THROWS_AS(ModelDensity({0, 2, 1}, 1.0), std::domain_error);
    CHECK_THROWS_AS((void)h(-0.01), std::domain_error);
}

TEST_CASE("model density integrates to one and touches the envelope") {
    std::mt19937_64 eng(23);
    const Tolerance tol;
    for (int rep = 0; rep < 25; ++rep) {
        const auto p = draw_params(eng);
        const double a = uniform(eng, 0.05, 0.95) * p.D;
        const ModelDensity h(p, a, tol);
        const double mass = integrate([&](double x) { return h(x); }, 0.0, p.D, tol);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(h(a) == doctest::Approx(lower_envelope(p, a, tol)).epsilon(1e-12));
        const double bound = sup_bound(p, tol);
        for (int j = 0; j <= 200; ++j)
            CHECK(h(j == 200 ? p.D : p.D * j / 200.0) <= bound + 1e-9);
    }
}

TEST_CASE("model density reflection symmetry") {
    std::mt19937_64 eng(29);
    for (int rep = 0; rep < 50; ++rep) {
        const auto p = draw_params(eng);
        const double a = uniform(eng, 0.05, 0.95) * p.D;
        const double x = uniform(eng, 0.0, p.D);
        const ModelDensity h(p, a);
        const ModelDensity href(p, p.D - a);
        CHECK(href(p.D - x) == doctest::Approx(h(x)).epsilon(1e-12));
    }
}

TEST_CASE("model density rescaling identity") {
    std::mt19937_64 eng(31);
    for (int rep = 0; rep < 50; ++rep) {
        const auto p = draw_params(eng);
        const double a = uniform(eng, 0.05, 0.95) * p.D;
        const double dprime = uniform(eng, 0.3, 2.5);
        const double scale = p.D / dprime;
        const CurvatureParams q(scale * scale * p.K, p.N, dprime);
        const double z = uniform(eng, 0.0, dprime);
        const ModelDensity h(p, a);
        const ModelDensity g(q, a / scale);
        // h evaluated at z D/D' equals the rescaled density times D'/D
        CHECK(h(z * scale) == doctest::Approx(g(z) / scale).epsilon(1e-10));
    }
}

TEST_CASE("tabulated density basics") {
    TabulatedDensity t(1.0, {1.0, 1.0, 1.0, 1.0, 1.0});
    CHECK(t.size() == 5);
    CHECK(t.spacing() == doctest::Approx(0.25));
    CHECK(t(0.37) == doctest::Approx(1.0));
    CHECK(t.trapezoid_mass() == doctest::Approx(1.0));
    CHECK_THROWS_AS((void)t(1.5), std::domain_error);
    CHECK_THROWS_AS(TabulatedDensity(1.0, {1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(TabulatedDensity(1.0, {2.0, 2.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(TabulatedDensity(1.0, {1.0, -0.1, 2.0}), std::invalid_argument);
    // linear interpolation between nodes
    TabulatedDensity ramp(1.0, {0.0, 1.0, 2.0, 3.0, 4.0}, 1.1);
    CHECK(ramp(0.125) == doctest::Approx(0.5));
}

TEST_CASE("validator truth table on the distinguished densities") {
    const CurvatureParams p{0, 2, 1};
    const ModelDensity h(p, 0.5);
    const auto tab = TabulatedDensity::sample([&](double x) { return h(x); }, 1.0, 401);

    const auto mcp = validate_mcp(tab, p);
    CHECK(mcp.passed);
    CHECK(mcp.worst_violation >= -1e-9);
    CHECK(mcp.checks_run > 100000);

    const auto cd = validate_cd(tab, p);
    CHECK_FALSE(cd.passed);
    CHECK(cd.worst_violation <= -0.9);  // chord across the bend is far above
    CHECK(cd.witness_x0 < 0.5);
    CHECK(cd.witness_x1 > 0.5);

    // uniform density: constant ratios, flat concavity
    const TabulatedDensity flat(1.0, std::vector<double>(101, 1.0));
    CHECK(validate_mcp(flat, p).passed);
    CHECK(validate_cd(flat, p).passed);
}

TEST_CASE("validator catches a density that dies too fast") {
    // 2 on [0, 1/2], 0 beyond: the pair (0.4, 0.6) violates the lower ratio
    std::vector<double> v(401);
    for (int j = 0; j < 401; ++j) v[static_cast<std::size_t>(j)] = (j <= 200) ? 2.0 : 0.0;
    const TabulatedDensity step(1.0, std::move(v), 6e-3);
    const auto rep = validate_mcp(step, {0, 2, 1});
    CHECK_FALSE(rep.passed);
    CHECK(rep.worst_violation <= -0.5);
}

TEST_CASE("rigid case: normalized sin^{N-1} passes both validators") {
    for (double n : {2.0, 3.0}) {
        const CurvatureParams p{n - 1.0, n, kPi};
        const ModelDensity h(p, 0.6 * kPi);  // any bending point gives the same density
        const auto tab = TabulatedDensity::sample([&](double x) { return h(x); }, kPi, 401);
        const auto mcp = validate_mcp(tab, p);
        const auto cd = validate_cd(tab, p);
        CHECK(mcp.passed);
        CHECK(mcp.worst_violation >= -1e-9);
        CHECK(cd.passed);
        CHECK(cd.worst_violation >= -1e-9);
    }
    // while the flat density must fail there
    const CurvatureParams p{1, 2, kPi};
    const TabulatedDensity flat(kPi, std::vector<double>(101, 1.0 / kPi));
    const auto rep = validate_mcp(flat, p);
    CHECK_FALSE(rep.passed);
    CHECK(rep.worst_violation <= -1e-4);
}

TEST_CASE("model densities fail cd for every curvature sign") {
    for (const auto& p : {CurvatureParams{-1, 2, 1}, {0, 2, 1}, {1, 2, 2.5},
                          {0, 3.5, 1}}) {
        const ModelDensity h(p, 0.37 * p.D);
        const auto tab =
            TabulatedDensity::sample([&](double x) { return h(x); }, p.D, 401);
        CHECK(validate_mcp(tab, p).passed);
        const auto cd = validate_cd(tab, p);
        CHECK_FALSE(cd.passed);
        CHECK(cd.worst_violation <= -1e-4);
        // the violation straddles the bend
        CHECK(cd.witness_x0 <= h.bending_point());
        CHECK(cd.witness_x1 >= h.bending_point());
    }
}

TEST_CASE("sup bound values") {
    CHECK(sup_bound({0, 2, 1}) == doctest::Approx(2.0));
    CHECK(sup_bound({1, 3, 1}) == doctest::Approx(3.0));
    const double expected = std::sinh(1.0) / (std::cosh(1.0) - 1.0);
    CHECK(sup_bound({-1, 2, 1}) == doctest::Approx(expected).epsilon(1e-8));
}

TEST_CASE("random admissible densities satisfy the proven bounds") {
    const CurvatureParams p{0, 2, 1};
    const double bound = sup_bound(p);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto h = random_mcp_density(p, seed, 5, 401);
        const auto rep = validate_mcp(h, p);
        CHECK(rep.passed);
        CHECK(rep.worst_violation >= -1e-9);
        CHECK(h.max_value() <= bound + 1e-9);
        for (int j = 0; j < h.size(); ++j)
            CHECK(h.values()[static_cast<std::size_t>(j)] >=
                  lower_envelope(p, h.node(j)) - 1e-8);
    }
    // k = 1 reduces to a single model density
    const auto single = random_mcp_density(p, 3, 1, 401);
    CHECK(validate_mcp(single, p).passed);
}

TEST_CASE("random density generation is deterministic in the seed") {
    const CurvatureParams p{-1, 2.5, 1.5};
    const auto a = random_mcp_density(p, 42, 4, 201);
    const auto b = random_mcp_density(p, 42, 4, 201);
    const auto c = random_mcp_density(p, 43, 4, 201);
    CHECK(a.values() == b.values());
    CHECK(a.values() != c.values());
}

TEST_CASE("fixed two-component mixture has unit mass") {
    const CurvatureParams p{0, 2, 1};
    const Tolerance tol;
    const ModelDensity h1(p, 0.25), h2(p, 0.75);
    const double mass =
        0.5 * integrate([&](double x) { return h1(x); }, 0.0, 1.0, tol) +
        0.5 * integrate([&](double x) { return h2(x); }, 0.0, 1.0, tol);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("touching the envelope forces the model density") {
    // a model density bent at a grid node touches there and is itself;
    // bumping it anywhere breaks admissibility even though it still touches
    const CurvatureParams p{0, 2, 1};
    const int m = 401;
    const double y = 120.0 / 400.0;  // grid node
    const ModelDensity hy(p, y);
    auto tab = TabulatedDensity::sample([&](double x) { return hy(x); }, 1.0, m);
    CHECK(validate_mcp(tab, p).passed);
    const int jy = 120;
    CHECK(std::abs(tab.values()[jy] - lower_envelope(p, y)) <= 1e-9);

    // multiplicative bump away from y: still touches at y, no longer admissible
    std::vector<double> bumped = tab.values();
    for (int j = 0; j < m; ++j) {
        const double x = tab.node(j);
        const double w = std::exp(-200.0 * (x - 0.8) * (x - 0.8));
        bumped[static_cast<std::size_t>(j)] *= 1.0 + 0.05 * w;
    }
    const TabulatedDensity hb(1.0, std::move(bumped), 2e-2);
    CHECK(std::abs(hb.values()[jy] - lower_envelope(p, y)) <= 1e-9);
    const auto rep = validate_mcp(hb, p);
    CHECK_FALSE(rep.passed);
    CHECK(rep.worst_violation <= -1e-4);

    // an honest mixture stays clear of the envelope at interior nodes
    const ModelDensity hz(p, 0.65);
    double min_gap = 1e9;
    for (int j = 1; j + 1 < m; ++j) {
        const double x = tab.node(j);
        const double mix = 0.5 * hy(x) + 0.5 * hz(x);
        min_gap = std::min(min_gap, mix - lower_envelope(p, x));
    }
    CHECK(min_gap > 1e-7);
}

TEST_CASE("validators reject mismatched domains") {
    const TabulatedDensity flat(2.0, std::vector<double>(11, 0.5));
    CHECK_THROWS_AS((void)validate_mcp(flat, {0, 2, 1}), std::invalid_argument);
    CHECK_THROWS_AS((void)validate_cd(flat, {0, 2, 1}), std::invalid_argument);
}
