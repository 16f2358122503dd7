#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "equishoot/sde_sim.hpp"
#include "test_helpers.hpp"

using namespace equishoot;

namespace {

SimConfig small_cfg() {
    SimConfig cfg;
    cfg.n_paths = 64;
    cfg.horizon = 5.0;
    cfg.dt = 1e-3;
    cfg.seed = 42;
    return cfg;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

} // namespace

TEST_CASE("identical seed and config give identical occupation stats") {
    const auto& eq = testutil::reference_equilibrium();
    const SimConfig cfg = small_cfg();
    const OccupationStats a = simulate(eq, cfg);
    const OccupationStats b = simulate(eq, cfg);
    REQUIRE(a.occupation.size() == b.occupation.size());
    for (std::size_t i = 0; i < a.occupation.size(); ++i)
        CHECK(a.occupation[i] == b.occupation[i]);
    REQUIRE(a.terminal_values.size() == b.terminal_values.size());
    for (std::size_t i = 0; i < a.terminal_values.size(); ++i)
        CHECK(a.terminal_values[i] == b.terminal_values[i]);
    CHECK(a.clamp_events == b.clamp_events);
}

TEST_CASE("different seeds decorrelate the paths") {
    const auto& eq = testutil::reference_equilibrium();
    SimConfig cfg = small_cfg();
    const OccupationStats a = simulate(eq, cfg);
    cfg.seed = 43;
    const OccupationStats b = simulate(eq, cfg);
    bool any_diff = false;
    for (std::size_t i = 0; i < a.terminal_values.size(); ++i)
        if (a.terminal_values[i] != b.terminal_values[i]) any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("results are independent of the thread count") {
    const auto& eq = testutil::reference_equilibrium();
    const SimConfig cfg = small_cfg();
    setenv("EQUISHOOT_THREADS", "1", 1);
    const OccupationStats a = simulate(eq, cfg);
    setenv("EQUISHOOT_THREADS", "7", 1);
    const OccupationStats b = simulate(eq, cfg);
    unsetenv("EQUISHOOT_THREADS");
    for (std::size_t i = 0; i < a.occupation.size(); ++i)
        CHECK(a.occupation[i] == b.occupation[i]);
    for (std::size_t i = 0; i < a.terminal_values.size(); ++i)
        CHECK(a.terminal_values[i] == b.terminal_values[i]);
}

TEST_CASE("occupation frequencies sum to one") {
    const auto& eq = testutil::reference_equilibrium();
    const OccupationStats a = simulate(eq, small_cfg());
    const double total = std::accumulate(a.occupation.begin(), a.occupation.end(), 0.0);
    CHECK(std::abs(total - 1.0) < 1e-12);
    CHECK(a.bin_edges.front() == 0.0);
    CHECK(a.bin_edges.back() == 1.0);
}

TEST_CASE("config validation") {
    const auto& eq = testutil::reference_equilibrium();
    SimConfig cfg = small_cfg();
    cfg.dt = 0.0;
    CHECK_THROWS_AS(simulate(eq, cfg), ConfigError);
    cfg = small_cfg();
    cfg.clamp_eps = 0.7;
    CHECK_THROWS_AS(simulate(eq, cfg), ConfigError);
    cfg = small_cfg();
    cfg.y0 = 1.5;
    CHECK_THROWS_AS(simulate(eq, cfg), ConfigError);
    cfg = small_cfg();
    cfg.n_paths = 0;
    CHECK_THROWS_AS(simulate(eq, cfg), ConfigError);
}

TEST_CASE("stationary density normalizes and has the documented tails") {
    const auto& eq = testutil::reference_equilibrium();
    StationaryDistribution stat(eq, 0.5);
    std::vector<double> edges(51);
    for (int i = 0; i <= 50; ++i) edges[i] = i / 50.0;
    const std::vector<double> masses = stat.bin_masses(edges);
    const double total = std::accumulate(masses.begin(), masses.end(), 0.0);
    CHECK(std::abs(total - 1.0) < 1e-8);

    // density ~ y^{1+gamma} near 0 (vanishes), ~ (1-y)^{-0.9} near 1 (spike)
    const double p0 = std::log(stat.density(1e-3) / stat.density(1e-4)) / std::log(10.0);
    CHECK(p0 == doctest::Approx(1.0 + eq.params().gamma).epsilon(0.05));
    const double p1 = std::log(stat.density(1.0 - 1e-4) / stat.density(1.0 - 1e-3))
                    / std::log(10.0);
    CHECK(p1 == doctest::Approx(0.9).epsilon(0.05));

    // the free-function wrapper matches the class
    const std::vector<double> dens = stationary_density(eq, {0.25, 0.5, 0.75});
    CHECK(dens[1] == doctest::Approx(stat.density(0.5)).epsilon(1e-12));
}

TEST_CASE("the speed measure of the delta = 0 preset is not normalizable") {
    const auto& eq = testutil::regression_equilibrium();
    CHECK_THROWS_AS(StationaryDistribution(eq, 0.5), NumericalError);
    CHECK_THROWS_AS(stationary_density(eq, {0.5}), NumericalError);
}

TEST_CASE("ergodic distance: identity, synthetic sampler calibration, mismatch") {
    const auto& eq = testutil::reference_equilibrium();
    StationaryDistribution stat(eq, 0.5);
    std::vector<double> edges(51);
    for (int i = 0; i <= 50; ++i) edges[i] = i / 50.0;
    const std::vector<double> masses = stat.bin_masses(edges);

    CHECK(ergodic_distance(masses, masses) == 0.0);
    CHECK_THROWS_AS(ergodic_distance(std::vector<double>(49, 0.0), masses), ConfigError);

    // exact-sampling oracle at 10^5 draws (the full 10^6 run lives in the
    // acceptance suite): TV well below 0.05
    std::vector<double> occ(50, 0.0);
    std::uint64_t state = 0x12345678ull;
    auto unit = [&]() {
        state ^= state << 13; state ^= state >> 7; state ^= state << 17;
        return (static_cast<double>(state >> 11) + 0.5) * 0x1.0p-53;
    };
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double y = stat.sample(unit());
        std::size_t b = static_cast<std::size_t>(y * 50.0);
        if (b >= 50) b = 49;
        occ[b] += 1.0;
    }
    for (double& v : occ) v /= n;
    CHECK(ergodic_distance(occ, masses) < 0.05);
}

TEST_CASE("euler and logit schemes agree within MC error bars") {
    const auto& eq = testutil::reference_equilibrium();
    SimConfig cfg;
    cfg.n_paths = 200;
    cfg.horizon = 60.0;
    cfg.dt = 1e-3;
    cfg.seed = 7;
    cfg.init_from_density = true;
    cfg.scheme = Scheme::EulerMaruyama;
    const OccupationStats a = simulate(eq, cfg);
    cfg.seed = 8;
    const OccupationStats noise = simulate(eq, cfg);  // seed-to-seed error bar
    cfg.seed = 7;
    cfg.scheme = Scheme::LogitTransform;
    const OccupationStats b = simulate(eq, cfg);
    const double tv_schemes = ergodic_distance(a.occupation, b.occupation);
    const double tv_noise = ergodic_distance(a.occupation, noise.occupation);
    CHECK(tv_schemes <= 2.0 * tv_noise + 0.02);
}

TEST_CASE("delta = 0 regression: median terminal share climbs toward 1") {
    const auto& eq = testutil::regression_equilibrium();
    SimConfig cfg;
    cfg.n_paths = 128;
    cfg.dt = 1e-3;
    cfg.seed = 11;
    cfg.y0 = 0.5;
    cfg.horizon = 25.0;
    const double m_short = median_of(simulate(eq, cfg).terminal_values);
    cfg.horizon = 150.0;
    const double m_long = median_of(simulate(eq, cfg).terminal_values);
    CHECK(m_long > m_short);
    CHECK(m_long > 0.8);
}

TEST_CASE("clamp events are counted and the red flag reflects the rate") {
    const auto& eq = testutil::reference_equilibrium();
    SimConfig cfg = small_cfg();
    cfg.init_from_density = true;  // starts inside the near-boundary spike
    cfg.horizon = 20.0;
    const OccupationStats a = simulate(eq, cfg);
    CHECK(a.clamp_rate == doctest::Approx(static_cast<double>(a.clamp_events)
                                          / (64.0 * 20.0)).epsilon(1e-12));
    CHECK(a.clamp_red_flag == (a.clamp_rate > 1e-4));
}
