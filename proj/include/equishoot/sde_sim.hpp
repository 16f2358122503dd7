#ifndef EQUISHOOT_SDE_SIM_HPP
#define EQUISHOOT_SDE_SIM_HPP

#include <cstdint>
#include <vector>

#include "equishoot/survival.hpp"

namespace equishoot {

enum class Scheme { EulerMaruyama, LogitTransform };

const char* scheme_name(Scheme s);

struct SimConfig {
    double y0 = 0.5;
    double dt = 1e-3;
    double horizon = 500.0;
    std::size_t n_paths = 1000;
    std::uint64_t seed = 12345;
    double clamp_eps = 1e-9;
    Scheme scheme = Scheme::EulerMaruyama;
    double burn_in = 0.2;       // fraction of the horizon discarded
    std::size_t n_bins = 50;
    // Draw each path's start from the stationary (speed) density instead of
    // the fixed y0. The y = 1 boundary layer mixes on O(1/sigma_D^2 * log^2)
    // time scales far beyond desk horizons, so occupation-vs-density checks
    // need equilibrium starts.
    bool init_from_density = false;
    double anchor = 0.5;        // anchor for the density used by init/compare
};

struct OccupationStats {
    std::vector<double> bin_edges;       // n_bins + 1 edges on [0,1]
    std::vector<double> occupation;      // time-weighted, sums to 1
    std::vector<double> terminal_values; // one per path
    std::uint64_t clamp_events = 0;
    double clamp_rate = 0.0;             // events per path per unit time
    bool clamp_red_flag = false;         // rate above 1e-4
    std::size_t aborted_paths = 0;       // non-finite states encountered
};

// Stationary distribution of the share process: density proportional to the
// speed integrand 1/(rho sigma_Y^2), normalized by the total speed mass.
class StationaryDistribution {
public:
    StationaryDistribution(const EquilibriumFunctions& eq, double anchor = 0.5);

    double mass() const { return mass_; }
    double density(double y) const;
    // Probability mass of each bin given edges on [0,1].
    std::vector<double> bin_masses(const std::vector<double>& edges) const;
    // Inverse-CDF sample from a uniform draw in (0,1).
    double sample(double u01) const;

private:
    ScaleDensity sd_;
    double mass_ = 0.0;
    std::vector<double> nodes_;  // CDF support nodes
    std::vector<double> cdf_;    // normalized CDF at nodes
    double tail_c1_ = 0.0, tail_p1_ = 0.0;  // analytic speed tail at y = 1
    double cum_at(double y) const;          // unnormalized cumulative mass
};

// Simulates n_paths trajectories of dY = mu_Y dt + sigma_Y dB with
// deterministic per-path RNG streams derived from (seed, path index).
// Results are independent of thread count (EQUISHOOT_THREADS caps it).
OccupationStats simulate(const EquilibriumFunctions& eq, const SimConfig& cfg);

// Normalized stationary density evaluated on a grid. Throws NotNormalizable
// when the speed mass is infinite.
std::vector<double> stationary_density(const EquilibriumFunctions& eq,
                                       const std::vector<double>& grid,
                                       double anchor = 0.5);

// Total-variation distance between an occupation histogram and the
// stationary bin masses: 0.5 * sum |occ_i - mass_i|.
double ergodic_distance(const std::vector<double>& occupation,
                        const std::vector<double>& density_masses);

double ergodic_distance(const OccupationStats& stats,
                        const std::vector<double>& density_masses);

} // namespace equishoot

#endif
