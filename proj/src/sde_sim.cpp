#include "equishoot/sde_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <thread>

#include "equishoot/extrapolate.hpp"
#include "equishoot/quad.hpp"

namespace equishoot {

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::EulerMaruyama:  return "euler";
        case Scheme::LogitTransform: return "logit";
    }
    return "?";
}

namespace {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Small deterministic normal generator: xorshift-multiply stream plus
// Box-Muller. Fixing the transform keeps emitted files byte-identical
// across standard libraries.
class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::uint64_t stream) {
        state_ = splitmix64(seed ^ splitmix64(stream * 0x9E3779B97F4A7C15ull + 1));
        if (state_ == 0) state_ = 0x106689D45497FDB5ull;
    }

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_unit();
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double next_unit() {  // uniform in (0,1]
        state_ ^= state_ << 13;
        state_ ^= state_ >> 7;
        state_ ^= state_ << 17;
        const std::uint64_t mixed = splitmix64(state_);
        return (static_cast<double>(mixed >> 11) + 1.0) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

std::size_t thread_budget(std::size_t n_paths) {
    std::size_t n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("EQUISHOOT_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) n = static_cast<std::size_t>(v);
    }
    return std::max<std::size_t>(1, std::min(n, n_paths));
}

} // namespace

StationaryDistribution::StationaryDistribution(const EquilibriumFunctions& eq,
                                               double anchor)
    : sd_(eq, anchor) {
    // Tail of the speed integrand at 1 decides normalizability.
    std::vector<double> us, vs;
    const double lo = 1e-5, hi = 1e-3;
    for (int i = 0; i < 16; ++i) {
        const double u = lo * std::pow(hi / lo, i / 15.0);
        us.push_back(u);
        vs.push_back(sd_.speed_integrand(1.0 - u));
    }
    const PowerLawFit f1 = fit_power_law(us, vs);
    tail_p1_ = f1.exponent;
    tail_c1_ = f1.prefactor;
    if (tail_p1_ >= 1.0 - 0.02) {
        std::ostringstream os;
        os << "speed measure not normalizable: tail exponent at 1 is " << tail_p1_;
        throw NumericalError(NumericalError::Kind::NotNormalizable, os.str());
    }

    // Cumulative mass nodes, geometric toward both boundaries.
    const double y_min = 1e-12;
    const double ratio = 1.05;
    std::vector<double> nodes;
    for (double y = y_min; y < 0.05; y *= ratio) nodes.push_back(y);
    for (double y = 0.05; y < 0.95; y += 0.005) nodes.push_back(y);
    for (double u = 0.05; u > y_min; u /= ratio) nodes.push_back(1.0 - u);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    nodes_ = std::move(nodes);

    std::vector<double> cum(nodes_.size(), 0.0);
    auto w = [this](double x) { return sd_.speed_integrand(x); };
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i)
        cum[i + 1] = cum[i] + gk15(w, nodes_[i], nodes_[i + 1]).first;

    const double u_last = 1.0 - nodes_.back();
    const double tail_mass = tail_c1_ * std::pow(u_last, 1.0 - tail_p1_) / (1.0 - tail_p1_);
    mass_ = cum.back() + tail_mass;  // left tail below y_min is negligible (decaying integrand)

    cdf_ = std::move(cum);
    for (double& c : cdf_) c /= mass_;
}

double StationaryDistribution::density(double y) const {
    if (!(y > 0.0 && y < 1.0)) throw DomainError("density requires y in (0,1)");
    return sd_.speed_integrand(y) / mass_;
}

double StationaryDistribution::cum_at(double y) const {
    if (y <= nodes_.front()) return 0.0;
    if (y >= nodes_.back()) {
        const double u = 1.0 - y;
        const double u_last = 1.0 - nodes_.back();
        const double tail_here = tail_c1_ * std::pow(std::max(u, 0.0), 1.0 - tail_p1_)
                               / (1.0 - tail_p1_);
        const double tail_last = tail_c1_ * std::pow(u_last, 1.0 - tail_p1_)
                               / (1.0 - tail_p1_);
        return cdf_.back() * mass_ + (tail_last - tail_here);
    }
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), y);
    const std::size_t k = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    auto w = [this](double x) { return sd_.speed_integrand(x); };
    return cdf_[k] * mass_ + gk15(w, nodes_[k], y).first;
}

std::vector<double> StationaryDistribution::bin_masses(
        const std::vector<double>& edges) const {
    std::vector<double> out(edges.size() > 0 ? edges.size() - 1 : 0);
    double prev = 0.0;  // cum at edge 0 (= 0 for edge at y=0)
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double hi = edges[i + 1];
        const double cum_hi = hi >= 1.0 ? mass_ : cum_at(hi);
        out[i] = (cum_hi - prev) / mass_;
        prev = cum_hi;
    }
    return out;
}

double StationaryDistribution::sample(double u01) const {
    const double target = u01;
    if (target >= cdf_.back()) {
        // invert the analytic tail at 1
        const double rem = (1.0 - target) * mass_;
        const double u = std::pow(std::max(rem, 0.0) * (1.0 - tail_p1_) / tail_c1_,
                                  1.0 / (1.0 - tail_p1_));
        return std::min(1.0 - u, 1.0 - 1e-15);
    }
    auto it = std::lower_bound(cdf_.begin(), cdf_.end(), target);
    std::size_t k = static_cast<std::size_t>(it - cdf_.begin());
    if (k == 0) return nodes_.front();
    const double c0 = cdf_[k - 1], c1 = cdf_[k];
    const double t = c1 > c0 ? (target - c0) / (c1 - c0) : 0.5;
    return nodes_[k - 1] + t * (nodes_[k] - nodes_[k - 1]);
}

OccupationStats simulate(const EquilibriumFunctions& eq, const SimConfig& cfg) {
    if (!(cfg.dt > 0.0) || !(cfg.horizon >= cfg.dt))
        throw ConfigError("simulate requires dt > 0 and horizon >= dt");
    if (!(cfg.clamp_eps > 0.0 && cfg.clamp_eps < 0.5))
        throw ConfigError("simulate requires clamp_eps in (0, 0.5)");
    if (!(cfg.y0 > 0.0 && cfg.y0 < 1.0))
        throw ConfigError("simulate requires y0 in (0,1)");
    if (cfg.n_paths == 0 || cfg.n_bins == 0)
        throw ConfigError("simulate requires n_paths > 0 and n_bins > 0");
    if (!(cfg.burn_in >= 0.0 && cfg.burn_in < 1.0))
        throw ConfigError("simulate requires burn_in in [0,1)");

    const std::size_t n_steps = static_cast<std::size_t>(std::llround(cfg.horizon / cfg.dt));
    const std::size_t burn_steps = static_cast<std::size_t>(cfg.burn_in * n_steps);
    const double sqdt = std::sqrt(cfg.dt);
    const double lo = cfg.clamp_eps, hi = 1.0 - cfg.clamp_eps;
    const std::size_t nb = cfg.n_bins;

    std::vector<double> starts(cfg.n_paths, cfg.y0);
    if (cfg.init_from_density) {
        StationaryDistribution stat(eq, cfg.anchor);
        for (std::size_t p = 0; p < cfg.n_paths; ++p) {
            NormalStream rng(cfg.seed ^ 0x5EEDFACEull, p);
            double y = stat.sample(rng.next_unit());
            starts[p] = std::min(std::max(y, lo), hi);
        }
    }

    struct PathOut {
        std::vector<double> hist;
        double terminal = 0.0;
        std::uint64_t clamps = 0;
        bool aborted = false;
    };
    std::vector<PathOut> outs(cfg.n_paths);

    auto run_path = [&](std::size_t pidx) {
        PathOut& out = outs[pidx];
        out.hist.assign(nb, 0.0);
        NormalStream rng(cfg.seed, pidx);
        double y = starts[pidx];
        double z = std::log(y / (1.0 - y));
        for (std::size_t k = 0; k < n_steps; ++k) {
            const double xi = rng.next();
            if (cfg.scheme == Scheme::EulerMaruyama) {
                y += eq.mu_y(y) * cfg.dt + eq.sigma_y(y) * sqdt * xi;
            } else {
                const double mu = eq.mu_y(y), sg = eq.sigma_y(y);
                const double jac = 1.0 / (y * (1.0 - y));
                const double mu_z = mu * jac
                                  + 0.5 * sg * sg * (2.0 * y - 1.0) * jac * jac;
                z += mu_z * cfg.dt + sg * jac * sqdt * xi;
                y = 1.0 / (1.0 + std::exp(-z));
            }
            if (!std::isfinite(y)) {
                out.aborted = true;
                break;
            }
            if (y < lo) { y = lo; ++out.clamps; }
            else if (y > hi) { y = hi; ++out.clamps; }
            if (cfg.scheme == Scheme::LogitTransform)
                z = std::log(y / (1.0 - y));
            if (k >= burn_steps) {
                std::size_t bin = static_cast<std::size_t>(y * static_cast<double>(nb));
                if (bin >= nb) bin = nb - 1;
                out.hist[bin] += cfg.dt;
            }
        }
        out.terminal = y;
    };

    const std::size_t n_threads = thread_budget(cfg.n_paths);
    if (n_threads == 1) {
        for (std::size_t p = 0; p < cfg.n_paths; ++p) run_path(p);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (std::size_t t = 0; t < n_threads; ++t) {
            pool.emplace_back([&, t]() {
                for (std::size_t p = t; p < cfg.n_paths; p += n_threads) run_path(p);
            });
        }
        for (auto& th : pool) th.join();
    }

    OccupationStats stats;
    stats.bin_edges.resize(nb + 1);
    for (std::size_t i = 0; i <= nb; ++i)
        stats.bin_edges[i] = static_cast<double>(i) / static_cast<double>(nb);
    stats.occupation.assign(nb, 0.0);
    stats.terminal_values.reserve(cfg.n_paths);
    // deterministic reduction in path order
    for (std::size_t p = 0; p < cfg.n_paths; ++p) {
        const PathOut& o = outs[p];
        for (std::size_t b = 0; b < nb; ++b) stats.occupation[b] += o.hist[b];
        stats.terminal_values.push_back(o.terminal);
        stats.clamp_events += o.clamps;
        if (o.aborted) ++stats.aborted_paths;
    }
    double total = 0.0;
    for (double v : stats.occupation) total += v;
    if (total > 0.0)
        for (double& v : stats.occupation) v /= total;
    stats.clamp_rate = static_cast<double>(stats.clamp_events)
                     / (static_cast<double>(cfg.n_paths) * cfg.horizon);
    stats.clamp_red_flag = stats.clamp_rate > 1e-4;
    return stats;
}

std::vector<double> stationary_density(const EquilibriumFunctions& eq,
                                       const std::vector<double>& grid,
                                       double anchor) {
    StationaryDistribution stat(eq, anchor);
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = stat.density(grid[i]);
    return out;
}

double ergodic_distance(const std::vector<double>& occupation,
                        const std::vector<double>& density_masses) {
    if (occupation.size() != density_masses.size() || occupation.empty())
        throw ConfigError("BinMismatch: occupation and density bins differ");
    double tv = 0.0;
    for (std::size_t i = 0; i < occupation.size(); ++i)
        tv += std::abs(occupation[i] - density_masses[i]);
    return 0.5 * tv;
}

double ergodic_distance(const OccupationStats& stats,
                        const std::vector<double>& density_masses) {
    return ergodic_distance(stats.occupation, density_masses);
}

} // namespace equishoot
