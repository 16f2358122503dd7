#include "equishoot/equilibrium.hpp"

#include <cmath>
#include <sstream>

namespace equishoot {

namespace {

void check_open_unit(double y, const char* who) {
    if (!(y > 0.0 && y < 1.0)) {
        std::ostringstream os;
        os << who << " requires y in (0,1), got " << y;
        throw DomainError(os.str());
    }
}

} // namespace

EquilibriumFunctions::EquilibriumFunctions(const ModelParams& p,
                                           const CriticalSolution& cs)
    : params_(p), xi0_(cs.xi0), slope_end_(cs.slope_end), i_end_(cs.i_end) {
    g0_ = 2.0 / xi0_ * std::pow(1.0 - p.gamma, -p.gamma);

    const auto& c = cs.curve;
    std::vector<double> xs, hs, is;
    xs.reserve(c.grid.size() + 2);
    hs.reserve(c.grid.size() + 2);
    is.reserve(c.grid.size() + 2);
    // pin the proven boundary values
    xs.push_back(0.0);
    hs.push_back(p.gamma);
    is.push_back(0.0);
    for (std::size_t k = 0; k < c.grid.size(); ++k) {
        xs.push_back(c.grid[k]);
        hs.push_back(c.h_vals[k]);
        is.push_back(c.i_vals[k]);
    }
    xs.push_back(1.0);
    hs.push_back(1.0);
    is.push_back(cs.i_end);

    h_interp_ = PchipInterpolant(xs, hs);
    i_interp_ = PchipInterpolant(std::move(xs), std::move(is));
}

double EquilibriumFunctions::h(double y) const {
    if (!(y >= 0.0 && y <= 1.0)) throw DomainError("h requires y in [0,1]");
    return h_interp_(y);
}

double EquilibriumFunctions::i_log(double y) const {
    if (!(y >= 0.0 && y <= 1.0)) throw DomainError("i_log requires y in [0,1]");
    return i_interp_(y);
}

double EquilibriumFunctions::sigma_y(double y) const {
    check_open_unit(y, "sigma_y");
    return params_.sigma_d * (1.0 - y) / h(y);
}

double EquilibriumFunctions::drift_over_var(double y) const {
    check_open_unit(y, "drift_over_var");
    const double g = params_.gamma, d = params_.delta;
    const double hv = h(y);
    const double num = y * hv * (2.0 * g * g + d * y * hv)
                     - g * (g + 1.0) * (2.0 * y - 1.0);
    return num / (2.0 * g * y * (1.0 - y));
}

double EquilibriumFunctions::mu_y(double y) const {
    check_open_unit(y, "mu_y");
    const double g = params_.gamma, d = params_.delta;
    const double hv = h(y);
    const double num = y * hv * (2.0 * g * g + d * y * hv)
                     - g * (g + 1.0) * (2.0 * y - 1.0);
    return params_.sigma_d2() * (1.0 - y) * num / (2.0 * g * y * hv * hv);
}

double EquilibriumFunctions::rate(double y) const {
    check_open_unit(y, "rate");
    const double g = params_.gamma;
    const double s2 = params_.sigma_d2();
    const double hv = h(y);
    return params_.beta2 + y * (params_.beta1 - params_.beta2) + g * params_.mu_d
         - 0.5 * g * (g + 1.0) * s2
         - g * (g + 1.0) * s2 * (1.0 - y) / (2.0 * y * hv * hv);
}

double EquilibriumFunctions::mpr(double y) const {
    check_open_unit(y, "mpr");
    return params_.gamma * params_.sigma_d * ((1.0 - y) / (y * h(y)) + 1.0);
}

double EquilibriumFunctions::wealth_weight(double y) const {
    if (!(y >= 0.0 && y <= 1.0)) throw DomainError("wealth_weight requires y in [0,1]");
    if (y == 1.0) return 0.0;
    // int_0^y h/(1-q) dq = I(y) - log(1-y), so g = g0 (1-y) exp(-I(y)).
    return g0_ * (1.0 - y) * std::exp(-i_log(y));
}

std::pair<double, double> drift_vol(double y, const EquilibriumFunctions& eq) {
    return {eq.mu_y(y), eq.sigma_y(y)};
}

std::pair<double, double> rate_and_mpr(double y, const EquilibriumFunctions& eq) {
    return {eq.rate(y), eq.mpr(y)};
}

double wealth_weight(double y, const EquilibriumFunctions& eq) {
    return eq.wealth_weight(y);
}

double solve_initial_share(double theta2, const EquilibriumFunctions& eq) {
    const ModelParams& p = eq.params();
    const double cap = eq.g0() * p.d0;
    if (!(theta2 > 0.0 && theta2 < cap)) {
        std::ostringstream os;
        os << "theta2 = " << theta2 << " outside the solvable range (0, g(0)*D0) = (0, "
           << cap << ")";
        throw ValidationError(ValidationError::Code::ThetaOutOfRange, os.str());
    }
    auto clearing = [&](double y) {
        return eq.wealth_weight(y) * p.d0 * std::pow(1.0 - y, p.gamma);
    };
    double lo = 0.0, hi = 1.0;  // clearing decreasing: value cap at 0, 0 at 1
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (clearing(mid) > theta2) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::pair<double, double> consumption_rates(double d_t, double y_t) {
    if (!(d_t > 0.0)) throw DomainError("consumption_rates requires d > 0");
    check_open_unit(y_t, "consumption_rates");
    const double c1 = d_t * y_t;
    return {c1, d_t - c1};
}

std::vector<EquilibriumRow> tabulate(const EquilibriumFunctions& eq,
                                     std::size_t n, double eps) {
    std::vector<EquilibriumRow> rows;
    rows.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        double y = n > 1 ? static_cast<double>(k) / static_cast<double>(n - 1) : 0.5;
        y = std::min(std::max(y, eps), 1.0 - eps);
        EquilibriumRow r;
        r.y = y;
        r.h = eq.h(y);
        r.r = eq.rate(y);
        r.kappa = eq.mpr(y);
        r.mu_y = eq.mu_y(y);
        r.sigma_y = eq.sigma_y(y);
        r.g = eq.wealth_weight(y);
        rows.push_back(r);
    }
    return rows;
}

} // namespace equishoot
