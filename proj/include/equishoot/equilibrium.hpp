#ifndef EQUISHOOT_EQUILIBRIUM_HPP
#define EQUISHOOT_EQUILIBRIUM_HPP

#include <utility>
#include <vector>

#include "equishoot/interp.hpp"
#include "equishoot/params.hpp"
#include "equishoot/shooting.hpp"

namespace equishoot {

// Equilibrium functions built from a certified critical solution. Immutable
// after construction; all evaluations are pure.
class EquilibriumFunctions {
public:
    EquilibriumFunctions(const ModelParams& p, const CriticalSolution& cs);

    const ModelParams& params() const { return params_; }
    double xi0() const { return xi0_; }
    double slope_end() const { return slope_end_; }
    double i_end() const { return i_end_; }

    // Interpolated critical h with the boundary values gamma and 1 pinned.
    double h(double y) const;
    // Interpolated running integral I(y) with I(0) = 0 and I(1) pinned.
    double i_log(double y) const;

    // g(0) = (2/xi0)(1-gamma)^{-gamma}
    double g0() const { return g0_; }

    double sigma_y(double y) const;
    double mu_y(double y) const;
    // mu_Y/sigma_Y^2 in a form stable at both endpoints.
    double drift_over_var(double y) const;
    double rate(double y) const;
    double mpr(double y) const;
    double wealth_weight(double y) const;   // g(y); returns 0 at y = 1

private:
    ModelParams params_;
    double xi0_, g0_, slope_end_, i_end_;
    PchipInterpolant h_interp_, i_interp_;
};

// Free-function forms of the evaluators.
std::pair<double, double> drift_vol(double y, const EquilibriumFunctions& eq);
std::pair<double, double> rate_and_mpr(double y, const EquilibriumFunctions& eq);
double wealth_weight(double y, const EquilibriumFunctions& eq);

// Unique root of g(y) D0 (1-y)^gamma = theta2; bisection to 1e-12 absolute.
double solve_initial_share(double theta2, const EquilibriumFunctions& eq);

// c1 = d*y, c2 = d - c1, so c1 + c2 == d exactly.
std::pair<double, double> consumption_rates(double d_t, double y_t);

struct EquilibriumRow {
    double y, h, r, kappa, mu_y, sigma_y, g;
};

// Uniform n-point grid on [0,1] intersected with [eps, 1-eps].
std::vector<EquilibriumRow> tabulate(const EquilibriumFunctions& eq,
                                     std::size_t n = 1001, double eps = 1e-6);

} // namespace equishoot

#endif
