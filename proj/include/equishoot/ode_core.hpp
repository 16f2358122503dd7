#ifndef EQUISHOOT_ODE_CORE_HPP
#define EQUISHOOT_ODE_CORE_HPP

#include <vector>

#include "equishoot/params.hpp"

namespace equishoot {

// State of the augmented system: h together with the running integral
// I(y) = int_0^y (h(q)-1)/(1-q) dq that removes the path dependence.
struct OdeState {
    double y = 0.0;
    double h = 0.0;
    double i_log = 0.0;
};

enum class CurveOutcome {
    ReachedEnd,   // integrated to y_end with h < 1 throughout
    CrossedOne,   // h hit 1 from below; y_cross holds the refined location
    Exploded,     // |h| exceeded the ceiling; y_blow holds the location
};

struct SolutionCurve {
    double xi = 0.0;
    std::vector<double> grid;     // strictly increasing y values
    std::vector<double> h_vals;
    std::vector<double> i_vals;
    std::vector<double> hd_vals;  // dh/dy at the grid points (from the rhs)
    CurveOutcome outcome = CurveOutcome::ReachedEnd;
    double y_cross = 0.0;  // set when outcome == CrossedOne
    double y_blow = 0.0;   // set when outcome == Exploded

    double h_end() const { return h_vals.back(); }
    double i_end() const { return i_vals.back(); }
    double y_end() const { return grid.back(); }
};

struct IntegrateOptions {
    double eps0 = 1e-8;            // launch offset from the singular point y = 0
    double max_step = 0.01;
    double explosion_ceiling = 10.0;
    double atol_factor = 1e-3;     // atol = tol * atol_factor
    std::vector<double> checkpoints;  // extra y values the grid must contain
};

// Right-hand side of the augmented system. Throws DomainError unless 0 < y < 1.
void rhs(const OdeState& state, double xi, const ModelParams& p,
         double& dh_dy, double& di_dy);

// First-order series launch at y = eps0:
//   h  = gamma + h1*eps0 with h1 = gamma^2 (1 + xi/sigma_d^2 - A)/(2+gamma)
//   I  = (gamma-1)*eps0
OdeState series_start(double xi, const ModelParams& p, double eps0);

double series_slope(double xi, const ModelParams& p);

// Integrates the augmented system from the series launch to y_end, stopping
// early when h crosses 1 (sign change of h-1, root refined on the dense
// output) or when |h| exceeds the explosion ceiling.
SolutionCurve integrate_h(double xi, const ModelParams& p, double tol, double y_end,
                          const IntegrateOptions& opts = {});

// Auxiliary comparison ODE with constant coefficient a3 in place of a2(h,y).
struct FCurve {
    double a3 = 0.0;
    std::vector<double> grid;
    std::vector<double> f_vals;
    double f_end = 0.0;   // extrapolated f(1)
};

// Integrates the f-ODE from (t0, f0) toward 1 and extrapolates f(1).
// For t0 = 0 pass f0 = gamma; the launch uses the series expansion at the
// regular singular point. Closed form for the limit:
//   f(1) = gamma/(2 delta) (a3 + delta + sqrt((a3+delta)^2 + 4 delta)).
FCurve solve_f(double a3, const ModelParams& p, double t0, double f0, double tol);

double f_limit_closed_form(double a3, const ModelParams& p);

// CSV form with header "y,h,i_log", one full-precision row per grid point.
std::string to_csv(const SolutionCurve& curve);

} // namespace equishoot

#endif
