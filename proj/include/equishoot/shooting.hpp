#ifndef EQUISHOOT_SHOOTING_HPP
#define EQUISHOOT_SHOOTING_HPP

#include "equishoot/ode_core.hpp"

namespace equishoot {

enum class XiClass { Subcritical, Supercritical, Indeterminate };

const char* xi_class_name(XiClass c);

struct ShootOptions {
    double eps0 = 1e-8;
    double eps1 = 1e-6;            // classification cutoff y_end = 1 - eps1
    double margin_factor = 10.0;   // subcritical needs h(y_end) < 1 - margin_factor*tol
    double xi_ceiling_factor = 1e8;  // bracket doubling gives up at factor*sigma_d^2
};

// Supercritical iff the trajectory crosses h = 1 or explodes before y_end;
// Subcritical iff it reaches y_end with h(y_end) < 1 - margin;
// Indeterminate in the sliver between (bracket already tight).
XiClass classify_xi(double xi, const ModelParams& p, double tol,
                    const ShootOptions& opts = {});

struct CriticalSolution {
    double xi0 = 0.0;
    SolutionCurve curve;        // tight re-integration at xi0
    double h_end = 0.0;         // extrapolated h(1)
    double slope_end = 0.0;     // extrapolated h'(1)
    double i_end = 0.0;         // extrapolated I(1)
    double identity_residual = 0.0;  // relative error in the exponential identity
    double bracket_width = 0.0;
    double alpha = 0.0;         // fractional terminal exponent used in extrapolation
};

// Bisection on xi between a seed inside the guaranteed-subcritical interval
// and a doubled-up supercritical bound. xi_tol is relative.
CriticalSolution find_xi0(const ModelParams& p, double xi_tol = 1e-14,
                          double ode_tol = 1e-10, const ShootOptions& opts = {});

struct CertifyOptions {
    double tol_h_end = 1e-6;
    double tol_slope_rel = 1e-3;
    double tol_identity_rel = 1e-4;
    double tol_bounds = 1e-8;
    double fd_tol = 1e-6;          // tolerance for the finite-difference residual run
    double fd_max_step = 5e-4;
    double fd_lo = 0.05, fd_hi = 0.95;
};

struct CertificateReport {
    double xi0 = 0.0;
    double h_end = 0.0;
    double slope_end = 0.0;
    double slope_closed_form = 0.0;
    double identity_lhs = 0.0;
    double identity_rhs = 0.0;
    double h_min = 0.0, h_max = 0.0;
    // residuals
    double res_h_end = 0.0;        // |h_end - 1|
    double res_slope_rel = 0.0;
    double res_identity_rel = 0.0;
    double res_h_min = 0.0;        // max(0, gamma - min h)
    double res_h_max = 0.0;        // max(0, max h - 1)
    double res_ode_max = 0.0;      // scaled max FD-vs-rhs residual
    bool passed = false;
};

CertificateReport certify(const CriticalSolution& cs, const ModelParams& p,
                          const CertifyOptions& opts = {});

// Terminal fractional exponent of the critical solution at y = 1, from the
// local linearization: 1+alpha solves x^2 + c* x - F(1) = 0.
double terminal_alpha(const ModelParams& p);

} // namespace equishoot

#endif
