#ifndef EQUISHOOT_PARAMS_HPP
#define EQUISHOOT_PARAMS_HPP

#include "equishoot/errors.hpp"

namespace equishoot {

// Raw economic primitives as supplied by the user.
struct RawParams {
    double gamma  = 0.5;    // relative risk aversion, in (0,1)
    double sigma_d = 0.2;   // dividend volatility, > 0
    double mu_d   = 0.01;   // dividend drift
    double beta1  = 0.056;  // trader 1 time preference
    double beta2  = 0.05;   // trader 2 time preference
    double d0     = 1.0;    // initial dividend level, > 0
    double theta2 = 1.0;    // trader 2 initial money-market shares, > 0
};

// Validated primitives plus the derived ODE constants.
//   delta = 2(beta2 - beta1)/sigma_d^2
//   a_cap = (2 beta2 + sigma_d^2 - (1-gamma)(2 mu_d - gamma sigma_d^2)) / sigma_d^2
struct ModelParams {
    double gamma, sigma_d, mu_d, beta1, beta2, d0, theta2;
    double delta;
    double a_cap;

    double sigma_d2() const { return sigma_d * sigma_d; }
    // Lower admissibility bound for a_cap.
    double a_cap_floor() const { return 1.0 + delta - 2.0 * delta / gamma; }
    // Denominator of the terminal-slope closed form; positive for valid params.
    double slope_denominator() const { return gamma * (a_cap - delta - 1.0) + 2.0 * delta; }
    // Closed-form h'(1).
    double terminal_slope_closed_form() const {
        return (1.0 - gamma) * (gamma * gamma + gamma - delta) / slope_denominator();
    }
    // Right-hand side of the critical exponential identity, A - gamma + delta(1-gamma)/gamma.
    double critical_f_limit() const {
        return a_cap - gamma + delta * (1.0 - gamma) / gamma;
    }
};

enum class RegimeTag {
    BothSurviveProved,  // delta in (-gamma, -gamma^2): survival of both traders is provable
    UnprovedRegion,     // delta in [-gamma^2, 0]: classified numerically downstream
};

// Validates raw primitives and derives (delta, a_cap). Throws ValidationError.
// With allow_zero_delta the boundary case delta == 0 (equal time preferences)
// is admitted for regression runs against the equal-preference model.
ModelParams derive_params(const RawParams& raw, bool allow_zero_delta = false);

RegimeTag survival_regime(const ModelParams& p);

const char* regime_name(RegimeTag t);

} // namespace equishoot

#endif
