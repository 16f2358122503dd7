#include "equishoot/params.hpp"

#include <cmath>
#include <sstream>

namespace equishoot {

ModelParams derive_params(const RawParams& raw, bool allow_zero_delta) {
    auto fail = [](ValidationError::Code c, const std::string& msg) {
        throw ValidationError(c, std::string(ValidationError::name(c)) + ": " + msg);
    };

    if (!(raw.gamma > 0.0 && raw.gamma < 1.0)) {
        std::ostringstream os;
        os << "gamma must lie in (0,1), got " << raw.gamma;
        fail(ValidationError::Code::GammaOutOfRange, os.str());
    }
    if (!(raw.sigma_d > 0.0)) {
        std::ostringstream os;
        os << "sigma_d must be > 0, got " << raw.sigma_d;
        fail(ValidationError::Code::NonpositiveSigma, os.str());
    }
    if (!(raw.d0 > 0.0)) {
        std::ostringstream os;
        os << "d0 must be > 0, got " << raw.d0;
        fail(ValidationError::Code::NonpositiveD0, os.str());
    }
    if (!(raw.theta2 > 0.0)) {
        std::ostringstream os;
        os << "theta2 must be > 0, got " << raw.theta2;
        fail(ValidationError::Code::NonpositiveTheta, os.str());
    }

    ModelParams p;
    p.gamma = raw.gamma;
    p.sigma_d = raw.sigma_d;
    p.mu_d = raw.mu_d;
    p.beta1 = raw.beta1;
    p.beta2 = raw.beta2;
    p.d0 = raw.d0;
    p.theta2 = raw.theta2;

    const double s2 = raw.sigma_d * raw.sigma_d;
    p.delta = 2.0 * (raw.beta2 - raw.beta1) / s2;
    p.a_cap = (2.0 * raw.beta2 + s2 - (1.0 - raw.gamma) * (2.0 * raw.mu_d - raw.gamma * s2)) / s2;

    const bool delta_ok = allow_zero_delta ? (p.delta > -p.gamma && p.delta <= 0.0)
                                           : (p.delta > -p.gamma && p.delta < 0.0);
    if (!delta_ok) {
        std::ostringstream os;
        os << "delta = 2(beta2-beta1)/sigma_d^2 = " << p.delta
           << " must lie in (-gamma, 0) = (" << -p.gamma << ", 0)";
        fail(ValidationError::Code::DeltaOutOfRange, os.str());
    }

    const double floor = p.a_cap_floor();
    if (!(p.a_cap > floor)) {
        std::ostringstream os;
        os << "A = " << p.a_cap << " must exceed 1 + delta - 2 delta/gamma = " << floor;
        fail(ValidationError::Code::ACapTooSmall, os.str());
    }

    // Equivalent algebraic form of the A bound; keeps the slope formula's
    // denominator positive. Rounding cannot realistically break it, but if it
    // does the parameters are unusable downstream.
    if (!(p.slope_denominator() > 0.0)) {
        std::ostringstream os;
        os << "gamma(A - delta - 1) + 2 delta = " << p.slope_denominator() << " must be > 0";
        fail(ValidationError::Code::ACapTooSmall, os.str());
    }

    return p;
}

RegimeTag survival_regime(const ModelParams& p) {
    const double g2 = p.gamma * p.gamma;
    if (p.delta > -p.gamma && p.delta < -g2) return RegimeTag::BothSurviveProved;
    return RegimeTag::UnprovedRegion;
}

const char* regime_name(RegimeTag t) {
    switch (t) {
        case RegimeTag::BothSurviveProved: return "BothSurviveProved";
        case RegimeTag::UnprovedRegion:    return "UnprovedRegion";
    }
    return "?";
}

} // namespace equishoot
