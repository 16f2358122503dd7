#ifndef EQUISHOOT_SURVIVAL_HPP
#define EQUISHOOT_SURVIVAL_HPP

#include <optional>
#include <vector>

#include "equishoot/equilibrium.hpp"

namespace equishoot {

// Scale density rho(y) = exp{-2 int_a^y mu_Y/sigma_Y^2 dx}, rho(anchor) = 1.
// The exponent integral is accumulated once on a panel grid (geometric near
// both endpoints); point evaluations add a partial Gauss-Kronrod panel, so
// there is no interpolation error in rho.
class ScaleDensity {
public:
    ScaleDensity(const EquilibriumFunctions& eq, double anchor, double y_min = 1e-13);

    double anchor() const { return anchor_; }
    double log_rho(double y) const;
    double rho(double y) const;
    // 1/(rho sigma_Y^2), the speed-measure density in the y coordinate.
    double speed_integrand(double y) const;

    const EquilibriumFunctions& eq() const { return *eq_; }

private:
    const EquilibriumFunctions* eq_;
    double anchor_;
    double y_min_;
    std::vector<double> nodes_;
    std::vector<double> exponent_;  // E(node), E(anchor) = 0
};

double scale_density(double y, double anchor, const EquilibriumFunctions& eq);

// One fitted power-law tail: v(u) ~ C u^{-p} as u -> 0 (u is the distance to
// the boundary). `divergent` is empty inside the guard band |p-1| <= guard.
struct TailDiagnosis {
    double exponent = 0.0;      // p
    double prefactor = 0.0;     // C
    std::optional<bool> divergent;
    double tail_integral = 0.0; // int_0^cut C u^{-p} du when finite
};

struct ScaleLimits {
    TailDiagnosis at0, at1;
    bool s0_diverges = false, s1_diverges = false;
};

// Fits rho near both boundaries and decides divergence of the scale function.
// Throws InconclusiveTail when a fitted exponent lands in the guard band.
ScaleLimits scale_limits(double anchor, const EquilibriumFunctions& eq);

struct SpeedMassResult {
    double mass = 0.0;           // +inf when the speed measure is not finite
    bool finite = false;
    TailDiagnosis at0, at1;      // tails of the speed integrand
};

// Total speed-measure mass int_0^1 1/(rho sigma_Y^2) dx with exponent-aware
// analytic tails. Throws InconclusiveTail inside the guard band.
SpeedMassResult speed_mass(const EquilibriumFunctions& eq, double anchor = 0.5);

enum class SurvivalClass { BothSurvive, Trader2Extinct, Indeterminate };
enum class Provenance { PaperProved, NumericallyIndicated };

const char* survival_class_name(SurvivalClass c);
const char* provenance_name(Provenance p);

struct SurvivalReport {
    double anchor = 0.5;
    double exp0 = 0.0, exp1 = 0.0;            // fitted rho exponents
    double speed_exp0 = 0.0, speed_exp1 = 0.0;  // fitted speed-integrand exponents
    bool s0_diverges = false, s1_diverges = false;
    bool s0_inconclusive = false, s1_inconclusive = false, mass_inconclusive = false;
    double speed_mass = 0.0;                  // +inf when infinite
    bool speed_mass_finite = false;
    SurvivalClass classification = SurvivalClass::Indeterminate;
    Provenance provenance = Provenance::NumericallyIndicated;
};

// Combines scale limits and speed mass; InconclusiveTail is absorbed into
// Indeterminate rather than thrown.
SurvivalReport classify(const ModelParams& p, const EquilibriumFunctions& eq,
                        double anchor = 0.5);

enum class PrietoClass { BothSurvive, RecurrentBoundary, Trader2ExtinctIndicated };

const char* prieto_class_name(PrietoClass c);

struct PrietoReport {
    double eta = 0.0;
    PrietoClass classification = PrietoClass::RecurrentBoundary;
    double limit_at0 = 0.0;  // y mu/sigma^2 -> (1+gamma)/2
    double limit_at1 = 0.0;  // (1-y) mu/sigma^2 -> (1-gamma)(2 mu_D - (2+gamma) sigma_D^2)/(2 sigma_D^2)
};

// Log-utility restricted trader variant; classification from
// eta = (1-gamma)(2 + gamma - 2 mu_D/sigma_D^2).
PrietoReport prieto_classify(double gamma, double mu_d, double sigma_d);

} // namespace equishoot

#endif
