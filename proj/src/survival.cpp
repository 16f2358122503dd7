#include "equishoot/survival.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "equishoot/extrapolate.hpp"
#include "equishoot/quad.hpp"

namespace equishoot {

namespace {

constexpr double kGuard = 0.02;       // guard band around exponent 1
constexpr double kTailCut = 1e-6;     // quadrature cutoff distance from 0 and 1
constexpr double kFitLo = 1e-5, kFitHi = 1e-3;  // fitting window distances
constexpr int kFitPts = 16;

std::vector<double> fit_window() {
    std::vector<double> u(kFitPts);
    const double step = std::log(kFitHi / kFitLo) / (kFitPts - 1);
    for (int i = 0; i < kFitPts; ++i) u[i] = kFitLo * std::exp(step * i);
    return u;
}

} // namespace

ScaleDensity::ScaleDensity(const EquilibriumFunctions& eq, double anchor, double y_min)
    : eq_(&eq), anchor_(anchor), y_min_(y_min) {
    if (!(anchor > 0.0 && anchor < 1.0))
        throw DomainError("scale density anchor must lie in (0,1)");

    // Panel nodes: geometric toward both endpoints, uniform in the middle.
    const double ratio = 1.08;
    std::vector<double> nodes;
    for (double y = y_min_; y < 0.05; y *= ratio) nodes.push_back(y);
    for (double y = 0.05; y < 0.95; y += 0.0025) nodes.push_back(y);
    for (double u = 0.05; u > y_min_; u /= ratio) nodes.push_back(1.0 - u);
    nodes.push_back(anchor);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    nodes_ = std::move(nodes);

    auto w = [this](double x) { return eq_->drift_over_var(x); };
    exponent_.assign(nodes_.size(), 0.0);
    const std::size_t ia = static_cast<std::size_t>(
        std::lower_bound(nodes_.begin(), nodes_.end(), anchor) - nodes_.begin());
    for (std::size_t i = ia; i + 1 < nodes_.size(); ++i)
        exponent_[i + 1] = exponent_[i] + gk15(w, nodes_[i], nodes_[i + 1]).first;
    for (std::size_t i = ia; i > 0; --i)
        exponent_[i - 1] = exponent_[i] - gk15(w, nodes_[i - 1], nodes_[i]).first;
}

double ScaleDensity::log_rho(double y) const {
    if (!(y > 0.0 && y < 1.0))
        throw DomainError("scale density requires y in (0,1)");
    auto w = [this](double x) { return eq_->drift_over_var(x); };
    double e;
    if (y <= nodes_.front()) {
        e = exponent_.front() - adaptive_quad(w, y, nodes_.front(), 1e-11, 1e-14);
    } else if (y >= nodes_.back()) {
        e = exponent_.back() + adaptive_quad(w, nodes_.back(), y, 1e-11, 1e-14);
    } else {
        auto it = std::upper_bound(nodes_.begin(), nodes_.end(), y);
        const std::size_t k = static_cast<std::size_t>(it - nodes_.begin()) - 1;
        e = exponent_[k] + gk15(w, nodes_[k], y).first;
    }
    return -2.0 * e;
}

double ScaleDensity::rho(double y) const { return std::exp(log_rho(y)); }

double ScaleDensity::speed_integrand(double y) const {
    const double sy = eq_->sigma_y(y);
    return std::exp(-log_rho(y)) / (sy * sy);
}

double scale_density(double y, double anchor, const EquilibriumFunctions& eq) {
    ScaleDensity sd(eq, anchor);
    return sd.rho(y);
}

namespace {

// Fits v ~ C u^{-p} on the standard window near a boundary. side 0 fits in y,
// side 1 fits in u = 1-y.
template <class V>
TailDiagnosis diagnose_tail(V&& value_at_distance, double cut) {
    const std::vector<double> us = fit_window();
    std::vector<double> vs(us.size());
    for (std::size_t i = 0; i < us.size(); ++i) vs[i] = value_at_distance(us[i]);
    const PowerLawFit f = fit_power_law(us, vs);
    TailDiagnosis d;
    d.exponent = f.exponent;
    d.prefactor = f.prefactor;
    if (f.exponent >= 1.0 + kGuard) {
        d.divergent = true;
    } else if (f.exponent <= 1.0 - kGuard) {
        d.divergent = false;
        d.tail_integral = f.prefactor * std::pow(cut, 1.0 - f.exponent)
                        / (1.0 - f.exponent);
    }
    return d;
}

ScaleLimits scale_limits_impl(const ScaleDensity& sd) {
    ScaleLimits out;
    out.at0 = diagnose_tail([&](double u) { return sd.rho(u); }, kTailCut);
    out.at1 = diagnose_tail([&](double u) { return sd.rho(1.0 - u); }, kTailCut);
    out.s0_diverges = out.at0.divergent.value_or(false);
    out.s1_diverges = out.at1.divergent.value_or(false);
    return out;
}

SpeedMassResult speed_mass_impl(const ScaleDensity& sd) {
    SpeedMassResult r;
    r.at0 = diagnose_tail([&](double u) { return sd.speed_integrand(u); }, kTailCut);
    r.at1 = diagnose_tail([&](double u) { return sd.speed_integrand(1.0 - u); }, kTailCut);
    const bool fin0 = !r.at0.divergent.value_or(true);
    const bool fin1 = !r.at1.divergent.value_or(true);
    if (r.at0.divergent.value_or(false) || r.at1.divergent.value_or(false)) {
        r.mass = std::numeric_limits<double>::infinity();
        r.finite = false;
        return r;
    }
    if (!fin0 || !fin1) {
        // inconclusive somewhere; caller decides
        r.mass = std::numeric_limits<double>::quiet_NaN();
        r.finite = false;
        return r;
    }
    const double interior = adaptive_quad(
        [&](double x) { return sd.speed_integrand(x); }, kTailCut, 1.0 - kTailCut,
        1e-9, 1e-12);
    r.mass = interior + r.at0.tail_integral + r.at1.tail_integral;
    r.finite = true;
    return r;
}

void throw_if_inconclusive(const TailDiagnosis& d, const char* where) {
    if (!d.divergent.has_value()) {
        std::ostringstream os;
        os << where << ": fitted tail exponent " << d.exponent
           << " within the guard band of 1";
        throw NumericalError(NumericalError::Kind::InconclusiveTail, os.str());
    }
}

} // namespace

ScaleLimits scale_limits(double anchor, const EquilibriumFunctions& eq) {
    ScaleDensity sd(eq, anchor);
    ScaleLimits out = scale_limits_impl(sd);
    throw_if_inconclusive(out.at0, "scale limit at 0");
    throw_if_inconclusive(out.at1, "scale limit at 1");
    return out;
}

SpeedMassResult speed_mass(const EquilibriumFunctions& eq, double anchor) {
    ScaleDensity sd(eq, anchor);
    SpeedMassResult r = speed_mass_impl(sd);
    throw_if_inconclusive(r.at0, "speed mass tail at 0");
    throw_if_inconclusive(r.at1, "speed mass tail at 1");
    return r;
}

const char* survival_class_name(SurvivalClass c) {
    switch (c) {
        case SurvivalClass::BothSurvive:    return "BothSurvive";
        case SurvivalClass::Trader2Extinct: return "Trader2Extinct";
        case SurvivalClass::Indeterminate:  return "Indeterminate";
    }
    return "?";
}

const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::PaperProved:          return "PaperProved";
        case Provenance::NumericallyIndicated: return "NumericallyIndicated";
    }
    return "?";
}

SurvivalReport classify(const ModelParams& p, const EquilibriumFunctions& eq,
                        double anchor) {
    ScaleDensity sd(eq, anchor);
    const ScaleLimits sl = scale_limits_impl(sd);
    const SpeedMassResult sm = speed_mass_impl(sd);

    SurvivalReport rep;
    rep.anchor = anchor;
    rep.exp0 = sl.at0.exponent;
    rep.exp1 = sl.at1.exponent;
    rep.speed_exp0 = sm.at0.exponent;
    rep.speed_exp1 = sm.at1.exponent;
    rep.s0_diverges = sl.s0_diverges;
    rep.s1_diverges = sl.s1_diverges;
    rep.s0_inconclusive = !sl.at0.divergent.has_value();
    rep.s1_inconclusive = !sl.at1.divergent.has_value();
    rep.mass_inconclusive = std::isnan(sm.mass);
    rep.speed_mass = sm.mass;
    rep.speed_mass_finite = sm.finite;

    if (rep.s0_inconclusive || rep.s1_inconclusive) {
        rep.classification = SurvivalClass::Indeterminate;
    } else if (rep.s0_diverges && rep.s1_diverges) {
        rep.classification = (!rep.mass_inconclusive && sm.finite)
                           ? SurvivalClass::BothSurvive
                           : SurvivalClass::Indeterminate;
    } else if (rep.s0_diverges && !rep.s1_diverges) {
        rep.classification = SurvivalClass::Trader2Extinct;
    } else {
        rep.classification = SurvivalClass::Indeterminate;
    }

    const bool proved_regime = survival_regime(p) == RegimeTag::BothSurviveProved;
    rep.provenance = (proved_regime && rep.classification == SurvivalClass::BothSurvive)
                   ? Provenance::PaperProved
                   : Provenance::NumericallyIndicated;
    return rep;
}

const char* prieto_class_name(PrietoClass c) {
    switch (c) {
        case PrietoClass::BothSurvive:             return "BothSurvive";
        case PrietoClass::RecurrentBoundary:       return "RecurrentBoundary";
        case PrietoClass::Trader2ExtinctIndicated: return "Trader2ExtinctIndicated";
    }
    return "?";
}

PrietoReport prieto_classify(double gamma, double mu_d, double sigma_d) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw ValidationError(ValidationError::Code::GammaOutOfRange,
                              "prieto_classify requires gamma in (0,1)");
    if (!(sigma_d > 0.0))
        throw ValidationError(ValidationError::Code::NonpositiveSigma,
                              "prieto_classify requires sigma_d > 0");
    const double s2 = sigma_d * sigma_d;
    PrietoReport rep;
    rep.eta = (1.0 - gamma) * (2.0 + gamma - 2.0 * mu_d / s2);
    rep.limit_at0 = 0.5 * (1.0 + gamma);
    rep.limit_at1 = (1.0 - gamma) * (2.0 * mu_d - (2.0 + gamma) * s2) / (2.0 * s2);
    const double tol = 1e-9;
    if (rep.eta > 1.0 + tol)
        rep.classification = PrietoClass::BothSurvive;
    else if (rep.eta < 1.0 - tol)
        rep.classification = PrietoClass::Trader2ExtinctIndicated;
    else
        rep.classification = PrietoClass::RecurrentBoundary;
    return rep;
}

} // namespace equishoot
