#include <doctest.h>

#include <cmath>

#include "equishoot/survival.hpp"
#include "test_helpers.hpp"

using namespace equishoot;

TEST_CASE("scale density is 1 at the anchor") {
    const auto& eq = testutil::reference_equilibrium();
    ScaleDensity sd(eq, 0.5);
    CHECK(sd.rho(0.5) == doctest::Approx(1.0).epsilon(1e-12));
    ScaleDensity sd3(eq, 0.3);
    CHECK(sd3.rho(0.3) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(sd.rho(0.0), DomainError);
}

TEST_CASE("fitted boundary exponents match the closed forms within 2%") {
    const auto& eq = testutil::reference_equilibrium();
    const ModelParams& p = eq.params();
    const SurvivalReport rep = classify(p, eq, 0.5);
    // rho ~ (a/y)^{1+gamma} at 0 and ((1-a)/(1-y))^{1-gamma-delta/gamma} at 1
    CHECK(rep.exp0 == doctest::Approx(1.0 + p.gamma).epsilon(0.02));
    CHECK(rep.exp1 == doctest::Approx(1.0 - p.gamma - p.delta / p.gamma).epsilon(0.02));
    CHECK(1.0 - p.gamma - p.delta / p.gamma == doctest::Approx(1.1).epsilon(1e-12));
    // speed-integrand tail exponent at 1: gamma + delta/gamma + 1 = 0.9
    CHECK(rep.speed_exp1 == doctest::Approx(0.9).epsilon(0.02));
}

TEST_CASE("reference parameters: both scale limits diverge, finite speed mass") {
    const auto& eq = testutil::reference_equilibrium();
    const ScaleLimits sl = scale_limits(0.5, eq);
    CHECK(sl.s0_diverges);
    CHECK(sl.s1_diverges);
    const SpeedMassResult sm = speed_mass(eq, 0.5);
    CHECK(sm.finite);
    CHECK(sm.mass > 0.0);
    // prototype cross-check of the total speed mass (same anchor)
    CHECK(sm.mass == doctest::Approx(1602.6).epsilon(0.02));
}

TEST_CASE("reference classification: BothSurvive with proved provenance") {
    const auto& eq = testutil::reference_equilibrium();
    const SurvivalReport rep = classify(testutil::reference_params(), eq, 0.5);
    CHECK(rep.classification == SurvivalClass::BothSurvive);
    CHECK(rep.provenance == Provenance::PaperProved);
    CHECK(rep.s0_diverges);
    CHECK(rep.s1_diverges);
    CHECK(rep.speed_mass_finite);
}

TEST_CASE("anchor invariance of classification and divergence booleans") {
    const auto& eq = testutil::reference_equilibrium();
    const ModelParams& p = testutil::reference_params();
    const SurvivalReport a = classify(p, eq, 0.3);
    const SurvivalReport b = classify(p, eq, 0.5);
    const SurvivalReport c = classify(p, eq, 0.7);
    CHECK(a.classification == b.classification);
    CHECK(b.classification == c.classification);
    CHECK(a.s0_diverges == b.s0_diverges);
    CHECK(a.s1_diverges == c.s1_diverges);
    CHECK(a.provenance == c.provenance);
    // exponents are anchor independent too
    CHECK(a.exp1 == doctest::Approx(b.exp1).epsilon(1e-3));
    CHECK(c.exp0 == doctest::Approx(b.exp0).epsilon(1e-3));
}

TEST_CASE("delta = 0 regression: scale finite at 1, trader 2 extinct") {
    const auto& eq = testutil::regression_equilibrium();
    const ModelParams& p = testutil::regression_params();
    const SurvivalReport rep = classify(p, eq, 0.5);
    // exponent at 1 is 1 - gamma = 0.5 < 1: s(1) finite
    CHECK(rep.exp1 == doctest::Approx(1.0 - p.gamma).epsilon(0.02));
    CHECK_FALSE(rep.s1_diverges);
    CHECK(rep.s0_diverges);
    CHECK(rep.classification == SurvivalClass::Trader2Extinct);
    CHECK(rep.provenance == Provenance::NumericallyIndicated);
}

TEST_CASE("delta in the unproved region classifies numerically") {
    RawParams r = testutil::reference_raw();
    r.beta1 = 0.054;  // delta = -0.2, inside (-gamma^2, 0)
    const ModelParams p = derive_params(r);
    const CriticalSolution cs = find_xi0(p);
    const EquilibriumFunctions eq(p, cs);
    const SurvivalReport rep = classify(p, eq, 0.5);
    CHECK(rep.provenance == Provenance::NumericallyIndicated);
    // exponent at 1 is 1 - 0.5 + 0.4 = 0.9 < 1: trader 2 extinction indicated
    CHECK(rep.exp1 == doctest::Approx(0.9).epsilon(0.02));
    CHECK(rep.classification == SurvivalClass::Trader2Extinct);
}

TEST_CASE("delta = -gamma^2 sits in the guard band and is inconclusive") {
    RawParams r = testutil::reference_raw();
    r.beta1 = 0.055;  // delta = -0.25 = -gamma^2
    const ModelParams p = derive_params(r);
    const CriticalSolution cs = find_xi0(p);
    const EquilibriumFunctions eq(p, cs);
    // exponent at 1 is exactly 1: the strict ops throw InconclusiveTail
    CHECK_THROWS_AS(scale_limits(0.5, eq), NumericalError);
    // classify absorbs it
    const SurvivalReport rep = classify(p, eq, 0.5);
    CHECK(rep.s1_inconclusive);
    CHECK(rep.classification == SurvivalClass::Indeterminate);
}

TEST_CASE("prieto classification by eta") {
    // eta = (1-gamma)(2+gamma-2 mu/sigma^2)
    PrietoReport a = prieto_classify(0.5, 0.0, 0.2);
    CHECK(a.eta == doctest::Approx(1.25).epsilon(1e-13));
    CHECK(a.classification == PrietoClass::BothSurvive);
    CHECK(a.limit_at0 == doctest::Approx(0.75).epsilon(1e-13));

    PrietoReport b = prieto_classify(0.5, 0.01, 0.2);
    CHECK(b.eta == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(b.classification == PrietoClass::RecurrentBoundary);
    // exp1 limit relates to eta: eta = -2 * limit_at1
    CHECK(-2.0 * b.limit_at1 == doctest::Approx(b.eta).epsilon(1e-12));

    PrietoReport c = prieto_classify(0.5, 0.03, 0.2);
    CHECK(c.eta < 1.0);
    CHECK(c.classification == PrietoClass::Trader2ExtinctIndicated);

    // eta invariant under (mu, sigma^2) -> (c mu, c sigma^2)
    PrietoReport s1 = prieto_classify(0.4, 0.02, 0.25);
    PrietoReport s2 = prieto_classify(0.4, 0.02 * 3.0, 0.25 * std::sqrt(3.0));
    CHECK(s1.eta == doctest::Approx(s2.eta).epsilon(1e-12));
}

TEST_CASE("prieto drift limit at 0 matches the power-power model's") {
    // both models share y mu/sigma^2 -> (1+gamma)/2 as y -> 0
    const auto& eq = testutil::reference_equilibrium();
    const PrietoReport rep = prieto_classify(0.5, 0.01, 0.2);
    const double fitted = 1e-6 * eq.drift_over_var(1e-6);
    CHECK(fitted == doctest::Approx(rep.limit_at0).epsilon(0.02));
}
