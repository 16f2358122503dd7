#ifndef EQUISHOOT_TEST_HELPERS_HPP
#define EQUISHOOT_TEST_HELPERS_HPP

#include "equishoot/equilibrium.hpp"
#include "equishoot/params.hpp"
#include "equishoot/shooting.hpp"

namespace testutil {

inline equishoot::RawParams reference_raw() {
    equishoot::RawParams r;
    r.gamma = 0.5;
    r.sigma_d = 0.2;
    r.mu_d = 0.01;
    r.beta1 = 0.056;
    r.beta2 = 0.05;
    r.d0 = 1.0;
    r.theta2 = 1.0;
    return r;
}

inline const equishoot::ModelParams& reference_params() {
    static const equishoot::ModelParams p = equishoot::derive_params(reference_raw());
    return p;
}

// One shared shooting solve for the reference parameter set; reused across
// test files to keep the suite fast.
inline const equishoot::CriticalSolution& reference_solution() {
    static const equishoot::CriticalSolution cs =
        equishoot::find_xi0(reference_params());
    return cs;
}

inline const equishoot::EquilibriumFunctions& reference_equilibrium() {
    static const equishoot::EquilibriumFunctions eq(reference_params(),
                                                    reference_solution());
    return eq;
}

// delta = 0 regression preset (equal time preferences).
inline const equishoot::ModelParams& regression_params() {
    static const equishoot::ModelParams p = [] {
        equishoot::RawParams r = reference_raw();
        r.beta1 = r.beta2 = 0.05;
        return equishoot::derive_params(r, true);
    }();
    return p;
}

inline const equishoot::CriticalSolution& regression_solution() {
    static const equishoot::CriticalSolution cs =
        equishoot::find_xi0(regression_params());
    return cs;
}

inline const equishoot::EquilibriumFunctions& regression_equilibrium() {
    static const equishoot::EquilibriumFunctions eq(regression_params(),
                                                    regression_solution());
    return eq;
}

} // namespace testutil

#endif
