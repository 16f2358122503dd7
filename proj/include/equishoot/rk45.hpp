#ifndef EQUISHOOT_RK45_HPP
#define EQUISHOOT_RK45_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <vector>

#include "equishoot/errors.hpp"

namespace equishoot {

// Embedded Dormand-Prince 5(4) pair with PI step control and the classic
// 4th-order continuous extension. The driver lands exactly on requested
// checkpoints, which lets callers record solution values free of
// interpolation error.

struct StepControl {
    double rtol = 1e-10;
    double atol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    double initial_step = 0.0;   // 0 -> derive from the first derivative
    std::size_t max_steps = 4000000;
};

enum class StepFlow { Continue, Stop };

template <std::size_t N, class Rhs>
class DormandPrince {
public:
    using State = std::array<double, N>;

    explicit DormandPrince(Rhs rhs) : rhs_(std::move(rhs)) {}

    // One accepted step as seen by the observer. dense(theta) evaluates the
    // continuous extension at t_prev + theta*(t - t_prev).
    struct Step {
        double t_prev, t;
        const State& y_prev;
        const State& y;
        bool at_checkpoint;

        Step(double a, double b, const State& yp, const State& yn,
             const std::array<State, 5>& rc, bool cp)
            : t_prev(a), t(b), y_prev(yp), y(yn), at_checkpoint(cp), rcont_(rc) {}

        State dense(double theta) const {
            State out;
            const double th1 = 1.0 - theta;
            for (std::size_t i = 0; i < N; ++i) {
                out[i] = rcont_[0][i] + theta * (rcont_[1][i] + th1 * (rcont_[2][i]
                       + theta * (rcont_[3][i] + th1 * rcont_[4][i])));
            }
            return out;
        }

    private:
        const std::array<State, 5>& rcont_;
    };

    // Integrates from (t0, y0) to t_end (t_end > t0). `checkpoints` must be
    // sorted ascending within (t0, t_end]; the driver clips steps so each is
    // hit exactly. Returns the final state reached (== state at t_end unless
    // the observer stopped early).
    template <class Observer>
    State integrate(double t0, const State& y0, double t_end,
                    const StepControl& ctl, const std::vector<double>& checkpoints,
                    Observer&& observer) {
        double t = t0;
        State y = y0;
        State k1;
        rhs_(t, y, k1);

        std::size_t next_cp = 0;
        while (next_cp < checkpoints.size() && checkpoints[next_cp] <= t0) ++next_cp;

        double h = ctl.initial_step > 0.0 ? ctl.initial_step
                                          : initial_step_guess(t, y, k1, ctl);
        h = std::min(h, ctl.max_step);

        const double expo1 = 0.2 - kBeta * 0.75;
        double facold = 1e-4;
        bool rejected = false;

        for (std::size_t steps = 0; t < t_end; ++steps) {
            if (steps >= ctl.max_steps) {
                std::ostringstream os;
                os << "step budget " << ctl.max_steps << " exhausted at t=" << t;
                throw NumericalError(NumericalError::Kind::StepSizeUnderflow, os.str());
            }
            if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1e-6)) {
                std::ostringstream os;
                os << "step size underflow: h=" << h << " at t=" << t;
                throw NumericalError(NumericalError::Kind::StepSizeUnderflow, os.str());
            }

            bool hit_cp = false;
            double target = t_end;
            if (next_cp < checkpoints.size() && checkpoints[next_cp] < target)
                target = checkpoints[next_cp];
            if (t + h >= target) {
                h = target - t;
                hit_cp = true;
            }

            State k2, k3, k4, k5, k6, k7, ynew, yerr;
            stages(t, y, k1, h, k2, k3, k4, k5, k6, k7, ynew, yerr);

            double err = 0.0;
            bool finite = true;
            for (std::size_t i = 0; i < N; ++i) {
                if (!std::isfinite(ynew[i])) { finite = false; break; }
                const double sk = ctl.atol + ctl.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
                const double e = yerr[i] / sk;
                err += e * e;
            }
            err = finite ? std::sqrt(err / static_cast<double>(N))
                         : std::numeric_limits<double>::max();

            if (err <= 1.0) {
                // accept
                fill_dense(y, ynew, k1, k3, k4, k5, k6, k7, h);
                const double t_new = hit_cp ? target : t + h;
                const bool cp_flag = hit_cp && next_cp < checkpoints.size() &&
                                     target == checkpoints[next_cp];
                Step rec(t, t_new, y, ynew, rcont_, cp_flag);
                if (cp_flag) ++next_cp;

                const double facold_used = std::max(err, 1e-4);
                double fac = std::pow(err, expo1) / std::pow(facold, kBeta);
                fac = std::max(kInvFacMax, std::min(kInvFacMin, fac / kSafe));
                double h_next = std::min(h / fac, ctl.max_step);
                if (rejected) h_next = std::min(h_next, h);
                facold = facold_used;
                rejected = false;

                t = t_new;
                y = ynew;
                rhs_(t, y, k1);  // FSAL would reuse k7; recomputing keeps checkpoint clipping exact

                if (observer(rec) == StepFlow::Stop) return y;
                h = h_next;
            } else {
                rejected = true;
                const double fac11 = std::pow(err, expo1);
                h = h / std::min(kInvFacMin, fac11 / kSafe);
            }
        }
        return y;
    }

private:
    static constexpr double kSafe = 0.9;
    static constexpr double kBeta = 0.04;
    static constexpr double kInvFacMin = 5.0;   // max shrink factor per step: /5
    static constexpr double kInvFacMax = 0.1;   // max growth factor per step: x10

    Rhs rhs_;
    std::array<State, 5> rcont_{};

    double initial_step_guess(double t, const State& y, const State& f,
                              const StepControl& ctl) const {
        double d0 = 0.0, d1 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sk = ctl.atol + ctl.rtol * std::abs(y[i]);
            d0 += (y[i] / sk) * (y[i] / sk);
            d1 += (f[i] / sk) * (f[i] / sk);
        }
        double h0 = (d0 > 0 && d1 > 0) ? 0.01 * std::sqrt(d0 / d1) : 1e-6;
        h0 = std::min(h0, ctl.max_step);
        (void)t;
        return h0;
    }

    void stages(double t, const State& y, const State& k1, double h,
                State& k2, State& k3, State& k4, State& k5, State& k6, State& k7,
                State& ynew, State& yerr) {
        State tmp;
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + h * (0.2 * k1[i]);
        rhs_(t + 0.2 * h, tmp, k2);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + h * ((3.0 / 40.0) * k1[i] + (9.0 / 40.0) * k2[i]);
        rhs_(t + 0.3 * h, tmp, k3);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + h * ((44.0 / 45.0) * k1[i] - (56.0 / 15.0) * k2[i] + (32.0 / 9.0) * k3[i]);
        rhs_(t + 0.8 * h, tmp, k4);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + h * ((19372.0 / 6561.0) * k1[i] - (25360.0 / 2187.0) * k2[i]
                   + (64448.0 / 6561.0) * k3[i] - (212.0 / 729.0) * k4[i]);
        rhs_(t + (8.0 / 9.0) * h, tmp, k5);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + h * ((9017.0 / 3168.0) * k1[i] - (355.0 / 33.0) * k2[i]
                   + (46732.0 / 5247.0) * k3[i] + (49.0 / 176.0) * k4[i]
                   - (5103.0 / 18656.0) * k5[i]);
        rhs_(t + h, tmp, k6);
        for (std::size_t i = 0; i < N; ++i)
            ynew[i] = y[i] + h * ((35.0 / 384.0) * k1[i] + (500.0 / 1113.0) * k3[i]
                    + (125.0 / 192.0) * k4[i] - (2187.0 / 6784.0) * k5[i]
                    + (11.0 / 84.0) * k6[i]);
        rhs_(t + h, ynew, k7);
        for (std::size_t i = 0; i < N; ++i)
            yerr[i] = h * ((71.0 / 57600.0) * k1[i] - (71.0 / 16695.0) * k3[i]
                    + (71.0 / 1920.0) * k4[i] - (17253.0 / 339200.0) * k5[i]
                    + (22.0 / 525.0) * k6[i] - (1.0 / 40.0) * k7[i]);
    }

    void fill_dense(const State& y, const State& ynew, const State& k1,
                    const State& k3, const State& k4, const State& k5,
                    const State& k6, const State& k7, double h) {
        // Hairer's contd5 coefficients.
        constexpr double d1 = -12715105075.0 / 11282082432.0;
        constexpr double d3 = 87487479700.0 / 32700410799.0;
        constexpr double d4 = -10690763975.0 / 1880347072.0;
        constexpr double d5 = 701980252875.0 / 199316789632.0;
        constexpr double d6 = -1453857185.0 / 822651844.0;
        constexpr double d7 = 69997945.0 / 29380423.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double dy = ynew[i] - y[i];
            const double bspl = h * k1[i] - dy;
            rcont_[0][i] = y[i];
            rcont_[1][i] = dy;
            rcont_[2][i] = bspl;
            rcont_[3][i] = dy - h * k7[i] - bspl;
            rcont_[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i]
                          + d6 * k6[i] + d7 * k7[i]);
        }
    }
};

template <std::size_t N, class Rhs, class Observer>
std::array<double, N> integrate_dp45(Rhs&& rhs, double t0,
                                     const std::array<double, N>& y0, double t_end,
                                     const StepControl& ctl,
                                     const std::vector<double>& checkpoints,
                                     Observer&& observer) {
    DormandPrince<N, std::decay_t<Rhs>> solver(std::forward<Rhs>(rhs));
    return solver.integrate(t0, y0, t_end, ctl, checkpoints,
                            std::forward<Observer>(observer));
}

} // namespace equishoot

#endif
