#include "equishoot/ode_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "equishoot/io_util.hpp"

#include "equishoot/extrapolate.hpp"
#include "equishoot/rk45.hpp"

namespace equishoot {

namespace {

// Unchecked rhs used inside the integrators. The first fraction fuses a0 and
// the a1 term so the 1/y singularities cancel in one numerator.
inline void rhs_raw(double y, double h, double i_log, double xi,
                    double gamma, double s2, double a_cap, double delta,
                    double& dh, double& di) {
    const double one_m_y = 1.0 - y;
    const double a2 = (xi / s2) * std::exp(i_log) - a_cap;
    const double lin_num = gamma * (1.0 + gamma) * one_m_y
                         + ((2.0 * gamma + 1.0) * y - (1.0 + gamma)) * h;
    dh = lin_num / (y * one_m_y)
       + a2 * h * h / one_m_y
       + delta * y * h * h * (1.0 - h / gamma) / one_m_y;
    di = (h - 1.0) / one_m_y;
}

inline void f_rhs_raw(double y, double f, double a3,
                      double gamma, double delta, double& df) {
    const double one_m_y = 1.0 - y;
    const double lin_num = gamma * (1.0 + gamma) * one_m_y
                         + ((2.0 * gamma + 1.0) * y - (1.0 + gamma)) * f;
    df = lin_num / (y * one_m_y)
       + a3 * f * f / one_m_y
       + delta * y * f * f * (1.0 - f / gamma) / one_m_y;
}

} // namespace

void rhs(const OdeState& state, double xi, const ModelParams& p,
         double& dh_dy, double& di_dy) {
    if (!(state.y > 0.0 && state.y < 1.0)) {
        std::ostringstream os;
        os << "rhs requires y in (0,1), got y=" << state.y;
        throw DomainError(os.str());
    }
    rhs_raw(state.y, state.h, state.i_log, xi, p.gamma, p.sigma_d2(), p.a_cap,
            p.delta, dh_dy, di_dy);
}

double series_slope(double xi, const ModelParams& p) {
    return p.gamma * p.gamma * (1.0 + xi / p.sigma_d2() - p.a_cap) / (2.0 + p.gamma);
}

OdeState series_start(double xi, const ModelParams& p, double eps0) {
    OdeState s;
    s.y = eps0;
    s.h = p.gamma + series_slope(xi, p) * eps0;
    s.i_log = (p.gamma - 1.0) * eps0;
    return s;
}

SolutionCurve integrate_h(double xi, const ModelParams& p, double tol, double y_end,
                          const IntegrateOptions& opts) {
    if (!(y_end > 0.0 && y_end < 1.0) || !(tol > 0.0))
        throw DomainError("integrate_h requires 0 < y_end < 1 and tol > 0");

    const double gamma = p.gamma, s2 = p.sigma_d2(), a_cap = p.a_cap, delta = p.delta;
    auto sys = [=](double y, const std::array<double, 2>& s, std::array<double, 2>& d) {
        rhs_raw(y, s[0], s[1], xi, gamma, s2, a_cap, delta, d[0], d[1]);
    };

    SolutionCurve curve;
    curve.xi = xi;

    const OdeState start = series_start(xi, p, opts.eps0);
    curve.grid.push_back(start.y);
    curve.h_vals.push_back(start.h);
    curve.i_vals.push_back(start.i_log);
    {
        std::array<double, 2> d;
        sys(start.y, {start.h, start.i_log}, d);
        curve.hd_vals.push_back(d[0]);
    }

    StepControl ctl;
    ctl.rtol = tol;
    ctl.atol = tol * opts.atol_factor;
    ctl.max_step = opts.max_step;
    ctl.initial_step = 0.5 * opts.eps0;

    std::vector<double> cps = opts.checkpoints;
    std::sort(cps.begin(), cps.end());
    cps.erase(std::unique(cps.begin(), cps.end()), cps.end());

    const double ceiling = opts.explosion_ceiling;
    curve.outcome = CurveOutcome::ReachedEnd;

    using Solver = DormandPrince<2, decltype(sys)>;
    Solver solver(sys);
    solver.integrate(start.y, {start.h, start.i_log}, y_end, ctl, cps,
                     [&](const typename Solver::Step& st) {
        const double h_new = st.y[0];
        if (!std::isfinite(h_new) || std::abs(h_new) > ceiling) {
            curve.outcome = CurveOutcome::Exploded;
            curve.y_blow = st.t;
            return StepFlow::Stop;
        }
        if (h_new >= 1.0 && st.y_prev[0] < 1.0) {
            // refine the crossing of h = 1 on the dense output
            double lo = 0.0, hi = 1.0;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (st.dense(mid)[0] - 1.0 >= 0.0) hi = mid; else lo = mid;
            }
            const double theta = 0.5 * (lo + hi);
            const double yc = st.t_prev + theta * (st.t - st.t_prev);
            const auto sc = st.dense(theta);
            curve.grid.push_back(yc);
            curve.h_vals.push_back(sc[0]);
            curve.i_vals.push_back(sc[1]);
            std::array<double, 2> d;
            sys(yc, sc, d);
            curve.hd_vals.push_back(d[0]);
            curve.outcome = CurveOutcome::CrossedOne;
            curve.y_cross = yc;
            return StepFlow::Stop;
        }
        curve.grid.push_back(st.t);
        curve.h_vals.push_back(st.y[0]);
        curve.i_vals.push_back(st.y[1]);
        std::array<double, 2> d;
        sys(st.t, st.y, d);
        curve.hd_vals.push_back(d[0]);
        return StepFlow::Continue;
    });

    return curve;
}

std::string to_csv(const SolutionCurve& curve) {
    std::ostringstream os;
    os << "y,h,i_log\n";
    for (std::size_t k = 0; k < curve.grid.size(); ++k)
        os << fmt_full(curve.grid[k]) << ',' << fmt_full(curve.h_vals[k]) << ','
           << fmt_full(curve.i_vals[k]) << '\n';
    return os.str();
}

double f_limit_closed_form(double a3, const ModelParams& p) {
    const double s = a3 + p.delta;
    const double disc = s * s + 4.0 * p.delta;
    if (disc < 0.0)
        throw DomainError("f(1) closed form: negative discriminant; a3 outside the admissible interval");
    return p.gamma / (2.0 * p.delta) * (s + std::sqrt(disc));
}

FCurve solve_f(double a3, const ModelParams& p, double t0, double f0, double tol) {
    const double ub = p.delta * (1.0 - p.gamma) / p.gamma - p.gamma;
    if (!(a3 >= -1.0 && a3 < ub)) {
        std::ostringstream os;
        os << "a3 = " << a3 << " outside [-1, " << ub << ")";
        throw DomainError(os.str());
    }
    if (!(t0 >= 0.0 && t0 < 1.0)) throw DomainError("solve_f requires t0 in [0,1)");

    const double gamma = p.gamma, delta = p.delta;
    auto sys = [=](double y, const std::array<double, 1>& s, std::array<double, 1>& d) {
        f_rhs_raw(y, s[0], a3, gamma, delta, d[0]);
    };

    FCurve out;
    out.a3 = a3;

    const double eps0 = 1e-8;
    double y_start, f_start;
    if (t0 < eps0) {
        // series launch at the regular singular point, analogous to series_start
        y_start = eps0;
        f_start = gamma + gamma * gamma * (1.0 + a3) / (2.0 + gamma) * eps0;
    } else {
        y_start = t0;
        f_start = f0;
    }

    // Checkpoint ladder toward y = 1 for the terminal extrapolation. The
    // endpoint is attracting, so a deep geometric ladder of ratio 4 is cheap
    // and clean.
    std::vector<double> us;
    for (int k = 0; k < 12; ++k) us.push_back(0.1 * std::pow(4.0, -k));
    std::vector<double> cps;
    for (double u : us)
        if (1.0 - u > y_start) cps.push_back(1.0 - u);
    std::sort(cps.begin(), cps.end());
    const double y_end = cps.back();

    StepControl ctl;
    ctl.rtol = tol;
    ctl.atol = std::max(1e-16, tol * 1e-3);
    ctl.max_step = 0.005;
    ctl.initial_step = t0 < eps0 ? 0.5 * eps0 : 0.0;

    std::vector<double> ladder_u, ladder_f;
    using Solver = DormandPrince<1, decltype(sys)>;
    Solver solver(sys);
    solver.integrate(y_start, {f_start}, y_end, ctl, cps,
                     [&](const typename Solver::Step& st) {
        out.grid.push_back(st.t);
        out.f_vals.push_back(st.y[0]);
        if (st.at_checkpoint) {
            ladder_u.push_back(1.0 - st.t);
            ladder_f.push_back(st.y[0]);
        }
        return StepFlow::Continue;
    });

    // ladder_u is descending by construction
    double worst = 0.0;
    for (std::size_t k = 0; k + 1 < ladder_f.size(); ++k)
        worst = std::max(worst, std::abs(ladder_f[k + 1] - ladder_f[k]));
    if (worst < 1e-12) {
        out.f_end = ladder_f.back();
        return out;
    }

    // Terminal extrapolation: f(u) - f(1) decays like u^{lambda} with
    // lambda = -d/df [gamma f + a3 f^2 + delta f^2 (1 - f/gamma)] at f(1).
    // Iterate: estimate f(1), recompute lambda, re-extrapolate.
    double f1 = ladder_f.back();
    for (int it = 0; it < 4; ++it) {
        double lam = -(gamma + 2.0 * a3 * f1 + 2.0 * delta * f1
                       - 3.0 * delta * f1 * f1 / gamma);
        lam = std::clamp(lam, 0.02, 3.0);
        std::vector<double> modes;
        for (int k = 1; k <= 5; ++k) modes.push_back(k * lam);
        modes.push_back(1.0);
        modes.push_back(1.0 + lam);
        std::sort(modes.begin(), modes.end());
        modes.erase(std::unique(modes.begin(), modes.end(),
                                [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                    modes.end());
        while (!modes.empty() && modes.back() > 2.5) modes.pop_back();
        if (modes.size() > 6) modes.resize(6);
        f1 = richardson_limit(ladder_u, ladder_f, modes);
    }
    out.f_end = f1;
    return out;
}

} // namespace equishoot
