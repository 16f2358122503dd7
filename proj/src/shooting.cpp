#include "equishoot/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "equishoot/extrapolate.hpp"

namespace equishoot {

const char* xi_class_name(XiClass c) {
    switch (c) {
        case XiClass::Subcritical:   return "Subcritical";
        case XiClass::Supercritical: return "Supercritical";
        case XiClass::Indeterminate: return "Indeterminate";
    }
    return "?";
}

XiClass classify_xi(double xi, const ModelParams& p, double tol,
                    const ShootOptions& opts) {
    if (!(xi > 0.0)) throw DomainError("classify_xi requires xi > 0");
    IntegrateOptions io;
    io.eps0 = opts.eps0;
    SolutionCurve c = integrate_h(xi, p, tol, 1.0 - opts.eps1, io);
    if (c.outcome != CurveOutcome::ReachedEnd) return XiClass::Supercritical;
    const double margin = opts.margin_factor * tol;
    if (c.h_end() < 1.0 - margin) return XiClass::Subcritical;
    return XiClass::Indeterminate;
}

double terminal_alpha(const ModelParams& p) {
    const double f1 = p.critical_f_limit();
    const double cstar = p.gamma + 2.0 * (f1 - p.a_cap)
                       + p.delta * (2.0 - 3.0 / p.gamma);
    return 0.5 * (-cstar + std::sqrt(cstar * cstar + 4.0 * f1)) - 1.0;
}

namespace {

constexpr int kLadderLen = 11;

std::vector<double> ladder_u() {
    std::vector<double> us(kLadderLen);
    for (int k = 0; k < kLadderLen; ++k) us[k] = 0.1 * std::pow(10.0, -0.2 * k);
    return us;
}

// Picks the value stored at an exactly-landed checkpoint.
double value_at(const SolutionCurve& c, const std::vector<double>& vals, double y) {
    auto it = std::lower_bound(c.grid.begin(), c.grid.end(), y - 1e-13);
    if (it == c.grid.end() || std::abs(*it - y) > 1e-12)
        throw NumericalError(NumericalError::Kind::ToleranceFailure,
                             "checkpoint missing from certified grid");
    return vals[static_cast<std::size_t>(it - c.grid.begin())];
}

} // namespace

CriticalSolution find_xi0(const ModelParams& p, double xi_tol, double ode_tol,
                          const ShootOptions& opts) {
    const double s2 = p.sigma_d2();
    const double step1_bound = p.critical_f_limit() * s2;  // (A + d(1-g)/g - g) s2

    double xi_lo = 0.5 * step1_bound;
    if (classify_xi(xi_lo, p, ode_tol, opts) != XiClass::Subcritical) {
        std::ostringstream os;
        os << "seed xi = " << xi_lo << " inside the guaranteed interval is not subcritical";
        throw NumericalError(NumericalError::Kind::BracketFailure, os.str());
    }

    double xi_hi = 2.0 * step1_bound;
    const double ceiling = opts.xi_ceiling_factor * s2;
    while (classify_xi(xi_hi, p, ode_tol, opts) == XiClass::Subcritical) {
        xi_lo = xi_hi;
        xi_hi *= 2.0;
        if (xi_hi > ceiling) {
            std::ostringstream os;
            os << "no supercritical xi found below " << ceiling;
            throw NumericalError(NumericalError::Kind::BracketFailure, os.str());
        }
    }

    // Phase 1: bisect at the user's ODE tolerance down to the coarse band.
    const double coarse_tol = std::max(xi_tol, 1e-11);
    while (xi_hi - xi_lo > coarse_tol * xi_hi) {
        const double mid = 0.5 * (xi_lo + xi_hi);
        if (mid <= xi_lo || mid >= xi_hi) break;  // bracket at rounding resolution
        if (classify_xi(mid, p, ode_tol, opts) == XiClass::Subcritical)
            xi_lo = mid;
        else
            xi_hi = mid;
    }

    // Certification setup: tight tolerance, capped steps, checkpoint ladder.
    const std::vector<double> us = ladder_u();
    IntegrateOptions io;
    io.eps0 = opts.eps0;
    io.max_step = 0.005;
    for (double u : us) io.checkpoints.push_back(1.0 - u);
    const double tight_tol = std::min(1e-13, ode_tol);
    const double y_end = 1.0 - opts.eps1;

    // Phase 2: refine below the band using the exact certification
    // integrator, so the final subcritical side is subcritical under the
    // same step sequence that produces the returned curve. The terminal
    // extrapolation amplifies a xi error like (1-y)^{-(1+alpha)}, which is
    // why the bracket must go far below the coarse band.
    if (xi_tol < coarse_tol) {
        auto tight_sub = [&](double xi) {
            SolutionCurve c = integrate_h(xi, p, tight_tol, y_end, io);
            return c.outcome == CurveOutcome::ReachedEnd
                && c.h_end() < 1.0 - opts.margin_factor * tight_tol;
        };
        double w = std::max(xi_hi - xi_lo, xi_lo * 1e-12);
        int guard = 0;
        while (!tight_sub(xi_lo)) {
            xi_hi = xi_lo;
            xi_lo -= w;
            w *= 2.0;
            if (++guard > 64)
                throw NumericalError(NumericalError::Kind::BracketFailure,
                                     "tight re-anchoring lost the subcritical side");
        }
        guard = 0;
        while (tight_sub(xi_hi)) {
            xi_lo = xi_hi;
            xi_hi += w;
            w *= 2.0;
            if (++guard > 64)
                throw NumericalError(NumericalError::Kind::BracketFailure,
                                     "tight re-anchoring lost the supercritical side");
        }
        while (xi_hi - xi_lo > xi_tol * xi_hi) {
            const double mid = 0.5 * (xi_lo + xi_hi);
            if (mid <= xi_lo || mid >= xi_hi) break;
            if (tight_sub(mid)) xi_lo = mid; else xi_hi = mid;
        }
    }

    CriticalSolution cs;
    cs.xi0 = xi_lo;
    cs.bracket_width = xi_hi - xi_lo;
    cs.alpha = terminal_alpha(p);

    SolutionCurve curve = integrate_h(cs.xi0, p, tight_tol, y_end, io);
    int tries = 0;
    while (curve.outcome != CurveOutcome::ReachedEnd && tries < 16) {
        // slightly subcritical-side retreat within the final bracket
        cs.xi0 -= std::max(cs.bracket_width, std::abs(cs.xi0) * 1e-15);
        curve = integrate_h(cs.xi0, p, tight_tol, y_end, io);
        ++tries;
    }
    if (curve.outcome != CurveOutcome::ReachedEnd)
        throw NumericalError(NumericalError::Kind::ToleranceFailure,
                             "tight re-integration keeps crossing h = 1; xi bracket too coarse");
    cs.curve = std::move(curve);

    std::vector<double> qv(us.size()), hv(us.size()), iv(us.size());
    for (std::size_t k = 0; k < us.size(); ++k) {
        const double y = 1.0 - us[k];
        const double h = value_at(cs.curve, cs.curve.h_vals, y);
        const double i = value_at(cs.curve, cs.curve.i_vals, y);
        hv[k] = h;
        iv[k] = i;
        qv[k] = (1.0 - h) / us[k];
    }

    // Mode ladders for the terminal extrapolation. Small alpha piles up
    // fractional corrections (u^alpha, u^{2 alpha}, ...), so one more
    // elimination is spent there; alpha near 1 is the resonant case with a
    // u log u term, absorbed by a repeated elimination.
    const bool resonant = std::abs(cs.alpha - 1.0) < 0.04;
    const bool dense_modes = cs.alpha < 0.45;
    std::vector<double> em_q, em_h;
    if (resonant) {
        em_q = {1.0, 1.0};
        em_h = {1.0, 2.0, 2.0};
    } else if (dense_modes) {
        em_q = {cs.alpha, 2.0 * cs.alpha, 1.0};
        em_h = {1.0, 1.0 + cs.alpha, 1.0 + 2.0 * cs.alpha, 2.0};
    } else {
        em_q = {cs.alpha, 1.0};
        em_h = {1.0, 1.0 + cs.alpha, 2.0};
    }
    cs.slope_end = richardson_limit(us, qv, em_q);
    cs.h_end = richardson_limit(us, hv, em_h);
    cs.i_end = richardson_limit(us, iv, em_h);

    const double lhs = std::exp(cs.i_end);
    const double rhs_id = s2 / cs.xi0 * p.critical_f_limit();
    cs.identity_residual = std::abs(lhs - rhs_id) / std::abs(rhs_id);
    return cs;
}

CertificateReport certify(const CriticalSolution& cs, const ModelParams& p,
                          const CertifyOptions& opts) {
    CertificateReport r;
    r.xi0 = cs.xi0;
    r.h_end = cs.h_end;
    r.slope_end = cs.slope_end;
    r.slope_closed_form = p.terminal_slope_closed_form();
    r.identity_lhs = std::exp(cs.i_end);
    r.identity_rhs = p.sigma_d2() / cs.xi0 * p.critical_f_limit();

    r.res_h_end = std::abs(cs.h_end - 1.0);
    r.res_slope_rel = std::abs(cs.slope_end - r.slope_closed_form)
                    / std::abs(r.slope_closed_form);
    r.res_identity_rel = cs.identity_residual;

    r.h_min = *std::min_element(cs.curve.h_vals.begin(), cs.curve.h_vals.end());
    r.h_max = *std::max_element(cs.curve.h_vals.begin(), cs.curve.h_vals.end());
    r.res_h_min = std::max(0.0, p.gamma - r.h_min);
    r.res_h_max = std::max(0.0, r.h_max - 1.0);

    // Finite-difference residual on a uniform-capped re-integration: in the
    // capped region the grid is exactly uniform, so a 5-point centered stencil
    // applies. The residual is scaled by the size of the rhs terms.
    IntegrateOptions io;
    io.max_step = opts.fd_max_step;
    SolutionCurve fd = integrate_h(cs.xi0, p, opts.fd_tol, 0.96, io);
    const auto& g = fd.grid;
    double worst = 0.0;
    std::size_t windows = 0;
    const double s2 = p.sigma_d2();
    for (std::size_t i = 2; i + 2 < g.size(); ++i) {
        if (g[i] < opts.fd_lo || g[i] > opts.fd_hi) continue;
        const double d1 = g[i - 1] - g[i - 2], d2 = g[i] - g[i - 1];
        const double d3 = g[i + 1] - g[i], d4 = g[i + 2] - g[i + 1];
        const double dd = opts.fd_max_step;
        if (std::abs(d1 - dd) > 1e-12 || std::abs(d2 - dd) > 1e-12 ||
            std::abs(d3 - dd) > 1e-12 || std::abs(d4 - dd) > 1e-12)
            continue;
        const double fdv = (fd.h_vals[i - 2] - 8.0 * fd.h_vals[i - 1]
                          + 8.0 * fd.h_vals[i + 1] - fd.h_vals[i + 2]) / (12.0 * dd);
        const double y = g[i], h = fd.h_vals[i], il = fd.i_vals[i];
        const double a0 = p.gamma * (1.0 + p.gamma) / y;
        const double a1 = ((2.0 * p.gamma + 1.0) * y - (1.0 + p.gamma)) / y;
        const double a2 = (cs.xi0 / s2) * std::exp(il) - p.a_cap;
        const double t1 = a1 / (1.0 - y) * h;
        const double t2 = a2 / (1.0 - y) * h * h;
        const double t3 = p.delta * y / (1.0 - y) * h * h * (1.0 - h / p.gamma);
        const double scale = std::max(1.0, std::abs(a0) + std::abs(t1)
                                         + std::abs(t2) + std::abs(t3));
        worst = std::max(worst, std::abs(fdv - fd.hd_vals[i]) / scale);
        ++windows;
    }
    // no uniform stencil window at all would make the check vacuous
    r.res_ode_max = windows > 0 ? worst : std::numeric_limits<double>::infinity();

    r.passed = r.res_h_end <= opts.tol_h_end
            && r.res_slope_rel <= opts.tol_slope_rel
            && r.res_identity_rel <= opts.tol_identity_rel
            && r.res_h_min <= opts.tol_bounds
            && r.res_h_max <= opts.tol_bounds
            && r.res_ode_max <= 10.0 * opts.fd_tol;
    return r;
}

} // namespace equishoot
