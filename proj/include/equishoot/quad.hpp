#ifndef EQUISHOOT_QUAD_HPP
#define EQUISHOOT_QUAD_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "equishoot/errors.hpp"

namespace equishoot {

// Gauss-Kronrod 7-15 panel rule. Returns {integral, error estimate}.
template <class F>
std::pair<double, double> gk15(F&& f, double a, double b) {
    // 15-point Kronrod abscissae (positive half) and weights, 7-point Gauss weights.
    static const double xk[8] = {
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144838258730,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.000000000000000000000000000000000};
    static const double wk[8] = {
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714};
    static const double wg[4] = {
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327};

    const double c = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    double rk = 0.0, rg = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double dx = hw * xk[i];
        double fv;
        if (i == 7) {
            fv = f(c);
            rk += wk[i] * fv;
            rg += wg[3] * fv;
        } else {
            const double f1 = f(c - dx);
            const double f2 = f(c + dx);
            rk += wk[i] * (f1 + f2);
            if (i % 2 == 1) rg += wg[i / 2] * (f1 + f2);
        }
    }
    rk *= hw;
    rg *= hw;
    return {rk, std::abs(rk - rg)};
}

// Globally adaptive quadrature: repeatedly bisect the segment with the
// largest error estimate until the summed error meets the tolerance.
// Handles integrable endpoint spikes without over-refining smooth regions.
template <class F>
double adaptive_quad(F&& f, double a, double b, double rel_tol = 1e-10,
                     double abs_tol = 1e-14, std::size_t max_segments = 4000) {
    struct Seg {
        double a, b, val, err;
        bool operator<(const Seg& o) const { return err < o.err; }
    };
    std::vector<Seg> heap;
    auto push = [&](double lo, double hi) {
        auto [v, e] = gk15(f, lo, hi);
        heap.push_back({lo, hi, v, e});
        std::push_heap(heap.begin(), heap.end());
        return std::pair<double, double>(v, e);
    };
    auto [v0, e0] = push(a, b);
    double total_val = v0, total_err = e0;
    while (heap.size() < max_segments) {
        if (total_err <= std::max(abs_tol, rel_tol * std::abs(total_val))) break;
        std::pop_heap(heap.begin(), heap.end());
        const Seg worst = heap.back();
        heap.pop_back();
        if (worst.b - worst.a < 1e-15 * (std::abs(worst.a) + 1.0)) {
            // cannot split further; stop counting its error
            total_err -= worst.err;
            heap.push_back({worst.a, worst.b, worst.val, 0.0});
            std::push_heap(heap.begin(), heap.end());
            continue;
        }
        total_val -= worst.val;
        total_err -= worst.err;
        const auto [v1, e1] = push(worst.a, 0.5 * (worst.a + worst.b));
        const auto [v2, e2] = push(0.5 * (worst.a + worst.b), worst.b);
        total_val += v1 + v2;
        total_err += e1 + e2;
    }
    double sum = 0.0;
    for (const Seg& s : heap) sum += s.val;
    return sum;
}

} // namespace equishoot

#endif
