#ifndef EQUISHOOT_EXTRAPOLATE_HPP
#define EQUISHOOT_EXTRAPOLATE_HPP

#include <cmath>
#include <cstddef>
#include <vector>

namespace equishoot {

// Richardson elimination on a geometric ladder. `us` must be strictly
// decreasing with (approximately) constant ratio r = us[k]/us[k+1] > 1,
// and vals[k] = s + sum_j c_j us[k]^{e_j}. Each exponent in `exps`
// removes one mode; repeating an exponent also absorbs the u^e*log(u)
// term that appears at resonances. Returns the deepest surviving entry.
inline double richardson_limit(const std::vector<double>& us,
                               const std::vector<double>& vals,
                               const std::vector<double>& exps) {
    if (vals.empty()) return 0.0;
    const double r = us.size() > 1 ? us[0] / us[1] : 2.0;
    std::vector<double> t = vals;
    for (double e : exps) {
        if (t.size() < 2) break;
        const double w = std::pow(r, -e);
        std::vector<double> next(t.size() - 1);
        for (std::size_t k = 0; k + 1 < t.size(); ++k)
            next[k] = (t[k + 1] - w * t[k]) / (1.0 - w);
        t.swap(next);
    }
    return t.back();
}

// Least-squares slope and intercept of y against x.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i]; sy += y[i]; sxx += x[i] * x[i]; sxy += x[i] * y[i];
    }
    const double nn = static_cast<double>(n);
    const double den = nn * sxx - sx * sx;
    LineFit f;
    f.slope = (nn * sxy - sx * sy) / den;
    f.intercept = (sy - f.slope * sx) / nn;
    return f;
}

// Fits v(u) ~ C * u^{-p} on a window of positive values: log v = log C - p log u.
struct PowerLawFit {
    double exponent = 0.0;   // the p in C * u^{-p}
    double prefactor = 0.0;  // C
};

inline PowerLawFit fit_power_law(const std::vector<double>& u,
                                 const std::vector<double>& v) {
    std::vector<double> lx, ly;
    lx.reserve(u.size());
    ly.reserve(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] > 0.0 && v[i] > 0.0) {
            lx.push_back(std::log(u[i]));
            ly.push_back(std::log(v[i]));
        }
    }
    PowerLawFit out;
    if (lx.size() < 2) return out;
    const LineFit f = fit_line(lx, ly);
    out.exponent = -f.slope;
    out.prefactor = std::exp(f.intercept);
    return out;
}

} // namespace equishoot

#endif
