#ifndef EQUISHOOT_INTERP_HPP
#define EQUISHOOT_INTERP_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "equishoot/errors.hpp"

namespace equishoot {

// Monotone cubic interpolant (Fritsch-Carlson slopes). Where the data is
// monotone the interpolant is monotone, so values stay inside the data range.
class PchipInterpolant {
public:
    PchipInterpolant() = default;

    PchipInterpolant(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 2 || y_.size() != n)
            throw DomainError("pchip needs at least two nodes and matching arrays");
        m_.assign(n, 0.0);
        std::vector<double> d(n - 1), s(n - 1);
        for (std::size_t k = 0; k + 1 < n; ++k) {
            d[k] = x_[k + 1] - x_[k];
            if (!(d[k] > 0.0)) throw DomainError("pchip nodes must be strictly increasing");
            s[k] = (y_[k + 1] - y_[k]) / d[k];
        }
        if (n == 2) {
            m_[0] = m_[1] = s[0];
        } else {
            for (std::size_t k = 1; k + 1 < n; ++k) {
                if (s[k - 1] * s[k] <= 0.0) {
                    m_[k] = 0.0;
                } else {
                    const double w1 = 2.0 * d[k] + d[k - 1];
                    const double w2 = d[k] + 2.0 * d[k - 1];
                    m_[k] = (w1 + w2) / (w1 / s[k - 1] + w2 / s[k]);
                }
            }
            m_[0] = edge_slope(d[0], d[1], s[0], s[1]);
            m_[n - 1] = edge_slope(d[n - 2], d[n - 3], s[n - 2], s[n - 3]);
        }
    }

    double operator()(double x) const {
        const std::size_t k = locate(x);
        const double dx = x_[k + 1] - x_[k];
        const double t = (x - x_[k]) / dx;
        const double t2 = t * t, t3 = t2 * t;
        const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        const double h10 = t3 - 2.0 * t2 + t;
        const double h01 = -2.0 * t3 + 3.0 * t2;
        const double h11 = t3 - t2;
        return h00 * y_[k] + h10 * dx * m_[k] + h01 * y_[k + 1] + h11 * dx * m_[k + 1];
    }

    double derivative(double x) const {
        const std::size_t k = locate(x);
        const double dx = x_[k + 1] - x_[k];
        const double t = (x - x_[k]) / dx;
        const double t2 = t * t;
        const double d00 = (6.0 * t2 - 6.0 * t) / dx;
        const double d10 = 3.0 * t2 - 4.0 * t + 1.0;
        const double d01 = (-6.0 * t2 + 6.0 * t) / dx;
        const double d11 = 3.0 * t2 - 2.0 * t;
        return d00 * y_[k] + d10 * m_[k] + d01 * y_[k + 1] + d11 * m_[k + 1];
    }

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

private:
    static double edge_slope(double d0, double d1, double s0, double s1) {
        double m = ((2.0 * d0 + d1) * s0 - d0 * s1) / (d0 + d1);
        if (m * s0 <= 0.0) return 0.0;
        if (s0 * s1 <= 0.0 && std::abs(m) > 3.0 * std::abs(s0)) return 3.0 * s0;
        return m;
    }

    std::size_t locate(double x) const {
        if (!(x >= x_.front() && x <= x_.back()))
            throw DomainError("pchip evaluation outside the node range");
        auto it = std::upper_bound(x_.begin(), x_.end(), x);
        std::size_t k = static_cast<std::size_t>(it - x_.begin());
        if (k > 0) --k;
        if (k + 1 >= x_.size()) k = x_.size() - 2;
        return k;
    }

    std::vector<double> x_, y_, m_;
};

} // namespace equishoot

#endif
