#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace gsopt {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(const Vec& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    if (m == 0.0 || !std::isfinite(m)) return m;
    // Rescale when squaring would overflow or flush to zero.
    if (m > 1e140 || m < 1e-140) {
        double s = 0.0;
        for (double v : a) {
            const double r = v / m;
            s += r * r;
        }
        return m * std::sqrt(s);
    }
    return std::sqrt(dot(a, a));
}

inline double dist_sq(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

inline Vec sub(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

// a + c*b
inline Vec axpy(const Vec& a, double c, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + c * b[i];
    return r;
}

inline bool all_finite(const Vec& a) {
    for (double v : a)
        if (!std::isfinite(v)) return false;
    return true;
}

} // namespace gsopt
