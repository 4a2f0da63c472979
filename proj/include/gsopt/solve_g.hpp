#pragma once

#include <algorithm>
#include <cmath>

#include "gsopt/ell.hpp"
#include "gsopt/errors.hpp"

namespace gsopt {

// Self-consistent gradient-level requirement G >= phi(G). Each variant's
// phi matches the starting condition of the corresponding convergence
// guarantee; the solver below returns the smallest satisfying level.
struct GConstraint {
    enum class Variant { NonconvexGd, NagConvex, Sgd, NagStronglyConvex };

    Variant variant = Variant::NonconvexGd;
    EllFunction ell = EllFunction::constant(1.0);
    double delta0 = 0.0;   // f(x0) - f*
    double grad0 = 0.0;    // ||grad f(x0)||
    double dist0sq = 0.0;  // ||x0 - x*||^2 (momentum variants)
    double alpha = 2.0;    // momentum grading
    double mu = 0.0;       // strong convexity (NagStronglyConvex)
    double sigma = 0.0;    // noise scale (Sgd)
    double delta = 0.0;    // failure probability (Sgd)
    double epsilon = 0.0;  // target accuracy (Sgd); not part of phi

    void validate() const {
        if (!(delta0 >= 0.0) || !std::isfinite(delta0))
            throw ParameterError("initial gap must be a nonnegative finite number");
        if (!(grad0 >= 0.0) || !std::isfinite(grad0))
            throw ParameterError("initial gradient norm must be a nonnegative finite number");
        switch (variant) {
        case Variant::NonconvexGd:
            break;
        case Variant::NagConvex:
            if (!(dist0sq >= 0.0) || !std::isfinite(dist0sq))
                throw ParameterError("initial squared distance must be a nonnegative finite number");
            if (!(alpha > 0.0) || alpha > 2.0)
                throw ParameterError("momentum grading must lie in (0, 2]");
            break;
        case Variant::NagStronglyConvex:
            if (!(dist0sq >= 0.0) || !std::isfinite(dist0sq))
                throw ParameterError("initial squared distance must be a nonnegative finite number");
            if (!(alpha > 0.0) || alpha > 2.0)
                throw ParameterError("momentum grading must lie in (0, 2]");
            if (!(mu > 0.0) || !std::isfinite(mu))
                throw ParameterError("strong convexity level must be positive");
            break;
        case Variant::Sgd:
            if (!(sigma >= 0.0) || !std::isfinite(sigma))
                throw ParameterError("noise scale must be a nonnegative finite number");
            if (!(delta > 0.0) || !(delta < 1.0))
                throw ParameterError("failure probability must lie in (0, 1)");
            break;
        }
    }

    // Terms of the requirement that do not involve ell(G); the solver seeds
    // its search here and a satisfied seed is returned as-is.
    double explicit_lower() const {
        switch (variant) {
        case Variant::NonconvexGd: return 2.0 * grad0;
        case Variant::NagConvex: return grad0;
        case Variant::NagStronglyConvex: return grad0;
        case Variant::Sgd: return std::max(2.0 * grad0, sigma);
        }
        return 0.0;
    }

    double phi(double G) const {
        switch (variant) {
        case Variant::NonconvexGd:
            return std::max(std::sqrt(32.0 * ell(G) * delta0), 2.0 * grad0);
        case Variant::NagConvex: {
            const double L = ell(2.0 * G);
            const double graded = std::max(std::pow(L, 1.0 / alpha - 0.5), 1.0);
            return std::max(8.0 * graded * std::sqrt(L * (delta0 + dist0sq)), grad0);
        }
        case Variant::NagStronglyConvex: {
            const double L = ell(2.0 * G);
            const double graded = std::max(std::pow(L, 1.0 / alpha - 0.5), 1.0);
            const double budget = (delta0 + mu * dist0sq) / std::min(mu, 1.0);
            return std::max(8.0 * graded * std::sqrt(L * budget), grad0);
        }
        case Variant::Sgd:
            return std::max({40.0 * std::sqrt((delta0 + 2.0 * sigma) * ell(G) / delta),
                             2.0 * grad0, sigma});
        }
        return 0.0;
    }
};

// Smallest G with G >= phi(G): double up from the explicit lower terms until
// satisfied, then bisect the bracket. Diverging past 1e30 means the
// requirement has no finite solution.
inline double solve_G(const GConstraint& c) {
    c.validate();
    const double kFloor = 1e-12;
    const double kCap = 1e30;

    double lo = std::max(c.explicit_lower(), kFloor);
    if (c.phi(lo) <= lo) return lo;

    double hi = lo;
    while (c.phi(hi) > hi) {
        hi *= 2.0;
        if (hi > kCap)
            throw NoFiniteGError("gradient-level requirement has no finite solution");
    }
    // Invariant: phi(lo) > lo, phi(hi) <= hi.
    lo = hi / 2.0;
    for (int i = 0; i < 200 && (hi - lo) > 1e-13 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (c.phi(mid) <= mid)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

} // namespace gsopt
