#pragma once

#include <cmath>
#include <utility>

#include "gsopt/errors.hpp"
#include "gsopt/objective.hpp"

namespace gsopt {

// Worst-case construction showing that constant-stepsize gradient descent
// on a (2, L0, L2)-smooth function either oscillates forever between two
// reflection points or needs exponentially many steps (in L2*Delta0) to
// reach a 1-stationary point. The underlying shape f is logarithmic in the
// outer region, a reflected logarithm in the transition band, and a
// parabola in the core; the exposed objective is g = f / L2.
struct HardInstance {
    double L0 = 0.0;
    double L2 = 0.0;
    double G0 = 0.0;
    double Delta0 = 0.0;

    double c = 0.0;       // inner scale: parabola on |x| < c/2
    double eta1 = 0.0;    // smallest sticking stepsize of the unscaled shape
    double y_fixed = 0.0; // reflection fixed point at stepsize eta1
    double x0 = 0.0;      // recommended start
    double k = 0.0;       // parabola curvature (value k*x^2 + b)
    double b = 0.0;       // parabola offset
    double scale = 0.0;   // 1/L2 multiplying f

    // Minimum number of steps to 1-stationarity for stepsizes below the
    // sticking range.
    double step_floor() const { return std::exp(L2 * Delta0 / 8.0) / 6.0; }

    // Stepsizes (for the scaled objective g) whose reflection orbit never
    // leaves |x| >= y: [L2*eta1, L2*c^2/4].
    double stuck_eta_lo() const { return L2 * eta1; }
    double stuck_eta_hi() const { return L2 * c * c / 4.0; }

    // Period-2 reflection point for a stepsize in the sticking range:
    // z - eta*g'(z) = -z with g'(z) = 1/(L2*(z-c)).
    double period2_point(double eta) const {
        const double eta_f = eta / L2;
        if (!(eta_f >= eta1 * (1.0 - 1e-12)) || !(eta_f <= c * c / 4.0 * (1.0 + 1e-12)))
            throw ParameterError("stepsize outside the sticking range has no reflection orbit");
        return 0.5 * (c + std::sqrt(c * c + 2.0 * eta_f));
    }

    // A sticking-range stepsize chosen so the reflection orbit is exactly
    // representable: z = c + 2^-k gives eta_f = 2*z*(z-c) with power-of-two
    // factors throughout, so iterating from z alternates signs bit-exactly.
    double dyadic_stuck_eta() const {
        for (int kk = 0; kk < 80; ++kk) {
            const double h = std::ldexp(1.0, -kk);
            const double z = c + h;
            if (z - c != h) continue;  // addition rounded; try a smaller step
            const double eta_f = 2.0 * z * h;
            if (eta_f <= c * c / 4.0 && eta_f >= eta1) return L2 * eta_f;
        }
        throw SearchError("no exactly representable sticking stepsize found");
    }
};

// Parameters must satisfy L2*Delta0 >= 10; all four must be positive.
inline std::pair<HardInstance, Objective> make_hard_instance(double L0, double L2,
                                                             double G0, double Delta0) {
    if (!(L0 > 0.0) || !(L2 > 0.0) || !(G0 > 0.0) || !(Delta0 > 0.0))
        throw ParameterError("hard-instance parameters must be positive");
    if (!(L2 * Delta0 >= 10.0))
        throw ParameterError("hard instance requires L2*Delta0 >= 10");

    HardInstance hi;
    hi.L0 = L0;
    hi.L2 = L2;
    hi.G0 = G0;
    hi.Delta0 = Delta0;
    hi.scale = 1.0 / L2;

    hi.c = std::max({2.0 / std::sqrt(L0 * L2), 2.0 / (L2 * G0), std::sqrt(8.0 / L0)});
    const double log_inv_eta1 =
        (L2 * Delta0 - 3.5 * std::log(2.0) - 0.5) / 2.0 - 2.0 * std::log(hi.c);
    hi.eta1 = std::exp(-log_inv_eta1);
    hi.y_fixed = 0.5 * (hi.c + std::sqrt(hi.c * hi.c + 2.0 * hi.eta1));
    hi.x0 = 1.5 * hi.c + 0.5 * std::sqrt(hi.eta1);

    const double c = hi.c, y = hi.y_fixed;
    // Parabola matched to value and slope of the transition band at c/2.
    const double fp_half = 1.0 / (2.0 * y - 1.5 * c);
    const double f_half = 2.0 * std::log(y - c) - std::log(2.0 * y - 1.5 * c);
    hi.k = fp_half / c;
    hi.b = f_half - c * fp_half / 4.0;

    const double k = hi.k, b = hi.b;
    const double inv_l2 = 1.0 / L2;

    auto value1 = [c, y, k, b, inv_l2](double x) {
        const double ax = std::abs(x);
        double f;
        if (ax >= y)
            f = std::log(ax - c);
        else if (ax >= 0.5 * c)
            f = 2.0 * std::log(y - c) - std::log(2.0 * y - ax - c);
        else
            f = k * x * x + b;
        return f * inv_l2;
    };
    auto grad1 = [c, y, k, inv_l2](double x) {
        const double ax = std::abs(x);
        const double s = x < 0.0 ? -1.0 : 1.0;
        double d;
        if (ax >= y)
            d = s / (ax - c);
        else if (ax >= 0.5 * c)
            d = s / (2.0 * y - ax - c);
        else
            d = 2.0 * k * x;
        return d * inv_l2;
    };
    auto hess1 = [c, y, k, inv_l2](double x) {
        const double ax = std::abs(x);
        double h;
        if (ax >= y)
            h = 1.0 / ((ax - c) * (ax - c));
        else if (ax >= 0.5 * c)
            h = 1.0 / ((2.0 * y - ax - c) * (2.0 * y - ax - c));
        else
            h = 2.0 * k;
        return h * inv_l2;
    };

    Objective o;
    o.id = "hard_instance";
    o.params = {{"L0", L0}, {"L2", L2}, {"G0", G0}, {"Delta0", Delta0}};
    o.value = [value1](const Vec& x) { return value1(x[0]); };
    o.gradient = [grad1](const Vec& x) { return Vec{grad1(x[0])}; };
    o.hessian_norm = [hess1](const Vec& x) { return hess1(x[0]); };
    o.domain = DomainSpec::all_space();
    o.profile = EllFunction::power_law(2.0 * k / L2, L2, 2.0);
    o.f_star = b * inv_l2;
    o.x_star = Vec{0.0};
    o.convexity = Convexity::Nonconvex;
    o.sample_lo = 1e-6;
    o.sample_hi = 1e3 * std::max(1.0, hi.c);

    // Construction guarantees: start within budget and gradient level.
    if (!(2.0 * k / L2 <= L0 * (1.0 + 1e-9)))
        throw ParameterError("hard-instance core curvature exceeds L0");
    if (!(value1(hi.x0) - b * inv_l2 <= Delta0 * (1.0 + 1e-9)))
        throw ParameterError("hard-instance start exceeds the gap budget");
    if (!(std::abs(grad1(hi.x0)) <= G0 * (1.0 + 1e-9)))
        throw ParameterError("hard-instance start exceeds the gradient budget");

    return {hi, std::move(o)};
}

} // namespace gsopt
