#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gsopt/errors.hpp"
#include "gsopt/hard_instance.hpp"
#include "gsopt/objective.hpp"

namespace gsopt {

namespace detail {

// Deterministic sample grid used for envelope fits: log-spaced magnitudes in
// [lo, hi], both signs when two_sided.
inline std::vector<double> log_grid(double lo, double hi, int n, bool two_sided) {
    std::vector<double> xs;
    xs.reserve(two_sided ? 2 * n : n);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; ++i) {
        const double x = std::exp(llo + (lhi - llo) * i / (n - 1));
        xs.push_back(x);
        if (two_sided) xs.push_back(-x);
    }
    return xs;
}

struct Envelope {
    double L0 = 0.0;
    double Lrho = 0.0;
};

// Fit ell(u) = L0 + Lrho*u^rho over the grid: L0 seeds at the largest
// Hessian norm among small-gradient samples (||grad|| <= 1), then Lrho takes
// the worst remaining ratio with a 5% pad.
template <typename ValueFn, typename GradFn, typename HessFn>
Envelope fit_envelope(ValueFn&&, GradFn&& grad, HessFn&& hess, double rho,
                      double lo, double hi, bool two_sided, int n = 10000) {
    Envelope env;
    const auto xs = log_grid(lo, hi, n, two_sided);
    bool seeded = false;
    for (double x : xs) {
        const double g = std::abs(grad(x)), h = std::abs(hess(x));
        if (!std::isfinite(g) || !std::isfinite(h)) continue;
        if (g <= 1.0 && (!seeded || h > env.L0)) {
            env.L0 = h;
            seeded = true;
        }
    }
    double worst = 0.0;
    for (double x : xs) {
        const double g = std::abs(grad(x)), h = std::abs(hess(x));
        if (!std::isfinite(g) || !std::isfinite(h)) continue;
        if (h > env.L0 && g > 0.0)
            worst = std::max(worst, (h - env.L0) / std::pow(g, rho));
    }
    env.Lrho = 1.05 * worst;
    if (!(env.L0 + env.Lrho > 0.0))
        throw ProfileError("envelope fit produced an identically zero profile");
    return env;
}

// Global minimum of a smooth univariate function over [lo, hi]: coarse grid,
// then golden-section refinement around the best bracket.
template <typename F>
std::pair<double, double> grid_golden_min(F&& f, double lo, double hi, int n = 8192) {
    double best_x = lo, best_f = f(lo);
    for (int i = 1; i < n; ++i) {
        const double x = lo + (hi - lo) * i / (n - 1);
        const double v = f(x);
        if (v < best_f) {
            best_f = v;
            best_x = x;
        }
    }
    const double h = (hi - lo) / (n - 1);
    double a = std::max(lo, best_x - h), b = std::min(hi, best_x + h);
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 120; ++it) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    const double x = 0.5 * (a + b);
    return {x, f(x)};
}

inline double scalar(const Vec& x) { return x[0]; }

} // namespace detail

// f(x) = L/2 ||x||^2.
inline Objective make_quadratic(double L, int dim = 1) {
    if (!(L > 0.0) || !std::isfinite(L))
        throw ParameterError("quadratic curvature must be positive and finite");
    if (dim < 1) throw ParameterError("quadratic dimension must be at least 1");
    Objective o;
    o.id = "quadratic";
    o.params = {{"L", L}, {"dim", dim}};
    o.dim = dim;
    o.value = [L](const Vec& x) { return 0.5 * L * dot(x, x); };
    o.gradient = [L](const Vec& x) {
        Vec g(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) g[i] = L * x[i];
        return g;
    };
    o.hessian_norm = [L](const Vec&) { return L; };
    o.domain = DomainSpec::all_space();
    o.profile = EllFunction::constant(L);
    o.f_star = 0.0;
    o.x_star = Vec(dim, 0.0);
    o.mu = L;
    o.convexity = Convexity::StronglyConvex;
    o.sample_hi = 1e6;
    return o;
}

// Polynomial with ascending coefficients c0 + c1 x + ... + cn x^n. Requires
// even degree >= 2 and a positive leading coefficient so a global minimum
// exists; the minimum is located numerically.
inline Objective make_polynomial(std::vector<double> coeffs) {
    while (coeffs.size() > 1 && coeffs.back() == 0.0) coeffs.pop_back();
    const int deg = (int)coeffs.size() - 1;
    if (deg < 2) throw ParameterError("polynomial degree must be at least 2");
    if (deg % 2 != 0 || coeffs.back() <= 0.0)
        throw ParameterError("polynomial is unbounded below (odd degree or nonpositive leading coefficient)");
    for (double c : coeffs)
        if (!std::isfinite(c)) throw ParameterError("polynomial coefficients must be finite");

    auto val = [coeffs](double x) {
        double v = 0.0;
        for (int i = (int)coeffs.size() - 1; i >= 0; --i) v = v * x + coeffs[i];
        return v;
    };
    auto der = [coeffs](double x) {
        double v = 0.0;
        for (int i = (int)coeffs.size() - 1; i >= 1; --i) v = v * x + i * coeffs[i];
        return v;
    };
    auto der2 = [coeffs](double x) {
        double v = 0.0;
        for (int i = (int)coeffs.size() - 1; i >= 2; --i) v = v * x + (double)i * (i - 1) * coeffs[i];
        return v;
    };

    // Root bound for f': all stationary points lie in [-R, R].
    double maxratio = 0.0;
    const double lead = deg * coeffs[deg];
    for (int i = 1; i < deg; ++i) maxratio = std::max(maxratio, std::abs(i * coeffs[i] / lead));
    const double R = 1.0 + maxratio;
    auto [xmin, fmin] = detail::grid_golden_min(val, -R, R);

    Convexity cvx = Convexity::Convex;
    std::optional<double> mu;
    if (deg == 2) {
        cvx = Convexity::StronglyConvex;
        mu = 2.0 * coeffs[2];
    } else {
        for (int i = 0; i < 4096; ++i) {
            const double x = -R + 2.0 * R * i / 4095;
            if (der2(x) < -1e-12 * (1.0 + std::abs(der2(0.0)))) {
                cvx = Convexity::Nonconvex;
                break;
            }
        }
    }

    Objective o;
    o.id = "polynomial";
    o.params = {{"coeffs", coeffs}};
    o.value = [val](const Vec& x) { return val(detail::scalar(x)); };
    o.gradient = [der](const Vec& x) { return Vec{der(detail::scalar(x))}; };
    o.hessian_norm = [der2](const Vec& x) { return std::abs(der2(detail::scalar(x))); };
    o.domain = DomainSpec::all_space();
    o.f_star = fmin;
    o.x_star = Vec{xmin};
    o.mu = mu;
    o.convexity = cvx;
    o.bounded_below = true;
    o.sample_hi = 1e3;
    const auto env = detail::fit_envelope(val, der, der2, 1.0, o.sample_lo, o.sample_hi, true);
    o.profile = EllFunction::power_law(env.L0, env.Lrho, 1.0);
    return o;
}

// f(x) = a^x, a > 1. Second derivative equals log(a) times the first, so
// the linear profile is exact with no constant term.
inline Objective make_exponential(double a) {
    if (!(a > 1.0) || !std::isfinite(a))
        throw ParameterError("exponential base must exceed 1");
    const double la = std::log(a);
    Objective o;
    o.id = "exponential";
    o.params = {{"a", a}};
    o.value = [la](const Vec& x) { return std::exp(la * detail::scalar(x)); };
    o.gradient = [la](const Vec& x) { return Vec{la * std::exp(la * detail::scalar(x))}; };
    o.hessian_norm = [la](const Vec& x) { return la * la * std::exp(la * detail::scalar(x)); };
    o.domain = DomainSpec::all_space();
    o.profile = EllFunction::power_law(0.0, la, 1.0);
    o.f_star = 0.0;  // infimum, not attained
    o.convexity = Convexity::Convex;
    o.bounded_below = true;
    // Checks square the gradient, so keep a^x safely below sqrt(max double).
    o.sample_hi = 340.0 / la;
    return o;
}

// f(x) = a^(b^x), a, b > 1. Grows too fast for any affine-in-gradient
// bound; certified against a fitted profile with exponent `alpha`.
inline Objective make_double_exponential(double a, double b, double alpha) {
    if (!(a > 1.0) || !(b > 1.0) || !std::isfinite(a) || !std::isfinite(b))
        throw ParameterError("double-exponential bases must exceed 1");
    if (!(alpha > 1.0) || alpha > 2.0)
        throw ParameterError("double-exponential profile exponent must lie in (1, 2]");
    const double la = std::log(a), lb = std::log(b);
    auto val = [la, lb](double x) { return std::exp(la * std::exp(lb * x)); };
    auto der = [la, lb, val](double x) { return la * lb * std::exp(lb * x) * val(x); };
    auto der2 = [la, lb, der](double x) { return lb * (la * std::exp(lb * x) + 1.0) * der(x); };

    // Largest |x| whose gradient leaves headroom for the superlinear
    // profile products downstream bounds the certified range.
    const double g_cap = 1e110;
    auto inside = [&](double x) { return std::isfinite(der(x)) && der(x) < g_cap; };
    double hi_lo = 1.0, hi_hi = 1.0;
    while (inside(hi_hi)) {
        hi_lo = hi_hi;
        hi_hi *= 2.0;
        if (hi_hi > 1e6) break;
    }
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (hi_lo + hi_hi);
        (inside(mid) ? hi_lo : hi_hi) = mid;
    }
    const double hi = 0.98 * hi_lo;

    Objective o;
    o.id = "double_exponential";
    o.params = {{"a", a}, {"b", b}, {"alpha", alpha}};
    o.value = [val](const Vec& x) { return val(detail::scalar(x)); };
    o.gradient = [der](const Vec& x) { return Vec{der(detail::scalar(x))}; };
    o.hessian_norm = [der2](const Vec& x) { return std::abs(der2(detail::scalar(x))); };
    o.domain = DomainSpec::all_space();
    o.f_star = 1.0;  // infimum as x -> -inf, not attained
    o.convexity = Convexity::Convex;
    o.bounded_below = true;
    o.sample_hi = hi;
    const auto env = detail::fit_envelope(val, der, der2, alpha, o.sample_lo, o.sample_hi, true);
    o.profile = EllFunction::power_law(env.L0, env.Lrho, alpha);
    return o;
}

// f(x) = 1/x on (0, inf). The exact relation |f''| = 2|f'|^{3/2} pins the
// fitted exponent at 1.5.
inline Objective make_rational_inverse() {
    Objective o;
    o.id = "rational_inverse";
    o.params = nlohmann::json::object();
    auto val = [](double x) { return 1.0 / x; };
    auto der = [](double x) { return -1.0 / (x * x); };
    auto der2 = [](double x) { return 2.0 / (x * x * x); };
    o.value = [val](const Vec& x) { return val(detail::scalar(x)); };
    o.gradient = [der](const Vec& x) { return Vec{der(detail::scalar(x))}; };
    o.hessian_norm = [der2](const Vec& x) { return std::abs(der2(detail::scalar(x))); };
    o.domain = DomainSpec::open_halfline(0.0);
    o.f_star = 0.0;  // infimum as x -> inf, not attained
    o.convexity = Convexity::Convex;
    o.bounded_below = true;
    o.sample_lo = 1e-6;
    o.sample_hi = 1e3;
    const auto env = detail::fit_envelope(val, der, der2, 1.5, o.sample_lo, o.sample_hi, false);
    o.profile = EllFunction::power_law(env.L0, env.Lrho, 1.5);
    return o;
}

// f(x) = -log(x) on (0, inf): f'' = f'^2 exactly, the boundary case of
// quadratic profile growth. Unbounded below as x -> inf.
inline Objective make_logarithmic() {
    Objective o;
    o.id = "logarithmic";
    o.params = nlohmann::json::object();
    o.value = [](const Vec& x) { return -std::log(detail::scalar(x)); };
    o.gradient = [](const Vec& x) { return Vec{-1.0 / detail::scalar(x)}; };
    o.hessian_norm = [](const Vec& x) {
        const double s = detail::scalar(x);
        return 1.0 / (s * s);
    };
    o.domain = DomainSpec::open_halfline(0.0);
    o.profile = EllFunction::power_law(0.0, 1.0, 2.0);
    o.f_star = std::nullopt;
    o.convexity = Convexity::Convex;
    o.bounded_below = false;
    o.sample_lo = 1e-6;
    o.sample_hi = 1e6;
    return o;
}

// f(x) = x^p. Positive integer p lives on the whole line; other exponents
// on (0, inf). Exponents in (1, 2) have unbounded curvature at vanishing
// gradient and admit no non-decreasing profile.
inline Objective make_power(double p) {
    if (!std::isfinite(p)) throw ParameterError("power exponent must be finite");
    if (p == 0.0) throw ParameterError("power exponent 0 is a degenerate constant");
    if (p == 1.0) throw ParameterError("power exponent 1 has no curvature to certify");
    if (p > 1.0 && p < 2.0)
        throw ParameterError("power exponents in (1, 2) admit no non-decreasing smoothness profile");
    const bool integral = std::floor(p) == p;
    const bool whole_line = integral && p > 0.0;

    auto val = [p](double x) { return std::pow(x, p); };
    auto der = [p](double x) { return p * std::pow(x, p - 1.0); };
    auto der2 = [p](double x) { return p * (p - 1.0) * std::pow(x, p - 2.0); };

    const double rho = (p - 2.0) / (p - 1.0);
    const double lrho = std::abs(p * (p - 1.0)) / std::pow(std::abs(p), rho);

    Objective o;
    o.id = "power";
    o.params = {{"p", p}};
    o.value = [val](const Vec& x) { return val(detail::scalar(x)); };
    o.gradient = [der](const Vec& x) { return Vec{der(detail::scalar(x))}; };
    o.hessian_norm = [der2](const Vec& x) { return std::abs(der2(detail::scalar(x))); };
    o.domain = whole_line ? DomainSpec::all_space() : DomainSpec::open_halfline(0.0);
    o.profile = rho == 0.0 ? EllFunction::constant(lrho)
                           : EllFunction::power_law(0.0, lrho, rho);
    const bool even = integral && std::fmod(p, 2.0) == 0.0;
    if (even) {
        o.f_star = 0.0;
        o.x_star = Vec{0.0};
        o.convexity = Convexity::Convex;
        if (p == 2.0) {
            o.mu = 2.0;
            o.convexity = Convexity::StronglyConvex;
        }
    } else if (whole_line) {
        // Odd positive integer power: unbounded below on the line.
        o.f_star = std::nullopt;
        o.convexity = Convexity::Nonconvex;
        o.bounded_below = false;
    } else {
        o.f_star = 0.0;  // infimum on (0, inf), not attained
        o.convexity = (p < 0.0 || p >= 2.0) ? Convexity::Convex : Convexity::Nonconvex;
    }
    // Keep sampled values finite for large exponents.
    if (std::abs(p) > 0.0) {
        const double hi_cap = std::pow(10.0, std::min(3.0, 280.0 / std::max(std::abs(p), std::abs(p - 2.0))));
        o.sample_hi = std::min(1e3, hi_cap);
    }
    return o;
}

// f(x) = e^x + e^{-x}: strongly convex with secant-linear curvature growth,
// ||f''|| = sqrt(||f'||^2 + 4) <= ||f'|| + 2.
inline Objective make_cosh() {
    Objective o;
    o.id = "cosh";
    o.params = nlohmann::json::object();
    o.value = [](const Vec& x) {
        // 2 + 4 sinh^2(s/2) equals e^s + e^-s without cancellation near 0,
        // where the gap to the minimum drops under the rounding of 2.
        const double s = detail::scalar(x);
        const double h = std::sinh(0.5 * s);
        return 2.0 + 4.0 * h * h;
    };
    o.gradient = [](const Vec& x) {
        const double s = detail::scalar(x);
        return Vec{std::exp(s) - std::exp(-s)};
    };
    o.hessian_norm = [](const Vec& x) {
        const double s = detail::scalar(x);
        return std::exp(s) + std::exp(-s);
    };
    o.domain = DomainSpec::all_space();
    o.profile = EllFunction::power_law(2.0, 1.0, 1.0);
    o.f_star = 2.0;
    o.x_star = Vec{0.0};
    o.mu = 2.0;
    o.convexity = Convexity::StronglyConvex;
    // Below ~1e-5 the gap to the minimum falls under the rounding
    // granularity of values near 2, so margins cannot be resolved there.
    o.sample_lo = 1e-4;
    // Checks square the gradient, so keep e^x safely below sqrt(max double).
    o.sample_hi = 340.0;
    return o;
}

// Coordinate-wise sum of `dim` copies of a univariate objective.
inline Objective make_separable(const Objective& inner, int dim) {
    if (inner.dim != 1) throw ParameterError("separable wrapper needs a univariate inner objective");
    if (dim < 1) throw ParameterError("separable dimension must be at least 1");
    Objective o = inner;
    o.id = inner.id + "_separable";
    o.params = {{"inner", inner.params}, {"dim", dim}, {"inner_id", inner.id}};
    o.dim = dim;
    auto v1 = inner.value;
    auto g1 = inner.gradient;
    auto h1 = inner.hessian_norm;
    o.value = [v1](const Vec& x) {
        double s = 0.0;
        for (double xi : x) s += v1(Vec{xi});
        return s;
    };
    o.gradient = [g1](const Vec& x) {
        Vec g(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) g[i] = g1(Vec{x[i]})[0];
        return g;
    };
    // Separable Hessian is diagonal; its norm is the worst coordinate.
    o.hessian_norm = [h1](const Vec& x) {
        double m = 0.0;
        for (double xi : x) m = std::max(m, h1(Vec{xi}));
        return m;
    };
    if (inner.f_star) o.f_star = *inner.f_star * dim;
    if (inner.x_star) o.x_star = Vec(dim, (*inner.x_star)[0]);
    return o;
}

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& params,
                                std::initializer_list<const char*> allowed,
                                const std::string& id) {
    for (auto it = params.begin(); it != params.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) ok = true;
        if (!ok) throw ConfigError("unknown parameter '" + it.key() + "' for objective '" + id + "'");
    }
}

} // namespace detail

// String-addressable catalog used by config files.
inline Objective make_objective(const std::string& id, const nlohmann::json& params) {
    if (!params.is_object()) throw ConfigError("objective params must be an object");
    if (id == "quadratic") {
        detail::reject_unknown_keys(params, {"L", "dim"}, id);
        return make_quadratic(params.value("L", 1.0), params.value("dim", 1));
    }
    if (id == "polynomial") {
        detail::reject_unknown_keys(params, {"coeffs"}, id);
        if (!params.contains("coeffs")) throw ConfigError("polynomial objective requires coeffs");
        return make_polynomial(params.at("coeffs").get<std::vector<double>>());
    }
    if (id == "exponential") {
        detail::reject_unknown_keys(params, {"a"}, id);
        return make_exponential(params.value("a", std::exp(1.0)));
    }
    if (id == "double_exponential") {
        detail::reject_unknown_keys(params, {"a", "b", "alpha"}, id);
        return make_double_exponential(params.value("a", std::exp(1.0)),
                                       params.value("b", std::exp(1.0)),
                                       params.value("alpha", 1.5));
    }
    if (id == "rational_inverse") {
        detail::reject_unknown_keys(params, {}, id);
        return make_rational_inverse();
    }
    if (id == "logarithmic") {
        detail::reject_unknown_keys(params, {}, id);
        return make_logarithmic();
    }
    if (id == "power") {
        detail::reject_unknown_keys(params, {"p"}, id);
        if (!params.contains("p")) throw ConfigError("power objective requires p");
        return make_power(params.at("p").get<double>());
    }
    if (id == "cosh") {
        detail::reject_unknown_keys(params, {}, id);
        return make_cosh();
    }
    if (id == "hard_instance") {
        detail::reject_unknown_keys(params, {"L0", "L2", "G0", "Delta0"}, id);
        for (const char* k : {"L0", "L2", "G0", "Delta0"})
            if (!params.contains(k))
                throw ConfigError(std::string("hard_instance objective requires ") + k);
        return make_hard_instance(params.at("L0").get<double>(), params.at("L2").get<double>(),
                                  params.at("G0").get<double>(), params.at("Delta0").get<double>())
            .second;
    }
    throw ConfigError("unknown objective id: " + id);
}

// Default instantiations of every catalog entry, used by profile
// verification sweeps.
inline std::vector<Objective> catalog_defaults() {
    std::vector<Objective> v;
    v.push_back(make_quadratic(2.0));
    v.push_back(make_polynomial({1.0, 0.0, -2.0, 0.0, 1.0}));
    v.push_back(make_power(4.0));
    v.push_back(make_exponential(std::exp(1.0)));
    v.push_back(make_double_exponential(std::exp(1.0), std::exp(1.0), 1.5));
    v.push_back(make_rational_inverse());
    v.push_back(make_logarithmic());
    v.push_back(make_cosh());
    return v;
}

} // namespace gsopt
