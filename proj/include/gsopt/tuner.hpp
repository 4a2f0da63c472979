#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "gsopt/errors.hpp"
#include "gsopt/objective.hpp"
#include "gsopt/solve_g.hpp"
#include "gsopt/vec.hpp"

namespace gsopt {

enum class Method { GdConvex, GdStronglyConvex, GdNonconvex, NagConvex, NagStronglyConvex, Sgd };

inline std::string to_string(Method m) {
    switch (m) {
        case Method::GdConvex: return "gd_convex";
        case Method::GdStronglyConvex: return "gd_strongly_convex";
        case Method::GdNonconvex: return "gd_nonconvex";
        case Method::NagConvex: return "nag_convex";
        case Method::NagStronglyConvex: return "nag_strongly_convex";
        case Method::Sgd: return "sgd";
    }
    return "unknown";
}

inline Method method_from_string(const std::string& s) {
    if (s == "gd_convex") return Method::GdConvex;
    if (s == "gd_strongly_convex") return Method::GdStronglyConvex;
    if (s == "gd_nonconvex") return Method::GdNonconvex;
    if (s == "nag_convex") return Method::NagConvex;
    if (s == "nag_strongly_convex") return Method::NagStronglyConvex;
    if (s == "sgd") return Method::Sgd;
    throw ConfigError("unknown method \"" + s + "\"");
}

// Full record of a tuning decision. The echoed inputs make predict_bound a
// pure function of this struct, and eta always sits exactly on the method's
// ceiling so doubling it violates at least one ceiling term. Echo fields the
// objective could not supply (no known f* or x*) are NaN and the bounds
// needing them refuse.
struct TunedParams {
    Method method = Method::GdConvex;
    double G = 0.0;
    double L = 0.0;
    double rG = 0.0;
    double eta = 0.0;
    std::optional<std::int64_t> T;  // stochastic horizon
    std::optional<double> C;        // stochastic second-moment level
    // The nonconvex and stochastic theorems take L at level G while the
    // smoothness-to-radius conversion evaluates at 2G; both are reported.
    std::optional<double> L2G;
    std::optional<double> kappa;    // L/mu where strong convexity is used

    double delta0 = 0.0;
    double grad0 = 0.0;
    double dist0sq = 0.0;
    double alpha = 2.0;
    double mu = 0.0;
    double sigma = 0.0;
    double delta = 0.0;
    double epsilon = 0.0;

    // Value of the method's guarantee at iteration t: a suboptimality gap
    // for the convex methods, an averaged squared gradient norm for the
    // nonconvex and stochastic ones.
    double predict_bound(std::int64_t t) const {
        switch (method) {
            case Method::GdConvex:
                require_positive_t(t);
                require_known(dist0sq, "the initial distance to the minimizer");
                return dist0sq / (2.0 * eta * static_cast<double>(t));
            case Method::GdStronglyConvex: {
                require_positive_t(t);
                require_known(dist0sq, "the initial distance to the minimizer");
                const double q = std::pow(1.0 - eta * mu, static_cast<double>(t));
                return mu * q * dist0sq / (2.0 * (1.0 - q));
            }
            case Method::GdNonconvex:
                require_positive_t(t);
                require_known(delta0, "the initial gap");
                return 2.0 * delta0 / (eta * static_cast<double>(t));
            case Method::NagConvex: {
                if (t < 0) throw ParameterError("iteration index must be nonnegative");
                require_known(delta0 + dist0sq, "the initial gap and distance");
                const double td = static_cast<double>(t);
                return (4.0 * delta0 + 4.0 * dist0sq) / (eta * td * td + 4.0);
            }
            case Method::NagStronglyConvex: {
                require_positive_t(t);
                require_known(delta0 + dist0sq, "the initial gap and distance");
                const double q = std::pow(1.0 - std::sqrt(eta * mu), static_cast<double>(t - 1));
                return q * (delta0 + mu * dist0sq) / (eta * mu + q);
            }
            case Method::Sgd:
                require_positive_t(t);
                require_known(delta0, "the initial gap");
                return 8.0 * (delta0 + 2.0 * sigma) / (delta * eta * static_cast<double>(t));
        }
        throw ParameterError("unknown method");
    }

    nlohmann::json to_json() const {
        nlohmann::json j{{"method", to_string(method)}, {"G", G},     {"L", L},
                         {"rG", rG},                    {"eta", eta}};
        if (T) j["T"] = *T;
        if (C) j["C"] = *C;
        if (L2G) j["L2G"] = *L2G;
        if (kappa) j["kappa"] = *kappa;
        j["inputs"] = {{"delta0", delta0}, {"grad0", grad0},     {"dist0sq", dist0sq},
                       {"alpha", alpha},   {"mu", mu},           {"sigma", sigma},
                       {"delta", delta},   {"epsilon", epsilon}};
        return j;
    }

private:
    static void require_positive_t(std::int64_t t) {
        if (t < 1) throw ParameterError("this bound is defined for iterations t >= 1");
    }
    static void require_known(double v, const char* what) {
        if (!std::isfinite(v))
            throw TuningError(std::string("this bound needs ") + what +
                              ", which the objective did not provide");
    }
};

namespace detail {

inline double require_f_star(const Objective& obj) {
    if (!obj.f_star)
        throw TuningError("objective \"" + obj.id + "\" has no known minimum value");
    return *obj.f_star;
}

inline const Vec& require_x_star(const Objective& obj) {
    if (!obj.x_star)
        throw TuningError("objective \"" + obj.id + "\" has no known minimizer");
    return *obj.x_star;
}

inline double initial_gap(const Objective& obj, const Vec& x0) {
    const double gap = obj.eval_value(x0) - require_f_star(obj);
    if (gap < -1e-9 * (1.0 + std::abs(*obj.f_star)))
        throw TuningError("start value lies below the declared minimum of \"" + obj.id + "\"");
    return std::max(gap, 0.0);
}

constexpr double kUnknown = std::numeric_limits<double>::quiet_NaN();

// Echo-only variants: the basic gradient-descent stepsize does not consume
// f* or x*, so their absence maps to NaN instead of a refusal.
inline double initial_gap_or_nan(const Objective& obj, const Vec& x0) {
    return obj.f_star ? initial_gap(obj, x0) : kUnknown;
}

inline double dist0sq_or_nan(const Objective& obj, const Vec& x0) {
    return obj.x_star ? dist_sq(x0, *obj.x_star) : kUnknown;
}

inline void require_convex(const Objective& obj, const char* what) {
    if (obj.convexity == Convexity::Nonconvex)
        throw MethodMismatchError(std::string(what) + " requires a convex objective, got \"" +
                                  obj.id + "\"");
}

// Momentum growth exponent: the smallest of {1, 1.5, 2} strictly above the
// profile's growth degree, so the stepsize exponent 3-2/alpha stays
// meaningful. Degrees of 2 and above keep alpha=2 and leave infeasibility
// to the level solve.
inline double pick_alpha(const EllFunction& profile) {
    const double deg = profile.growth_degree();
    for (double a : {1.0, 1.5, 2.0})
        if (a > deg) return a;
    return 2.0;
}

inline double resolve_alpha(const EllFunction& profile, std::optional<double> alpha) {
    if (!alpha) return pick_alpha(profile);
    const double deg = profile.growth_degree();
    if (!(*alpha <= 2.0)) throw ParameterError("alpha must be at most 2");
    if (!(*alpha > 0.0)) throw ParameterError("alpha must be positive");
    if (!(*alpha >= deg))
        throw ParameterError("alpha must be at least the profile growth degree");
    return *alpha;
}

constexpr double kMinG = 1e-12;

} // namespace detail

inline TunedParams tune_gd_convex(const Objective& obj, const Vec& x0) {
    detail::require_convex(obj, "tune_gd_convex");
    TunedParams p;
    p.method = Method::GdConvex;
    p.grad0 = norm(obj.eval_gradient(x0));
    p.delta0 = detail::initial_gap_or_nan(obj, x0);
    p.dist0sq = detail::dist0sq_or_nan(obj, x0);
    p.G = std::max(p.grad0, detail::kMinG);
    const auto ec = effective_constants(obj.profile, p.G);
    p.L = ec.L;
    p.rG = ec.rG;
    p.eta = std::min(1.0 / p.L, p.rG / (2.0 * p.G));
    return p;
}

inline TunedParams tune_gd_strongly_convex(const Objective& obj, const Vec& x0, double mu) {
    if (!(mu > 0.0)) throw ParameterError("strong convexity constant must be positive");
    if (obj.mu && mu > *obj.mu * (1.0 + 1e-12))
        throw ParameterError("requested mu exceeds the objective's strong convexity constant");
    TunedParams p = tune_gd_convex(obj, x0);
    p.method = Method::GdStronglyConvex;
    p.mu = mu;
    p.kappa = p.L / mu;
    if (!(p.eta * mu < 1.0))
        throw ParameterError("mu exceeds the smoothness level at the tuned stepsize");
    return p;
}

inline TunedParams tune_gd_nonconvex(const Objective& obj, const Vec& x0) {
    TunedParams p;
    p.method = Method::GdNonconvex;
    p.grad0 = norm(obj.eval_gradient(x0));
    p.delta0 = detail::initial_gap(obj, x0);

    GConstraint c;
    c.variant = GConstraint::Variant::NonconvexGd;
    c.ell = obj.profile;
    c.delta0 = p.delta0;
    c.grad0 = p.grad0;
    p.G = std::max(solve_G(c), detail::kMinG);

    p.L = obj.profile(p.G);
    p.L2G = obj.profile(2.0 * p.G);
    p.rG = p.G / *p.L2G;
    p.eta = std::min(p.rG / p.G, 1.0 / (4.0 * p.L));
    return p;
}

inline TunedParams tune_nag(const Objective& obj, const Vec& x0,
                            std::optional<double> alpha = std::nullopt) {
    detail::require_convex(obj, "tune_nag");
    TunedParams p;
    p.method = Method::NagConvex;
    p.alpha = detail::resolve_alpha(obj.profile, alpha);
    p.grad0 = norm(obj.eval_gradient(x0));
    p.delta0 = detail::initial_gap(obj, x0);
    p.dist0sq = dist_sq(x0, detail::require_x_star(obj));

    GConstraint c;
    c.variant = GConstraint::Variant::NagConvex;
    c.ell = obj.profile;
    c.delta0 = p.delta0;
    c.grad0 = p.grad0;
    c.dist0sq = p.dist0sq;
    c.alpha = p.alpha;
    p.G = std::max(solve_G(c), detail::kMinG);

    const auto ec = effective_constants(obj.profile, p.G);
    p.L = ec.L;
    p.rG = ec.rG;
    p.eta = std::min(1.0 / (16.0 * std::pow(p.L, 3.0 - 2.0 / p.alpha)), 1.0 / (2.0 * p.L));
    return p;
}

inline TunedParams tune_nag_sc(const Objective& obj, const Vec& x0, double mu,
                               std::optional<double> alpha = std::nullopt) {
    detail::require_convex(obj, "tune_nag_sc");
    if (!(mu > 0.0)) throw ParameterError("strong convexity constant must be positive");
    if (obj.mu && mu > *obj.mu * (1.0 + 1e-12))
        throw ParameterError("requested mu exceeds the objective's strong convexity constant");
    TunedParams p;
    p.method = Method::NagStronglyConvex;
    p.alpha = detail::resolve_alpha(obj.profile, alpha);
    p.mu = mu;
    p.grad0 = norm(obj.eval_gradient(x0));
    p.delta0 = detail::initial_gap(obj, x0);
    p.dist0sq = dist_sq(x0, detail::require_x_star(obj));

    GConstraint c;
    c.variant = GConstraint::Variant::NagStronglyConvex;
    c.ell = obj.profile;
    c.delta0 = p.delta0;
    c.grad0 = p.grad0;
    c.dist0sq = p.dist0sq;
    c.alpha = p.alpha;
    c.mu = mu;
    p.G = std::max(solve_G(c), detail::kMinG);

    const auto ec = effective_constants(obj.profile, p.G);
    p.L = ec.L;
    p.rG = ec.rG;
    p.kappa = p.L / mu;
    const double base = 144.0 * std::pow(p.L, 3.0 - 2.0 / p.alpha);
    const double lg = std::log(std::exp(1.0) + base / mu);
    p.eta = std::min(1.0 / (base * lg * lg * lg * lg), 1.0 / (2.0 * p.L));
    if (!(p.eta * mu < 1.0))
        throw ParameterError("mu exceeds the smoothness level at the tuned stepsize");
    return p;
}

inline TunedParams tune_sgd(const Objective& obj, const Vec& x0, double sigma, double delta,
                            double epsilon) {
    if (!(sigma >= 0.0)) throw ParameterError("noise level sigma must be nonnegative");
    if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0, 1)");
    if (!(epsilon > 0.0)) throw ParameterError("epsilon must be positive");
    TunedParams p;
    p.method = Method::Sgd;
    p.sigma = sigma;
    p.delta = delta;
    p.epsilon = epsilon;
    p.grad0 = norm(obj.eval_gradient(x0));
    p.delta0 = detail::initial_gap(obj, x0);

    GConstraint c;
    c.variant = GConstraint::Variant::Sgd;
    c.ell = obj.profile;
    c.delta0 = p.delta0;
    c.grad0 = p.grad0;
    c.sigma = sigma;
    c.delta = delta;
    p.G = std::max(solve_G(c), detail::kMinG);

    p.L = obj.profile(p.G);
    p.L2G = obj.profile(2.0 * p.G);
    p.rG = p.G / *p.L2G;
    p.C = std::max(p.G * p.G, 400.0 * sigma * sigma / (p.rG * p.rG * delta));
    p.eta = std::min({delta / (160.0 * p.L), p.rG / (2.0 * p.G),
                      delta * epsilon * epsilon / (8.0 * *p.C * (p.delta0 + 2.0 * sigma))});
    const double horizon = std::ceil(1.0 / (*p.C * p.eta * p.eta));
    p.T = static_cast<std::int64_t>(std::min(horizon, 9e18));
    return p;
}

// Shrinks the stochastic horizon to at most t_cap while keeping the
// T = 1/(C eta^2) coupling, by raising eta as far as the boundedness
// ceilings allow. Fails if the capped horizon would need a stepsize above
// those ceilings, since the guarantee would no longer hold.
inline TunedParams cap_sgd_horizon(TunedParams p, std::int64_t t_cap) {
    if (p.method != Method::Sgd || !p.T || !p.C)
        throw ParameterError("horizon capping applies to stochastic parameters only");
    if (t_cap < 1) throw ParameterError("horizon cap must be positive");
    if (*p.T <= t_cap) return p;
    const double eta_cap = 1.0 / std::sqrt(*p.C * static_cast<double>(t_cap));
    const double ceiling = std::min(p.delta / (160.0 * p.L), p.rG / (2.0 * p.G));
    if (eta_cap > ceiling)
        throw TuningError("horizon cap needs a stepsize above the boundedness ceiling");
    p.eta = eta_cap;
    p.T = t_cap;
    return p;
}

} // namespace gsopt
