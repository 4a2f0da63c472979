#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gsopt/domain.hpp"
#include "gsopt/ell.hpp"
#include "gsopt/errors.hpp"
#include "gsopt/vec.hpp"

namespace gsopt {

enum class Convexity { Nonconvex, Convex, StronglyConvex };

inline const char* to_string(Convexity c) {
    switch (c) {
    case Convexity::Nonconvex: return "nonconvex";
    case Convexity::Convex: return "convex";
    case Convexity::StronglyConvex: return "strongly_convex";
    }
    return "?";
}

// A differentiable objective with a certified smoothness profile. Univariate
// entries use dim == 1; vector entries implement the same interface.
// sample_lo/sample_hi bound the magnitude range on which the profile was
// fitted and is certified.
struct Objective {
    std::string id;
    nlohmann::json params = nlohmann::json::object();
    int dim = 1;

    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> gradient;
    std::function<double(const Vec&)> hessian_norm;  // empty -> finite differences

    DomainSpec domain;
    EllFunction profile = EllFunction::constant(1.0);

    std::optional<double> f_star;
    std::optional<Vec> x_star;
    std::optional<double> mu;  // strong convexity level when known
    Convexity convexity = Convexity::Nonconvex;
    bool bounded_below = true;

    double sample_lo = 1e-6;
    double sample_hi = 1e3;

    void check_in_domain(const Vec& x) const;
    double eval_value(const Vec& x) const;
    Vec eval_gradient(const Vec& x) const;
    double eval_hessian_norm(const Vec& x) const;
};

inline void check_in_domain(const Objective& obj, const Vec& x) {
    if ((int)x.size() != obj.dim)
        throw ParameterError("point dimension does not match objective '" + obj.id + "'");
    if (!obj.domain.contains(x))
        throw DomainError("point outside the domain of objective '" + obj.id + "'",
                          obj.domain.boundary_distance(x));
}

inline double eval_value(const Objective& obj, const Vec& x) {
    check_in_domain(obj, x);
    return obj.value(x);
}

inline Vec eval_gradient(const Objective& obj, const Vec& x) {
    check_in_domain(obj, x);
    return obj.gradient(x);
}

// Central finite-difference gradient, h = 1e-6 * max(1, |x_i|) per
// coordinate. Used as an oracle against analytic gradients.
inline Vec fd_gradient(const Objective& obj, const Vec& x) {
    check_in_domain(obj, x);
    Vec g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double h = 1e-6 * std::max(1.0, std::abs(x[i]));
        Vec xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        g[i] = (obj.value(xp) - obj.value(xm)) / (2.0 * h);
    }
    return g;
}

namespace detail {

// Spectral norm via power iteration on a dense symmetric matrix.
inline double spectral_norm(const std::vector<Vec>& m) {
    const std::size_t n = m.size();
    Vec v(n, 1.0 / std::sqrt((double)n));
    double lambda = 0.0;
    for (int it = 0; it < 200; ++it) {
        Vec w(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) w[i] += m[i][j] * v[j];
        const double nw = norm(w);
        if (nw == 0.0) return 0.0;
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nw;
        lambda = nw;
    }
    return lambda;
}

} // namespace detail

// Hessian operator norm; falls back to central differences of the gradient
// with h = max(1e-5, 1e-5 * |x_i|) when no analytic form is available.
inline double eval_hessian_norm(const Objective& obj, const Vec& x) {
    check_in_domain(obj, x);
    if (obj.hessian_norm) return obj.hessian_norm(x);
    const std::size_t n = x.size();
    if (n == 1) {
        const double h = std::max(1e-5, 1e-5 * std::abs(x[0]));
        Vec xp = x, xm = x;
        xp[0] += h;
        xm[0] -= h;
        return std::abs((obj.gradient(xp)[0] - obj.gradient(xm)[0]) / (2.0 * h));
    }
    std::vector<Vec> hess(n, Vec(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        const double h = std::max(1e-5, 1e-5 * std::abs(x[i]));
        Vec xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        const Vec gp = obj.gradient(xp), gm = obj.gradient(xm);
        for (std::size_t j = 0; j < n; ++j) hess[i][j] = (gp[j] - gm[j]) / (2.0 * h);
    }
    // Symmetrize against finite-difference asymmetry.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double s = 0.5 * (hess[i][j] + hess[j][i]);
            hess[i][j] = hess[j][i] = s;
        }
    return detail::spectral_norm(hess);
}

inline void Objective::check_in_domain(const Vec& x) const {
    gsopt::check_in_domain(*this, x);
}
inline double Objective::eval_value(const Vec& x) const { return gsopt::eval_value(*this, x); }
inline Vec Objective::eval_gradient(const Vec& x) const {
    return gsopt::eval_gradient(*this, x);
}
inline double Objective::eval_hessian_norm(const Vec& x) const {
    return gsopt::eval_hessian_norm(*this, x);
}

} // namespace gsopt
