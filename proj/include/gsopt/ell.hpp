#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "gsopt/errors.hpp"

namespace gsopt {

// Non-decreasing bound u -> max Hessian norm among points whose gradient
// norm is u. Three shapes: a constant, L0 + Lrho*u^rho, or an arbitrary
// callable (which must be non-decreasing; spot-checked on construction).
class EllFunction {
public:
    enum class Kind { Constant, PowerLaw, Custom };

    static EllFunction constant(double L) {
        if (!(L > 0.0) || !std::isfinite(L))
            throw ParameterError("constant smoothness level must be positive and finite");
        EllFunction f;
        f.kind_ = Kind::Constant;
        f.l0_ = L;
        return f;
    }

    static EllFunction power_law(double L0, double Lrho, double rho) {
        if (L0 < 0.0 || Lrho < 0.0 || rho < 0.0)
            throw ParameterError("power-law smoothness constants must be nonnegative");
        if (!(L0 + Lrho > 0.0))
            throw ParameterError("power-law smoothness profile is identically zero");
        if (!std::isfinite(L0) || !std::isfinite(Lrho) || !std::isfinite(rho))
            throw ParameterError("power-law smoothness constants must be finite");
        EllFunction f;
        f.kind_ = Kind::PowerLaw;
        f.l0_ = L0;
        f.lrho_ = Lrho;
        f.rho_ = rho;
        return f;
    }

    // `alpha` is the declared growth exponent; without it the degree is
    // estimated from a log-log slope when needed. `id` enables serialization.
    static EllFunction custom(std::function<double(double)> fn,
                              std::optional<double> alpha = std::nullopt,
                              std::string id = "") {
        if (!fn) throw ParameterError("custom smoothness profile requires a callable");
        EllFunction f;
        f.kind_ = Kind::Custom;
        f.fn_ = std::move(fn);
        f.alpha_ = alpha;
        f.expr_id_ = std::move(id);
        f.spot_check_monotone();
        return f;
    }

    Kind kind() const { return kind_; }
    double l0() const { return l0_; }
    double lrho() const { return lrho_; }
    double rho() const { return rho_; }
    const std::string& expression_id() const { return expr_id_; }

    double operator()(double u) const {
        if (!std::isfinite(u)) throw DomainError("smoothness profile evaluated at non-finite u", 0.0);
        if (u < 0.0) throw DomainError("smoothness profile evaluated at negative u", -u);
        switch (kind_) {
        case Kind::Constant: return l0_;
        case Kind::PowerLaw: return l0_ + lrho_ * std::pow(u, rho_);
        case Kind::Custom: {
            const double v = fn_(u);
            if (!std::isfinite(v) || v < 0.0)
                throw ProfileError("custom smoothness profile produced an invalid value");
            return v;
        }
        }
        throw ParameterError("unreachable smoothness profile kind");
    }

    // Growth exponent used for picking the momentum grading: rho for a power
    // law, 0 for a constant, the declared alpha for customs, otherwise a
    // least-squares log-log slope over u in [1e3, 1e6] (64 samples).
    double growth_degree() const {
        switch (kind_) {
        case Kind::Constant: return 0.0;
        case Kind::PowerLaw: return lrho_ > 0.0 ? rho_ : 0.0;
        case Kind::Custom:
            if (alpha_) return *alpha_;
            return estimate_degree();
        }
        throw ParameterError("unreachable smoothness profile kind");
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        switch (kind_) {
        case Kind::Constant:
            j["kind"] = "constant";
            j["L"] = l0_;
            break;
        case Kind::PowerLaw:
            j["kind"] = "power_law";
            j["L0"] = l0_;
            j["Lrho"] = lrho_;
            j["rho"] = rho_;
            break;
        case Kind::Custom:
            if (expr_id_.empty())
                throw ParameterError("custom smoothness profile without an expression id is not serializable");
            j["kind"] = "custom";
            j["expression"] = expr_id_;
            if (alpha_) j["alpha"] = *alpha_;
            break;
        }
        return j;
    }

    static EllFunction from_json(const nlohmann::json& j);

private:
    EllFunction() = default;

    void spot_check_monotone() const {
        // 256 samples, log-spaced over (0, 1e8] plus the origin.
        double prev = fn_(0.0);
        if (!std::isfinite(prev) || prev < 0.0)
            throw ProfileError("custom smoothness profile invalid at u=0");
        const int n = 255;
        for (int i = 0; i < n; ++i) {
            const double u = std::pow(10.0, -8.0 + 16.0 * i / (n - 1));
            const double v = fn_(u);
            if (!std::isfinite(v) || v < 0.0)
                throw ProfileError("custom smoothness profile produced an invalid value");
            if (v < prev * (1.0 - 1e-12))
                throw ProfileError("custom smoothness profile is not non-decreasing");
            prev = v;
        }
    }

    double estimate_degree() const {
        // Log-log slope over u in [1e3, 1e6], 64 samples, least squares.
        const int n = 64;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        double prev = -1.0;
        for (int i = 0; i < n; ++i) {
            const double u = std::pow(10.0, 3.0 + 3.0 * i / (n - 1));
            const double v = fn_(u);
            if (!std::isfinite(v) || v <= 0.0)
                throw ProfileError("custom smoothness profile invalid on the degree-estimation grid");
            if (v < prev * (1.0 - 1e-12))
                throw ProfileError("custom smoothness profile is not non-decreasing on the degree-estimation grid");
            prev = v;
            const double x = std::log(u), y = std::log(v);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
        }
        return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }

    Kind kind_ = Kind::Constant;
    double l0_ = 0.0, lrho_ = 0.0, rho_ = 0.0;
    std::function<double(double)> fn_;
    std::optional<double> alpha_;
    std::string expr_id_;
};

// Named custom profiles usable from config files.
inline const std::map<std::string, std::pair<std::function<double(double)>, std::optional<double>>>&
custom_profile_registry() {
    static const std::map<std::string, std::pair<std::function<double(double)>, std::optional<double>>> reg = {
        {"u_log1p_u", {[](double u) { return u * std::log1p(u); }, std::nullopt}},
        {"sqrt1p_u", {[](double u) { return std::sqrt(1.0 + u); }, std::optional<double>(0.5)}},
    };
    return reg;
}

inline EllFunction EllFunction::from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant") return constant(j.at("L").get<double>());
    if (kind == "power_law")
        return power_law(j.at("L0").get<double>(), j.at("Lrho").get<double>(), j.at("rho").get<double>());
    if (kind == "custom") {
        const std::string id = j.at("expression").get<std::string>();
        auto it = custom_profile_registry().find(id);
        if (it == custom_profile_registry().end())
            throw ConfigError("unknown custom smoothness expression: " + id);
        std::optional<double> alpha = it->second.second;
        if (j.contains("alpha")) alpha = j.at("alpha").get<double>();
        return custom(it->second.first, alpha, id);
    }
    throw ConfigError("unknown smoothness profile kind: " + kind);
}

// Ball-radius form of a smoothness profile: within distance r(u) = a/m(u)
// of a point with gradient norm u the gradient stays Lipschitz with
// constant m(u) = ell(u + a).
struct RadiusProfile {
    EllFunction m;
    double a = 0.0;
    double radius(double u) const { return a / m(u); }
};

inline RadiusProfile to_radius_profile(const EllFunction& ell, double a) {
    if (!(a > 0.0) || !std::isfinite(a))
        throw ParameterError("radius-profile shift must be positive and finite");
    EllFunction shifted = EllFunction::custom(
        [ell, a](double u) { return ell(u + a); },
        ell.growth_degree());
    return RadiusProfile{std::move(shifted), a};
}

// Constants at gradient level G with the shift a = G: Lipschitz level
// L = ell(2G) and radius rG = G/L.
struct EffectiveConstants {
    double G = 0.0;
    double L = 0.0;
    double rG = 0.0;
};

inline EffectiveConstants effective_constants(const EllFunction& ell, double G) {
    if (!(G > 0.0) || !std::isfinite(G))
        throw ParameterError("effective constants need a positive finite gradient level");
    const double L = ell(2.0 * G);
    if (!(L > 0.0)) throw ProfileError("smoothness profile must be positive at 2G");
    return EffectiveConstants{G, L, G / L};
}

} // namespace gsopt
