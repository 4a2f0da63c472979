#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "gsopt/errors.hpp"
#include "gsopt/vec.hpp"

namespace gsopt {

// Counter-based generator: every draw is a pure function of
// (seed, stream, counter), so runs replay identically regardless of how
// many streams are interleaved or on which thread they execute.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

    std::uint64_t next_u64() {
        std::uint64_t z = seed_ + 0x9e3779b97f4a7c15ull * (counter_++ + 1);
        z ^= stream_ * 0xbf58476d1ce4e5b9ull + 0x94d049bb133111ebull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in the open interval (0, 1); never returns 0 so logs are safe.
    double uniform01() {
        const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
        return u > 0.0 ? u : 0x1.0p-53;
    }

    // Box-Muller transform; implemented directly because the distribution
    // classes in <random> do not produce identical streams across standard
    // library implementations.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Marsaglia-Tsang squeeze; valid for shape >= 1.
    double gamma(double shape) {
        const double d = shape - 1.0 / 3.0;
        const double cc = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + cc * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform01();
            if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
        }
    }

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Additive gradient noise with E[eps] = 0 and E[||eps||^2] = sigma^2
// regardless of dimension. StudentT requires nu > 2 so the variance exists;
// BoundedUniform additionally guarantees ||eps|| <= sigma*sqrt(3).
struct NoiseModel {
    enum class Kind { None, Gaussian, StudentT, BoundedUniform };

    Kind kind = Kind::None;
    double sigma = 0.0;
    double nu = 0.0;

    static NoiseModel none() { return {}; }
    static NoiseModel gaussian(double sigma) {
        check_sigma(sigma);
        return {Kind::Gaussian, sigma, 0.0};
    }
    static NoiseModel student_t(double sigma, double nu) {
        check_sigma(sigma);
        if (!(nu > 2.0)) throw ParameterError("student_t noise requires nu > 2");
        return {Kind::StudentT, sigma, nu};
    }
    static NoiseModel bounded_uniform(double sigma) {
        check_sigma(sigma);
        return {Kind::BoundedUniform, sigma, 0.0};
    }

    Vec sample(RngStream& rng, std::size_t dim) const {
        Vec eps(dim, 0.0);
        const double root_dim = std::sqrt(static_cast<double>(dim));
        switch (kind) {
            case Kind::None:
                break;
            case Kind::Gaussian: {
                const double s = sigma / root_dim;
                for (auto& e : eps) e = s * rng.normal();
                break;
            }
            case Kind::StudentT: {
                // Normal over sqrt(chi^2(nu)/nu), rescaled so the variance
                // matches sigma^2/dim per coordinate.
                const double s = sigma / root_dim * std::sqrt((nu - 2.0) / nu);
                for (auto& e : eps) {
                    const double chi2 = 2.0 * rng.gamma(0.5 * nu);
                    e = s * rng.normal() / std::sqrt(chi2 / nu);
                }
                break;
            }
            case Kind::BoundedUniform: {
                const double a = sigma * std::sqrt(3.0) / root_dim;
                for (auto& e : eps) e = a * (2.0 * rng.uniform01() - 1.0);
                break;
            }
        }
        return eps;
    }

    nlohmann::json to_json() const {
        switch (kind) {
            case Kind::None: return {{"kind", "none"}};
            case Kind::Gaussian: return {{"kind", "gaussian"}, {"sigma", sigma}};
            case Kind::StudentT: return {{"kind", "student_t"}, {"sigma", sigma}, {"nu", nu}};
            case Kind::BoundedUniform: return {{"kind", "bounded_uniform"}, {"sigma", sigma}};
        }
        return {};
    }

    static NoiseModel from_json(const nlohmann::json& j) {
        if (!j.is_object() || !j.contains("kind"))
            throw ConfigError("noise model must be an object with a \"kind\" field");
        const std::string kind = j.at("kind").get<std::string>();
        auto get_sigma = [&j]() {
            if (!j.contains("sigma")) throw ConfigError("noise model is missing \"sigma\"");
            return j.at("sigma").get<double>();
        };
        if (kind == "none") {
            expect_keys(j, {"kind"});
            return none();
        }
        if (kind == "gaussian") {
            expect_keys(j, {"kind", "sigma"});
            return gaussian(get_sigma());
        }
        if (kind == "student_t") {
            expect_keys(j, {"kind", "sigma", "nu"});
            if (!j.contains("nu")) throw ConfigError("student_t noise is missing \"nu\"");
            return student_t(get_sigma(), j.at("nu").get<double>());
        }
        if (kind == "bounded_uniform") {
            expect_keys(j, {"kind", "sigma"});
            return bounded_uniform(get_sigma());
        }
        throw ConfigError("unknown noise kind \"" + kind + "\"");
    }

private:
    static void check_sigma(double sigma) {
        if (!(sigma >= 0.0) || !std::isfinite(sigma))
            throw ParameterError("noise sigma must be finite and nonnegative");
    }
    static void expect_keys(const nlohmann::json& j, std::initializer_list<const char*> keys) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            bool known = false;
            for (const char* k : keys)
                if (it.key() == k) known = true;
            if (!known) throw ConfigError("unknown key \"" + it.key() + "\" in noise model");
        }
    }
};

} // namespace gsopt
