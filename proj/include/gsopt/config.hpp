#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gsopt/errors.hpp"
#include "gsopt/noise.hpp"
#include "gsopt/tuner.hpp"
#include "gsopt/vec.hpp"

namespace gsopt {

namespace detail {

inline void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> keys,
                           const char* where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : keys)
            if (it.key() == k) known = true;
        if (!known)
            throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
    }
}

template <typename T>
std::optional<T> opt_get(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) return std::nullopt;
    return j.at(key).get<T>();
}

} // namespace detail

// One experiment: an objective, a method, a start, and either explicit
// (eta, T) or the inputs the tuner needs to derive them. Validation happens
// entirely at parse time; unknown keys anywhere are rejected.
struct RunConfig {
    std::string objective_id;
    nlohmann::json objective_params = nlohmann::json::object();
    std::string method;
    Vec x0;
    std::optional<double> eta;
    std::optional<std::int64_t> T;
    std::optional<double> mu;
    std::optional<double> alpha;
    std::optional<double> sigma;
    std::optional<double> delta;
    std::optional<double> epsilon;
    std::optional<std::int64_t> t_cap;
    NoiseModel noise = NoiseModel::none();
    bool noise_given = false;
    std::uint64_t seed = 0;
    std::int64_t stride = 1;
    double grad_tol = 0.0;
    std::optional<std::string> out;
    std::vector<std::string> checks;

    static RunConfig from_json(const nlohmann::json& j) {
        if (!j.is_object()) throw ConfigError("run config must be a JSON object");
        detail::reject_unknown(j,
                               {"objective", "method", "x0", "eta", "T", "mu", "alpha", "sigma",
                                "delta", "epsilon", "t_cap", "noise", "seed", "stride",
                                "grad_tol", "out", "checks"},
                               "run config");
        RunConfig c;
        if (!j.contains("objective") || !j.at("objective").is_object())
            throw ConfigError("run config needs an \"objective\" object");
        const auto& o = j.at("objective");
        detail::reject_unknown(o, {"id", "params"}, "objective");
        if (!o.contains("id")) throw ConfigError("objective needs an \"id\"");
        c.objective_id = o.at("id").get<std::string>();
        if (o.contains("params")) {
            if (!o.at("params").is_object())
                throw ConfigError("objective \"params\" must be an object");
            c.objective_params = o.at("params");
        }
        if (!j.contains("method")) throw ConfigError("run config needs a \"method\"");
        c.method = j.at("method").get<std::string>();
        method_from_string(c.method);  // validates the name
        if (!j.contains("x0")) throw ConfigError("run config needs \"x0\"");
        if (j.at("x0").is_array())
            c.x0 = j.at("x0").get<Vec>();
        else
            c.x0 = {j.at("x0").get<double>()};
        if (c.x0.empty()) throw ConfigError("\"x0\" must not be empty");

        c.eta = detail::opt_get<double>(j, "eta");
        if (c.eta && !(*c.eta > 0.0)) throw ConfigError("\"eta\" must be positive");
        c.T = detail::opt_get<std::int64_t>(j, "T");
        if (c.T && *c.T < 0) throw ConfigError("\"T\" must be nonnegative");
        c.mu = detail::opt_get<double>(j, "mu");
        c.alpha = detail::opt_get<double>(j, "alpha");
        c.sigma = detail::opt_get<double>(j, "sigma");
        c.delta = detail::opt_get<double>(j, "delta");
        c.epsilon = detail::opt_get<double>(j, "epsilon");
        c.t_cap = detail::opt_get<std::int64_t>(j, "t_cap");
        if (j.contains("noise")) {
            c.noise = NoiseModel::from_json(j.at("noise"));
            c.noise_given = true;
        }
        if (auto v = detail::opt_get<std::uint64_t>(j, "seed")) c.seed = *v;
        if (auto v = detail::opt_get<std::int64_t>(j, "stride")) c.stride = *v;
        if (c.stride < 1) throw ConfigError("\"stride\" must be at least 1");
        if (auto v = detail::opt_get<double>(j, "grad_tol")) c.grad_tol = *v;
        if (!(c.grad_tol >= 0.0)) throw ConfigError("\"grad_tol\" must be nonnegative");
        c.out = detail::opt_get<std::string>(j, "out");
        if (j.contains("checks")) {
            if (!j.at("checks").is_array()) throw ConfigError("\"checks\" must be an array");
            for (const auto& e : j.at("checks")) c.checks.push_back(e.get<std::string>());
        }
        return c;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["objective"] = {{"id", objective_id}, {"params", objective_params}};
        j["method"] = method;
        j["x0"] = x0;
        if (eta) j["eta"] = *eta;
        if (T) j["T"] = *T;
        if (mu) j["mu"] = *mu;
        if (alpha) j["alpha"] = *alpha;
        if (sigma) j["sigma"] = *sigma;
        if (delta) j["delta"] = *delta;
        if (epsilon) j["epsilon"] = *epsilon;
        if (t_cap) j["t_cap"] = *t_cap;
        if (noise_given) j["noise"] = noise.to_json();
        j["seed"] = seed;
        j["stride"] = stride;
        j["grad_tol"] = grad_tol;
        if (out) j["out"] = *out;
        if (!checks.empty()) j["checks"] = checks;
        return j;
    }
};

// Cartesian sweep over a base config. Omitted dimensions inherit the base
// value; any dimension given as an empty list makes the grid empty, which
// is rejected.
struct SweepConfig {
    RunConfig base;
    std::vector<std::int64_t> T;
    std::vector<std::uint64_t> seeds;
    std::vector<double> sigmas;
    std::vector<std::string> methods;

    static SweepConfig from_json(const nlohmann::json& j) {
        if (!j.is_object()) throw ConfigError("sweep config must be a JSON object");
        detail::reject_unknown(j, {"base", "grid"}, "sweep config");
        if (!j.contains("base")) throw ConfigError("sweep config needs a \"base\" run config");
        if (!j.contains("grid")) throw ConfigError("sweep config needs a \"grid\"");
        SweepConfig s;
        s.base = RunConfig::from_json(j.at("base"));
        const auto& g = j.at("grid");
        if (!g.is_object()) throw ConfigError("\"grid\" must be an object");
        detail::reject_unknown(g, {"T", "seed", "sigma", "method"}, "sweep grid");
        if (g.empty()) throw ConfigError("sweep grid names no dimension");
        if (g.contains("T")) s.T = g.at("T").get<std::vector<std::int64_t>>();
        if (g.contains("seed")) s.seeds = g.at("seed").get<std::vector<std::uint64_t>>();
        if (g.contains("sigma")) s.sigmas = g.at("sigma").get<std::vector<double>>();
        if (g.contains("method")) {
            s.methods = g.at("method").get<std::vector<std::string>>();
            for (const auto& m : s.methods) method_from_string(m);
        }
        if ((g.contains("T") && s.T.empty()) || (g.contains("seed") && s.seeds.empty()) ||
            (g.contains("sigma") && s.sigmas.empty()) ||
            (g.contains("method") && s.methods.empty()))
            throw ConfigError("sweep grid has an empty dimension");
        return s;
    }

    nlohmann::json to_json() const {
        nlohmann::json g = nlohmann::json::object();
        if (!T.empty()) g["T"] = T;
        if (!seeds.empty()) g["seed"] = seeds;
        if (!sigmas.empty()) g["sigma"] = sigmas;
        if (!methods.empty()) g["method"] = methods;
        return {{"base", base.to_json()}, {"grid", g}};
    }

    // Cells in row-major order over (method, sigma, seed, T), each realized
    // as a standalone run config.
    std::vector<RunConfig> cells() const {
        auto methods_eff = methods.empty() ? std::vector<std::string>{base.method} : methods;
        auto sigmas_eff = sigmas.empty()
                              ? std::vector<double>{base.sigma.value_or(0.0)}
                              : sigmas;
        auto seeds_eff = seeds.empty() ? std::vector<std::uint64_t>{base.seed} : seeds;
        auto ts_eff = T.empty() ? std::vector<std::int64_t>{base.T.value_or(0)} : T;
        std::vector<RunConfig> out;
        for (const auto& m : methods_eff)
            for (double sg : sigmas_eff)
                for (auto sd : seeds_eff)
                    for (auto t : ts_eff) {
                        RunConfig c = base;
                        c.method = m;
                        if (!sigmas.empty() || base.sigma) c.sigma = sg;
                        c.seed = sd;
                        if (!T.empty() || base.T) c.T = t;
                        out.push_back(std::move(c));
                    }
        return out;
    }
};

} // namespace gsopt
