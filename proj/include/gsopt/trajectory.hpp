#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gsopt/errors.hpp"
#include "gsopt/vec.hpp"

namespace gsopt {

// Shortest decimal form that round-trips a double (17 significant digits).
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

enum class StopReason { Completed, GradTolReached, DomainViolation, NonFinite };

inline std::string to_string(StopReason r) {
    switch (r) {
        case StopReason::Completed: return "completed";
        case StopReason::GradTolReached: return "grad_tol_reached";
        case StopReason::DomainViolation: return "domain_violation";
        case StopReason::NonFinite: return "nonfinite";
    }
    return "unknown";
}

// One sampled iterate. Momentum methods also carry the auxiliary sequences
// and the gradient at the query point y_t, which is the quantity the level
// certificates control; grad_norm is always at the iterate x_t.
struct TrajectoryRecord {
    std::int64_t t = 0;
    Vec x;
    double f = 0.0;
    double grad_norm = 0.0;
    double step_norm = 0.0;
    std::optional<Vec> y;
    std::optional<Vec> z;
    std::optional<double> A;
    std::optional<double> B;
    std::optional<double> query_grad_norm;
    std::optional<double> eps_norm;
    std::optional<double> potential;
};

struct Trajectory {
    std::string method;
    double eta = 0.0;
    std::int64_t stride = 1;
    std::vector<TrajectoryRecord> records;
    StopReason stop_reason = StopReason::Completed;
    std::int64_t stop_t = -1;  // iteration at which a premature stop fired
    std::vector<std::string> warnings;
    // Running maxima over every step, not just recorded strides; these are
    // what the gradient-level certificates are checked against.
    double max_grad_norm = 0.0;
    double max_query_grad_norm = 0.0;

    const TrajectoryRecord& front() const { return records.front(); }
    const TrajectoryRecord& back() const { return records.back(); }
    bool empty() const { return records.empty(); }
    std::size_t size() const { return records.size(); }

    // Gradient norms the level certificate applies to: query points when the
    // method has them, iterates otherwise.
    std::vector<double> certificate_grad_norms() const {
        std::vector<double> out;
        out.reserve(records.size());
        for (const auto& r : records)
            out.push_back(r.query_grad_norm ? *r.query_grad_norm : r.grad_norm);
        return out;
    }

    void to_csv(std::ostream& os) const {
        os << "t,f,grad_norm,step_norm,potential,A,B\n";
        auto opt = [](const std::optional<double>& v) { return v ? fmt17(*v) : std::string(); };
        for (const auto& r : records) {
            os << r.t << ',' << fmt17(r.f) << ',' << fmt17(r.grad_norm) << ','
               << fmt17(r.step_norm) << ',' << opt(r.potential) << ',' << opt(r.A) << ','
               << opt(r.B) << '\n';
        }
    }

    nlohmann::json summary_json() const {
        nlohmann::json j{{"method", method},
                         {"eta", eta},
                         {"stride", stride},
                         {"records", records.size()},
                         {"stop_reason", to_string(stop_reason)},
                         {"warnings", warnings}};
        if (stop_t >= 0) j["stop_t"] = stop_t;
        if (!records.empty()) {
            const auto& r = records.back();
            j["final"] = {{"t", r.t}, {"f", r.f}, {"grad_norm", r.grad_norm}};
            if (r.potential) j["final"]["potential"] = *r.potential;
        }
        return j;
    }
};

} // namespace gsopt
