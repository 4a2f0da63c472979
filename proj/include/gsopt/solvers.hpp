#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "gsopt/errors.hpp"
#include "gsopt/noise.hpp"
#include "gsopt/objective.hpp"
#include "gsopt/trajectory.hpp"
#include "gsopt/vec.hpp"

namespace gsopt {

struct SolverOptions {
    std::int64_t stride = 1;
    double grad_tol = 0.0;  // 0 disables the small-gradient stop
    double mu = 0.0;        // >0 selects the strongly-convex potential for run_gd
};

namespace detail {

inline void validate_run(const Objective& obj, const Vec& x0, double eta, std::int64_t T,
                         const SolverOptions& opts) {
    obj.check_in_domain(x0);
    if (!(eta > 0.0) || !std::isfinite(eta)) throw ParameterError("stepsize must be finite and positive");
    if (T < 0) throw ParameterError("iteration count must be nonnegative");
    if (opts.stride < 1) throw ParameterError("record stride must be at least 1");
    if (!(opts.grad_tol >= 0.0)) throw ParameterError("grad_tol must be nonnegative");
}

// Potentials below certify progress only against the known minimizer, so
// they are recorded exactly when the objective carries one.
inline bool has_anchor(const Objective& obj) {
    return obj.f_star.has_value() && obj.x_star.has_value();
}

} // namespace detail

// Accumulates the averaging weights of the convex momentum method:
// B_0 = 0, B_{t+1} = B_t + (1 + sqrt(4 B_t + 1))/2, A_t = B_t + 1/eta.
struct NagWeights {
    std::vector<double> A;
    std::vector<double> B;
};

inline NagWeights nag_weights(double eta, std::int64_t T) {
    if (!(eta > 0.0)) throw ParameterError("stepsize must be positive");
    NagWeights w;
    w.A.reserve(static_cast<std::size_t>(T) + 1);
    w.B.reserve(static_cast<std::size_t>(T) + 1);
    double B = 0.0;
    for (std::int64_t t = 0; t <= T; ++t) {
        w.B.push_back(B);
        w.A.push_back(B + 1.0 / eta);
        B += 0.5 * (1.0 + std::sqrt(4.0 * B + 1.0));
    }
    return w;
}

// Strongly convex variant: B_0 = 0, A_t = B_t + 1/(eta*mu), and B grows by
// B_{t+1} = (2 B_t + 1 + sqrt(4 B_t + 4 eta mu B_t^2 + 1)) / (2 (1 - eta mu)).
// tau/delta are the mixing weights of step t (sized T, one per step).
struct NagScWeights {
    std::vector<double> A;
    std::vector<double> B;
    std::vector<double> tau;
    std::vector<double> delta;
};

inline NagScWeights nag_sc_weights(double eta, double mu, std::int64_t T) {
    if (!(eta > 0.0)) throw ParameterError("stepsize must be positive");
    if (!(mu > 0.0)) throw ParameterError("strong convexity constant must be positive");
    if (!(eta * mu < 1.0)) throw ParameterError("requires eta*mu < 1");
    const double em = eta * mu;
    NagScWeights w;
    double B = 0.0;
    double A = 1.0 / em;
    for (std::int64_t t = 0; t <= T; ++t) {
        w.B.push_back(B);
        w.A.push_back(A);
        if (t == T) break;
        const double B_next = (2.0 * B + 1.0 + std::sqrt(4.0 * B + 4.0 * em * B * B + 1.0)) /
                              (2.0 * (1.0 - em));
        const double A_next = B_next + 1.0 / em;
        w.tau.push_back((A_next - A) * (1.0 + em * A) /
                        (A_next + 2.0 * em * A * A_next - em * A * A));
        w.delta.push_back((A_next - A) / (1.0 + em * A_next));
        B = B_next;
        A = A_next;
    }
    return w;
}

// Constant-stepsize (stochastic) gradient descent. With a None noise model
// the stochastic path consumes no randomness and reproduces run_gd bit for
// bit. A step leaving the domain or producing a non-finite value stops the
// run; the trajectory keeps the last valid iterate.
inline Trajectory run_sgd(const Objective& obj, const Vec& x0, double eta, std::int64_t T,
                          const NoiseModel& noise, RngStream& rng,
                          const SolverOptions& opts = {}) {
    detail::validate_run(obj, x0, eta, T, opts);
    const bool stochastic = noise.kind != NoiseModel::Kind::None;
    const bool sc = opts.mu > 0.0;
    if (sc && !(eta * opts.mu < 1.0)) throw ParameterError("requires eta*mu < 1");
    const bool with_potential = !stochastic && detail::has_anchor(obj);

    Trajectory traj;
    traj.method = stochastic ? "sgd" : "gd";
    traj.eta = eta;
    traj.stride = opts.stride;
    traj.records.reserve(static_cast<std::size_t>(T / opts.stride) + 2);

    Vec x = x0;
    double step_norm = 0.0;
    double eps_norm = 0.0;
    double A = 0.0;  // strongly-convex certificate weight
    std::int64_t last_recorded = -1;

    // eps_norm on record t is the noise entering the step taken from t, so
    // the exceedance times index noise by the step it perturbed.
    auto record = [&](std::int64_t t, double gn, bool stepping) {
        const double f = obj.eval_value(x);
        if (!std::isfinite(f)) return false;
        TrajectoryRecord r;
        r.t = t;
        r.x = x;
        r.f = f;
        r.grad_norm = gn;
        r.step_norm = step_norm;
        if (stochastic && stepping) r.eps_norm = eps_norm;
        if (with_potential) {
            const double gap = f - *obj.f_star;
            const double d2 = dist_sq(x, *obj.x_star);
            if (sc) {
                r.A = A;
                r.potential = A * gap + (1.0 + eta * opts.mu * A) / (2.0 * eta) * d2;
            } else {
                r.potential = static_cast<double>(t) * gap + d2 / (2.0 * eta);
            }
        }
        traj.records.push_back(std::move(r));
        last_recorded = t;
        return true;
    };

    for (std::int64_t t = 0;; ++t) {
        Vec g = obj.eval_gradient(x);
        if (!all_finite(g)) {
            traj.stop_reason = StopReason::NonFinite;
            traj.stop_t = t;
            break;
        }
        const double gn = norm(g);
        traj.max_grad_norm = std::max(traj.max_grad_norm, gn);

        const bool tol_hit = opts.grad_tol > 0.0 && gn <= opts.grad_tol;
        if (tol_hit || t == T) {
            if (!record(t, gn, false)) {
                traj.stop_reason = StopReason::NonFinite;
                traj.stop_t = t;
            } else if (tol_hit) {
                traj.stop_reason = StopReason::GradTolReached;
                traj.stop_t = t;
            }
            break;
        }

        Vec eps;
        if (stochastic) {
            eps = noise.sample(rng, g.size());
            eps_norm = norm(eps);
        }
        if (t % opts.stride == 0 && !record(t, gn, true)) {
            traj.stop_reason = StopReason::NonFinite;
            traj.stop_t = t;
            break;
        }
        if (stochastic)
            for (std::size_t i = 0; i < g.size(); ++i) g[i] += eps[i];
        Vec x_next = axpy(x, -eta, g);
        if (!all_finite(x_next)) {
            if (last_recorded != t) record(t, gn, true);
            traj.stop_reason = StopReason::NonFinite;
            traj.stop_t = t;
            break;
        }
        if (!obj.domain.contains(x_next)) {
            if (last_recorded != t) record(t, gn, true);
            traj.stop_reason = StopReason::DomainViolation;
            traj.stop_t = t;
            traj.warnings.push_back("iterate " + std::to_string(t + 1) + " left the domain");
            break;
        }
        step_norm = eta * norm(g);
        if (sc) A = (1.0 + A) / (1.0 - eta * opts.mu);
        x = std::move(x_next);
    }
    return traj;
}

inline Trajectory run_gd(const Objective& obj, const Vec& x0, double eta, std::int64_t T,
                         const SolverOptions& opts = {}) {
    RngStream rng(0, 0);
    return run_sgd(obj, x0, eta, T, NoiseModel::none(), rng, opts);
}

// Accelerated method for convex objectives. Gradients are taken at the
// query points y_t; those are the points the level certificate controls, so
// their norms feed max_query_grad_norm. A query point or iterate leaving
// the domain stops the run; the averaging sequence z drifting out only
// raises a warning because it never receives a gradient evaluation.
inline Trajectory run_nag(const Objective& obj, const Vec& x0, double eta, std::int64_t T,
                          const SolverOptions& opts = {}) {
    detail::validate_run(obj, x0, eta, T, opts);
    const bool with_potential = detail::has_anchor(obj);

    Trajectory traj;
    traj.method = "nag";
    traj.eta = eta;
    traj.stride = opts.stride;
    traj.records.reserve(static_cast<std::size_t>(T / opts.stride) + 2);

    Vec x = x0;
    Vec z = x0;
    const double inv_eta = 1.0 / eta;
    double B = 0.0;
    double A = inv_eta;
    double step_norm = 0.0;
    bool z_warned = false;
    std::int64_t last_recorded = -1;

    auto record = [&](std::int64_t t, const Vec* y, double query_gn) {
        const double f = obj.eval_value(x);
        if (!std::isfinite(f)) return false;
        TrajectoryRecord r;
        r.t = t;
        r.x = x;
        r.f = f;
        const Vec gx = obj.eval_gradient(x);
        r.grad_norm = norm(gx);
        traj.max_grad_norm = std::max(traj.max_grad_norm, r.grad_norm);
        r.step_norm = step_norm;
        r.A = A;
        r.B = B;
        r.z = z;
        if (y) {
            r.y = *y;
            r.query_grad_norm = query_gn;
        }
        if (with_potential)
            r.potential = A * (f - *obj.f_star) + dist_sq(z, *obj.x_star) / (2.0 * eta);
        traj.records.push_back(std::move(r));
        last_recorded = t;
        return true;
    };

    for (std::int64_t t = 0;; ++t) {
        if (opts.grad_tol > 0.0) {
            const double gn = norm(obj.eval_gradient(x));
            if (gn <= opts.grad_tol) {
                record(t, nullptr, 0.0);
                traj.stop_reason = StopReason::GradTolReached;
                traj.stop_t = t;
                break;
            }
        }
        if (t == T) {
            record(t, nullptr, 0.0);
            break;
        }

        const double B_next = B + 0.5 * (1.0 + std::sqrt(4.0 * B + 1.0));
        const double A_next = B_next + inv_eta;
        const double mix = 1.0 - A / A_next;
        Vec y = x;
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += mix * (z[i] - x[i]);

        if (!obj.domain.contains(y)) {
            if (last_recorded != t) record(t, nullptr, 0.0);
            traj.stop_reason = StopReason::DomainViolation;
            traj.stop_t = t;
            traj.warnings.push_back("query point at step " + std::to_string(t) +
                                    " left the domain");
            break;
        }
        const Vec g = obj.eval_gradient(y);
        if (!all_finite(g)) {
            if (last_recorded != t) record(t, nullptr, 0.0);
            traj.stop_reason = StopReason::NonFinite;
            traj.stop_t = t;
            break;
        }
        const double gn = norm(g);
        traj.max_query_grad_norm = std::max(traj.max_query_grad_norm, gn);

        const bool due = (t % opts.stride == 0);
        if (due && !record(t, &y, gn)) {
            traj.stop_reason = StopReason::NonFinite;
            traj.stop_t = t;
            break;
        }

        Vec x_next = axpy(y, -eta, g);
        Vec z_next = axpy(z, -eta * (A_next - A), g);
        if (!all_finite(x_next) || !all_finite(z_next)) {
            if (last_recorded != t) record(t, &y, gn);
            traj.stop_reason = StopReason::NonFinite;
            traj.stop_t = t;
            break;
        }
        if (!obj.domain.contains(x_next)) {
            if (last_recorded != t) record(t, &y, gn);
            traj.stop_reason = StopReason::DomainViolation;
            traj.stop_t = t;
            traj.warnings.push_back("iterate " + std::to_string(t + 1) + " left the domain");
            break;
        }
        if (!z_warned && !obj.domain.contains(z_next)) {
            z_warned = true;
            traj.warnings.push_back("averaging sequence left the domain at step " +
                                    std::to_string(t + 1));
        }
        step_norm = norm(sub(x_next, x));
        x = std::move(x_next);
        z = std::move(z_next);
        B = B_next;
        A = A_next;
    }
    return traj;
}

// Accelerated method for strongly convex objectives; same bookkeeping as
// run_nag with the geometric weight growth and the contraction step on z.
inline Trajectory run_nag_sc(const Objective& obj, const Vec& x0, double eta, double mu,
                             std::int64_t T, const SolverOptions& opts = {}) {
    detail::validate_run(obj, x0, eta, T, opts);
    if (!(mu > 0.0)) throw ParameterError("strong convexity constant must be positive");
    if (!(eta * mu < 1.0)) throw ParameterError("requires eta*mu < 1");
    const bool with_potential = detail::has_anchor(obj);
    const double em = eta * mu;

    Trajectory traj;
    traj.method = "nag_sc";
    traj.eta = eta;
    traj.stride = opts.stride;
    traj.records.reserve(static_cast<std::size_t>(T / opts.stride) + 2);

    Vec x = x0;
    Vec z = x0;
    double B = 0.0;
    double A = 1.0 / em;
    double step_norm = 0.0;
    bool z_warned = false;
    std::int64_t last_recorded = -1;

    auto record = [&](std::int64_t t, const Vec* y, double query_gn) {
        const double f = obj.eval_value(x);
        if (!std::isfinite(f)) return false;
        TrajectoryRecord r;
        r.t = t;
        r.x = x;
        r.f = f;
        const Vec gx = obj.eval_gradient(x);
        r.grad_norm = norm(gx);
        traj.max_grad_norm = std::max(traj.max_grad_norm, r.grad_norm);
        r.step_norm = step_norm;
        r.A = A;
        r.B = B;
        r.z = z;
        if (y) {
            r.y = *y;
            r.query_grad_norm = query_gn;
        }
        if (with_potential)
            r.potential = A * (f - *obj.f_star) +
                          (1.0 + em * A) / (2.0 * eta) * dist_sq(z, *obj.x_star);
        traj.records.push_back(std::move(r));
        last_recorded = t;
        return true;
    };

    for (std::int64_t t = 0;; ++t) {
        if (opts.grad_tol > 0.0) {
            const double gn = norm(obj.eval_gradient(x));
            if (gn <= opts.grad_tol) {
                record(t, nullptr, 0.0);
                traj.stop_reason = StopReason::GradTolReached;
                traj.stop_t = t;
                break;
            }
        }
        if (t == T) {
            record(t, nullptr, 0.0);
            break;
        }

        const double B_next = (2.0 * B + 1.0 + std::sqrt(4.0 * B + 4.0 * em * B * B + 1.0)) /
                              (2.0 * (1.0 - em));
        const double A_next = B_next + 1.0 / em;
        const double tau = (A_next - A) * (1.0 + em * A) /
                           (A_next + 2.0 * em * A * A_next - em * A * A);
        const double delta = (A_next - A) / (1.0 + em * A_next);

        Vec y = x;
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += tau * (z[i] - x[i]);

        if (!obj.domain.contains(y)) {
            if (last_recorded != t) record(t, nullptr, 0.0);
            traj.stop_reason = StopReason::DomainViolation;
            traj.stop_t = t;
            traj.warnings.push_back("query point at step " + std::to_string(t) +
                                    " left the domain");
            break;
        }
        const Vec g = obj.eval_gradient(y);
        if (!all_finite(g)) {
            if (last_recorded != t) record(t, nullptr, 0.0);
            traj.stop_reason = StopReason::NonFinite;
            traj.stop_t = t;
            break;
        }
        const double gn = norm(g);
        traj.max_query_grad_norm = std::max(traj.max_query_grad_norm, gn);

        const bool due = (t % opts.stride == 0);
        if (due && !record(t, &y, gn)) {
            traj.stop_reason = StopReason::NonFinite;
            traj.stop_t = t;
            break;
        }

        Vec x_next = axpy(y, -eta, g);
        Vec z_next(z.size());
        for (std::size_t i = 0; i < z.size(); ++i)
            z_next[i] = (1.0 - em * delta) * z[i] + em * delta * y[i] - eta * delta * g[i];
        if (!all_finite(x_next) || !all_finite(z_next)) {
            if (last_recorded != t) record(t, &y, gn);
            traj.stop_reason = StopReason::NonFinite;
            traj.stop_t = t;
            break;
        }
        if (!obj.domain.contains(x_next)) {
            if (last_recorded != t) record(t, &y, gn);
            traj.stop_reason = StopReason::DomainViolation;
            traj.stop_t = t;
            traj.warnings.push_back("iterate " + std::to_string(t + 1) + " left the domain");
            break;
        }
        if (!z_warned && !obj.domain.contains(z_next)) {
            z_warned = true;
            traj.warnings.push_back("averaging sequence left the domain at step " +
                                    std::to_string(t + 1));
        }
        step_norm = norm(sub(x_next, x));
        x = std::move(x_next);
        z = std::move(z_next);
        B = B_next;
        A = A_next;
    }
    return traj;
}

} // namespace gsopt
