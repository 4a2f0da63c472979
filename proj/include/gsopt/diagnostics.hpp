#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gsopt/ell.hpp"
#include "gsopt/errors.hpp"
#include "gsopt/noise.hpp"
#include "gsopt/objective.hpp"
#include "gsopt/trajectory.hpp"
#include "gsopt/vec.hpp"

namespace gsopt {

struct CheckResult {
    std::string name;
    bool pass = true;
    double worst_margin = 0.0;  // largest violation found; <= 0 means clean
    double location = 0.0;      // iteration t or sample coordinate of the worst margin

    nlohmann::json to_json() const {
        return {{"name", name}, {"pass", pass}, {"worst_margin", worst_margin},
                {"location", location}};
    }
};

struct DiagnosticsReport {
    std::vector<CheckResult> checks;
    nlohmann::json extras = nlohmann::json::object();

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    nlohmann::json to_json() const {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& c : checks) arr.push_back(c.to_json());
        return {{"checks", arr}, {"all_pass", all_pass()}, {"extras", extras}};
    }
};

// ---------------------------------------------------------------------------
// Gradient-level certificate: first exceedance time tau, the last prior time
// the norm sat below G/2, and the two areas whose comparison drives the
// level-set argument. pass means no exceedance ever happened.
struct GradientBoundReport {
    std::optional<std::int64_t> tau;
    std::optional<std::int64_t> tau_half;
    double S_uc = 0.0;
    std::optional<double> S_rect;
    bool pass = true;

    nlohmann::json to_json() const {
        nlohmann::json j{{"pass", pass}, {"S_uc", S_uc}};
        if (tau) j["tau"] = *tau;
        if (tau_half) j["tau_half"] = *tau_half;
        if (S_rect) j["S_rect"] = *S_rect;
        return j;
    }
};

inline GradientBoundReport check_gradient_bound(const std::vector<double>& grad_norms,
                                                double G) {
    if (grad_norms.empty())
        throw ParameterError("gradient-bound check needs a non-empty series");
    GradientBoundReport r;
    std::size_t tau = grad_norms.size();
    for (std::size_t i = 0; i < grad_norms.size(); ++i) {
        if (grad_norms[i] > G) {
            tau = i;
            break;
        }
    }
    const std::size_t upto = tau;
    for (std::size_t i = 0; i < upto; ++i) r.S_uc += grad_norms[i] * grad_norms[i];
    if (tau == grad_norms.size()) return r;

    r.pass = false;
    r.tau = static_cast<std::int64_t>(tau);
    for (std::size_t i = tau; i-- > 0;) {
        if (grad_norms[i] <= G / 2.0) {
            r.tau_half = static_cast<std::int64_t>(i);
            break;
        }
    }
    if (r.tau_half)
        r.S_rect = (G / 2.0) * (G / 2.0) *
                   static_cast<double>(*r.tau - *r.tau_half - 1);
    return r;
}

inline GradientBoundReport check_gradient_bound(const Trajectory& traj, double G) {
    std::vector<double> norms;
    norms.reserve(traj.records.size());
    for (const auto& rec : traj.records) norms.push_back(rec.grad_norm);
    return check_gradient_bound(norms, G);
}

// ---------------------------------------------------------------------------
// Per-step sufficient decrease f(x_{t+1}) - f(x_t) <= -(eta/2) |grad|^2,
// checked over consecutive records. Holds in the eta <= 1/L regime; outside
// it the report flags the regime instead of refusing, so deliberate
// divergence runs show a located failure.
struct DescentReport {
    bool pass = true;
    bool eta_within_regime = true;
    double worst_margin = -std::numeric_limits<double>::infinity();
    std::int64_t location = -1;
    std::int64_t pairs = 0;
};

inline DescentReport check_descent(const Trajectory& traj, double eta, double L) {
    DescentReport r;
    r.eta_within_regime = eta <= 1.0 / L * (1.0 + 1e-12);
    for (std::size_t i = 0; i + 1 < traj.records.size(); ++i) {
        const auto& a = traj.records[i];
        const auto& b = traj.records[i + 1];
        if (b.t != a.t + 1) continue;  // strided pair; the inequality is per step
        ++r.pairs;
        const double lhs = b.f - a.f;
        const double rhs = -0.5 * eta * a.grad_norm * a.grad_norm;
        const double margin = lhs - rhs - 1e-10 * (1.0 + std::abs(a.f));
        if (margin > r.worst_margin) {
            r.worst_margin = margin;
            r.location = a.t;
        }
        if (margin > 0.0) r.pass = false;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Recomputes the method's certificate sequence from the raw records and
// verdicts its monotone decrease with per-step relative slack 1e-9.
enum class PotentialKind { GdConvex, GdStronglyConvex, Nag, NagSc };

struct PotentialReport {
    std::vector<std::int64_t> ts;
    std::vector<double> series;
    bool pass = true;
    double worst_rel = -std::numeric_limits<double>::infinity();
    std::int64_t location = -1;
};

inline PotentialReport potential_series(const Trajectory& traj, PotentialKind kind,
                                        double f_star, const Vec& x_star, double mu = 0.0) {
    if (traj.records.empty()) throw ReportError("potential series needs records");
    const double eta = traj.eta;
    if (!(eta > 0.0)) throw ReportError("potential series needs the run stepsize");
    const bool needs_mu = kind == PotentialKind::GdStronglyConvex || kind == PotentialKind::NagSc;
    if (needs_mu && !(mu > 0.0))
        throw ReportError("strongly-convex potential needs mu > 0");
    const double em = eta * mu;

    PotentialReport r;
    for (const auto& rec : traj.records) {
        const double gap = rec.f - f_star;
        double phi = 0.0;
        switch (kind) {
            case PotentialKind::GdConvex:
                phi = static_cast<double>(rec.t) * gap + dist_sq(rec.x, x_star) / (2.0 * eta);
                break;
            case PotentialKind::GdStronglyConvex: {
                // A_t from A_0 = 0, A_{t+1} = (1+A_t)/(1-eta*mu) in closed form.
                const double A =
                    (std::pow(1.0 - em, -static_cast<double>(rec.t)) - 1.0) / em;
                phi = A * gap + (1.0 + em * A) / (2.0 * eta) * dist_sq(rec.x, x_star);
                break;
            }
            case PotentialKind::Nag: {
                if (!rec.z || !rec.A)
                    throw ReportError("momentum potential needs recorded z and A sequences");
                phi = *rec.A * gap + dist_sq(*rec.z, x_star) / (2.0 * eta);
                break;
            }
            case PotentialKind::NagSc: {
                if (!rec.z || !rec.A)
                    throw ReportError("momentum potential needs recorded z and A sequences");
                phi = *rec.A * gap +
                      (1.0 + em * *rec.A) / (2.0 * eta) * dist_sq(*rec.z, x_star);
                break;
            }
        }
        r.ts.push_back(rec.t);
        r.series.push_back(phi);
    }
    for (std::size_t i = 0; i + 1 < r.series.size(); ++i) {
        const double span = static_cast<double>(r.ts[i + 1] - r.ts[i]);
        const double scale = std::max(std::abs(r.series[i]), 1e-300);
        const double rel = (r.series[i + 1] - r.series[i]) / scale - 1e-9 * span;
        if (rel > r.worst_rel) {
            r.worst_rel = rel;
            r.location = r.ts[i];
        }
        if (rel > 0.0) r.pass = false;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Pointwise inequality |grad|^2 <= 2 ell(2|grad|) (f - f*), relative slack 1e-9.
struct PointCheckReport {
    bool pass = true;
    std::int64_t violations = 0;
    double worst_rel = -std::numeric_limits<double>::infinity();
    double location = 0.0;
};

inline PointCheckReport check_reverse_pl(const Objective& obj, const std::vector<Vec>& points) {
    if (!obj.f_star) throw ReportError("reverse-PL check needs the objective minimum value");
    PointCheckReport r;
    for (const auto& p : points) {
        const double gn = norm(obj.eval_gradient(p));
        const double gap = obj.eval_value(p) - *obj.f_star;
        const double lhs = gn * gn;
        const double rhs = 2.0 * obj.profile(2.0 * gn) * gap;
        const double rel = (lhs - rhs) / std::max(lhs, 1e-300) - 1e-9;
        if (rel > r.worst_rel) {
            r.worst_rel = rel;
            r.location = p[0];
        }
        if (rel > 0.0) {
            r.pass = false;
            ++r.violations;
        }
    }
    return r;
}

namespace detail {

// Log-uniform magnitudes over the objective's sampling window, signed when
// the domain extends both ways. Deterministic in (seed, n).
inline std::vector<Vec> sample_points(const Objective& obj, std::int64_t n,
                                      std::uint64_t seed) {
    RngStream rng(seed, 11);
    std::vector<Vec> pts;
    pts.reserve(static_cast<std::size_t>(n));
    const double lo = obj.sample_lo;
    const double hi = obj.sample_hi;
    const double span = std::log(hi / lo);
    const bool signed_domain = obj.domain.contains1(-hi) || obj.domain.contains1(-lo);
    for (std::int64_t i = 0; i < n; ++i) {
        Vec x(obj.dim);
        for (auto& c : x) {
            c = lo * std::exp(rng.uniform01() * span);
            if (signed_domain && rng.uniform01() < 0.5) c = -c;
        }
        if (obj.domain.contains(x))
            pts.push_back(std::move(x));
        else
            --i;  // resample; puncture exclusions make this rare
    }
    return pts;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Within the radius a/ell(|grad(x)|+a) around each sampled x: membership of
// the perturbed point, the gradient-growth cap |grad(y)| <= |grad(x)|+a, and
// the quadratic upper bound with constant ell(|grad(x)|+a). radius_scale
// exists for negative controls that deliberately overshoot the radius.
struct LipschitzSpec {
    std::int64_t samples = 100;
    double a = 1.0;
    double radius_scale = 1.0;
    std::uint64_t seed = 2024;
};

struct LocalLipschitzReport {
    bool pass = true;
    std::int64_t violations = 0;
    double worst_margin = -std::numeric_limits<double>::infinity();
    double location = 0.0;
    std::string failed_check;
};

inline LocalLipschitzReport check_local_lipschitz(const Objective& obj,
                                                  const LipschitzSpec& spec = {}) {
    if (!(spec.a > 0.0)) throw ParameterError("gradient growth allowance a must be positive");
    LocalLipschitzReport r;
    auto pts = detail::sample_points(obj, spec.samples, spec.seed);
    RngStream rng(spec.seed, 13);
    auto fail = [&r](double margin, double where, const char* what) {
        if (margin > r.worst_margin) {
            r.worst_margin = margin;
            r.location = where;
            r.failed_check = what;
        }
        if (margin > 0.0) {
            r.pass = false;
            ++r.violations;
        }
    };
    for (const auto& x : pts) {
        const Vec g = obj.eval_gradient(x);
        const double gn = norm(g);
        const double L = obj.profile(gn + spec.a);
        const double radius = spec.radius_scale * spec.a / L;

        Vec dir(x.size());
        for (auto& d : dir) d = rng.normal();
        const double dn = norm(dir);
        const double step = radius * rng.uniform01();
        Vec y = x;
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += step * dir[i] / dn;

        if (!obj.domain.contains(y)) {
            fail(obj.domain.boundary_distance(x) > 0.0 ? 1.0 : 0.0, x[0], "domain");
            continue;
        }
        const double gyn = norm(obj.eval_gradient(y));
        fail((gyn - (gn + spec.a)) / (gn + spec.a) - 1e-8, x[0], "gradient_growth");

        const double fx = obj.eval_value(x);
        const double fy = obj.eval_value(y);
        double inner = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) inner += g[i] * (y[i] - x[i]);
        const double quad = fx + inner + 0.5 * L * step * step;
        fail((fy - quad) / (1.0 + std::abs(fx)) - 1e-8, x[0], "quadratic_bound");
    }
    return r;
}

// ---------------------------------------------------------------------------
// Samples the smoothness inequality |hess| <= profile(|grad|) over the
// objective's window; any point beating the (1+1e-8) slack is a violation.
struct SamplerSpec {
    std::int64_t n = 10000;
    std::uint64_t seed = 12345;
};

struct ProfileViolation {
    double x = 0.0;
    double grad_norm = 0.0;
    double hess_norm = 0.0;
    double bound = 0.0;
};

struct CertifyReport {
    std::int64_t samples = 0;
    std::int64_t violation_count = 0;
    std::vector<ProfileViolation> violations;  // first 64 kept for reporting
    double worst_ratio = 0.0;                  // max hess/bound observed
    bool pass = true;
};

inline CertifyReport certify_profile(const Objective& obj, const EllFunction& profile,
                                     const SamplerSpec& spec = {}) {
    CertifyReport r;
    auto pts = detail::sample_points(obj, spec.n, spec.seed);
    r.samples = static_cast<std::int64_t>(pts.size());
    for (const auto& x : pts) {
        const double gn = norm(obj.eval_gradient(x));
        const double hn = obj.eval_hessian_norm(x);
        const double bound = profile(gn);
        r.worst_ratio = std::max(r.worst_ratio, hn / std::max(bound, 1e-300));
        if (hn > bound * (1.0 + 1e-8)) {
            r.pass = false;
            ++r.violation_count;
            if (r.violations.size() < 64) r.violations.push_back({x[0], gn, hn, bound});
        }
    }
    return r;
}

inline CertifyReport certify_profile(const Objective& obj, const SamplerSpec& spec = {}) {
    return certify_profile(obj, obj.profile, spec);
}

// ---------------------------------------------------------------------------
// Least-squares rate recovery on the recorded gap series: power mode fits
// log(gap) against log(t), linear mode against t.
enum class RateMode { Power, Linear };

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::size_t points = 0;
};

inline RateFit fit_rate(const Trajectory& traj, double f_star, RateMode mode,
                        std::int64_t t_lo, std::int64_t t_hi) {
    std::vector<double> us, vs;
    for (const auto& rec : traj.records) {
        if (rec.t < t_lo || rec.t > t_hi) continue;
        if (mode == RateMode::Power && rec.t < 1) continue;
        const double gap = rec.f - f_star;
        if (!(gap > 0.0))
            throw WindowError("non-positive gap at t=" + std::to_string(rec.t) +
                              " in the fit window");
        us.push_back(mode == RateMode::Power ? std::log(static_cast<double>(rec.t))
                                             : static_cast<double>(rec.t));
        vs.push_back(std::log(gap));
    }
    if (us.size() < 5) throw WindowError("fit window holds fewer than 5 usable records");

    RateFit fit;
    fit.points = us.size();
    const double n = static_cast<double>(us.size());
    double su = 0.0, sv = 0.0, suu = 0.0, suv = 0.0;
    for (std::size_t i = 0; i < us.size(); ++i) {
        su += us[i];
        sv += vs[i];
        suu += us[i] * us[i];
        suv += us[i] * vs[i];
    }
    const double denom = n * suu - su * su;
    if (denom == 0.0) throw WindowError("degenerate fit window");
    fit.slope = (n * suv - su * sv) / denom;
    fit.intercept = (sv - fit.slope * su) / n;
    double ss_res = 0.0, ss_tot = 0.0;
    const double vbar = sv / n;
    for (std::size_t i = 0; i < us.size(); ++i) {
        const double pred = fit.intercept + fit.slope * us[i];
        ss_res += (vs[i] - pred) * (vs[i] - pred);
        ss_tot += (vs[i] - vbar) * (vs[i] - vbar);
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

// ---------------------------------------------------------------------------
// Stopping-time realizations for a stochastic run: first gradient exceedance
// over G, first noise exceedance over the threshold, both capped at the
// horizon, and their minimum.
struct ExceedanceReport {
    std::int64_t tau1 = 0;
    std::int64_t tau2 = 0;
    std::int64_t tau = 0;
    std::int64_t T = 0;
};

inline ExceedanceReport sgd_exceedance_report(const Trajectory& traj, double G,
                                              double threshold) {
    if (traj.records.empty()) throw ReportError("exceedance report needs records");
    ExceedanceReport r;
    r.T = traj.records.back().t;
    bool any_eps = false;
    r.tau1 = r.T;
    r.tau2 = r.T;
    bool got1 = false, got2 = false;
    for (const auto& rec : traj.records) {
        if (!got1 && rec.grad_norm > G) {
            r.tau1 = rec.t;
            got1 = true;
        }
        if (rec.eps_norm) {
            any_eps = true;
            if (!got2 && *rec.eps_norm > threshold) {
                r.tau2 = rec.t;
                got2 = true;
            }
        }
    }
    if (!any_eps && traj.records.size() > 1)
        throw ReportError("trajectory carries no recorded noise norms");
    r.tau = std::min(r.tau1, r.tau2);
    return r;
}

// ---------------------------------------------------------------------------
// Supremum gradient norm over the sublevel set {f <= f(x0)} for univariate
// objectives, by grid search with boundary refinement, next to the root of
// M^2 = 2 ell(2M) (f(x0) - f*) it is certified against.
struct LevelSearchSpec {
    std::int64_t n_grid = 4096;
    double max_span = 1e9;
    int refine_iters = 100;
};

struct LevelSetReport {
    double M = 0.0;
    double analytic = 0.0;
    double argmax = 0.0;
};

inline LevelSetReport level_set_M(const Objective& obj, double x0,
                                  const LevelSearchSpec& spec = {}) {
    if (obj.dim != 1) throw ParameterError("level-set search handles univariate objectives");
    if (!obj.f_star) throw ReportError("level-set search needs the objective minimum value");
    obj.check_in_domain(Vec{x0});

    const double level = obj.eval_value(Vec{x0});
    const double delta0 = level - *obj.f_star;
    auto fval = [&obj](double x) { return obj.eval_value(Vec{x}); };
    auto gabs = [&obj](double x) { return std::abs(obj.eval_gradient(Vec{x})[0]); };

    LevelSetReport rep;
    rep.M = gabs(x0);
    rep.argmax = x0;

    // Expand the bracket until the sublevel set is strictly inside it. A
    // boundary that stays inside the set with a growing gradient means the
    // supremum does not exist.
    double span = std::max(2.0 * std::abs(x0), 2.0);
    double lo, hi;
    for (;;) {
        lo = obj.domain.kind == DomainSpec::Kind::AllSpace
                 ? -span
                 : std::max(obj.domain.lo + 1e-12 * span, obj.domain.lo * (1.0 + 1e-12)) +
                       std::min(1.0 / span, 1e-6);
        hi = span;
        const bool lo_in = fval(lo) <= level;
        const bool hi_in = fval(hi) <= level;
        if (!lo_in && !hi_in) break;
        if (span >= spec.max_span) {
            const double edge = std::max(lo_in ? gabs(lo) : 0.0, hi_in ? gabs(hi) : 0.0);
            if (edge > rep.M)
                throw SearchError("sublevel set is unbounded with a growing gradient");
            break;
        }
        span *= 2.0;
    }

    // Grid scan for interior candidates plus bisection onto each boundary
    // crossing, where the gradient of a convex-like shape peaks.
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(spec.n_grid) + 2);
    for (std::int64_t i = 0; i <= spec.n_grid; ++i)
        xs.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(spec.n_grid));
    xs.push_back(x0);
    std::sort(xs.begin(), xs.end());

    auto consider = [&](double x) {
        if (!obj.domain.contains1(x) || fval(x) > level * (1.0 + 1e-12) + 1e-12) return;
        const double g = gabs(x);
        if (g > rep.M) {
            rep.M = g;
            rep.argmax = x;
        }
    };
    for (double x : xs) consider(x);
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const bool in0 = fval(xs[i]) <= level;
        const bool in1 = fval(xs[i + 1]) <= level;
        if (in0 == in1) continue;
        double a = xs[i], b = xs[i + 1];
        for (int it = 0; it < spec.refine_iters; ++it) {
            const double m = 0.5 * (a + b);
            if ((fval(m) <= level) == in0)
                a = m;
            else
                b = m;
        }
        consider(in0 ? a : b);
    }

    // Root of M^2 = 2 ell(2M) delta0 by doubling then bisection; the
    // sub-quadratic profile guarantees a crossing.
    if (delta0 <= 0.0) {
        rep.analytic = 0.0;
        return rep;
    }
    auto h = [&obj, delta0](double m) { return m * m - 2.0 * obj.profile(2.0 * m) * delta0; };
    double mhi = 1.0;
    int guard = 0;
    while (h(mhi) <= 0.0) {
        mhi *= 2.0;
        if (++guard > 2000) throw SearchError("level equation has no finite root");
    }
    double mlo = mhi / 2.0;
    if (guard == 0) mlo = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (mlo + mhi);
        (h(mid) <= 0.0 ? mlo : mhi) = mid;
    }
    rep.analytic = mhi;
    return rep;
}

} // namespace gsopt
