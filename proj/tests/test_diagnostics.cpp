#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

#include "gsopt/catalog.hpp"
#include "gsopt/diagnostics.hpp"
#include "gsopt/errors.hpp"
#include "gsopt/solvers.hpp"

using Catch::Approx;
using namespace gsopt;

namespace {

// Minimal hand-built trajectory for synthetic series.
Trajectory synthetic(const std::vector<double>& fs, double eta = 0.1) {
    Trajectory tr;
    tr.method = "gd";
    tr.eta = eta;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        TrajectoryRecord r;
        r.t = static_cast<std::int64_t>(i);
        r.x = Vec{1.0};
        r.f = fs[i];
        r.grad_norm = 1.0;
        tr.records.push_back(std::move(r));
    }
    return tr;
}

} // namespace

TEST_CASE("gradient-level certificate") {
    SECTION("exceedance bookkeeping on a short series") {
        GradientBoundReport r = check_gradient_bound({1.0, 3.0, 5.0}, 4.0);
        CHECK_FALSE(r.pass);
        REQUIRE(r.tau);
        CHECK(*r.tau == 2);
        REQUIRE(r.tau_half);
        CHECK(*r.tau_half == 0);
        CHECK(r.S_uc == Approx(10.0));
        REQUIRE(r.S_rect);
        CHECK(*r.S_rect == Approx(4.0));
    }

    SECTION("a series under the level passes") {
        GradientBoundReport r = check_gradient_bound({1.0, 3.0, 4.0}, 4.0);
        CHECK(r.pass);
        CHECK_FALSE(r.tau.has_value());
        CHECK_FALSE(r.S_rect.has_value());
        CHECK(r.S_uc == Approx(26.0));
    }

    SECTION("no prior dip below half the level") {
        GradientBoundReport r = check_gradient_bound({3.0, 5.0}, 4.0);
        REQUIRE(r.tau);
        CHECK(*r.tau == 1);
        CHECK_FALSE(r.tau_half.has_value());
        CHECK_FALSE(r.S_rect.has_value());
    }

    SECTION("accumulated area strictly exceeds the rectangle") {
        // Between the last dip below G/2 and the exceedance every norm is
        // above G/2, so the sum of squares beats (G/2)^2 per step.
        RngStream rng(99, 0);
        for (int rep = 0; rep < 100; ++rep) {
            std::vector<double> gs;
            const int n = 5 + static_cast<int>(rng.uniform01() * 40);
            for (int i = 0; i < n; ++i) gs.push_back(4.0 * rng.uniform01());
            gs.push_back(4.0 + rng.uniform01());  // force an exceedance
            GradientBoundReport r = check_gradient_bound(gs, 4.0);
            REQUIRE(r.tau);
            if (r.S_rect) REQUIRE(r.S_uc > *r.S_rect);
        }
    }

    SECTION("trajectory overload reads recorded norms") {
        Objective q = make_quadratic(2.0);
        Trajectory tr = run_gd(q, Vec{1.0}, 0.25, 20);
        GradientBoundReport r = check_gradient_bound(tr, 3.0);
        CHECK(r.pass);
        CHECK_THROWS_AS(check_gradient_bound(std::vector<double>{}, 1.0), ParameterError);
    }
}

TEST_CASE("sufficient decrease check") {
    Objective q = make_quadratic(2.0);

    SECTION("passes in the safe-stepsize regime") {
        Trajectory tr = run_gd(q, Vec{1.0}, 0.25, 50);
        DescentReport r = check_descent(tr, 0.25, 2.0);
        CHECK(r.pass);
        CHECK(r.eta_within_regime);
        CHECK(r.pairs == 50);
        CHECK(r.worst_margin <= 0.0);
    }

    SECTION("flags a diverging stepsize with its location") {
        Trajectory tr = run_gd(q, Vec{1.0}, 2.0, 30);
        DescentReport r = check_descent(tr, 2.0, 2.0);
        CHECK_FALSE(r.pass);
        CHECK_FALSE(r.eta_within_regime);
        CHECK(r.location >= 0);
        CHECK(r.worst_margin > 0.0);
    }

    SECTION("a flat start satisfies the inequality with equality") {
        Trajectory tr = run_gd(q, Vec{0.0}, 0.25, 5);
        DescentReport r = check_descent(tr, 0.25, 2.0);
        CHECK(r.pass);
    }

    SECTION("strided records only contribute adjacent pairs") {
        SolverOptions opts;
        opts.stride = 3;
        Trajectory tr = run_gd(q, Vec{1.0}, 0.25, 10, opts);
        DescentReport r = check_descent(tr, 0.25, 2.0);
        CHECK(r.pairs == 1);  // only (9, 10) is consecutive
    }
}

TEST_CASE("certificate potentials") {
    SECTION("plain descent potential decreases and matches the recorded one") {
        Objective q = make_quadratic(2.0);
        Trajectory tr = run_gd(q, Vec{1.0}, 0.25, 50);
        PotentialReport r = potential_series(tr, PotentialKind::GdConvex, 0.0, Vec{0.0});
        CHECK(r.pass);
        REQUIRE(r.series.size() == tr.records.size());
        for (std::size_t i = 0; i < r.series.size(); ++i) {
            REQUIRE(tr.records[i].potential);
            CHECK(r.series[i] == Approx(*tr.records[i].potential).epsilon(1e-12));
        }
    }

    SECTION("strongly convex closed-form weight matches the run's recursion") {
        Objective q = make_quadratic(2.0);
        SolverOptions opts;
        opts.mu = 2.0;
        Trajectory tr = run_gd(q, Vec{1.0}, 0.25, 30, opts);
        PotentialReport r =
            potential_series(tr, PotentialKind::GdStronglyConvex, 0.0, Vec{0.0}, 2.0);
        CHECK(r.pass);
        for (std::size_t i = 0; i < r.series.size(); ++i)
            CHECK(r.series[i] == Approx(*tr.records[i].potential).epsilon(1e-9));
    }

    SECTION("momentum potentials decrease along their runs") {
        Objective q = make_quadratic(1.0);
        Trajectory nag = run_nag(q, Vec{1.0}, 1.0 / 16.0, 200);
        CHECK(potential_series(nag, PotentialKind::Nag, 0.0, Vec{0.0}).pass);

        Trajectory sc = run_nag_sc(q, Vec{1.0}, 0.01, 1.0, 200);
        CHECK(potential_series(sc, PotentialKind::NagSc, 0.0, Vec{0.0}, 1.0).pass);
    }

    SECTION("a stalled run fails the decrease verdict") {
        Trajectory tr = synthetic({0.5, 0.5, 0.5, 0.5});
        PotentialReport r = potential_series(tr, PotentialKind::GdConvex, 0.0, Vec{0.0});
        CHECK_FALSE(r.pass);
        CHECK(r.location == 0);
        CHECK(r.worst_rel > 0.0);
    }

    SECTION("missing inputs are refused") {
        Trajectory tr = synthetic({0.5, 0.4});
        CHECK_THROWS_AS(potential_series(tr, PotentialKind::Nag, 0.0, Vec{0.0}), ReportError);
        CHECK_THROWS_AS(
            potential_series(tr, PotentialKind::GdStronglyConvex, 0.0, Vec{0.0}, 0.0),
            ReportError);
        Trajectory empty;
        empty.eta = 0.1;
        CHECK_THROWS_AS(potential_series(empty, PotentialKind::GdConvex, 0.0, Vec{0.0}),
                        ReportError);
    }
}

TEST_CASE("pointwise gap inequality") {
    SECTION("tight on a parabola") {
        Objective q = make_quadratic(2.0);
        auto pts = detail::sample_points(q, 100, 7);
        PointCheckReport r = check_reverse_pl(q, pts);
        CHECK(r.pass);
        CHECK(r.violations == 0);
        // |grad|^2 = 2 L (f - f*) exactly: the margin sits at the slack.
        CHECK(r.worst_rel == Approx(-1e-9).margin(1e-10));
    }

    SECTION("holds across bounded-below catalog entries") {
        for (const Objective& o : catalog_defaults()) {
            if (!o.f_star) continue;
            CAPTURE(o.id);
            auto pts = detail::sample_points(o, 100, 11);
            CHECK(check_reverse_pl(o, pts).pass);
        }
    }

    SECTION("an understated profile is caught") {
        Objective q = make_quadratic(2.0);
        q.profile = EllFunction::constant(0.4);
        auto pts = detail::sample_points(q, 100, 7);
        PointCheckReport r = check_reverse_pl(q, pts);
        CHECK_FALSE(r.pass);
        CHECK(r.violations > 0);
    }

    SECTION("needs the minimum value") {
        CHECK_THROWS_AS(check_reverse_pl(make_logarithmic(), {Vec{1.0}}), ReportError);
    }
}

TEST_CASE("local smoothness ball") {
    SECTION("holds at the certified radius") {
        for (const char* id : {"quadratic", "rational_inverse", "cosh", "exponential"}) {
            Objective o =
                id == std::string("quadratic") ? make_quadratic(2.0)
                : id == std::string("rational_inverse") ? make_rational_inverse()
                : id == std::string("cosh") ? make_cosh()
                                            : make_exponential(std::exp(1.0));
            CAPTURE(id);
            LocalLipschitzReport r = check_local_lipschitz(o);
            CHECK(r.pass);
            CHECK(r.violations == 0);
        }
    }

    SECTION("overshooting the radius on a steep objective fails") {
        LipschitzSpec spec;
        spec.radius_scale = 10.0;
        LocalLipschitzReport r = check_local_lipschitz(make_rational_inverse(), spec);
        CHECK_FALSE(r.pass);
        CHECK(r.violations > 0);
        CHECK_FALSE(r.failed_check.empty());
    }

    SECTION("allowance must be positive") {
        LipschitzSpec spec;
        spec.a = 0.0;
        CHECK_THROWS_AS(check_local_lipschitz(make_quadratic(1.0), spec), ParameterError);
    }
}

TEST_CASE("profile certification") {
    SamplerSpec spec;
    spec.n = 2000;

    SECTION("catalog profiles hold on their sampling windows") {
        for (const Objective& o : catalog_defaults()) {
            CAPTURE(o.id);
            CertifyReport r = certify_profile(o, spec);
            CHECK(r.pass);
            CHECK(r.violation_count == 0);
            CHECK(r.samples == spec.n);
        }
    }

    SECTION("an exact growth relation certifies with zero slack") {
        // -log x has |f''| equal to |f'|^2, so the ratio to its profile
        // peaks at exactly one.
        CertifyReport r =
            certify_profile(make_logarithmic(), EllFunction::power_law(0.0, 1.0, 2.0), spec);
        CHECK(r.pass);
        CHECK(r.worst_ratio == Approx(1.0).epsilon(1e-9));
    }

    SECTION("understated constants are caught") {
        CertifyReport r = certify_profile(make_exponential(std::exp(1.0)),
                                          EllFunction::power_law(0.0, 0.5, 1.0), spec);
        CHECK_FALSE(r.pass);
        CHECK(r.violation_count > 0);
        CHECK(r.worst_ratio == Approx(2.0).epsilon(0.01));
        CHECK_FALSE(r.violations.empty());
    }

    SECTION("an understated exponent is caught") {
        Objective inv = make_rational_inverse();
        CertifyReport r = certify_profile(
            inv, EllFunction::power_law(inv.profile.l0(), inv.profile.lrho(), 1.25), spec);
        CHECK_FALSE(r.pass);
        CHECK(r.violation_count > 0);
    }

    SECTION("enlarging a profile never adds violations") {
        Objective e = make_exponential(std::exp(1.0));
        const std::int64_t v_half =
            certify_profile(e, EllFunction::power_law(0.0, 0.5, 1.0), spec).violation_count;
        const std::int64_t v_mid =
            certify_profile(e, EllFunction::power_law(0.0, 0.75, 1.0), spec).violation_count;
        const std::int64_t v_full =
            certify_profile(e, EllFunction::power_law(0.0, 1.0, 1.0), spec).violation_count;
        CHECK(v_half >= v_mid);
        CHECK(v_mid >= v_full);
        CHECK(v_full == 0);
    }

    SECTION("repeated certification is deterministic") {
        Objective o = make_double_exponential(std::exp(1.0), std::exp(1.0), 1.5);
        CertifyReport a = certify_profile(o, spec);
        CertifyReport b = certify_profile(o, spec);
        CHECK(a.violation_count == b.violation_count);
        CHECK(a.worst_ratio == b.worst_ratio);
        CHECK(a.samples == b.samples);
    }
}

TEST_CASE("rate recovery") {
    const auto fill = [](double (*gap)(double)) {
        Trajectory tr;
        tr.method = "gd";
        tr.eta = 0.1;
        for (std::int64_t t = 0; t <= 200; ++t) {
            TrajectoryRecord r;
            r.t = t;
            r.x = Vec{0.0};
            r.f = 3.0 + gap(static_cast<double>(t));
            tr.records.push_back(std::move(r));
        }
        return tr;
    };

    SECTION("power decay") {
        Trajectory tr = fill(+[](double t) { return t < 1.0 ? 2.0 : 1.0 / t; });
        RateFit fit = fit_rate(tr, 3.0, RateMode::Power, 1, 200);
        CHECK(fit.slope == Approx(-1.0).margin(1e-9));
        CHECK(fit.r_squared == Approx(1.0).margin(1e-12));
        CHECK(fit.points == 200);

        Trajectory tr2 = fill(+[](double t) { return t < 1.0 ? 2.0 : 1.0 / (t * t); });
        CHECK(fit_rate(tr2, 3.0, RateMode::Power, 1, 200).slope ==
              Approx(-2.0).margin(1e-9));
    }

    SECTION("geometric decay") {
        Trajectory tr = fill(+[](double t) { return std::pow(0.9, t); });
        RateFit fit = fit_rate(tr, 3.0, RateMode::Linear, 0, 200);
        CHECK(fit.slope == Approx(std::log(0.9)).margin(1e-12));
        CHECK(fit.r_squared == Approx(1.0).margin(1e-12));
    }

    SECTION("window errors") {
        Trajectory tr = fill(+[](double t) { return 1.0 / (t + 1.0); });
        CHECK_THROWS_AS(fit_rate(tr, 3.0, RateMode::Power, 1, 4), WindowError);
        Trajectory bad = fill(+[](double t) { return 1.0 - t / 100.0; });
        CHECK_THROWS_AS(fit_rate(bad, 3.0, RateMode::Linear, 0, 200), WindowError);
    }
}

TEST_CASE("stochastic exceedance times") {
    SECTION("synthetic spikes") {
        Trajectory tr = synthetic({1, 1, 1, 1, 1, 1, 1, 1, 1, 1});
        for (auto& r : tr.records) r.eps_norm = 0.1;
        tr.records[3].grad_norm = 9.0;
        tr.records[5].eps_norm = 100.0;
        ExceedanceReport r = sgd_exceedance_report(tr, 4.0, 50.0);
        CHECK(r.tau1 == 3);
        CHECK(r.tau2 == 5);
        CHECK(r.tau == 3);
        CHECK(r.T == 9);
    }

    SECTION("no exceedance caps at the horizon") {
        Trajectory tr = synthetic({1, 1, 1});
        for (auto& r : tr.records) r.eps_norm = 0.1;
        ExceedanceReport r = sgd_exceedance_report(tr, 4.0, 50.0);
        CHECK(r.tau1 == 2);
        CHECK(r.tau2 == 2);
        CHECK(r.tau == 2);
    }

    SECTION("a run without noise norms is refused") {
        Trajectory tr = synthetic({1, 1, 1});
        CHECK_THROWS_AS(sgd_exceedance_report(tr, 4.0, 50.0), ReportError);
    }

    SECTION("live run smoke test") {
        Objective q = make_quadratic(1.0);
        RngStream rng(3, 0);
        Trajectory tr = run_sgd(q, Vec{1.0}, 0.1, 50, NoiseModel::gaussian(1.0), rng);
        ExceedanceReport r = sgd_exceedance_report(tr, 1e9, 1e9);
        CHECK(r.tau == 50);
    }
}

TEST_CASE("sublevel gradient supremum") {
    SECTION("parabola") {
        LevelSetReport r = level_set_M(make_quadratic(2.0), 1.0);
        CHECK(r.M == Approx(2.0).margin(1e-9));
        CHECK(std::abs(r.argmax) == Approx(1.0).margin(1e-9));
        // M^2 = 2 L delta0 holds with equality here.
        CHECK(r.analytic == Approx(2.0).epsilon(1e-9));
        CHECK(r.M <= r.analytic * (1.0 + 1e-6));
    }

    SECTION("double well peaks at the sublevel boundary") {
        LevelSetReport r = level_set_M(make_polynomial({1.0, 0.0, -2.0, 0.0, 1.0}), 1.5);
        CHECK(r.M == Approx(7.5).margin(1e-6));
        CHECK(std::abs(r.argmax) == Approx(1.5).margin(1e-6));
        CHECK(r.M <= r.analytic * (1.0 + 1e-6));
    }

    SECTION("one-sided sublevel set with decaying gradient") {
        LevelSetReport r = level_set_M(make_rational_inverse(), 0.5);
        CHECK(r.M == Approx(4.0).margin(1e-6));
        CHECK(r.M <= r.analytic * (1.0 + 1e-6));
    }

    SECTION("analytic root dominates across sub-quadratic entries") {
        for (const Objective& o : catalog_defaults()) {
            if (!o.f_star || o.profile.growth_degree() >= 2.0) continue;
            // Start off the minimizer so the sublevel set has positive measure.
            const double x0 = o.domain.kind == DomainSpec::Kind::AllSpace ? 1.5 : 0.5;
            CAPTURE(o.id);
            LevelSetReport r = level_set_M(o, x0);
            CHECK(r.M <= r.analytic * (1.0 + 1e-6));
        }
    }

    SECTION("an unbounded sublevel set with a growing gradient is refused") {
        Objective bad;
        bad.id = "inverted_parabola";
        bad.params = nlohmann::json::object();
        bad.value = [](const Vec& x) { return -x[0] * x[0]; };
        bad.gradient = [](const Vec& x) { return Vec{-2.0 * x[0]}; };
        bad.hessian_norm = [](const Vec&) { return 2.0; };
        bad.domain = DomainSpec::all_space();
        bad.profile = EllFunction::constant(2.0);
        bad.f_star = -1e18;
        CHECK_THROWS_AS(level_set_M(bad, 1.0), SearchError);
    }

    SECTION("input guards") {
        CHECK_THROWS_AS(level_set_M(make_separable(make_quadratic(1.0), 2), 1.0),
                        ParameterError);
        CHECK_THROWS_AS(level_set_M(make_logarithmic(), 1.0), ReportError);
        CHECK_THROWS_AS(level_set_M(make_rational_inverse(), -1.0), DomainError);
    }
}

TEST_CASE("report aggregation") {
    DiagnosticsReport rep;
    rep.checks.push_back({"first", true, -0.5, 0.0});
    CHECK(rep.all_pass());
    rep.checks.push_back({"second", false, 0.25, 3.0});
    CHECK_FALSE(rep.all_pass());
    nlohmann::json j = rep.to_json();
    CHECK(j["all_pass"] == false);
    CHECK(j["checks"].size() == 2);
    CHECK(j["checks"][1]["name"] == "second");
}
