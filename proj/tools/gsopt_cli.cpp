// Experiment runner: tuning, single runs, grids, the lower-bound
// reproduction, and catalog certification, all file-configured and
// deterministic under a fixed seed.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gsopt/catalog.hpp"
#include "gsopt/config.hpp"
#include "gsopt/diagnostics.hpp"
#include "gsopt/hard_instance.hpp"
#include "gsopt/solvers.hpp"
#include "gsopt/tuner.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gsopt;

namespace {

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file \"" + path + "\"");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse failure: ") + e.what());
    }
    return j;
}

void write_text(const fs::path& p, const std::string& text) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ReportError("cannot write \"" + p.string() + "\"");
    out << text;
}

double require_mu(const RunConfig& cfg, const Objective& obj) {
    if (cfg.mu) return *cfg.mu;
    if (obj.mu) return *obj.mu;
    throw ConfigError("method needs \"mu\" and the objective declares none");
}

TunedParams tune_for(Method m, const RunConfig& cfg, const Objective& obj, bool* capped) {
    switch (m) {
        case Method::GdConvex:
            return tune_gd_convex(obj, cfg.x0);
        case Method::GdStronglyConvex:
            return tune_gd_strongly_convex(obj, cfg.x0, require_mu(cfg, obj));
        case Method::GdNonconvex:
            return tune_gd_nonconvex(obj, cfg.x0);
        case Method::NagConvex:
            return tune_nag(obj, cfg.x0, cfg.alpha);
        case Method::NagStronglyConvex:
            return tune_nag_sc(obj, cfg.x0, require_mu(cfg, obj), cfg.alpha);
        case Method::Sgd: {
            if (!cfg.sigma || !cfg.delta || !cfg.epsilon)
                throw ConfigError("sgd tuning needs \"sigma\", \"delta\", and \"epsilon\"");
            TunedParams p = tune_sgd(obj, cfg.x0, *cfg.sigma, *cfg.delta, *cfg.epsilon);
            if (cfg.t_cap && p.T && *p.T > *cfg.t_cap) {
                p = cap_sgd_horizon(p, *cfg.t_cap);
                if (capped) *capped = true;
            }
            return p;
        }
    }
    throw ConfigError("unknown method");
}

struct ExecOutcome {
    Objective obj;
    std::optional<TunedParams> tuned;
    bool t_cap_applied = false;
    Trajectory traj;
    DiagnosticsReport report;
    bool ok = false;
};

bool is_gd(Method m) {
    return m == Method::GdConvex || m == Method::GdStronglyConvex || m == Method::GdNonconvex;
}

// Average of squared gradient norms over records before the final one; at
// stride 1 this is exactly (1/T) sum_{t<T} |grad|^2.
double avg_grad_sq(const Trajectory& traj) {
    if (traj.records.size() < 2) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < traj.records.size(); ++i)
        s += traj.records[i].grad_norm * traj.records[i].grad_norm;
    return s / static_cast<double>(traj.records.size() - 1);
}

double min_grad_sq(const Trajectory& traj) {
    double m = std::numeric_limits<double>::quiet_NaN();
    for (const auto& rec : traj.records) {
        const double v = rec.grad_norm * rec.grad_norm;
        if (!(v >= m)) m = v;
    }
    return m;
}

void run_checks(const RunConfig& cfg, Method m, double eta, ExecOutcome& out) {
    const Objective& obj = out.obj;
    const bool anchors = obj.f_star && obj.x_star;
    std::vector<std::string> names = cfg.checks;
    if (names.empty()) {
        if (is_gd(m)) names.push_back("descent");
        if (anchors && m != Method::GdNonconvex && m != Method::Sgd) names.push_back("potential");
        if (out.tuned && obj.f_star && m != Method::Sgd &&
            (m != Method::GdNonconvex || cfg.stride == 1)) {
            bool have_inputs = true;
            try {
                out.tuned->predict_bound(1);
            } catch (const TuningError&) {
                have_inputs = false;
            }
            if (have_inputs) names.push_back("bound");
        }
        if (out.tuned) names.push_back("gradient_bound");
    }

    for (const auto& name : names) {
        if (name == "descent") {
            if (!is_gd(m)) throw ConfigError("check \"descent\" applies to gradient descent");
            const double L = out.tuned ? out.tuned->L
                                       : obj.profile(2.0 * out.traj.max_grad_norm);
            const auto rep = check_descent(out.traj, eta, L);
            out.report.checks.push_back({"descent", rep.pass, rep.worst_margin,
                                         static_cast<double>(rep.location)});
        } else if (name == "potential") {
            if (!anchors)
                throw ConfigError("check \"potential\" needs a known minimum and minimizer");
            PotentialKind kind;
            double mu = 0.0;
            switch (m) {
                case Method::GdConvex: kind = PotentialKind::GdConvex; break;
                case Method::GdStronglyConvex:
                    kind = PotentialKind::GdStronglyConvex;
                    mu = require_mu(cfg, obj);
                    break;
                case Method::NagConvex: kind = PotentialKind::Nag; break;
                case Method::NagStronglyConvex:
                    kind = PotentialKind::NagSc;
                    mu = require_mu(cfg, obj);
                    break;
                default:
                    throw ConfigError("check \"potential\" has no certificate for this method");
            }
            const auto rep = potential_series(out.traj, kind, *obj.f_star, *obj.x_star, mu);
            out.report.checks.push_back({"potential", rep.pass, rep.worst_rel,
                                         static_cast<double>(rep.location)});
        } else if (name == "gradient_bound") {
            if (!out.tuned) throw ConfigError("check \"gradient_bound\" needs tuner parameters");
            const double G = out.tuned->G;
            auto rep = check_gradient_bound(out.traj, G);
            bool pass = rep.pass && out.traj.max_grad_norm <= G;
            if (out.traj.max_query_grad_norm > G) pass = false;
            const double worst =
                std::max(out.traj.max_grad_norm, out.traj.max_query_grad_norm) / G - 1.0;
            out.report.checks.push_back({"gradient_bound", pass, worst,
                                         rep.tau ? static_cast<double>(*rep.tau) : -1.0});
            out.report.extras["gradient_bound"] = rep.to_json();
        } else if (name == "bound") {
            if (!out.tuned || !obj.f_star)
                throw ConfigError("check \"bound\" needs tuner parameters and a known minimum");
            CheckResult c{"bound", true, -std::numeric_limits<double>::infinity(), -1.0};
            if (m == Method::GdNonconvex || m == Method::Sgd) {
                if (cfg.stride != 1)
                    throw ConfigError("check \"bound\" needs stride 1 for averaged gradients");
                double s = 0.0;
                for (std::size_t i = 0; i + 1 < out.traj.records.size(); ++i) {
                    const auto& rec = out.traj.records[i];
                    s += rec.grad_norm * rec.grad_norm;
                    const std::int64_t t = rec.t + 1;
                    const double avg = s / static_cast<double>(t);
                    const double b = out.tuned->predict_bound(t);
                    const double margin = (avg - b) / std::max(b, 1e-300) - 1e-9;
                    if (margin > c.worst_margin) {
                        c.worst_margin = margin;
                        c.location = static_cast<double>(t);
                    }
                    if (margin > 0.0) c.pass = false;
                }
            } else {
                for (const auto& rec : out.traj.records) {
                    if (rec.t < 1) continue;
                    const double gap = rec.f - *obj.f_star;
                    const double b = out.tuned->predict_bound(rec.t);
                    const double margin = (gap - b) / std::max(b, 1e-300) - 1e-9;
                    if (margin > c.worst_margin) {
                        c.worst_margin = margin;
                        c.location = static_cast<double>(rec.t);
                    }
                    if (margin > 0.0) c.pass = false;
                }
            }
            out.report.checks.push_back(c);
        } else {
            throw ConfigError("unknown check \"" + name + "\"");
        }
    }
    if (obj.f_star && !out.traj.records.empty())
        out.report.extras["final_gap"] = out.traj.records.back().f - *obj.f_star;
    out.report.extras["avg_grad_sq"] = avg_grad_sq(out.traj);
}

ExecOutcome execute_run(const RunConfig& cfg) {
    ExecOutcome out{make_objective(cfg.objective_id, cfg.objective_params)};
    const Objective& obj = out.obj;
    const Method m = method_from_string(cfg.method);

    const bool need_tune = !cfg.eta || (m == Method::Sgd && !cfg.T);
    if (need_tune) out.tuned = tune_for(m, cfg, obj, &out.t_cap_applied);
    const double eta = cfg.eta ? *cfg.eta : out.tuned->eta;
    std::int64_t T = 0;
    if (cfg.T)
        T = *cfg.T;
    else if (out.tuned && out.tuned->T)
        T = *out.tuned->T;
    else
        throw ConfigError("\"T\" is required for this method");

    SolverOptions opts;
    opts.stride = cfg.stride;
    opts.grad_tol = cfg.grad_tol;

    switch (m) {
        case Method::GdConvex:
        case Method::GdNonconvex:
            out.traj = run_gd(obj, cfg.x0, eta, T, opts);
            break;
        case Method::GdStronglyConvex:
            opts.mu = require_mu(cfg, obj);
            out.traj = run_gd(obj, cfg.x0, eta, T, opts);
            break;
        case Method::NagConvex:
            out.traj = run_nag(obj, cfg.x0, eta, T, opts);
            break;
        case Method::NagStronglyConvex:
            out.traj = run_nag_sc(obj, cfg.x0, eta, require_mu(cfg, obj), T, opts);
            break;
        case Method::Sgd: {
            const NoiseModel noise =
                cfg.noise_given ? cfg.noise
                : (cfg.sigma && *cfg.sigma > 0.0 ? NoiseModel::gaussian(*cfg.sigma)
                                                 : NoiseModel::none());
            RngStream rng(cfg.seed, 0);
            out.traj = run_sgd(obj, cfg.x0, eta, T, noise, rng, opts);
            break;
        }
    }

    run_checks(cfg, m, eta, out);
    out.ok = out.report.all_pass() && (out.traj.stop_reason == StopReason::Completed ||
                                       out.traj.stop_reason == StopReason::GradTolReached);
    return out;
}

json assemble_report(const RunConfig& cfg, const ExecOutcome& res) {
    json j{{"config", cfg.to_json()},
           {"trajectory", res.traj.summary_json()},
           {"diagnostics", res.report.to_json()}};
    if (res.tuned) j["tuned"] = res.tuned->to_json();
    if (res.t_cap_applied) j["t_cap_applied"] = true;
    return j;
}

void write_run_outputs(const RunConfig& cfg, const ExecOutcome& res, const json& report) {
    if (!cfg.out) return;
    const fs::path dir(*cfg.out);
    fs::create_directories(dir);
    write_text(dir / "config.json", cfg.to_json().dump(2) + "\n");
    std::ostringstream csv;
    res.traj.to_csv(csv);
    write_text(dir / "trajectory.csv", csv.str());
    write_text(dir / "report.json", report.dump(2) + "\n");
}

int cmd_tune(const RunConfig& cfg) {
    const Objective obj = make_objective(cfg.objective_id, cfg.objective_params);
    bool capped = false;
    const TunedParams p = tune_for(method_from_string(cfg.method), cfg, obj, &capped);
    json j = p.to_json();
    if (capped) j["t_cap_applied"] = true;
    std::cout << j.dump(2) << "\n";
    if (cfg.out) write_text(fs::path(*cfg.out) / "tuned.json", j.dump(2) + "\n");
    return 0;
}

int cmd_run(const RunConfig& cfg) {
    const ExecOutcome res = execute_run(cfg);
    const json report = assemble_report(cfg, res);
    std::cout << report.dump(2) << "\n";
    write_run_outputs(cfg, res, report);
    return res.ok ? 0 : 3;
}

struct SweepRow {
    std::string method;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    std::int64_t T = 0;
    std::string status = "ok";
    bool success = false;
    double final_gap = std::numeric_limits<double>::quiet_NaN();
    double min_gs = std::numeric_limits<double>::quiet_NaN();
    double avg_gs = std::numeric_limits<double>::quiet_NaN();
};

int cmd_sweep(const SweepConfig& sc, int jobs, const std::optional<std::string>& out_dir) {
    const auto cells = sc.cells();
    std::vector<SweepRow> rows(cells.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) break;
            const RunConfig& cell = cells[i];
            SweepRow& row = rows[i];
            row.method = cell.method;
            row.sigma = cell.sigma.value_or(0.0);
            row.seed = cell.seed;
            try {
                const ExecOutcome res = execute_run(cell);
                row.T = res.traj.records.empty() ? 0 : res.traj.records.back().t;
                if (res.obj.f_star && !res.traj.records.empty())
                    row.final_gap = res.traj.records.back().f - *res.obj.f_star;
                row.min_gs = min_grad_sq(res.traj);
                row.avg_gs = avg_grad_sq(res.traj);
                if (method_from_string(cell.method) == Method::Sgd && res.tuned &&
                    res.tuned->epsilon > 0.0)
                    row.success = res.traj.stop_reason == StopReason::Completed &&
                                  row.avg_gs <= res.tuned->epsilon * res.tuned->epsilon;
                else
                    row.success = res.ok;
            } catch (const std::exception& e) {
                row.status = e.what();
                std::replace(row.status.begin(), row.status.end(), '\n', ' ');
                std::replace(row.status.begin(), row.status.end(), ',', ';');
            }
        }
    };
    const int n_threads = std::max(1, jobs);
    std::vector<std::thread> pool;
    for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::ostringstream csv;
    csv << "cell,method,sigma,seed,T,status,success,final_gap,min_grad_sq,avg_grad_sq\n";
    std::size_t ok_count = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        csv << i << ',' << r.method << ',' << fmt17(r.sigma) << ',' << r.seed << ',' << r.T
            << ',' << r.status << ',' << (r.success ? 1 : 0) << ',' << fmt17(r.final_gap)
            << ',' << fmt17(r.min_gs) << ',' << fmt17(r.avg_gs) << '\n';
        if (r.success) ++ok_count;
    }

    // Rate fits across cells that differ only in T: slope of log(final gap)
    // against log T recovers the method's complexity order.
    json fits = json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::vector<double> us, vs;
        bool counted = false;
        for (std::size_t k = 0; k < rows.size(); ++k) {
            if (rows[k].method != rows[i].method || rows[k].sigma != rows[i].sigma ||
                rows[k].seed != rows[i].seed)
                continue;
            if (k < i) {
                counted = true;  // group already reported at its first member
                break;
            }
            if (rows[k].status == "ok" && rows[k].final_gap > 0.0 && rows[k].T > 0) {
                us.push_back(std::log(static_cast<double>(rows[k].T)));
                vs.push_back(std::log(rows[k].final_gap));
            }
        }
        if (counted || us.size() < 3) continue;
        std::vector<double> uniq = us;
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        if (uniq.size() < 3) continue;
        const double n = static_cast<double>(us.size());
        double su = 0, sv = 0, suu = 0, suv = 0;
        for (std::size_t k = 0; k < us.size(); ++k) {
            su += us[k];
            sv += vs[k];
            suu += us[k] * us[k];
            suv += us[k] * vs[k];
        }
        const double slope = (n * suv - su * sv) / (n * suu - su * su);
        fits.push_back({{"method", rows[i].method},
                        {"sigma", rows[i].sigma},
                        {"seed", rows[i].seed},
                        {"slope", slope}});
    }

    const json summary{{"cells", rows.size()},
                       {"success_fraction",
                        rows.empty() ? 0.0
                                     : static_cast<double>(ok_count) /
                                           static_cast<double>(rows.size())},
                       {"rate_fits", fits}};
    std::cout << summary.dump(2) << "\n";
    std::cout << csv.str();
    if (out_dir) {
        write_text(fs::path(*out_dir) / "sweep.csv", csv.str());
        write_text(fs::path(*out_dir) / "summary.json", summary.dump(2) + "\n");
    }
    return 0;
}

int cmd_lowerbound(double L0, double L2, double G0, double Delta0, std::optional<double> eta,
                   std::int64_t orbit_steps, const std::optional<std::string>& out_dir) {
    auto [inst, gobj] = make_hard_instance(L0, L2, G0, Delta0);
    json rep;
    rep["instance"] = {{"L0", L0},
                       {"L2", L2},
                       {"G0", G0},
                       {"Delta0", Delta0},
                       {"c", inst.c},
                       {"eta1", inst.eta1},
                       {"y_fixed", inst.y_fixed},
                       {"x0", inst.x0},
                       {"step_floor", inst.step_floor()},
                       {"stuck_eta", {inst.stuck_eta_lo(), inst.stuck_eta_hi()}}};

    // Reflection orbit: iterating from the period-2 point the absolute value
    // must stay put while the sign alternates.
    const bool eta_in_range =
        eta && *eta >= inst.stuck_eta_lo() && *eta <= inst.stuck_eta_hi();
    const double eta_orbit = eta_in_range ? *eta : inst.dyadic_stuck_eta();
    const double z = inst.period2_point(eta_orbit);
    const Trajectory orbit = run_gd(gobj, Vec{z}, eta_orbit, orbit_steps);
    double drift = 0.0;
    bool alternates = true;
    for (const auto& r : orbit.records) {
        drift = std::max(drift, std::abs(std::abs(r.x[0]) - z));
        if ((r.t % 2 == 0) != (r.x[0] > 0.0)) alternates = false;
    }
    rep["orbit"] = {{"eta", eta_orbit},
                    {"z", z},
                    {"steps", orbit_steps},
                    {"amplitude_drift", drift},
                    {"period2", drift <= 1e-9 && alternates}};

    // Slow branch from the prescribed start: a stepsize below the sticking
    // range either reaches |grad| <= 1 after at least floor steps, or fails
    // to reach it within the budget at all.
    const double floor_steps = inst.step_floor();
    const double eta_slow =
        (eta && !eta_in_range) ? *eta : inst.stuck_eta_lo() / 2.0;
    const std::int64_t budget =
        std::max<std::int64_t>(1000, 10 * static_cast<std::int64_t>(std::ceil(floor_steps)));
    SolverOptions slow_opts;
    slow_opts.grad_tol = 1.0;
    slow_opts.stride = std::max<std::int64_t>(1, budget / 1000);
    const Trajectory slow = run_gd(gobj, Vec{inst.x0}, eta_slow, budget, slow_opts);
    const bool reached = slow.stop_reason == StopReason::GradTolReached;
    const std::int64_t steps = reached ? slow.stop_t : budget;
    rep["from_x0"] = {{"eta", eta_slow},
                      {"budget", budget},
                      {"reached_stationarity", reached},
                      {"steps", steps},
                      {"floor", floor_steps},
                      {"meets_floor", static_cast<double>(steps) >= floor_steps}};

    // Above 2/L0 even the smooth quadratic core diverges.
    const Objective quad = make_quadratic(L0);
    const Trajectory div = run_gd(quad, Vec{1.0}, 4.0 / L0, 30);
    bool monotone = true;
    for (std::size_t i = 0; i + 1 < div.records.size(); ++i)
        if (std::abs(div.records[i + 1].x[0]) <= std::abs(div.records[i].x[0]))
            monotone = false;
    rep["divergence"] = {{"eta", 4.0 / L0},
                         {"monotone_increase", monotone},
                         {"final_abs_x", std::abs(div.records.back().x[0])}};

    std::cout << rep.dump(2) << "\n";
    if (out_dir) write_text(fs::path(*out_dir) / "lowerbound.json", rep.dump(2) + "\n");
    return 0;
}

int cmd_verify(std::int64_t samples, std::uint64_t seed, const std::optional<std::string>& out_dir) {
    const auto entries = catalog_defaults();
    json results = json::array();
    bool all_pass = true;
    std::ostringstream table;
    table << "objective            samples  violations  worst_ratio  status\n";
    for (const auto& obj : entries) {
        const auto rep = certify_profile(obj, SamplerSpec{samples, seed});
        all_pass = all_pass && rep.pass;
        char line[160];
        std::snprintf(line, sizeof(line), "%-20s %7lld  %10lld  %11.6f  %s\n", obj.id.c_str(),
                      static_cast<long long>(rep.samples),
                      static_cast<long long>(rep.violation_count), rep.worst_ratio,
                      rep.pass ? "PASS" : "FAIL");
        table << line;
        results.push_back({{"objective", obj.id},
                           {"samples", rep.samples},
                           {"violations", rep.violation_count},
                           {"worst_ratio", rep.worst_ratio},
                           {"pass", rep.pass}});
    }
    std::cout << table.str();
    if (out_dir)
        write_text(fs::path(*out_dir) / "verify.json",
                   json{{"results", results}, {"all_pass", all_pass}}.dump(2) + "\n");
    return all_pass ? 0 : 3;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"constant-stepsize first-order optimization under generalized smoothness"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed_flag;
    std::optional<std::int64_t> stride_flag;
    std::optional<std::string> out_flag;
    int jobs = 1;

    auto add_common = [&](CLI::App* sub, bool need_config) {
        auto* copt = sub->add_option("--config", config_path, "JSON config file");
        if (need_config) copt->required();
        sub->add_option("--seed", seed_flag, "seed override");
        sub->add_option("--stride", stride_flag, "record stride override");
        sub->add_option("--out", out_flag, "output directory");
    };

    auto* tune = app.add_subcommand("tune", "compute theorem parameters for a config");
    add_common(tune, true);
    auto* run = app.add_subcommand("run", "run one experiment and check its certificates");
    add_common(run, true);
    auto* sweep = app.add_subcommand("sweep", "run a grid of experiments");
    add_common(sweep, true);
    sweep->add_option("--jobs", jobs, "concurrent cells")->check(CLI::PositiveNumber);

    double lb_L0 = 8.0, lb_L2 = 1.0, lb_G0 = 4.0, lb_Delta0 = 24.0;
    std::optional<double> lb_eta;
    std::int64_t lb_steps = 1000;
    auto* lower = app.add_subcommand("lowerbound", "reproduce the oscillate-or-crawl instance");
    lower->add_option("--L0", lb_L0, "smoothness offset")->required();
    lower->add_option("--L2", lb_L2, "quadratic smoothness coefficient")->required();
    lower->add_option("--G0", lb_G0, "gradient budget at the start")->required();
    lower->add_option("--Delta0", lb_Delta0, "value budget at the start")->required();
    lower->add_option("--eta", lb_eta, "stepsize to probe");
    lower->add_option("--steps", lb_steps, "orbit steps")->check(CLI::PositiveNumber);
    lower->add_option("--out", out_flag, "output directory");

    std::int64_t vf_samples = 10000;
    std::uint64_t vf_seed = 12345;
    auto* verify = app.add_subcommand("verify", "certify every catalog profile");
    verify->add_option("--samples", vf_samples, "samples per objective")
        ->check(CLI::PositiveNumber);
    verify->add_option("--seed", vf_seed, "sampling seed");
    verify->add_option("--out", out_flag, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    auto apply_overrides = [&](RunConfig& cfg) {
        if (seed_flag) cfg.seed = *seed_flag;
        if (stride_flag) {
            if (*stride_flag < 1) throw ConfigError("\"stride\" must be at least 1");
            cfg.stride = *stride_flag;
        }
        if (out_flag) cfg.out = *out_flag;
    };

    if (tune->parsed()) {
        RunConfig cfg = RunConfig::from_json(load_json_file(config_path));
        apply_overrides(cfg);
        return cmd_tune(cfg);
    }
    if (run->parsed()) {
        RunConfig cfg = RunConfig::from_json(load_json_file(config_path));
        apply_overrides(cfg);
        return cmd_run(cfg);
    }
    if (sweep->parsed()) {
        SweepConfig sc = SweepConfig::from_json(load_json_file(config_path));
        apply_overrides(sc.base);
        return cmd_sweep(sc, jobs, out_flag ? out_flag : sc.base.out);
    }
    if (lower->parsed()) return cmd_lowerbound(lb_L0, lb_L2, lb_G0, lb_Delta0, lb_eta, lb_steps, out_flag);
    if (verify->parsed()) return cmd_verify(vf_samples, vf_seed, out_flag);
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const NoFiniteGError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const TuningError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const MethodMismatchError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ProfileError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
