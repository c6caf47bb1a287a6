#include "etc/io/cli.hpp"

#include "etc/analysis/analysis.hpp"
#include "etc/error.hpp"
#include "etc/io/scenario_file.hpp"
#include "etc/io/svg.hpp"
#include "etc/io/writers.hpp"
#include "etc/models/plant.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace etc::io {

namespace fs = std::filesystem;

namespace {

constexpr double kSettleThreshold = 0.05;
constexpr std::size_t kRhoSamples = 10'000;

struct Options {
    std::string scenario;
    std::optional<double> dt;
    std::string out_dir;
    std::uint64_t seed = 0;
};

fs::path output_dir(const Options& o) {
    std::string dir = o.out_dir;
    if (dir.empty()) {
        const char* env = std::getenv("ETC_SIM_OUT");
        if (env != nullptr && *env != '\0') dir = env;
    }
    if (dir.empty()) dir = ".";
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(ErrorCode::IoError, fmt::format("cannot create output directory '{}'", dir));
    return dir;
}

// report.txt -> report-<tag>.txt
std::string tagged(const std::string& name, const std::string& tag) {
    fs::path p(name);
    return (p.parent_path() / (p.stem().string() + "-" + tag + p.extension().string())).string();
}

sim::Scenario load(const Options& o) {
    sim::Scenario s = load_scenario(o.scenario);
    if (o.dt) {
        s.sim.dt = *o.dt;
        sim::validate_scenario(s);
    }
    if (s.name.empty()) s.name = fs::path(o.scenario).stem().string();
    return s;
}

std::optional<trig::IssCertificate> try_certificate(const sim::Scenario& s, const sim::ClosedLoop& loop,
                                                    std::string& why) {
    try {
        return sim::scenario_certificate(s, loop);
    } catch (const Error& e) {
        why = e.what();
        return std::nullopt;
    }
}

void write_out(const fs::path& dir, const std::string& name, const std::string& content, std::ostream& out) {
    const fs::path p = dir / name;
    atomic_write(p.string(), content);
    fmt::print(out, "wrote {}\n", p.string());
}

int cmd_run(const Options& o, std::ostream& out) {
    const sim::Scenario s = load(o);
    const fs::path dir = output_dir(o);
    const auto loop = sim::build_closed_loop(s);
    std::string why;
    auto cert = try_certificate(s, loop, why);
    const auto policies = sim::resolve_policies(s, loop, cert ? &*cert : nullptr);
    const auto result = sim::simulate(loop, policies, sim::run_setup(s));

    RunReport rep{s.name, cert, why, analysis::trigger_stats(result),
                  analysis::convergence_report(result, kSettleThreshold)};
    write_out(dir, s.outputs.csv, write_csv(result), out);
    write_out(dir, s.outputs.svg, render_svg(result, s.name), out);
    write_out(dir, s.outputs.report, write_report(rep), out);
    const auto& last = result.trajectory.back();
    fmt::print(out, "t_end: {:.6g}  norm_x: {:.6g}  norm_z: {:.6g}\n", last.t, last.norm_x, last.norm_z);
    for (const auto& n : rep.stats.nodes) fmt::print(out, "{}: {} transmissions\n", n.label, n.count);
    return 0;
}

int cmd_compare(const Options& o, std::ostream& out) {
    const sim::Scenario s = load(o);
    const fs::path dir = output_dir(o);
    const auto ev = sim::simulate(s);
    const auto per = sim::simulate_periodic_baseline(s, s.compare_delta);
    const auto ev_stats = analysis::trigger_stats(ev);
    const auto per_stats = analysis::trigger_stats(per);
    write_out(dir, tagged(s.outputs.report, "compare"),
              write_compare_report(s.name, ev_stats, per_stats, s.compare_delta,
                                   analysis::convergence_report(ev, kSettleThreshold),
                                   analysis::convergence_report(per, kSettleThreshold)),
              out);
    for (std::size_t k = 0; k < ev_stats.nodes.size(); ++k) {
        fmt::print(out, "{}: event-triggered {} vs periodic {}\n", ev_stats.nodes[k].label, ev_stats.nodes[k].count,
                   per_stats.nodes[k].count);
    }
    return 0;
}

std::string rho_line(const sim::ClosedLoop& loop, std::uint64_t seed) {
    if (!loop.plant.has_phi()) return "phi_lipschitz_estimate: 0\n";
    const double est = models::phi_lipschitz_check(loop.plant, kRhoSamples, 10.0, seed);
    return fmt::format("phi_lipschitz_estimate: {:.12g}\nphi_lipschitz_bound: {:.12g}\n", est, loop.plant.rho());
}

int cmd_certify(const Options& o, std::ostream& out) {
    const sim::Scenario s = load(o);
    const fs::path dir = output_dir(o);
    const auto loop = sim::build_closed_loop(s);
    const auto cert = sim::scenario_certificate(s, loop);
    std::string doc = fmt::format("scenario: {}\n", s.name) + certificate_lines(cert) + rho_line(loop, o.seed);
    for (std::size_t i = 0; i < cert.actuator_count; ++i) {
        doc += fmt::format("relative_threshold.u{}: {:.17g}\n", i + 1, cert.kappa[i] / cert.L_gamma[i]);
    }
    write_out(dir, tagged(s.outputs.report, "certificate"), doc, out);
    out << doc;
    return 0;
}

int cmd_validate(const Options& o, std::ostream& out) {
    const sim::Scenario s = load(o);
    const fs::path dir = output_dir(o);
    const auto loop = sim::build_closed_loop(s);
    const auto cert = sim::scenario_certificate(s, loop);
    const auto rep = sim::run_ideal_validation(s, cert);
    const auto lyap = analysis::check_lyapunov_decrease(rep.result, sim::lyapunov_pair(s, loop), cert);

    const auto& cfg = s.validate_config();
    std::string doc = fmt::format("scenario: {}\n", s.name) + certificate_lines(cert);
    doc += fmt::format("validate_t_end: {:.12g}\nvalidate_dt: {:.12g}\nvalidate_event_tol: {:.12g}\n", cfg.t_end,
                       cfg.dt, cfg.event_tol);
    doc += trigger_table("ideal", analysis::trigger_stats(rep.result));
    doc += fmt::format("budget_samples: {}\nbudget_violations: {}\nbudget_max_ratio: {:.12g}\nbudget_slack_factor: {:.12g}\n",
                       rep.samples, rep.violations.size(), rep.max_ratio, rep.slack_factor);
    for (std::size_t i = 0; i < rep.violations.size() && i < 20; ++i) {
        const auto& v = rep.violations[i];
        doc += fmt::format("budget_violation: t={:.17g} norm_E={:.12g} bound={:.12g}\n", v.t, v.norm_E, v.bound);
    }
    doc += fmt::format("lyapunov_checked: {}\nlyapunov_excluded: {}\nlyapunov_violations: {}\n", lyap.checked,
                       lyap.excluded_times.size(), lyap.violations.size());
    doc += fmt::format("lyapunov_worst_excess: {:.12g}\nlyapunov_max_slack: {:.12g}\nlyapunov_verdict: {}\n",
                       lyap.worst_excess, lyap.max_slack, analysis::to_string(lyap.verdict()));
    for (std::size_t i = 0; i < lyap.violations.size() && i < 20; ++i) {
        const auto& v = lyap.violations[i];
        doc += fmt::format("lyapunov_violation: t={:.17g} dVdt={:.12g} bound={:.12g} slack={:.12g}\n", v.t, v.dVdt,
                           v.bound, v.slack);
    }
    write_out(dir, tagged(s.outputs.report, "validate"), doc, out);
    const bool ok = rep.violations.empty() && lyap.violations.empty();
    fmt::print(out, "budget violations: {}  lyapunov violations: {}  -> {}\n", rep.violations.size(),
               lyap.violations.size(), ok ? "pass" : "FAIL");
    return ok ? 0 : 1;
}

int exit_code(ErrorCode c) {
    switch (c) {
        case ErrorCode::NonFinite:
        case ErrorCode::NonFiniteDerivative:
        case ErrorCode::ZenoSuspect:
            return 2;
        default:
            return 1;
    }
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Event-triggered observer-based control simulator"};
    app.require_subcommand(1);
    Options o;
    auto add_common = [&o](CLI::App* sub) {
        sub->add_option("scenario", o.scenario, "Scenario file or builtin name (flexible-link-paper)")->required();
        sub->add_option("--dt", o.dt, "Override the integration step [s]")->check(CLI::PositiveNumber);
        sub->add_option("--out", o.out_dir, "Output directory (default: $ETC_SIM_OUT or .)");
        sub->add_option("--seed", o.seed, "Seed for sampled Lipschitz estimates");
    };
    auto* run = app.add_subcommand("run", "Simulate and write CSV, SVG and report");
    auto* compare = app.add_subcommand("compare", "Event-triggered run against the periodic baseline");
    auto* certify = app.add_subcommand("certify", "Compute the trigger budget certificate");
    auto* validate = app.add_subcommand("validate", "Ideal-policy budget and Lyapunov decrease check");
    for (auto* sub : {run, compare, certify, validate}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (run->parsed()) return cmd_run(o, out);
        if (compare->parsed()) return cmd_compare(o, out);
        if (certify->parsed()) return cmd_certify(o, out);
        return cmd_validate(o, out);
    } catch (const Error& e) {
        fmt::print(err, "error: {}\n", e.what());
        return exit_code(e.code());
    } catch (const std::exception& e) {
        fmt::print(err, "error: {}\n", e.what());
        return 1;
    }
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("etc_sim");
    for (const auto& a : args) argv.push_back(a.c_str());
    return cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace etc::io
