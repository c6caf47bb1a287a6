// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include "etc/analysis/analysis.hpp"
#include "etc/error.hpp"
#include "etc/io/builtin.hpp"
#include "etc/io/cli.hpp"
#include "etc/io/scenario_file.hpp"
#include "etc/num/eigen.hpp"
#include "etc/num/lyapunov.hpp"
#include "etc/num/ode.hpp"
#include "etc/sim/scenario.hpp"
#include "etc/sim/simulator.hpp"
#include "etc/triggering/certificate.hpp"
#include "etc/triggering/policy.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace etc;
using num::Mat;
using num::Vec;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

// Results shared between criteria so the expensive runs happen once.
struct Runs {
    sim::Scenario scenario;
    std::optional<sim::ClosedLoop> loop;
    sim::SimulationResult practical;
    double practical_seconds = 0.0;
    sim::SimulationResult periodic;
    std::optional<trig::IssCertificate> cert;
    std::optional<sim::IdealValidationReport> ideal;
    std::string ideal_error;
};

Runs& runs() {
    static Runs r = [] {
        Runs out;
        out.scenario = *io::builtin_scenario("flexible-link-paper");
        out.loop.emplace(sim::build_closed_loop(out.scenario));
        const auto t0 = std::chrono::steady_clock::now();
        out.practical = sim::simulate(out.scenario);
        out.practical_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.periodic = sim::simulate_periodic_baseline(out.scenario, 0.05);
        try {
            out.cert = sim::scenario_certificate(out.scenario, *out.loop);
            out.ideal = sim::run_ideal_validation(out.scenario, *out.cert);
        } catch (const Error& e) {
            out.ideal_error = e.what();
        }
        return out;
    }();
    return r;
}

Outcome stabilization() {
    const auto& r = runs();
    const auto& last = r.practical.trajectory.back();
    const bool ok = last.t == 15.0 && last.norm_x <= 0.05 && last.norm_z <= 0.05 && r.practical_seconds < 10.0;
    return {ok, fmt::format("|x(15)|={:.3g} |z(15)|={:.3g} runtime={:.2f}s", last.norm_x, last.norm_z,
                            r.practical_seconds)};
}

Outcome communication() {
    const auto& r = runs();
    bool ok = true;
    std::string d;
    for (std::size_t k = 0; k < r.practical.node_kinds.size(); ++k) {
        if (r.practical.node_kinds[k] != trig::NodeKind::Sensor) continue;
        // the periodic baseline sends 15/0.05 = 300 samples after the one at t = 0
        const std::size_t et = r.practical.transmissions[k] - 1;
        const std::size_t pe = r.periodic.transmissions[k] - 1;
        ok = ok && pe == 300 && et < pe;
        d += fmt::format("{}{}: {} vs {}", d.empty() ? "" : "  ", r.practical.node_labels[k], et, pe);
    }
    return {ok, d};
}

bool eigs_match(const Mat& m, std::vector<std::complex<double>> expected) {
    auto got = num::eigenvalues(m);
    auto key = [](auto a, auto b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); };
    std::sort(got.begin(), got.end(), key);
    std::sort(expected.begin(), expected.end(), key);
    if (got.size() != expected.size()) return false;
    for (std::size_t i = 0; i < got.size(); ++i)
        if (std::abs(got[i] - expected[i]) > 1e-8 * std::abs(expected[i])) return false;
    return true;
}

Outcome gains() {
    const auto& p = runs().loop->plant;
    const auto s = runs().scenario;
    const Mat& A = p.A();
    const Mat& B = p.B();
    const Mat& C = p.C();
    const Mat Acl = A + B * s.applied_gain();
    const Mat Aobs = A - s.L * C;
    // numpy.linalg.eigvals, recorded before the build
    const bool ctrl = num::is_hurwitz(Acl) && eigs_match(Acl, {{-9.600638878867692, 0},
                                                               {-5.763598114088962, 1.385774345905013},
                                                               {-5.763598114088962, -1.385774345905013},
                                                               {-4.340084892954379, 0}});
    const bool obs = num::is_hurwitz(Aobs) && eigs_match(Aobs, {{-9.80047289668789, 0},
                                                               {-9.333400197243277, 0},
                                                               {-8.425047360825564, 0},
                                                               {-5.390979545243262, 0}});
    double worst_c = -1e300, worst_o = -1e300;
    for (auto e : num::eigenvalues(Acl)) worst_c = std::max(worst_c, e.real());
    for (auto e : num::eigenvalues(Aobs)) worst_o = std::max(worst_o, e.real());
    return {ctrl && obs, fmt::format("max Re eig(A+BK)={:.6f} max Re eig(A-LC)={:.6f} (u = -K x_hat)",
                                     worst_c, worst_o)};
}

Outcome tau_closed_form() {
    const double tau = trig::min_interevent_actuator(2, 0.5, 0.1, 1);
    const double oracle = 0.031770059934775;  // ln(1.1)/3, mpmath at 30 digits
    bool ok = std::abs(tau - oracle) <= 1e-7;

    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.01, 10.0);
    std::size_t bad = 0;
    for (int i = 0; i < 1000; ++i) {
        const double lg = u(rng), sp = u(rng), k = u(rng), l = u(rng), f = 1.0 + u(rng);
        const double base = trig::min_interevent_actuator(lg, sp, k, l);
        const bool mono = base > 0.0 && trig::min_interevent_actuator(lg, sp, k * f, l) > base &&
                          trig::min_interevent_actuator(lg * f, sp, k, l) < base &&
                          trig::min_interevent_actuator(lg, sp * f, k, l) < base &&
                          trig::min_interevent_actuator(lg, sp, k, l * f) < base &&
                          trig::min_interevent_sensor(lg, sp, k, l) == base;
        if (!mono) ++bad;
    }
    ok = ok && bad == 0;
    return {ok, fmt::format("tau={:.12f} oracle={:.12f} monotonicity failures={}/1000", tau, oracle, bad)};
}

std::size_t dwell_violations(const sim::SimulationResult& r) {
    std::vector<double> last(r.node_labels.size(), -1.0);
    std::size_t bad = 0;
    for (const auto& ev : r.trigger_log) {
        if (last[ev.node] >= 0.0 && ev.t - last[ev.node] < r.node_dwell[ev.node] - r.event_tol) ++bad;
        last[ev.node] = ev.t;
    }
    return bad;
}

Outcome dwell() {
    const auto& r = runs();
    const std::size_t a = dwell_violations(r.practical);
    const std::size_t b = dwell_violations(r.periodic);
    const std::size_t c = r.ideal ? dwell_violations(r.ideal->result) : 0;
    const bool ok = a + b + c == 0 && r.ideal.has_value();
    return {ok, fmt::format("violations practical={} periodic={} ideal={}", a, b,
                            r.ideal ? std::to_string(c) : "not run")};
}

Outcome budget() {
    const auto& r = runs();
    if (!r.ideal) return {false, r.ideal_error};
    const auto& v = *r.ideal;
    return {v.violations.empty() && v.samples > 0,
            fmt::format("samples={} violations={} max |E|/|X|={:.3g} sigma'={:.3g}", v.samples, v.violations.size(),
                        v.max_ratio, v.sigma_prime)};
}

Outcome lyapunov() {
    const auto& r = runs();
    if (!r.ideal) return {false, r.ideal_error};
    const auto lyap = sim::lyapunov_pair(r.scenario, *r.loop);
    const auto chk = analysis::check_lyapunov_decrease(r.ideal->result, lyap, *r.cert);
    return {chk.violations.empty() && chk.checked > 0,
            fmt::format("checked={} excluded={} violations={} worst excess={:.3g}", chk.checked,
                        chk.excluded_times.size(), chk.violations.size(), chk.worst_excess)};
}

Outcome numerics() {
    num::VectorField f = [](double, const Vec& x) { return -1.0 * x; };
    auto err = [&](int steps) {
        Vec x{1.0};
        const double h = 1.0 / steps;
        for (int i = 0; i < steps; ++i) x = num::rk4_step(f, i * h, x, h);
        return std::abs(x[0] - std::exp(-1.0));
    };
    const double ratio = err(10) / err(20);

    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    double worst = 0.0;
    std::size_t bad = 0;
    for (int trial = 0; trial < 100; ++trial) {
        Mat m(4, 4);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) m(i, j) = u(rng);
        Mat shift = Mat::identity(4);
        shift *= m.norm_inf() + 0.5;
        m -= shift;
        const Mat q = Mat::identity(4);
        const double res = num::lyapunov_residual(m, num::solve_lyapunov(m, q), q);
        worst = std::max(worst, res);
        if (res > 1e-10 * q.norm_inf()) ++bad;
    }

    const Mat p = num::solve_lyapunov(Mat{{0, 1}, {-2, -3}}, Mat::identity(2));
    const double d = std::max({std::abs(p(0, 0) - 1.25), std::abs(p(0, 1) - 0.25), std::abs(p(1, 0) - 0.25),
                               std::abs(p(1, 1) - 0.25)});
    const bool ok = ratio >= 12.0 && ratio <= 20.0 && bad == 0 && d <= 1e-10;
    return {ok, fmt::format("rk4 ratio={:.4f} worst residual={:.3g} 2x2 error={:.3g}", ratio, worst, d)};
}

Outcome conservatism() {
    const auto& r = runs();
    if (!r.cert) return {false, r.ideal_error};
    const double ratio = r.cert->kappa[0] / r.cert->L_gamma[0];
    return {ratio <= 0.02, fmt::format("kappa/L_gamma={:.6g} practical=0.2 (factor {:.3g})", ratio, 0.2 / ratio)};
}

Outcome determinism() {
    namespace fs = std::filesystem;
    const auto base = fs::temp_directory_path() / "etc_acceptance_det";
    fs::remove_all(base);
    std::vector<std::string> texts;
    bool ok = true;
    for (const char* sub : {"a", "b"}) {
        const auto dir = base / sub;
        fs::create_directories(dir);
        std::ostringstream out, err;
        ok = ok && io::cli_main({"run", "flexible-link-paper", "--out", dir.string()}, out, err) == 0;
        for (const char* f : {"trajectory.csv", "trajectory.svg", "report.txt"}) {
            std::error_code ec;
            texts.push_back(fs::exists(dir / f, ec) ? io::read_file((dir / f).string()) : std::string());
        }
    }
    std::size_t same = 0;
    for (std::size_t i = 0; i < 3; ++i)
        if (!texts[i].empty() && texts[i] == texts[i + 3]) ++same;
    fs::remove_all(base);
    return {ok && same == 3, fmt::format("{}/3 files byte-identical", same)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"benchmark stabilization", stabilization},
        {"communication advantage", communication},
        {"gain validity", gains},
        {"inter-event closed form", tau_closed_form},
        {"dwell-time enforcement", dwell},
        {"budget soundness", budget},
        {"lyapunov decrease", lyapunov},
        {"numerics", numerics},
        {"conservatism gap", conservatism},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        if (!o.pass) ++failed;
        fmt::print("criterion {:2}: {} {} | {}\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail);
    }
    fmt::print("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
