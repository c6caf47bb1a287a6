#include "etc/sim/scenario.hpp"

#include "etc/error.hpp"
#include "etc/num/eigen.hpp"
#include "etc/num/lyapunov.hpp"

#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace etc::sim {

using num::Mat;

num::Mat Scenario::applied_gain() const {
    Mat k = K;
    if (negative_feedback) k *= -1.0;
    return k;
}

namespace {

void invalid(const std::string& msg) { fail(ErrorCode::ValidationError, msg); }

void check_config(const SimConfig& c, const char* which) {
    if (!(c.t_end > 0.0) || !std::isfinite(c.t_end)) invalid(fmt::format("{}: t_end must be positive", which));
    if (!(c.dt > 0.0) || !std::isfinite(c.dt)) invalid(fmt::format("{}: dt must be positive", which));
    if (c.dt > c.t_end) invalid(fmt::format("{}: dt exceeds t_end", which));
    if (!(c.event_tol > 0.0)) invalid(fmt::format("{}: event_tol must be positive", which));
    if (c.event_tol >= c.dt) invalid(fmt::format("{}: event_tol must be smaller than dt", which));
    if (c.max_events_per_node == 0) invalid(fmt::format("{}: max_events_per_node must be positive", which));
}

}  // namespace

void validate_scenario(const Scenario& s) {
    const std::size_t n = s.model.A.rows();
    const std::size_t m = s.model.B.cols();
    const std::size_t p = s.model.C.rows();
    if (s.K.rows() != m || s.K.cols() != n) {
        invalid(fmt::format("K is {}x{}, expected {}x{}", s.K.rows(), s.K.cols(), m, n));
    }
    if (s.L.rows() != n || s.L.cols() != p) {
        invalid(fmt::format("L is {}x{}, expected {}x{}", s.L.rows(), s.L.cols(), n, p));
    }
    if (s.x0.size() != n) invalid(fmt::format("x0 has {} entries, expected {}", s.x0.size(), n));
    if (s.xhat0.size() != n) invalid(fmt::format("xhat0 has {} entries, expected {}", s.xhat0.size(), n));
    const std::size_t nodes = s.model.input_widths.size() + s.model.output_widths.size();
    if (s.triggers.size() != nodes) {
        invalid(fmt::format("{} trigger entries for {} nodes", s.triggers.size(), nodes));
    }
    check_config(s.sim, "sim");
    if (s.validate) check_config(*s.validate, "validate");
    if (!(s.compare_delta > 0.0)) invalid("compare delta must be positive");
    if (!(s.lyapunov.eta_c > 0.0) || !(s.lyapunov.eta_o > 0.0)) invalid("eta must be positive");
    double prev = 0.0;
    for (const auto& d : s.disturbances) {
        if (!(d.time > 0.0) || !(d.time < s.sim.t_end)) {
            invalid(fmt::format("disturbance at t={} outside (0, t_end)", d.time));
        }
        if (d.time <= prev) invalid("disturbance times must be strictly increasing");
        if (d.state_jump.size() != n) {
            invalid(fmt::format("disturbance jump has {} entries, expected {}", d.state_jump.size(), n));
        }
        prev = d.time;
    }
    for (const auto& t : s.triggers) {
        if (const auto* p = std::get_if<trig::TriggerPolicy>(&t)) {
            trig::validate_policy(*p);
        } else if (const auto* r = std::get_if<RelativeFactor>(&t)) {
            if (!(r->factor > 0.0)) invalid("relative factor must be positive");
            if (!(r->dwell >= 0.0)) invalid("dwell must be non-negative");
        }
    }
}

ClosedLoop build_closed_loop(const Scenario& s) {
    validate_scenario(s);
    auto plant = models::build_plant(s.model);
    models::LinearController ctrl(s.applied_gain(), plant.inputs());
    models::LuenbergerObserver obs(s.L, plant);
    return ClosedLoop{std::move(plant), std::move(ctrl), std::move(obs)};
}

trig::LyapunovPair lyapunov_pair(const Scenario& s, const ClosedLoop& loop) {
    const auto& plant = loop.plant;
    const std::size_t n = plant.state_dim();
    Mat mc = plant.A() + plant.B() * loop.controller.gain();
    Mat mo = plant.A() - loop.observer.gain() * plant.C();
    Mat qc = Mat::identity(n);
    qc *= s.lyapunov.eta_c;
    Mat qo = Mat::identity(n);
    qo *= s.lyapunov.eta_o;
    if (!num::is_hurwitz(mc)) fail(ErrorCode::NotHurwitz, "A + BK is not Hurwitz");
    if (!num::is_hurwitz(mo)) fail(ErrorCode::NotHurwitz, "A - LC is not Hurwitz");
    return {num::solve_lyapunov(mc, qc), s.lyapunov.eta_c, num::solve_lyapunov(mo, qo), s.lyapunov.eta_o};
}

trig::IssCertificate scenario_certificate(const Scenario& s, const ClosedLoop& loop) {
    return trig::build_certificate(loop.plant, loop.controller, loop.observer, lyapunov_pair(s, loop),
                                   s.lyapunov.a3_term);
}

bool needs_certificate(const Scenario& s) {
    for (const auto& t : s.triggers) {
        if (std::holds_alternative<AutoTrigger>(t)) return true;
    }
    return false;
}

std::vector<trig::TriggerPolicy> resolve_policies(const Scenario& s, const ClosedLoop& loop,
                                                  const trig::IssCertificate* cert) {
    const std::size_t q = loop.actuator_count();
    std::vector<trig::TriggerPolicy> out;
    for (std::size_t k = 0; k < s.triggers.size(); ++k) {
        const bool actuator = k < q;
        const auto& spec = s.triggers[k];
        if (const auto* p = std::get_if<trig::TriggerPolicy>(&spec)) {
            out.push_back(*p);
        } else if (std::holds_alternative<AutoTrigger>(spec)) {
            if (cert == nullptr) fail(ErrorCode::ValidationError, "auto triggers need a certificate");
            out.push_back(trig::certified_node_policies(*cert).at(k));
        } else {
            const auto& r = std::get<RelativeFactor>(spec);
            if (actuator) {
                double lg = loop.controller.node_lipschitz(k);
                out.emplace_back(trig::NodeRelativeActuator{r.factor * lg, lg, r.dwell});
            } else {
                double lh = loop.observer.output_lipschitz();
                out.emplace_back(trig::NodeRelativeSensor{2.0 * r.factor * lh, lh, r.dwell});
            }
        }
        const auto& pol = out.back();
        if (actuator && std::holds_alternative<trig::NodeRelativeSensor>(pol)) {
            fail(ErrorCode::ValidationError, fmt::format("node {} is an actuator but has a sensor policy", k + 1));
        }
        if (!actuator && std::holds_alternative<trig::NodeRelativeActuator>(pol)) {
            fail(ErrorCode::ValidationError, fmt::format("node {} is a sensor but has an actuator policy", k + 1));
        }
    }
    return out;
}

void check_explicit_budget(const Scenario& s, const trig::IssCertificate& cert) {
    double total = 0.0;
    bool any = false;
    for (const auto& t : s.triggers) {
        const auto* p = std::get_if<trig::TriggerPolicy>(&t);
        if (p == nullptr) continue;
        if (const auto* a = std::get_if<trig::NodeRelativeActuator>(p)) {
            total += a->kappa;
            any = true;
        } else if (const auto* b = std::get_if<trig::NodeRelativeSensor>(p)) {
            total += b->kappa;
            any = true;
        } else if (const auto* c = std::get_if<trig::IdealNode>(p)) {
            total += c->kappa;
            any = true;
        }
    }
    if (any && total > cert.sigma_prime * (1.0 + 1e-12)) {
        fail(ErrorCode::ValidationError,
             fmt::format("explicit kappa sum {:.6g} exceeds the certified budget sigma' = {:.6g}", total,
                         cert.sigma_prime));
    }
}

std::string node_label(const ClosedLoop& loop, std::size_t node) {
    const std::size_t q = loop.actuator_count();
    return node < q ? fmt::format("u{}", node + 1) : fmt::format("y{}", node - q + 1);
}

}  // namespace etc::sim
