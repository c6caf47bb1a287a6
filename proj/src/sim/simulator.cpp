#include "etc/sim/simulator.hpp"

#include "etc/error.hpp"
#include "etc/num/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace etc::sim {

using num::Vec;
using trig::NodeKind;
using trig::NodeRegister;
using trig::TriggerPolicy;

RunSetup run_setup(const Scenario& s) {
    return RunSetup{s.x0, s.xhat0, s.sim, s.disturbances};
}

namespace {

constexpr double kNever = std::numeric_limits<double>::infinity();

class Engine {
public:
    Engine(const ClosedLoop& loop, const std::vector<TriggerPolicy>& policies, const RunSetup& setup)
        : loop_(loop), plant_(loop.plant), setup_(setup), n_(plant_.state_dim()), q_(loop.actuator_count()) {
        if (policies.size() != loop.node_count()) {
            fail(ErrorCode::ValidationError,
                 fmt::format("{} policies for {} nodes", policies.size(), loop.node_count()));
        }
        if (setup.x0.size() != n_ || setup.xhat0.size() != n_) {
            fail(ErrorCode::DimensionMismatch, "initial state dimension does not match the plant");
        }
        const auto& cfg = setup.sim;
        if (!(cfg.dt > 0.0) || !(cfg.t_end > 0.0) || !(cfg.event_tol > 0.0)) {
            fail(ErrorCode::ValidationError, "t_end, dt and event_tol must be positive");
        }
        dt_ = cfg.dt;
        const double steps = cfg.t_end / dt_;
        const double rounded = std::round(steps);
        if (std::abs(rounded * dt_ - cfg.t_end) <= 1e-9 * dt_) {
            grid_count_ = static_cast<std::size_t>(rounded);
            t_final_ = grid_time(grid_count_);
        } else {
            grid_count_ = static_cast<std::size_t>(std::floor(steps));
            t_final_ = cfg.t_end;
        }

        s_ = num::concat(setup.x0, setup.xhat0);
        ubar_ = Vec(plant_.input_dim());
        ybar_ = Vec(plant_.output_dim());
        periodic_next_.assign(policies.size(), kNever);
        periodic_index_.assign(policies.size(), 0);

        res_.state_dim = n_;
        res_.input_dim = plant_.input_dim();
        res_.output_dim = plant_.output_dim();
        res_.t_end = t_final_;
        res_.dt = dt_;
        res_.event_tol = cfg.event_tol;
        for (std::size_t k = 0; k < policies.size(); ++k) {
            const NodeKind kind = k < q_ ? NodeKind::Actuator : NodeKind::Sensor;
            regs_.emplace_back(kind, policies[k], node_value(k, s_), 0.0);
            res_.node_labels.push_back(node_label(loop, k));
            res_.node_kinds.push_back(kind);
            res_.policy_names.push_back(trig::policy_name(policies[k]));
            res_.node_dwell.push_back(trig::dwell_time(policies[k]));
            store_held(k);
            log_trigger(k, 0.0);
            schedule_periodic(k);
        }
        for (const auto& d : setup.disturbances) {
            if (d.state_jump.size() != n_) fail(ErrorCode::DimensionMismatch, "disturbance jump dimension");
            disturbances_.push_back({snap(d.time), d.state_jump});
        }
        std::sort(disturbances_.begin(), disturbances_.end(),
                  [](const auto& a, const auto& b) { return a.time < b.time; });
        log_row(0.0);
    }

    SimulationResult run() {
        double t = 0.0;
        std::size_t next_grid = 1;
        std::size_t next_dist = 0;
        while (next_dist < disturbances_.size() && disturbances_[next_dist].time <= 0.0) ++next_dist;

        while (t < t_final_) {
            const double t_grid = next_grid <= grid_count_ ? grid_time(next_grid) : t_final_;
            double t_next = t_grid;
            if (next_dist < disturbances_.size()) t_next = std::min(t_next, disturbances_[next_dist].time);
            for (double tp : periodic_next_) t_next = std::min(t_next, tp);

            advance(t, t_next);
            t = t_next;

            bool jumped = false;
            while (next_dist < disturbances_.size() && disturbances_[next_dist].time == t) {
                Vec x = s_.slice(0, n_);
                x += disturbances_[next_dist].jump;
                s_.assign_slice(0, x);
                res_.disturbance_times.push_back(t);
                ++next_dist;
                jumped = true;
            }
            for (std::size_t k = 0; k < regs_.size(); ++k) {
                if (periodic_next_[k] == t) {
                    fire(k, t);
                    schedule_periodic(k);
                }
            }
            settle(t);
            if (jumped || t == t_grid) log_row(t);
            if (t == t_grid) ++next_grid;
        }
        for (const auto& r : regs_) res_.transmissions.push_back(r.trigger_count());
        return std::move(res_);
    }

private:
    struct Jump {
        double time;
        Vec jump;
    };

    double grid_time(std::size_t i) const { return static_cast<double>(i) * dt_; }

    // Times within 1e-9 dt of a grid point are moved onto it, so that
    // schedules and the output grid agree exactly.
    double snap(double t) const {
        const double i = std::round(t / dt_);
        const double g = i * dt_;
        if (std::abs(g - t) <= 1e-9 * dt_) return g;
        return t;
    }

    void schedule_periodic(std::size_t k) {
        const auto* p = std::get_if<trig::Periodic>(&regs_[k].policy());
        if (p == nullptr) return;
        ++periodic_index_[k];
        double next = snap(static_cast<double>(periodic_index_[k]) * p->delta);
        if (next > t_final_) next = kNever;
        periodic_next_[k] = next;
    }

    Vec field(const Vec& s) const {
        Vec x = s.slice(0, n_);
        Vec xhat = s.slice(n_, n_);
        return num::concat(models::plant_dynamics(plant_, x, ubar_),
                           models::observer_dynamics(plant_, loop_.observer, xhat, ubar_, ybar_));
    }

    Vec step(double t0, const Vec& s0, double t1) const {
        if (!(t1 > t0)) return s0;
        Vec out = num::rk4_step([this](double, const Vec& s) { return field(s); }, t0, s0, t1 - t0);
        if (!out.all_finite()) fail(ErrorCode::NonFinite, fmt::format("state diverged at t={}", t1));
        return out;
    }

    Vec node_value(std::size_t k, const Vec& s) const {
        if (k < q_) return models::controller_eval_node(loop_.controller, k, s.slice(n_, n_));
        return plant_.node_output(k - q_, s.slice(0, n_));
    }

    bool predicate(std::size_t k, double t, const Vec& s) const {
        const auto& reg = regs_[k];
        const auto& pol = reg.policy();
        if (trig::is_time_driven(pol)) return false;
        Vec v = node_value(k, s);
        if (std::holds_alternative<trig::NodeRelativeActuator>(pol)) {
            return trig::should_trigger_actuator(reg, t, v, v);
        }
        if (std::holds_alternative<trig::NodeRelativeSensor>(pol)) return trig::should_trigger_sensor(reg, t, v);
        if (std::holds_alternative<trig::IdealNode>(pol)) {
            Vec x = s.slice(0, n_);
            Vec xhat = s.slice(n_, n_);
            return trig::should_trigger_ideal(reg, t, v, num::norm_two(num::concat(xhat, x - xhat)));
        }
        return trig::should_trigger_generic(reg, t, v, num::norm_one(v));
    }

    void store_held(std::size_t k) {
        const Vec& h = regs_[k].held_value();
        if (k < q_) {
            ubar_.assign_slice(plant_.inputs().span(k).offset, h);
        } else {
            ybar_.assign_slice(plant_.outputs().span(k - q_).offset, h);
        }
    }

    void log_trigger(std::size_t k, double t) {
        res_.trigger_log.push_back({t, k, regs_[k].kind(), regs_[k].held_value()});
    }

    void fire(std::size_t k, double t) {
        regs_[k].accept(t, node_value(k, s_));
        store_held(k);
        log_trigger(k, t);
        if (regs_[k].trigger_count() > setup_.sim.max_events_per_node) {
            fail(ErrorCode::ZenoSuspect, fmt::format("node {} exceeded {} triggers by t={}", res_.node_labels[k],
                                                     setup_.sim.max_events_per_node, t));
        }
    }

    // Fire every node whose predicate already holds at t (node order).
    void settle(double t) {
        for (std::size_t k = 0; k < regs_.size(); ++k) {
            if (predicate(k, t, s_)) fire(k, t);
        }
    }

    void advance(double t0, double t1) {
        const double tol = setup_.sim.event_tol;
        while (t0 < t1) {
            Vec s1 = step(t0, s_, t1);
            std::size_t best_node = regs_.size();
            double best_t = kNever;
            for (std::size_t k = 0; k < regs_.size(); ++k) {
                if (!predicate(k, t1, s1)) continue;
                auto g = [&](double tt) {
                    if (tt >= t1) return predicate(k, t1, s1) ? 1.0 : -1.0;
                    return predicate(k, tt, step(t0, s_, tt)) ? 1.0 : -1.0;
                };
                // If the dwell expires inside the step with the threshold already
                // exceeded, the event is exactly at the expiry. Bisecting across
                // it would add up to one tolerance of delay per dwell-bound event.
                double lo = t0;
                const double expiry = regs_[k].last_trigger_time() + trig::dwell_time(regs_[k].policy());
                if (expiry > t0 && expiry < t1) {
                    if (g(expiry) > 0.0) {
                        if (expiry < best_t) {
                            best_t = expiry;
                            best_node = k;
                        }
                        continue;
                    }
                    lo = expiry;
                }
                const double te = num::locate_event(g, lo, t1, tol);
                if (te < best_t) {
                    best_t = te;
                    best_node = k;
                }
            }
            if (best_node == regs_.size()) {
                s_ = std::move(s1);
                return;
            }
            s_ = best_t >= t1 ? std::move(s1) : step(t0, s_, best_t);
            t0 = best_t;
            fire(best_node, t0);
            settle(t0);
            log_row(t0);
        }
    }

    void log_row(double t) {
        TrajectoryRow row;
        row.t = t;
        row.x = s_.slice(0, n_);
        row.xhat = s_.slice(n_, n_);
        row.ubar = ubar_;
        row.ybar = ybar_;
        row.e = num::concat(loop_.controller.gain() * row.xhat - ubar_, plant_.C() * row.x - ybar_);
        row.norm_x = num::norm_two(row.x);
        row.norm_z = num::norm_two(row.x - row.xhat);
        if (!res_.trajectory.empty() && res_.trajectory.back().t == t) {
            res_.trajectory.back() = std::move(row);
        } else {
            res_.trajectory.push_back(std::move(row));
        }
    }

    const ClosedLoop& loop_;
    const models::LipschitzAffinePlant& plant_;
    const RunSetup& setup_;
    std::size_t n_;
    std::size_t q_;
    double dt_ = 0.0;
    std::size_t grid_count_ = 0;
    double t_final_ = 0.0;

    Vec s_;
    Vec ubar_, ybar_;
    std::vector<NodeRegister> regs_;
    std::vector<double> periodic_next_;
    std::vector<std::size_t> periodic_index_;
    std::vector<Jump> disturbances_;
    SimulationResult res_;
};

}  // namespace

SimulationResult simulate(const ClosedLoop& loop, const std::vector<TriggerPolicy>& policies, const RunSetup& setup) {
    Engine engine(loop, policies, setup);
    return engine.run();
}

SimulationResult simulate(const Scenario& s) {
    ClosedLoop loop = build_closed_loop(s);
    std::optional<trig::IssCertificate> cert;
    if (needs_certificate(s)) cert = scenario_certificate(s, loop);
    return simulate(loop, resolve_policies(s, loop, cert ? &*cert : nullptr), run_setup(s));
}

SimulationResult simulate_periodic_baseline(const Scenario& s, double delta) {
    if (!(delta > 0.0)) fail(ErrorCode::NonPositiveConstant, "periodic delta must be positive");
    ClosedLoop loop = build_closed_loop(s);
    std::vector<TriggerPolicy> policies(loop.node_count(), trig::Periodic{delta});
    return simulate(loop, policies, run_setup(s));
}

IdealValidationReport run_ideal_validation(const Scenario& s, const trig::IssCertificate& cert) {
    trig::validate_certificate(cert);
    ClosedLoop loop = build_closed_loop(s);
    if (cert.kappa.size() != loop.node_count()) {
        fail(ErrorCode::DimensionMismatch, "certificate node count does not match the scenario");
    }
    RunSetup setup = run_setup(s);
    setup.sim = s.validate_config();
    std::erase_if(setup.disturbances, [&](const DisturbanceEvent& d) { return d.time >= setup.sim.t_end; });

    IdealValidationReport rep;
    rep.result = simulate(loop, trig::ideal_node_policies(cert), setup);
    rep.sigma_prime = cert.sigma_prime;
    rep.slack_factor = 2.0 * cert.L_G * setup.sim.event_tol;
    for (const auto& row : rep.result.trajectory) {
        const double nX = num::norm_two(num::concat(row.xhat, row.x - row.xhat));
        const double nE = num::norm_two(row.e);
        const double bound = cert.sigma_prime * nX + rep.slack_factor * nX;
        ++rep.samples;
        if (nX > 0.0) rep.max_ratio = std::max(rep.max_ratio, nE / nX);
        if (nE > bound) rep.violations.push_back({row.t, nE, bound});
    }
    return rep;
}

}  // namespace etc::sim
