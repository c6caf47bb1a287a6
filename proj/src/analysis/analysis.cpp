#include "etc/analysis/analysis.hpp"

#include "etc/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace etc::analysis {

using num::Vec;

TriggerStats trigger_stats(const sim::SimulationResult& result) {
    if (result.trigger_log.empty()) fail(ErrorCode::EmptyLog, "trigger log is empty");
    const std::size_t nodes = result.node_labels.size();
    std::vector<std::vector<double>> times(nodes);
    for (const auto& ev : result.trigger_log) {
        if (ev.node >= nodes) fail(ErrorCode::DimensionMismatch, "trigger log refers to an unknown node");
        times[ev.node].push_back(ev.t);
    }
    TriggerStats st;
    for (std::size_t k = 0; k < nodes; ++k) {
        NodeStats ns;
        ns.label = result.node_labels[k];
        ns.kind = result.node_kinds[k];
        ns.count = times[k].size();
        if (times[k].size() >= 2) {
            double lo = std::numeric_limits<double>::infinity();
            double hi = 0.0;
            for (std::size_t i = 1; i < times[k].size(); ++i) {
                const double g = times[k][i] - times[k][i - 1];
                lo = std::min(lo, g);
                hi = std::max(hi, g);
            }
            ns.min_gap = lo;
            ns.max_gap = hi;
            ns.mean_gap = (times[k].back() - times[k].front()) / static_cast<double>(times[k].size() - 1);
        }
        (ns.kind == trig::NodeKind::Actuator ? st.actuator_total : st.sensor_total) += ns.count;
        st.nodes.push_back(std::move(ns));
    }
    return st;
}

ConvergenceReport convergence_report(const sim::SimulationResult& result, double threshold) {
    const auto& tr = result.trajectory;
    if (tr.empty()) fail(ErrorCode::EmptyLog, "trajectory is empty");
    ConvergenceReport rep;
    rep.threshold = threshold;

    const double start = result.disturbance_times.empty() ? tr.front().t : result.disturbance_times.back();
    const double tail_from = tr.front().t + 0.9 * (tr.back().t - tr.front().t);
    std::size_t first = tr.size();
    std::optional<std::size_t> last_above;
    std::size_t peak_idx = 0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        if (tr[i].t >= tail_from) {
            rep.tail_sup_x = std::max(rep.tail_sup_x, tr[i].norm_x);
            rep.tail_sup_z = std::max(rep.tail_sup_z, tr[i].norm_z);
        }
        if (tr[i].t < start) continue;
        if (first == tr.size() || tr[i].norm_x > rep.peak_x) {
            rep.peak_x = tr[i].norm_x;
            peak_idx = i;
        }
        first = std::min(first, i);
        if (tr[i].norm_x >= threshold) last_above = i;
    }
    if (!last_above) {
        rep.settling_time = start;
    } else if (*last_above + 1 < tr.size()) {
        rep.settling_time = tr[*last_above + 1].t;
    } else {
        rep.never_settles = true;
    }

    // log ||x|| = c - rate * t over rows after the peak with ||x|| > 0
    double sw = 0, st = 0, sy = 0, stt = 0, sty = 0;
    for (std::size_t i = peak_idx; i < tr.size(); ++i) {
        if (!(tr[i].norm_x > 0.0)) continue;
        const double y = std::log(tr[i].norm_x);
        sw += 1;
        st += tr[i].t;
        sy += y;
        stt += tr[i].t * tr[i].t;
        sty += tr[i].t * y;
    }
    const double den = sw * stt - st * st;
    if (sw >= 3 && den > 0.0) rep.decay_rate = -(sw * sty - st * sy) / den;
    return rep;
}

double composite_lyapunov(const trig::LyapunovPair& lyap, double lambda_c, const Vec& xhat, const Vec& z) {
    const double vc = std::max(0.0, num::quadratic_form(lyap.P_c, xhat));
    const double vo = std::max(0.0, num::quadratic_form(lyap.P_o, z));
    return lambda_c * 2.0 * std::sqrt(vc) + 2.0 * std::sqrt(vo);
}

LyapunovCheck check_lyapunov_decrease(const sim::SimulationResult& result, const trig::LyapunovPair& lyap,
                                      const trig::IssCertificate& cert) {
    const auto& tr = result.trajectory;
    if (tr.size() < 3) {
        fail(ErrorCode::InsufficientSamples, fmt::format("need at least 3 trajectory rows, got {}", tr.size()));
    }
    std::vector<double> V(tr.size());
    double vmax = 0.0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        V[i] = composite_lyapunov(lyap, cert.lambda_c, tr[i].xhat, tr[i].x - tr[i].xhat);
        vmax = std::max(vmax, std::abs(V[i]));
    }

    // Trigger times after t = 0, sorted, for stencil lookups.
    std::vector<double> kinks;
    for (const auto& ev : result.trigger_log) {
        if (ev.t > tr.front().t) kinks.push_back(ev.t);
    }
    std::sort(kinks.begin(), kinks.end());
    const auto& jumps = result.disturbance_times;
    auto any_in = [](const std::vector<double>& ts, double lo, double hi, bool closed_hi) {
        auto it = std::upper_bound(ts.begin(), ts.end(), lo);
        return it != ts.end() && (closed_hi ? *it <= hi : *it < hi);
    };

    LyapunovCheck out;
    out.worst_excess = -std::numeric_limits<double>::infinity();
    const double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t i = 1; i + 1 < tr.size(); ++i) {
        const double tm = tr[i - 1].t;
        const double t0 = tr[i].t;
        const double tp = tr[i + 1].t;
        if (any_in(kinks, tm, tp, false) || any_in(jumps, tm, tp, true)) {
            out.excluded_times.push_back(t0);
            continue;
        }
        const double hm = t0 - tm;
        const double hp = tp - t0;
        // three-point derivative and second derivative on a non-uniform stencil
        const double dV = (hm * hm * V[i + 1] - hp * hp * V[i - 1] + (hp * hp - hm * hm) * V[i]) / (hm * hp * (hm + hp));
        const double d2V = 2.0 * (hm * V[i + 1] - (hm + hp) * V[i] + hp * V[i - 1]) / (hm * hp * (hm + hp));
        const double slack = 10.0 * std::max(hm, hp) * std::abs(d2V) + 8.0 * eps * vmax / (tp - tm);

        const Vec X = num::concat(tr[i].xhat, tr[i].x - tr[i].xhat);
        const double bound = -num::norm_one(X) / cert.L_a3_inv + cert.L_b * num::norm_one(tr[i].e);
        ++out.checked;
        out.max_slack = std::max(out.max_slack, slack);
        out.worst_excess = std::max(out.worst_excess, dV - bound);
        if (dV > bound + slack) out.violations.push_back({t0, dV, bound, slack});
    }
    if (out.checked == 0) out.worst_excess = 0.0;
    return out;
}

ProbeOutcome probe_outcome(const LyapunovCheck& check) {
    return check.violations.empty() ? ProbeOutcome::Inconclusive : ProbeOutcome::Falsified;
}

double estimate_lipschitz(const num::VecMap& f, const Vec& center, double radius, std::size_t samples,
                          std::uint64_t seed) {
    return num::lipschitz_lower_bound(f, center, radius, samples, seed);
}

std::string to_string(LyapunovVerdict v) {
    return v == LyapunovVerdict::Holds ? "holds" : "violated";
}

std::string to_string(ProbeOutcome p) {
    return p == ProbeOutcome::Falsified ? "falsified" : "inconclusive";
}

}  // namespace etc::analysis
