#include "etc/io/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

#include <fmt/format.h>

namespace etc::io {

namespace {

constexpr double kWidth = 960.0;
constexpr double kPanelH = 200.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kGap = 40.0;
constexpr std::size_t kMaxPoints = 2000;

constexpr std::array<const char*, 8> kColors{"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                            "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> pts;
    bool dashed = false;
};

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string f2(double v) { return fmt::format("{:.2f}", v); }

class Panel {
public:
    Panel(std::string title, std::size_t index, double t0, double t1)
        : title_(std::move(title)), y0_(kTop + static_cast<double>(index) * (kPanelH + kGap)), t0_(t0), t1_(t1) {}

    void add(Series s) { series_.push_back(std::move(s)); }

    std::string render() const {
        double lo = 0.0, hi = 0.0;
        bool first = true;
        for (const auto& s : series_) {
            for (const auto& [t, v] : s.pts) {
                if (!std::isfinite(v)) continue;
                lo = first ? v : std::min(lo, v);
                hi = first ? v : std::max(hi, v);
                first = false;
            }
        }
        if (hi - lo < 1e-300) {
            lo -= 1.0;
            hi += 1.0;
        }
        const double pw = kWidth - kLeft - kRight;
        const double span = t1_ > t0_ ? t1_ - t0_ : 1.0;
        auto px = [&](double t) { return kLeft + (t - t0_) / span * pw; };
        auto py = [&](double v) { return y0_ + kPanelH - (v - lo) / (hi - lo) * kPanelH; };

        std::string out = fmt::format("<g>\n<text x=\"{}\" y=\"{}\" font-size=\"13\">{}</text>\n", f2(kLeft),
                                      f2(y0_ - 8), esc(title_));
        out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#444\"/>\n",
                           f2(kLeft), f2(y0_), f2(pw), f2(kPanelH));
        out += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"10\" text-anchor=\"end\">{:.4g}</text>\n",
                           f2(kLeft - 4), f2(y0_ + 10), hi);
        out += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"10\" text-anchor=\"end\">{:.4g}</text>\n",
                           f2(kLeft - 4), f2(y0_ + kPanelH), lo);
        out += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"10\">{:.4g}</text>\n", f2(kLeft),
                           f2(y0_ + kPanelH + 12), t0_);
        out += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"10\" text-anchor=\"end\">t = {:.4g} s</text>\n",
                           f2(kLeft + pw), f2(y0_ + kPanelH + 12), t1_);
        for (std::size_t i = 0; i < series_.size(); ++i) {
            const auto& s = series_[i];
            const char* color = kColors[i % kColors.size()];
            out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.2\"{} points=\"", color,
                               s.dashed ? " stroke-dasharray=\"5,3\"" : "");
            for (std::size_t k = 0; k < s.pts.size(); ++k) {
                if (!std::isfinite(s.pts[k].second)) continue;
                out += fmt::format("{}{},{}", k ? " " : "", f2(px(s.pts[k].first)), f2(py(s.pts[k].second)));
            }
            out += "\"/>\n";
            const double ly = y0_ + 14.0 + 14.0 * static_cast<double>(i);
            out += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\"{}/>\n", f2(kLeft + pw + 10),
                               f2(ly - 4), f2(kLeft + pw + 30), f2(ly - 4), color,
                               s.dashed ? " stroke-dasharray=\"5,3\"" : "");
            out += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"11\">{}</text>\n", f2(kLeft + pw + 34), f2(ly),
                               esc(s.name));
        }
        out += "</g>\n";
        return out;
    }

private:
    std::string title_;
    double y0_;
    double t0_, t1_;
    std::vector<Series> series_;
};

std::size_t stride_for(std::size_t n) { return n <= kMaxPoints ? 1 : (n + kMaxPoints - 1) / kMaxPoints; }

Series trace(const sim::SimulationResult& r, const std::string& name,
             const std::function<double(const sim::TrajectoryRow&)>& get, bool dashed = false) {
    Series s{name, {}, dashed};
    const auto& tr = r.trajectory;
    const std::size_t stride = stride_for(tr.size());
    for (std::size_t i = 0; i < tr.size(); i += stride) s.pts.emplace_back(tr[i].t, get(tr[i]));
    if (!tr.empty() && (tr.size() - 1) % stride != 0) s.pts.emplace_back(tr.back().t, get(tr.back()));
    return s;
}

}  // namespace

std::string render_svg(const sim::SimulationResult& r, const std::string& title) {
    const double t0 = r.trajectory.empty() ? 0.0 : r.trajectory.front().t;
    const double t1 = r.trajectory.empty() ? r.t_end : r.trajectory.back().t;

    Panel states("plant state x (solid) and estimate x_hat (dashed)", 0, t0, t1);
    for (std::size_t i = 0; i < r.state_dim; ++i) {
        states.add(trace(r, fmt::format("x{}", i + 1), [i](const auto& row) { return row.x[i]; }));
    }
    for (std::size_t i = 0; i < r.state_dim; ++i) {
        states.add(trace(r, fmt::format("xhat{}", i + 1), [i](const auto& row) { return row.xhat[i]; }, true));
    }
    Panel norms("norms", 1, t0, t1);
    norms.add(trace(r, "||x||", [](const auto& row) { return row.norm_x; }));
    norms.add(trace(r, "||z||", [](const auto& row) { return row.norm_z; }));
    Panel inputs("held inputs u_bar", 2, t0, t1);
    for (std::size_t i = 0; i < r.input_dim; ++i) {
        inputs.add(trace(r, fmt::format("ubar{}", i + 1), [i](const auto& row) { return row.ubar[i]; }));
    }

    Panel counts("cumulative transmissions per node", 3, t0, t1);
    std::vector<std::vector<double>> times(r.node_labels.size());
    for (const auto& ev : r.trigger_log) times.at(ev.node).push_back(ev.t);
    for (std::size_t k = 0; k < times.size(); ++k) {
        Series s{r.node_labels[k], {}, false};
        const auto& ts = times[k];
        const std::size_t stride = stride_for(ts.size());
        double prev = 0.0;
        for (std::size_t i = 0; i < ts.size(); i += stride) {
            const double c = static_cast<double>(i + 1);
            s.pts.emplace_back(ts[i], prev);
            s.pts.emplace_back(ts[i], c);
            prev = c;
        }
        if (!ts.empty()) {
            const double c = static_cast<double>(ts.size());
            if (prev != c) {
                s.pts.emplace_back(ts.back(), prev);
                s.pts.emplace_back(ts.back(), c);
            }
            s.pts.emplace_back(t1, c);
        }
        counts.add(std::move(s));
    }

    const double height = kTop + 4.0 * (kPanelH + kGap);
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} "
        "{1}\" font-family=\"sans-serif\">\n",
        f2(kWidth), f2(height));
    out += fmt::format("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    out += fmt::format("<text x=\"{}\" y=\"20\" font-size=\"15\">{}</text>\n", f2(kLeft), esc(title));
    out += states.render();
    out += norms.render();
    out += inputs.render();
    out += counts.render();
    out += "</svg>\n";
    return out;
}

}  // namespace etc::io
