#include "etc/io/scenario_file.hpp"

#include "etc/error.hpp"
#include "etc/io/builtin.hpp"
#include "etc/models/registry.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace etc::io {

using num::Mat;
using num::Vec;

namespace {

struct Entry {
    std::string key;
    std::string value;
    std::size_t line;
};

struct Section {
    std::size_t line = 0;
    std::vector<Entry> entries;
};

[[noreturn]] void parse_error(std::size_t line, const std::string& msg) {
    throw Error(ErrorCode::ParseError, msg, line == 0 ? 1 : line);
}

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::vector<std::string_view> tokens(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == ',')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != ',') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

double to_double(std::string_view tok, std::size_t line) {
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        parse_error(line, fmt::format("'{}' is not a number", tok));
    }
    if (!std::isfinite(v)) parse_error(line, fmt::format("'{}' is not finite", tok));
    return v;
}

std::size_t to_count(std::string_view tok, std::size_t line) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        parse_error(line, fmt::format("'{}' is not a non-negative integer", tok));
    }
    return v;
}

std::vector<double> to_doubles(std::string_view s, std::size_t line) {
    std::vector<double> out;
    for (auto t : tokens(s)) out.push_back(to_double(t, line));
    if (out.empty()) parse_error(line, "expected at least one number");
    return out;
}

Vec to_vec(std::string_view s, std::size_t line) { return Vec(to_doubles(s, line)); }

Mat to_mat(std::string_view s, std::size_t line) {
    std::vector<Vec> rows;
    for (auto r : split(s, ';')) {
        if (r.empty()) parse_error(line, "empty matrix row");
        rows.push_back(to_vec(r, line));
        if (rows.back().size() != rows.front().size()) {
            parse_error(line, fmt::format("matrix row {} has {} entries, row 1 has {}", rows.size(),
                                          rows.back().size(), rows.front().size()));
        }
    }
    return Mat::from_rows(rows);
}

std::vector<std::size_t> to_widths(std::string_view s, std::size_t line) {
    std::vector<std::size_t> out;
    for (auto t : tokens(s)) out.push_back(to_count(t, line));
    if (out.empty()) parse_error(line, "expected node widths");
    return out;
}

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s{
        {"scenario", {"name"}},
        {"model", {"name", "A", "B", "C", "sin", "rho", "inputs", "outputs"}},
        {"gains", {"K", "L", "feedback"}},
        {"lyapunov", {"eta_c", "eta_o", "a3_term"}},
        {"initial", {"x0", "xhat0"}},
        {"sim", {"t_end", "dt", "event_tol", "max_events_per_node"}},
        {"validate", {"t_end", "dt", "event_tol", "max_events_per_node"}},
        {"compare", {"delta"}},
        {"triggers", {}},  // keys are node labels
        {"disturbances", {"jump"}},
        {"outputs", {"csv", "svg", "report"}},
    };
    return s;
}

bool repeatable(const std::string& section, const std::string& key) {
    return (section == "model" && key == "sin") || (section == "disturbances" && key == "jump");
}

std::map<std::string, Section> split_sections(std::string_view doc) {
    std::map<std::string, Section> out;
    std::string current;
    std::size_t line_no = 0;
    bool any = false;
    std::size_t pos = 0;
    while (pos <= doc.size()) {
        auto nl = doc.find('\n', pos);
        std::string_view raw = doc.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? doc.size() + 1 : nl + 1;
        ++line_no;
        auto hash = raw.find('#');
        std::string_view line = trim(hash == std::string_view::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        any = true;
        if (line.front() == '[') {
            if (line.back() != ']') parse_error(line_no, "unterminated section header");
            current = std::string(trim(line.substr(1, line.size() - 2)));
            if (!schema().contains(current)) parse_error(line_no, fmt::format("unknown section [{}]", current));
            if (out.contains(current)) parse_error(line_no, fmt::format("section [{}] repeated", current));
            out[current].line = line_no;
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string_view::npos) parse_error(line_no, "expected 'key = value'");
        if (current.empty()) parse_error(line_no, "key outside of any section");
        std::string key(trim(line.substr(0, eq)));
        std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) parse_error(line_no, "empty key");
        if (value.empty()) parse_error(line_no, fmt::format("'{}' has no value", key));
        const auto& allowed = schema().at(current);
        if (current != "triggers" && !allowed.contains(key)) {
            parse_error(line_no, fmt::format("unknown key '{}' in [{}]", key, current));
        }
        auto& sec = out[current];
        if (!repeatable(current, key)) {
            for (const auto& e : sec.entries) {
                if (e.key == key) parse_error(line_no, fmt::format("'{}' repeated (first on line {})", key, e.line));
            }
        }
        sec.entries.push_back({std::move(key), std::move(value), line_no});
    }
    if (!any) parse_error(1, "empty scenario document");
    return out;
}

const Entry* find(const std::map<std::string, Section>& secs, const std::string& section, const std::string& key) {
    auto it = secs.find(section);
    if (it == secs.end()) return nullptr;
    for (const auto& e : it->second.entries) {
        if (e.key == key) return &e;
    }
    return nullptr;
}

const Entry& require(const std::map<std::string, Section>& secs, const std::string& section, const std::string& key) {
    if (const Entry* e = find(secs, section, key)) return *e;
    auto it = secs.find(section);
    parse_error(it == secs.end() ? 1 : it->second.line, fmt::format("missing '{}' in [{}]", key, section));
}

models::ModelSpec parse_model(const std::map<std::string, Section>& secs) {
    auto it = secs.find("model");
    if (it == secs.end()) parse_error(1, "missing [model] section");
    if (const Entry* name = find(secs, "model", "name")) {
        for (const auto& e : it->second.entries) {
            if (e.key != "name") parse_error(e.line, fmt::format("'{}' cannot be combined with a named model", e.key));
        }
        try {
            return models::builtin_model(name->value);
        } catch (const Error&) {
            parse_error(name->line, fmt::format("unknown model '{}'", name->value));
        }
    }
    models::ModelSpec m;
    const Entry& a = require(secs, "model", "A");
    m.A = to_mat(a.value, a.line);
    const Entry& b = require(secs, "model", "B");
    m.B = to_mat(b.value, b.line);
    const Entry& c = require(secs, "model", "C");
    m.C = to_mat(c.value, c.line);
    const std::size_t n = m.A.rows();
    if (!m.A.is_square()) throw Error(ErrorCode::ValidationError, "A must be square", a.line);
    if (m.B.rows() != n) throw Error(ErrorCode::ValidationError, fmt::format("B must have {} rows", n), b.line);
    if (m.C.cols() != n) throw Error(ErrorCode::ValidationError, fmt::format("C must have {} columns", n), c.line);
    for (const auto& e : it->second.entries) {
        if (e.key != "sin") continue;
        auto t = tokens(e.value);
        if (t.size() != 3) parse_error(e.line, "sin expects 'row col gain' (1-based)");
        const std::size_t row = to_count(t[0], e.line);
        const std::size_t col = to_count(t[1], e.line);
        if (row < 1 || row > n || col < 1 || col > n) {
            throw Error(ErrorCode::ValidationError, fmt::format("sin indices must be in 1..{}", n), e.line);
        }
        m.sin_terms.push_back({row - 1, col - 1, to_double(t[2], e.line)});
    }
    if (const Entry* r = find(secs, "model", "rho")) {
        m.rho = to_double(r->value, r->line);
    } else {
        m.rho = models::sin_terms_rho(m.sin_terms, n);
    }
    if (const Entry* w = find(secs, "model", "inputs")) {
        m.input_widths = to_widths(w->value, w->line);
    } else {
        m.input_widths.assign(m.B.cols(), 1);
    }
    if (const Entry* w = find(secs, "model", "outputs")) {
        m.output_widths = to_widths(w->value, w->line);
    } else {
        m.output_widths.assign(m.C.rows(), 1);
    }
    return m;
}

using Params = std::map<std::string, double>;

Params parse_params(const std::vector<std::string_view>& toks, const std::set<std::string>& names, std::size_t line) {
    Params p;
    for (std::size_t i = 1; i < toks.size(); ++i) {
        auto eq = toks[i].find('=');
        if (eq == std::string_view::npos) parse_error(line, fmt::format("expected name=value, got '{}'", toks[i]));
        std::string name(toks[i].substr(0, eq));
        if (!names.contains(name)) parse_error(line, fmt::format("unknown trigger parameter '{}'", name));
        if (p.contains(name)) parse_error(line, fmt::format("trigger parameter '{}' repeated", name));
        p[name] = to_double(toks[i].substr(eq + 1), line);
    }
    for (const auto& n : names) {
        if (!p.contains(n)) parse_error(line, fmt::format("missing trigger parameter '{}'", n));
    }
    return p;
}

sim::TriggerSpec parse_trigger(std::string_view value, std::size_t line) {
    auto toks = tokens(value);
    const std::string kind(toks.at(0));
    if (kind == "auto") {
        if (toks.size() != 1) parse_error(line, "auto takes no parameters");
        return sim::AutoTrigger{};
    }
    if (kind == "node-relative") {
        auto p = parse_params(toks, {"factor", "dwell"}, line);
        return sim::RelativeFactor{p["factor"], p["dwell"]};
    }
    if (kind == "periodic") {
        auto p = parse_params(toks, {"delta"}, line);
        return trig::TriggerPolicy{trig::Periodic{p["delta"]}};
    }
    if (kind == "epsilon") {
        auto p = parse_params(toks, {"epsilon"}, line);
        return trig::TriggerPolicy{trig::EpsilonCrossing{p["epsilon"]}};
    }
    if (kind == "state-dependent") {
        auto p = parse_params(toks, {"sigma", "epsilon"}, line);
        return trig::TriggerPolicy{trig::StateDependent{p["sigma"], p["epsilon"]}};
    }
    if (kind == "mixed") {
        auto p = parse_params(toks, {"epsilon", "delta_min"}, line);
        return trig::TriggerPolicy{trig::Mixed{p["epsilon"], p["delta_min"]}};
    }
    if (kind == "relative-state") {
        auto p = parse_params(toks, {"sigma"}, line);
        return trig::TriggerPolicy{trig::RelativeState{p["sigma"]}};
    }
    if (kind == "actuator") {
        auto p = parse_params(toks, {"kappa", "L_gamma", "tau_min"}, line);
        return trig::TriggerPolicy{trig::NodeRelativeActuator{p["kappa"], p["L_gamma"], p["tau_min"]}};
    }
    if (kind == "sensor") {
        auto p = parse_params(toks, {"kappa", "L_h", "tau_min"}, line);
        return trig::TriggerPolicy{trig::NodeRelativeSensor{p["kappa"], p["L_h"], p["tau_min"]}};
    }
    if (kind == "ideal") {
        auto p = parse_params(toks, {"kappa", "tau_min"}, line);
        return trig::TriggerPolicy{trig::IdealNode{p["kappa"], p["tau_min"]}};
    }
    parse_error(line, fmt::format("unknown trigger policy '{}'", kind));
}

sim::SimConfig parse_config(const std::map<std::string, Section>& secs, const std::string& section,
                            sim::SimConfig cfg) {
    if (const Entry* e = find(secs, section, "t_end")) cfg.t_end = to_double(e->value, e->line);
    if (const Entry* e = find(secs, section, "dt")) cfg.dt = to_double(e->value, e->line);
    if (const Entry* e = find(secs, section, "event_tol")) cfg.event_tol = to_double(e->value, e->line);
    if (const Entry* e = find(secs, section, "max_events_per_node")) {
        cfg.max_events_per_node = to_count(e->value, e->line);
    }
    return cfg;
}

void check_explicit_kappa(const sim::Scenario& s) {
    bool explicit_kappa = false;
    for (const auto& t : s.triggers) {
        const auto* p = std::get_if<trig::TriggerPolicy>(&t);
        if (p && (std::holds_alternative<trig::NodeRelativeActuator>(*p) ||
                  std::holds_alternative<trig::NodeRelativeSensor>(*p) || std::holds_alternative<trig::IdealNode>(*p))) {
            explicit_kappa = true;
        }
    }
    if (!explicit_kappa) return;
    auto loop = sim::build_closed_loop(s);
    trig::IssCertificate cert;
    try {
        cert = sim::scenario_certificate(s, loop);
    } catch (const Error& e) {
        fail(ErrorCode::ValidationError, fmt::format("explicit kappa needs a certificate: {}", e.what()));
    }
    sim::check_explicit_budget(s, cert);
}

std::string num_str(double v) { return fmt::format("{}", v); }

std::string vec_str(const Vec& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        out += num_str(v[i]);
    }
    return out;
}

std::string mat_str(const Mat& m) {
    std::string out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (i) out += "; ";
        out += vec_str(m.row(i));
    }
    return out;
}

std::string widths_str(const std::vector<std::size_t>& w) {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) out += (i ? " " : "") + std::to_string(w[i]);
    return out;
}

std::string trigger_str(const sim::TriggerSpec& spec) {
    if (std::holds_alternative<sim::AutoTrigger>(spec)) return "auto";
    if (const auto* r = std::get_if<sim::RelativeFactor>(&spec)) {
        return fmt::format("node-relative factor={} dwell={}", r->factor, r->dwell);
    }
    const auto& p = std::get<trig::TriggerPolicy>(spec);
    if (const auto* v = std::get_if<trig::Periodic>(&p)) return fmt::format("periodic delta={}", v->delta);
    if (const auto* v = std::get_if<trig::EpsilonCrossing>(&p)) return fmt::format("epsilon epsilon={}", v->epsilon);
    if (const auto* v = std::get_if<trig::StateDependent>(&p)) {
        return fmt::format("state-dependent sigma={} epsilon={}", v->sigma, v->epsilon);
    }
    if (const auto* v = std::get_if<trig::Mixed>(&p)) {
        return fmt::format("mixed epsilon={} delta_min={}", v->epsilon, v->delta_min);
    }
    if (const auto* v = std::get_if<trig::RelativeState>(&p)) return fmt::format("relative-state sigma={}", v->sigma);
    if (const auto* v = std::get_if<trig::NodeRelativeActuator>(&p)) {
        return fmt::format("actuator kappa={} L_gamma={} tau_min={}", v->kappa, v->L_gamma, v->tau_min);
    }
    if (const auto* v = std::get_if<trig::NodeRelativeSensor>(&p)) {
        return fmt::format("sensor kappa={} L_h={} tau_min={}", v->kappa, v->L_h, v->tau_min);
    }
    const auto& v = std::get<trig::IdealNode>(p);
    return fmt::format("ideal kappa={} tau_min={}", v.kappa, v.tau_min);
}

void write_config(std::string& out, const sim::SimConfig& c) {
    out += fmt::format("t_end = {}\ndt = {}\nevent_tol = {}\nmax_events_per_node = {}\n", c.t_end, c.dt, c.event_tol,
                       c.max_events_per_node);
}

}  // namespace

sim::Scenario parse_scenario(std::string_view document) {
    const auto secs = split_sections(document);
    sim::Scenario s;
    if (const Entry* e = find(secs, "scenario", "name")) s.name = e->value;

    s.model = parse_model(secs);
    const std::size_t n = s.model.A.rows();

    if (!secs.contains("gains")) parse_error(1, "missing [gains] section");
    const Entry& k = require(secs, "gains", "K");
    s.K = to_mat(k.value, k.line);
    const Entry& l = require(secs, "gains", "L");
    s.L = to_mat(l.value, l.line);
    if (const Entry* f = find(secs, "gains", "feedback")) {
        if (f->value == "negative") {
            s.negative_feedback = true;
        } else if (f->value != "positive") {
            parse_error(f->line, "feedback must be 'positive' or 'negative'");
        }
    }

    if (const Entry* e = find(secs, "lyapunov", "eta_c")) s.lyapunov.eta_c = to_double(e->value, e->line);
    if (const Entry* e = find(secs, "lyapunov", "eta_o")) s.lyapunov.eta_o = to_double(e->value, e->line);
    if (const Entry* e = find(secs, "lyapunov", "a3_term")) {
        try {
            s.lyapunov.a3_term = trig::a3_term_from_string(e->value);
        } catch (const Error&) {
            parse_error(e->line, fmt::format("a3_term must be 'scaled-inverse' or 'literal', got '{}'", e->value));
        }
    }

    if (!secs.contains("initial")) parse_error(1, "missing [initial] section");
    const Entry& x0 = require(secs, "initial", "x0");
    s.x0 = to_vec(x0.value, x0.line);
    if (const Entry* e = find(secs, "initial", "xhat0")) {
        s.xhat0 = to_vec(e->value, e->line);
    } else {
        s.xhat0 = Vec(n);
    }

    s.sim = parse_config(secs, "sim", sim::SimConfig{});
    if (secs.contains("validate")) s.validate = parse_config(secs, "validate", s.sim);
    if (const Entry* e = find(secs, "compare", "delta")) s.compare_delta = to_double(e->value, e->line);

    // Node labels u1..uq, y1..yr.
    const std::size_t q = s.model.input_widths.size();
    const std::size_t r = s.model.output_widths.size();
    std::vector<std::optional<sim::TriggerSpec>> trig_specs(q + r);
    if (auto it = secs.find("triggers"); it != secs.end()) {
        for (const auto& e : it->second.entries) {
            std::size_t idx = 0;
            bool ok = e.key.size() >= 2 && (e.key[0] == 'u' || e.key[0] == 'y');
            if (ok) {
                auto [ptr, ec] = std::from_chars(e.key.data() + 1, e.key.data() + e.key.size(), idx);
                ok = ec == std::errc() && ptr == e.key.data() + e.key.size() && idx >= 1;
            }
            const std::size_t limit = e.key[0] == 'u' ? q : r;
            if (!ok || idx > limit) {
                parse_error(e.line, fmt::format("unknown node '{}' (actuators u1..u{}, sensors y1..y{})", e.key, q, r));
            }
            trig_specs[e.key[0] == 'u' ? idx - 1 : q + idx - 1] = parse_trigger(e.value, e.line);
        }
    }
    for (std::size_t i = 0; i < trig_specs.size(); ++i) {
        if (!trig_specs[i]) {
            fail(ErrorCode::ValidationError,
                 fmt::format("no trigger given for node {}", i < q ? fmt::format("u{}", i + 1) : fmt::format("y{}", i - q + 1)));
        }
        s.triggers.push_back(*trig_specs[i]);
    }

    if (auto it = secs.find("disturbances"); it != secs.end()) {
        for (const auto& e : it->second.entries) {
            auto parts = split(e.value, ':');
            if (parts.size() != 2) parse_error(e.line, "jump expects 'time : x-increment'");
            s.disturbances.push_back({to_double(parts[0], e.line), to_vec(parts[1], e.line)});
        }
    }

    if (const Entry* e = find(secs, "outputs", "csv")) s.outputs.csv = e->value;
    if (const Entry* e = find(secs, "outputs", "svg")) s.outputs.svg = e->value;
    if (const Entry* e = find(secs, "outputs", "report")) s.outputs.report = e->value;

    sim::validate_scenario(s);
    check_explicit_kappa(s);
    return s;
}

std::string serialize_scenario(const sim::Scenario& s) {
    std::string out;
    if (!s.name.empty()) out += fmt::format("[scenario]\nname = {}\n\n", s.name);

    out += "[model]\n";
    const bool named = s.model.is_named() && s.model == models::builtin_model(s.model.name);
    if (named) {
        out += fmt::format("name = {}\n", s.model.name);
    } else {
        out += fmt::format("A = {}\nB = {}\nC = {}\n", mat_str(s.model.A), mat_str(s.model.B), mat_str(s.model.C));
        for (const auto& t : s.model.sin_terms) out += fmt::format("sin = {} {} {}\n", t.row + 1, t.col + 1, t.gain);
        out += fmt::format("rho = {}\ninputs = {}\noutputs = {}\n", s.model.rho, widths_str(s.model.input_widths),
                           widths_str(s.model.output_widths));
    }

    out += fmt::format("\n[gains]\nK = {}\nfeedback = {}\nL = {}\n", mat_str(s.K),
                       s.negative_feedback ? "negative" : "positive", mat_str(s.L));
    out += fmt::format("\n[lyapunov]\neta_c = {}\neta_o = {}\na3_term = {}\n", s.lyapunov.eta_c, s.lyapunov.eta_o,
                       trig::to_string(s.lyapunov.a3_term));
    out += fmt::format("\n[initial]\nx0 = {}\nxhat0 = {}\n", vec_str(s.x0), vec_str(s.xhat0));
    out += "\n[sim]\n";
    write_config(out, s.sim);
    if (s.validate) {
        out += "\n[validate]\n";
        write_config(out, *s.validate);
    }
    out += fmt::format("\n[compare]\ndelta = {}\n", s.compare_delta);

    out += "\n[triggers]\n";
    const std::size_t q = s.model.input_widths.size();
    for (std::size_t i = 0; i < s.triggers.size(); ++i) {
        const std::string label = i < q ? fmt::format("u{}", i + 1) : fmt::format("y{}", i - q + 1);
        out += fmt::format("{} = {}\n", label, trigger_str(s.triggers[i]));
    }
    if (!s.disturbances.empty()) {
        out += "\n[disturbances]\n";
        for (const auto& d : s.disturbances) out += fmt::format("jump = {} : {}\n", d.time, vec_str(d.state_jump));
    }
    out += fmt::format("\n[outputs]\ncsv = {}\nsvg = {}\nreport = {}\n", s.outputs.csv, s.outputs.svg,
                       s.outputs.report);
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::IoError, fmt::format("cannot open '{}'", path));
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) fail(ErrorCode::IoError, fmt::format("cannot read '{}'", path));
    return ss.str();
}

sim::Scenario load_scenario(const std::string& name_or_path) {
    if (auto s = builtin_scenario(name_or_path)) return *s;
    return parse_scenario(read_file(name_or_path));
}

}  // namespace etc::io
