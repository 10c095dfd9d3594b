#include "hivdt/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string_view>

namespace hivdt {

namespace {

struct Entry {
    std::string value;
    int line;
    int column; // 1-based column where the value starts
};

std::string_view trim(std::string_view s)
{
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string_view::npos) {
        return {};
    }
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& text, int line, int column)
{
    const char* begin = text.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        throw ParseError("malformed number '" + text + "'", line, column);
    }
    return value;
}

long parse_positive_integer(const Entry& entry, const std::string& key)
{
    const double value = parse_double(entry.value, entry.line, entry.column);
    if (!(value >= 1.0 && value == std::floor(value) && value <= 1e15)) {
        throw ValidationError(key + " must be a positive integer", key);
    }
    return static_cast<long>(value);
}

std::vector<double> parse_double_list(const Entry& entry)
{
    std::vector<double> out;
    std::size_t pos = 0;
    const std::string& text = entry.value;
    while (pos <= text.size()) {
        const std::size_t comma = text.find(',', pos);
        const std::size_t len = (comma == std::string::npos ? text.size() : comma) - pos;
        const std::string item{trim(std::string_view{text}.substr(pos, len))};
        out.push_back(parse_double(item, entry.line, entry.column + static_cast<int>(pos)));
        if (comma == std::string::npos) {
            break;
        }
        pos = comma + 1;
    }
    return out;
}

const char* const kKnownKeys[] = {
    "lambda", "d",     "beta",  "a",        "p",        "mu",     "N",
    "c",      "s",     "tau",   "h",        "initial",  "history", "steps",
    "t_end",  "monitors", "lyapunov", "output", "beta_values", "c_values",
    "tau_values", "sim_budget"};

std::map<std::string, Entry> tokenize(const std::string& text)
{
    std::map<std::string, Entry> entries;
    std::istringstream stream{text};
    std::string raw;
    int line_no = 0;
    while (std::getline(stream, raw)) {
        ++line_no;
        const std::size_t hash = raw.find('#');
        std::string_view line{raw};
        if (hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        if (trim(line).empty()) {
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError("expected 'key = value'", line_no, 1);
        }
        const std::string key{trim(line.substr(0, eq))};
        if (key.empty()) {
            throw ParseError("missing key before '='", line_no, 1);
        }
        const std::string_view value_part = line.substr(eq + 1);
        const std::string value{trim(value_part)};
        const std::size_t leading = value_part.find_first_not_of(" \t\r");
        const int column =
            static_cast<int>(eq + 2 + (leading == std::string_view::npos ? 0 : leading));
        if (entries.count(key) != 0) {
            throw ParseError("duplicate key '" + key + "'", line_no, 1);
        }
        entries.emplace(key, Entry{value, line_no, column});
    }
    return entries;
}

double require_field(const std::map<std::string, Entry>& entries, const std::string& key)
{
    const auto it = entries.find(key);
    if (it == entries.end()) {
        throw ValidationError("missing required field: " + key, key);
    }
    return parse_double(it->second.value, it->second.line, it->second.column);
}

State preset_state(const std::string& name)
{
    if (name == "set-I") {
        return State{5.0, 1.0, 1.0, 2.0};
    }
    if (name == "set-II") {
        return State{15.0, 2.0, 1.0, 4.0};
    }
    throw ValidationError("unknown initial preset '" + name + "'", "initial");
}

std::string format_g17(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string join_g17(const std::vector<double>& values)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i != 0) {
            out += ",";
        }
        out += format_g17(values[i]);
    }
    return out;
}

} // namespace

RunConfig parse_config(const std::string& text)
{
    const std::map<std::string, Entry> entries = tokenize(text);
    for (const auto& [key, entry] : entries) {
        const bool known = std::any_of(std::begin(kKnownKeys), std::end(kKnownKeys),
                                       [&](const char* k) { return key == k; });
        if (!known) {
            throw ValidationError("unknown key: " + key, key);
        }
    }

    RunConfig cfg;
    ParameterValues raw;
    raw.lambda = require_field(entries, "lambda");
    raw.d = require_field(entries, "d");
    raw.beta = require_field(entries, "beta");
    raw.a = require_field(entries, "a");
    raw.p = require_field(entries, "p");
    raw.mu = require_field(entries, "mu");
    raw.n_virions = require_field(entries, "N");
    raw.c = require_field(entries, "c");
    raw.s = require_field(entries, "s");
    raw.tau = require_field(entries, "tau");
    raw.h = require_field(entries, "h");
    try {
        cfg.params = make_parameters(raw);
    }
    catch (const NonPositiveParameter& e) {
        throw ValidationError(e.what(), e.field());
    }
    catch (const NonIntegerDelayRatio& e) {
        throw ValidationError(e.what(), "tau");
    }

    const auto initial_it = entries.find("initial");
    const auto history_it = entries.find("history");
    if (initial_it != entries.end() && history_it != entries.end()) {
        throw ValidationError("initial and history are mutually exclusive", "initial");
    }
    if (initial_it == entries.end() && history_it == entries.end()) {
        throw ValidationError("missing required field: initial (or history)", "initial");
    }
    {
        if (history_it != entries.end()) {
            const std::vector<double> flat = parse_double_list(history_it->second);
            const std::size_t need = 4 * (static_cast<std::size_t>(cfg.params.delay_steps) + 1);
            if (flat.size() != need) {
                throw ValidationError("history needs " + std::to_string(need) + " values (4 per step), got " +
                                          std::to_string(flat.size()),
                                      "history");
            }
            std::vector<State> states;
            states.reserve(flat.size() / 4);
            for (std::size_t i = 0; i < flat.size(); i += 4) {
                states.push_back(State{flat[i], flat[i + 1], flat[i + 2], flat[i + 3]});
            }
            cfg.history = make_initial_data(std::move(states)).history;
        }
        else {
            const Entry& entry = initial_it->second;
            State s0;
            if (entry.value == "set-I" || entry.value == "set-II") {
                cfg.initial_preset = entry.value;
                s0 = preset_state(entry.value);
            }
            else if (entry.value.find(',') != std::string::npos) {
                const std::vector<double> values = parse_double_list(entry);
                if (values.size() != 4) {
                    throw ValidationError("initial vector needs exactly 4 values", "initial");
                }
                s0 = State{values[0], values[1], values[2], values[3]};
            }
            else {
                s0 = preset_state(entry.value);
            }
            cfg.history = constant_history(s0, cfg.params.delay_steps).history;
        }
    }

    const auto steps_it = entries.find("steps");
    const auto t_end_it = entries.find("t_end");
    if (steps_it != entries.end() && t_end_it != entries.end()) {
        throw ValidationError("steps and t_end are mutually exclusive", "steps");
    }
    if (steps_it == entries.end() && t_end_it == entries.end()) {
        throw ValidationError("missing required field: steps (or t_end)", "steps");
    }
    if (steps_it != entries.end()) {
        cfg.steps = parse_positive_integer(steps_it->second, "steps");
    }
    else {
        const Entry& entry = t_end_it->second;
        const double t_end = parse_double(entry.value, entry.line, entry.column);
        if (!(t_end > 0.0)) {
            throw ValidationError("t_end must be positive", "t_end");
        }
        const double ratio = t_end / cfg.params.h;
        if (std::abs(ratio - std::round(ratio)) > 1e-9) {
            throw ValidationError("t_end/h must be an integer", "t_end");
        }
        cfg.steps = static_cast<long>(std::round(ratio));
        if (cfg.steps < 1) {
            throw ValidationError("t_end must cover at least one step", "t_end");
        }
    }

    if (const auto it = entries.find("monitors"); it != entries.end()) {
        std::size_t pos = 0;
        const std::string& text_value = it->second.value;
        while (pos <= text_value.size()) {
            const std::size_t comma = text_value.find(',', pos);
            const std::size_t len = (comma == std::string::npos ? text_value.size() : comma) - pos;
            const std::string item{trim(std::string_view{text_value}.substr(pos, len))};
            if (item == "omega") {
                cfg.monitor_omega = true;
            }
            else if (!item.empty()) {
                throw ValidationError("unknown monitor '" + item + "'", "monitors");
            }
            if (comma == std::string::npos) {
                break;
            }
            pos = comma + 1;
        }
    }

    if (const auto it = entries.find("lyapunov"); it != entries.end()) {
        const auto target = lyapunov_target_from_string(it->second.value);
        if (!target.has_value()) {
            throw ValidationError("lyapunov target must be e0, estar or ebar", "lyapunov");
        }
        cfg.lyapunov_target = target;
    }

    if (const auto it = entries.find("output"); it != entries.end()) {
        cfg.output = it->second.value;
    }
    if (const auto it = entries.find("beta_values"); it != entries.end()) {
        cfg.beta_values = parse_double_list(it->second);
    }
    if (const auto it = entries.find("c_values"); it != entries.end()) {
        cfg.c_values = parse_double_list(it->second);
    }
    if (const auto it = entries.find("tau_values"); it != entries.end()) {
        cfg.tau_values = parse_double_list(it->second);
    }
    if (const auto it = entries.find("sim_budget"); it != entries.end()) {
        cfg.sim_budget = parse_positive_integer(it->second, "sim_budget");
    }
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in{path, std::ios::binary};
    if (!in) {
        throw ValidationError("cannot open config file: " + path, "config");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string serialize_config(const RunConfig& cfg)
{
    const Parameters& par = cfg.params;
    std::string out;
    out += "lambda = " + format_g17(par.lambda) + "\n";
    out += "d = " + format_g17(par.d) + "\n";
    out += "beta = " + format_g17(par.beta) + "\n";
    out += "a = " + format_g17(par.a) + "\n";
    out += "p = " + format_g17(par.p) + "\n";
    out += "mu = " + format_g17(par.mu) + "\n";
    out += "N = " + format_g17(par.n_virions) + "\n";
    out += "c = " + format_g17(par.c) + "\n";
    out += "s = " + format_g17(par.s) + "\n";
    out += "tau = " + format_g17(par.tau) + "\n";
    out += "h = " + format_g17(par.h) + "\n";

    const bool constant = std::all_of(cfg.history.begin(), cfg.history.end(),
                                      [&](const State& s) { return s == cfg.history.back(); });
    if (!cfg.initial_preset.empty()) {
        out += "initial = " + cfg.initial_preset + "\n";
    }
    else if (constant) {
        const State& s0 = cfg.history.back();
        out += "initial = " + join_g17({s0.x, s0.y, s0.v, s0.z}) + "\n";
    }
    else {
        std::vector<double> flat;
        flat.reserve(cfg.history.size() * 4);
        for (const State& s : cfg.history) {
            flat.push_back(s.x);
            flat.push_back(s.y);
            flat.push_back(s.v);
            flat.push_back(s.z);
        }
        out += "history = " + join_g17(flat) + "\n";
    }

    out += "steps = " + std::to_string(cfg.steps) + "\n";
    if (cfg.monitor_omega) {
        out += "monitors = omega\n";
    }
    if (cfg.lyapunov_target.has_value()) {
        out += "lyapunov = " + to_string(*cfg.lyapunov_target) + "\n";
    }
    if (!cfg.output.empty()) {
        out += "output = " + cfg.output + "\n";
    }
    if (!cfg.beta_values.empty()) {
        out += "beta_values = " + join_g17(cfg.beta_values) + "\n";
    }
    if (!cfg.c_values.empty()) {
        out += "c_values = " + join_g17(cfg.c_values) + "\n";
    }
    if (!cfg.tau_values.empty()) {
        out += "tau_values = " + join_g17(cfg.tau_values) + "\n";
    }
    out += "sim_budget = " + std::to_string(cfg.sim_budget) + "\n";
    return out;
}

InitialData initial_data(const RunConfig& cfg)
{
    return make_initial_data(cfg.history);
}

SweepGrid sweep_grid(const RunConfig& cfg)
{
    if (cfg.beta_values.empty() || cfg.c_values.empty()) {
        throw ValidationError("sweep requires beta_values and c_values", "beta_values");
    }
    return SweepGrid{cfg.params, cfg.beta_values, cfg.c_values, cfg.tau_values, cfg.params.h,
                     cfg.sim_budget};
}

std::string to_string(LyapunovTarget target)
{
    switch (target) {
    case LyapunovTarget::E0:
        return "e0";
    case LyapunovTarget::EStar:
        return "estar";
    case LyapunovTarget::EBar:
        return "ebar";
    }
    return "unknown";
}

std::optional<LyapunovTarget> lyapunov_target_from_string(const std::string& name)
{
    if (name == "e0") {
        return LyapunovTarget::E0;
    }
    if (name == "estar") {
        return LyapunovTarget::EStar;
    }
    if (name == "ebar") {
        return LyapunovTarget::EBar;
    }
    return std::nullopt;
}

} // namespace hivdt
