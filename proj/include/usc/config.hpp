#pragma once

// Plain-text run configuration: `key = value` lines grouped in [sections].
// Keys before the first section header belong to [run]. '#' and ';' start
// comments. Unknown sections or keys are rejected.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "usc/core.hpp"

namespace usc {

struct config_error : error {
    config_error(const std::string& what, std::string k, int l) : error(what), key(std::move(k)), line(l) {}
    std::string key;  // section.key, empty when not key-specific
    int line;         // 0 when not line-specific
};

enum class Mode { ground_state, spectra, sweep, stability, calibrate, oracle, validate_rwa };
enum class Units { angular, cyclic };

inline std::string to_string(Mode m) {
    switch (m) {
        case Mode::ground_state: return "ground-state";
        case Mode::spectra: return "spectra";
        case Mode::sweep: return "sweep";
        case Mode::stability: return "stability";
        case Mode::calibrate: return "calibrate";
        case Mode::oracle: return "oracle";
        case Mode::validate_rwa: return "validate-rwa";
    }
    return "?";
}

inline std::optional<Mode> parse_mode(std::string_view s) {
    for (Mode m : {Mode::ground_state, Mode::spectra, Mode::sweep, Mode::stability, Mode::calibrate, Mode::oracle,
                   Mode::validate_rwa}) {
        if (to_string(m) == s) return m;
    }
    return std::nullopt;
}

inline std::string to_string(Units u) { return u == Units::angular ? "angular" : "cyclic"; }

/// Uniform grid or explicit list. Values are in units of delta (or of omega_alpha
/// for ground-state runs).
struct GridSpec {
    double min = 0.0;
    double max = 0.0;
    std::size_t points = 0;
    std::vector<double> values;  // overrides min/max/points when non-empty

    std::vector<double> expand() const {
        if (!values.empty()) return values;
        std::vector<double> g(points);
        if (points == 1) return {min};
        for (std::size_t k = 0; k < points; ++k) {
            g[k] = min + (max - min) * static_cast<double>(k) / static_cast<double>(points - 1);
        }
        if (points > 0) g.back() = max;
        return g;
    }

    bool operator==(const GridSpec&) const = default;
};

/// All frequencies and rates are stored in angular units (rad/s).
struct RunConfig {
    Mode mode = Mode::spectra;
    Units units = Units::angular;  // units of the source document
    std::string output;            // empty: stdout
    std::string ellipses;          // optional ellipse output path
    unsigned workers = 0;
    bool force = false;

    // [ground_state]
    double omega_alpha = 0.0;
    double omega_beta = 0.0;

    // [sim]
    double delta = 0.0;
    double G_over_delta = 0.0;
    std::optional<double> G_B_over_delta;
    std::optional<double> G_R_over_delta;
    double gamma_a = 0.0;
    double gamma_b = 0.0;
    double gamma_L = 0.0;
    double thermal_occupancy = 0.0;
    std::optional<double> omega_a;
    std::optional<double> omega_b;

    // [sweep]
    std::vector<double> couplings;

    // [pump]
    double chi = 0.0;
    double c_B = 0.0;
    double c_R = 0.0;
    double c_B_phase = 0.0;
    double c_R_phase = 0.0;
    double pump_omega_a = 0.0;
    double pump_omega_b = 0.0;
    double pump_delta = 0.0;
    double rwa_frequency_ratio = 1.0 / 20.0;
    double rwa_detuning_ratio = 1.0;

    // [feasibility]
    bool has_feasibility = false;
    double xi_a = 0.0;
    double xi_b = 0.0;
    double Q_a = 0.0;
    double Q_b = 0.0;
    double target_G_over_delta = 0.5;

    // [fock]
    int n_max = 30;
    int convergence_pad = 5;
    double fock_delta = 1.0;
    double omega_a_over_delta = 40.0;
    double omega_b_over_delta = 27.0;
    double fock_G_over_delta = 0.2;
    double duration_periods = 1.0;
    double tolerance = 1e-10;
    int samples = 101;

    GridSpec grid;

    bool operator==(const RunConfig&) const = default;
};

namespace detail {

enum class Kind { real, real_list, integer, text, flag };

struct KeySpec {
    Kind kind;
    bool frequency;  // multiplied by 2 pi for cyclic units
};

inline const std::map<std::string, KeySpec>& key_table() {
    static const std::map<std::string, KeySpec> table = {
        {"run.mode", {Kind::text, false}},
        {"run.units", {Kind::text, false}},
        {"run.output", {Kind::text, false}},
        {"run.ellipses", {Kind::text, false}},
        {"run.workers", {Kind::integer, false}},
        {"run.force", {Kind::flag, false}},
        {"ground_state.omega_alpha", {Kind::real, true}},
        {"ground_state.omega_beta", {Kind::real, true}},
        {"sim.delta", {Kind::real, true}},
        {"sim.G_over_delta", {Kind::real, false}},
        {"sim.G_B_over_delta", {Kind::real, false}},
        {"sim.G_R_over_delta", {Kind::real, false}},
        {"sim.gamma_a", {Kind::real, true}},
        {"sim.gamma_b", {Kind::real, true}},
        {"sim.gamma_L", {Kind::real, true}},
        {"sim.thermal_occupancy", {Kind::real, false}},
        {"sim.omega_a", {Kind::real, true}},
        {"sim.omega_b", {Kind::real, true}},
        {"sweep.couplings", {Kind::real_list, false}},
        {"pump.chi", {Kind::real, true}},
        {"pump.c_B", {Kind::real, false}},
        {"pump.c_R", {Kind::real, false}},
        {"pump.c_B_phase", {Kind::real, false}},
        {"pump.c_R_phase", {Kind::real, false}},
        {"pump.omega_a", {Kind::real, true}},
        {"pump.omega_b", {Kind::real, true}},
        {"pump.delta", {Kind::real, true}},
        {"pump.rwa_frequency_ratio", {Kind::real, false}},
        {"pump.rwa_detuning_ratio", {Kind::real, false}},
        {"feasibility.xi_a", {Kind::real, false}},
        {"feasibility.xi_b", {Kind::real, false}},
        {"feasibility.Q_a", {Kind::real, false}},
        {"feasibility.Q_b", {Kind::real, false}},
        {"feasibility.target_G_over_delta", {Kind::real, false}},
        {"fock.n_max", {Kind::integer, false}},
        {"fock.convergence_pad", {Kind::integer, false}},
        {"fock.delta", {Kind::real, true}},
        {"fock.omega_a_over_delta", {Kind::real, false}},
        {"fock.omega_b_over_delta", {Kind::real, false}},
        {"fock.G_over_delta", {Kind::real, false}},
        {"fock.duration_periods", {Kind::real, false}},
        {"fock.tolerance", {Kind::real, false}},
        {"fock.samples", {Kind::integer, false}},
        {"grid.min", {Kind::real, false}},
        {"grid.max", {Kind::real, false}},
        {"grid.points", {Kind::integer, false}},
        {"grid.scale", {Kind::text, false}},
        {"grid.values", {Kind::real_list, false}},
    };
    return table;
}

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct Entry {
    std::string value;
    int line;
};

inline std::optional<double> to_double(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

inline std::optional<long long> to_integer(std::string_view s) {
    s = trim(s);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

class Document {
public:
    std::map<std::string, Entry> entries;

    bool has(const std::string& key) const { return entries.count(key) > 0; }

    [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
        const auto it = entries.find(key);
        const int line = it == entries.end() ? 0 : it->second.line;
        std::ostringstream os;
        if (line > 0) os << "line " << line << ": ";
        os << "key '" << key << "': " << msg;
        throw config_error(os.str(), key, line);
    }

    double real(const std::string& key, double scale) const {
        const auto v = to_double(entries.at(key).value);
        if (!v || !std::isfinite(*v)) fail(key, "expected a finite number, got '" + entries.at(key).value + "'");
        return *v * scale;
    }

    std::vector<double> list(const std::string& key) const {
        std::vector<double> out;
        std::string_view s = entries.at(key).value;
        while (!s.empty()) {
            const auto comma = s.find(',');
            const auto item = s.substr(0, comma);
            const auto v = to_double(item);
            if (!v || !std::isfinite(*v)) fail(key, "expected a comma-separated list of numbers");
            out.push_back(*v);
            if (comma == std::string_view::npos) break;
            s.remove_prefix(comma + 1);
        }
        if (out.empty()) fail(key, "empty list");
        return out;
    }

    long long integer(const std::string& key) const {
        const auto v = to_integer(entries.at(key).value);
        if (!v) fail(key, "expected an integer, got '" + entries.at(key).value + "'");
        return *v;
    }

    bool flag(const std::string& key) const {
        const std::string& v = entries.at(key).value;
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        fail(key, "expected true or false, got '" + v + "'");
    }
};

inline Document tokenize(std::string_view text) {
    Document doc;
    std::string section = "run";
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view raw = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        const auto hash = raw.find_first_of("#;");
        std::string_view line = trim(raw.substr(0, hash));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') {
                throw config_error("line " + std::to_string(line_no) + ": malformed section header", "", line_no);
            }
            section = std::string(trim(line.substr(1, line.size() - 2)));
            std::replace(section.begin(), section.end(), '-', '_');
            bool known = false;
            for (const auto& [k, spec] : key_table()) known = known || k.rfind(section + ".", 0) == 0;
            if (!known) {
                throw config_error("line " + std::to_string(line_no) + ": unknown section [" + section + "]", section,
                                   line_no);
            }
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw config_error("line " + std::to_string(line_no) + ": expected key = value", "", line_no);
        }
        const std::string key = section + "." + std::string(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (!key_table().count(key)) {
            throw config_error("line " + std::to_string(line_no) + ": unknown key '" + key + "'", key, line_no);
        }
        if (doc.entries.count(key)) {
            throw config_error("line " + std::to_string(line_no) + ": duplicate key '" + key + "'", key, line_no);
        }
        doc.entries[key] = {value, line_no};
    }
    return doc;
}

inline std::vector<std::string> required_keys(Mode m) {
    switch (m) {
        case Mode::ground_state:
        case Mode::oracle: return {"ground_state.omega_alpha"};
        case Mode::spectra: return {"sim.delta", "sim.gamma_a", "sim.gamma_b", "sim.gamma_L"};
        case Mode::sweep: return {"sim.delta", "sim.gamma_a", "sim.gamma_b", "sim.gamma_L", "sweep.couplings"};
        case Mode::stability: return {"sim.delta", "sim.gamma_a", "sim.gamma_b", "sim.gamma_L"};
        case Mode::calibrate:
            return {"pump.chi",   "pump.c_B",    "pump.c_R",    "pump.omega_a", "pump.omega_b",
                    "pump.delta", "sim.gamma_a", "sim.gamma_b", "sim.gamma_L"};
        case Mode::validate_rwa: return {};
    }
    return {};
}

inline GridSpec default_grid(Mode m) {
    switch (m) {
        case Mode::ground_state: return {0.01, 0.49, 49, {}};
        case Mode::spectra:
        case Mode::sweep: return {-3.0, 3.0, 2001, {}};
        case Mode::stability: return {0.0, 1.0, 201, {}};
        case Mode::oracle: return {0.0, 0.0, 0, {0.1, 0.3, 0.45}};
        case Mode::calibrate:
        case Mode::validate_rwa: return {};
    }
    return {};
}

}  // namespace detail

/// Parses and validates a configuration document. `mode_override` (the CLI
/// subcommand) supplies the mode; a conflicting run.mode in the document is an error.
inline RunConfig parse_config(std::string_view text, std::optional<Mode> mode_override = std::nullopt,
                              std::optional<Units> units_override = std::nullopt) {
    using detail::Kind;
    const detail::Document doc = detail::tokenize(text);
    RunConfig c;

    if (doc.has("run.mode")) {
        const auto m = parse_mode(doc.entries.at("run.mode").value);
        if (!m) doc.fail("run.mode", "unknown mode '" + doc.entries.at("run.mode").value + "'");
        if (mode_override && *m != *mode_override) {
            doc.fail("run.mode", "document mode '" + to_string(*m) + "' conflicts with subcommand '" +
                                     to_string(*mode_override) + "'");
        }
        c.mode = *m;
    } else if (mode_override) {
        c.mode = *mode_override;
    }

    std::vector<std::string> missing;
    if (!doc.has("run.mode") && !mode_override) missing.push_back("run.mode");
    if (missing.empty()) {
        for (const auto& k : detail::required_keys(c.mode)) {
            if (!doc.has(k)) missing.push_back(k);
        }
    }
    if (!missing.empty()) {
        std::string list;
        for (const auto& k : missing) list += (list.empty() ? "" : ", ") + k;
        throw config_error("missing required keys: " + list, missing.front(), 0);
    }

    if (doc.has("run.units")) {
        const std::string& u = doc.entries.at("run.units").value;
        if (u == "angular") {
            c.units = Units::angular;
        } else if (u == "cyclic") {
            c.units = Units::cyclic;
        } else {
            doc.fail("run.units", "expected angular or cyclic, got '" + u + "'");
        }
    }
    if (units_override) c.units = *units_override;
    const double freq_scale = c.units == Units::cyclic ? two_pi : 1.0;

    const auto real = [&](const std::string& key, double& dst) {
        if (doc.has(key)) dst = doc.real(key, detail::key_table().at(key).frequency ? freq_scale : 1.0);
    };
    const auto opt_real = [&](const std::string& key, std::optional<double>& dst) {
        if (doc.has(key)) dst = doc.real(key, detail::key_table().at(key).frequency ? freq_scale : 1.0);
    };
    const auto integer = [&](const std::string& key, auto& dst, long long lo) {
        if (!doc.has(key)) return;
        const long long v = doc.integer(key);
        if (v < lo) doc.fail(key, "value " + std::to_string(v) + " out of range (must be >= " + std::to_string(lo) + ")");
        dst = static_cast<std::remove_reference_t<decltype(dst)>>(v);
    };
    const auto require = [&](const std::string& key, bool ok, const std::string& rule) {
        if (doc.has(key) && !ok) doc.fail(key, "value " + doc.entries.at(key).value + " out of range (" + rule + ")");
    };

    if (doc.has("run.output")) c.output = doc.entries.at("run.output").value;
    if (doc.has("run.ellipses")) c.ellipses = doc.entries.at("run.ellipses").value;
    integer("run.workers", c.workers, 0);
    if (doc.has("run.force")) c.force = doc.flag("run.force");

    real("ground_state.omega_alpha", c.omega_alpha);
    c.omega_beta = c.omega_alpha;
    real("ground_state.omega_beta", c.omega_beta);
    require("ground_state.omega_alpha", c.omega_alpha > 0.0, "must be > 0");
    require("ground_state.omega_beta", c.omega_beta > 0.0, "must be > 0");

    real("sim.delta", c.delta);
    real("sim.G_over_delta", c.G_over_delta);
    opt_real("sim.G_B_over_delta", c.G_B_over_delta);
    opt_real("sim.G_R_over_delta", c.G_R_over_delta);
    real("sim.gamma_a", c.gamma_a);
    real("sim.gamma_b", c.gamma_b);
    real("sim.gamma_L", c.gamma_L);
    real("sim.thermal_occupancy", c.thermal_occupancy);
    opt_real("sim.omega_a", c.omega_a);
    opt_real("sim.omega_b", c.omega_b);
    require("sim.delta", c.delta > 0.0, "must be > 0");
    require("sim.gamma_a", c.gamma_a >= 0.0, "must be >= 0");
    require("sim.gamma_b", c.gamma_b >= 0.0, "must be >= 0");
    require("sim.gamma_L", c.gamma_L >= 0.0, "must be >= 0");
    require("sim.thermal_occupancy", c.thermal_occupancy >= 0.0, "must be >= 0");
    require("sim.omega_a", c.omega_a.value_or(1.0) > 0.0, "must be > 0");
    require("sim.omega_b", c.omega_b.value_or(1.0) > 0.0, "must be > 0");
    if (doc.has("sim.gamma_a") && doc.has("sim.gamma_L") && !(c.gamma_a + c.gamma_L > 0.0)) {
        doc.fail("sim.gamma_a", "gamma_a + gamma_L must be > 0");
    }
    if (doc.has("sim.gamma_b") && doc.has("sim.gamma_L") && !(c.gamma_b + c.gamma_L > 0.0)) {
        doc.fail("sim.gamma_b", "gamma_b + gamma_L must be > 0");
    }

    if (doc.has("sweep.couplings")) c.couplings = doc.list("sweep.couplings");

    real("pump.chi", c.chi);
    real("pump.c_B", c.c_B);
    real("pump.c_R", c.c_R);
    real("pump.c_B_phase", c.c_B_phase);
    real("pump.c_R_phase", c.c_R_phase);
    real("pump.omega_a", c.pump_omega_a);
    real("pump.omega_b", c.pump_omega_b);
    real("pump.delta", c.pump_delta);
    real("pump.rwa_frequency_ratio", c.rwa_frequency_ratio);
    real("pump.rwa_detuning_ratio", c.rwa_detuning_ratio);
    require("pump.chi", c.chi >= 0.0, "must be >= 0");
    require("pump.c_B", c.c_B >= 0.0, "must be >= 0; use c_B_phase for the phase");
    require("pump.c_R", c.c_R >= 0.0, "must be >= 0; use c_R_phase for the phase");
    require("pump.omega_a", c.pump_omega_a > 0.0, "must be > 0");
    require("pump.omega_b", c.pump_omega_b > 0.0, "must be > 0");
    require("pump.rwa_frequency_ratio", c.rwa_frequency_ratio > 0.0, "must be > 0");
    require("pump.rwa_detuning_ratio", c.rwa_detuning_ratio > 0.0, "must be > 0");

    const std::vector<std::string> feas = {"feasibility.xi_a", "feasibility.xi_b", "feasibility.Q_a",
                                           "feasibility.Q_b"};
    const bool any_feas = std::any_of(feas.begin(), feas.end(), [&](const auto& k) { return doc.has(k); });
    if (any_feas) {
        for (const auto& k : feas) {
            if (!doc.has(k)) throw config_error("missing required keys: " + k, k, 0);
        }
        c.has_feasibility = true;
    }
    real("feasibility.xi_a", c.xi_a);
    real("feasibility.xi_b", c.xi_b);
    real("feasibility.Q_a", c.Q_a);
    real("feasibility.Q_b", c.Q_b);
    real("feasibility.target_G_over_delta", c.target_G_over_delta);
    require("feasibility.xi_a", c.xi_a > 0.0 && c.xi_a < 1.0, "must be in (0, 1)");
    require("feasibility.xi_b", c.xi_b > 0.0 && c.xi_b < 1.0, "must be in (0, 1)");
    require("feasibility.Q_a", c.Q_a > 0.0, "must be > 0");
    require("feasibility.Q_b", c.Q_b > 0.0, "must be > 0");
    require("feasibility.target_G_over_delta", c.target_G_over_delta >= 0.0, "must be >= 0");

    integer("fock.n_max", c.n_max, 2);
    integer("fock.convergence_pad", c.convergence_pad, 0);
    real("fock.delta", c.fock_delta);
    real("fock.omega_a_over_delta", c.omega_a_over_delta);
    real("fock.omega_b_over_delta", c.omega_b_over_delta);
    real("fock.G_over_delta", c.fock_G_over_delta);
    real("fock.duration_periods", c.duration_periods);
    real("fock.tolerance", c.tolerance);
    integer("fock.samples", c.samples, 2);
    require("fock.delta", c.fock_delta > 0.0, "must be > 0");
    require("fock.omega_a_over_delta", c.omega_a_over_delta > 0.0, "must be > 0");
    require("fock.omega_b_over_delta", c.omega_b_over_delta > 0.0, "must be > 0");
    require("fock.duration_periods", c.duration_periods > 0.0, "must be > 0");
    require("fock.tolerance", c.tolerance > 0.0, "must be > 0");

    c.grid = detail::default_grid(c.mode);
    if (doc.has("grid.values")) {
        c.grid.values = doc.list("grid.values");
    } else {
        real("grid.min", c.grid.min);
        real("grid.max", c.grid.max);
        integer("grid.points", c.grid.points, 1);
        if (doc.has("grid.min") || doc.has("grid.max") || doc.has("grid.points")) c.grid.values.clear();
    }
    if (doc.has("grid.scale") && doc.entries.at("grid.scale").value != "linear") {
        doc.fail("grid.scale", "only 'linear' is supported");
    }
    if (c.grid.values.empty() && c.grid.points > 1 && !(c.grid.max > c.grid.min) &&
        (c.mode != Mode::calibrate && c.mode != Mode::validate_rwa)) {
        doc.fail(doc.has("grid.max") ? "grid.max" : "grid.min", "grid.max must exceed grid.min");
    }
    return c;
}

/// Parses "MIN:MAX:N".
inline GridSpec parse_grid_flag(std::string_view s) {
    const auto c1 = s.find(':');
    const auto c2 = c1 == std::string_view::npos ? c1 : s.find(':', c1 + 1);
    if (c2 == std::string_view::npos) throw config_error("--grid expects MIN:MAX:N", "grid", 0);
    const auto lo = detail::to_double(s.substr(0, c1));
    const auto hi = detail::to_double(s.substr(c1 + 1, c2 - c1 - 1));
    const auto n = detail::to_integer(s.substr(c2 + 1));
    if (!lo || !hi || !n || *n < 1 || (*n > 1 && !(*hi > *lo))) {
        throw config_error("--grid expects MIN:MAX:N with MAX > MIN and N >= 1", "grid", 0);
    }
    return {*lo, *hi, static_cast<std::size_t>(*n), {}};
}

namespace detail {

/// Shortest text that parses back to the same double.
inline std::string fmt_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string fmt_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + fmt_double(v[k]);
    return s;
}

}  // namespace detail

/// The fully resolved configuration (angular units) as a config document.
/// Parsing this text yields the same RunConfig up to the units field.
inline std::string resolved_config_text(const RunConfig& c) {
    using detail::fmt_double;
    std::ostringstream os;
    const auto kv = [&os](const std::string& k, const std::string& v) { os << k << " = " << v << '\n'; };
    os << "[run]\n";
    kv("mode", to_string(c.mode));
    kv("units", "angular");
    if (!c.output.empty()) kv("output", c.output);
    if (!c.ellipses.empty()) kv("ellipses", c.ellipses);
    kv("workers", std::to_string(c.workers));
    kv("force", c.force ? "true" : "false");

    switch (c.mode) {
        case Mode::ground_state:
        case Mode::oracle:
            os << "[ground_state]\n";
            kv("omega_alpha", fmt_double(c.omega_alpha));
            kv("omega_beta", fmt_double(c.omega_beta));
            if (c.mode == Mode::oracle) {
                os << "[fock]\n";
                kv("n_max", std::to_string(c.n_max));
                kv("convergence_pad", std::to_string(c.convergence_pad));
            }
            break;
        case Mode::spectra:
        case Mode::sweep:
        case Mode::stability:
            os << "[sim]\n";
            kv("delta", fmt_double(c.delta));
            kv("G_over_delta", fmt_double(c.G_over_delta));
            if (c.G_B_over_delta) kv("G_B_over_delta", fmt_double(*c.G_B_over_delta));
            if (c.G_R_over_delta) kv("G_R_over_delta", fmt_double(*c.G_R_over_delta));
            kv("gamma_a", fmt_double(c.gamma_a));
            kv("gamma_b", fmt_double(c.gamma_b));
            kv("gamma_L", fmt_double(c.gamma_L));
            kv("thermal_occupancy", fmt_double(c.thermal_occupancy));
            if (c.omega_a) kv("omega_a", fmt_double(*c.omega_a));
            if (c.omega_b) kv("omega_b", fmt_double(*c.omega_b));
            if (c.mode == Mode::sweep) {
                os << "[sweep]\n";
                kv("couplings", detail::fmt_list(c.couplings));
            }
            break;
        case Mode::calibrate:
            os << "[sim]\n";
            kv("gamma_a", fmt_double(c.gamma_a));
            kv("gamma_b", fmt_double(c.gamma_b));
            kv("gamma_L", fmt_double(c.gamma_L));
            os << "[pump]\n";
            kv("chi", fmt_double(c.chi));
            kv("c_B", fmt_double(c.c_B));
            kv("c_R", fmt_double(c.c_R));
            kv("c_B_phase", fmt_double(c.c_B_phase));
            kv("c_R_phase", fmt_double(c.c_R_phase));
            kv("omega_a", fmt_double(c.pump_omega_a));
            kv("omega_b", fmt_double(c.pump_omega_b));
            kv("delta", fmt_double(c.pump_delta));
            kv("rwa_frequency_ratio", fmt_double(c.rwa_frequency_ratio));
            kv("rwa_detuning_ratio", fmt_double(c.rwa_detuning_ratio));
            if (c.has_feasibility) {
                os << "[feasibility]\n";
                kv("xi_a", fmt_double(c.xi_a));
                kv("xi_b", fmt_double(c.xi_b));
                kv("Q_a", fmt_double(c.Q_a));
                kv("Q_b", fmt_double(c.Q_b));
                kv("target_G_over_delta", fmt_double(c.target_G_over_delta));
            }
            break;
        case Mode::validate_rwa:
            os << "[fock]\n";
            kv("n_max", std::to_string(c.n_max));
            kv("convergence_pad", std::to_string(c.convergence_pad));
            kv("delta", fmt_double(c.fock_delta));
            kv("omega_a_over_delta", fmt_double(c.omega_a_over_delta));
            kv("omega_b_over_delta", fmt_double(c.omega_b_over_delta));
            kv("G_over_delta", fmt_double(c.fock_G_over_delta));
            kv("duration_periods", fmt_double(c.duration_periods));
            kv("tolerance", fmt_double(c.tolerance));
            kv("samples", std::to_string(c.samples));
            break;
    }

    if (c.mode != Mode::calibrate && c.mode != Mode::validate_rwa) {
        os << "[grid]\n";
        if (!c.grid.values.empty()) {
            kv("values", detail::fmt_list(c.grid.values));
        } else {
            kv("min", fmt_double(c.grid.min));
            kv("max", fmt_double(c.grid.max));
            kv("points", std::to_string(c.grid.points));
            kv("scale", "linear");
        }
    }
    return os.str();
}

}  // namespace usc
