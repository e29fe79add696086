#pragma once

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ibps {

/// Raised for every configuration problem: unreadable file, malformed line,
/// unknown key, bad value, violated invariant. The driver maps it to its
/// config-error exit status.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline std::string strip(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

} // namespace detail

/// Parse flat "key = value" text. '#' starts a comment, blank lines are
/// skipped, keys must be unique. Values keep inner spaces but are trimmed.
inline std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::strip(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected 'key = value', got '" + line + "'");
        const std::string key = detail::strip(line.substr(0, eq));
        const std::string value = detail::strip(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
        if (kv.count(key))
            throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" +
                              key + "'");
        kv[key] = value;
    }
    return kv;
}

inline std::map<std::string, std::string> load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str());
}

/// Everything a run needs, parsed and validated. Scenario-specific keys are
/// optional and fall back to the scenario's published defaults; -1 on an
/// integer (or a negative double) below means "use the scenario default".
struct RunConfig {
    std::string scenario; ///< taylor-green | dipole | dipole-periodic | cylinder | cavity
    int n = 256;          ///< grid points per side
    double dt = 0.0;
    double t_end = 0.0;
    int snapshot_every = 0; ///< steps between snapshots; 0 writes first and last only
    double c_alpha = 0.0;   ///< > 0 adds a Helmholtz-filtered vorticity snapshot
    std::string restart;    ///< optional vorticity snapshot to resume from

    // Conditioning overrides.
    int order = -1;
    int repetitions = -1;
    int margin_cells = -1;
    int rise_cells = -1;
    double margin = -1.0; ///< physical window band override (dipole only)
    double rise = -1.0;

    // Physics overrides.
    double nu = -1.0;
    double domain_length = -1.0; ///< dipole only: pin the periodic box size

    // Dipole.
    double omega_e = -1.0;
    double r0 = -1.0;
    double half_width = -1.0;

    // Cylinder.
    double diameter = -1.0;
    double frequency = -1.0;
    double amplitude = -1.0;

    // Cavity.
    double lid_speed = -1.0;
    double side = -1.0;
    int active_cells = -1;
    int wall_cells = -1;
    int lid_cells = -1;
    int channel_cells = -1;
};

namespace detail {

inline double parse_double(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0')
        throw ConfigError("config key '" + key + "': not a number: '" + value + "'");
    return v;
}

inline int parse_int(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const long v = std::strtol(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0')
        throw ConfigError("config key '" + key + "': not an integer: '" + value + "'");
    return static_cast<int>(v);
}

} // namespace detail

/// Turn parsed key-value pairs into a validated RunConfig. Unknown keys are
/// errors so typos cannot silently fall back to defaults.
inline RunConfig run_config_from_map(const std::map<std::string, std::string>& kv) {
    static const std::set<std::string> known = {
        "scenario",    "n",       "dt",           "t_end",        "snapshot_every",
        "c_alpha",     "restart", "order",        "repetitions",  "margin_cells",
        "rise_cells",  "margin",  "rise",         "nu",           "domain_length",
        "omega_e",     "r0",      "half_width",   "diameter",     "frequency",
        "amplitude",   "lid_speed", "side",       "active_cells", "wall_cells",
        "lid_cells",   "channel_cells"};
    for (const auto& [key, value] : kv)
        if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");

    RunConfig c;
    auto get = [&kv](const char* key) -> const std::string* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    auto want_int = [&](const char* key, int& slot) {
        if (const std::string* v = get(key)) slot = detail::parse_int(key, *v);
    };
    auto want_double = [&](const char* key, double& slot) {
        if (const std::string* v = get(key)) slot = detail::parse_double(key, *v);
    };

    const std::string* sc = get("scenario");
    if (!sc) throw ConfigError("config key 'scenario' is required");
    static const std::set<std::string> scenarios = {"taylor-green", "dipole", "dipole-periodic",
                                                    "cylinder", "cavity"};
    if (!scenarios.count(*sc)) throw ConfigError("unknown scenario '" + *sc + "'");
    c.scenario = *sc;

    want_int("n", c.n);
    want_double("dt", c.dt);
    want_double("t_end", c.t_end);
    want_int("snapshot_every", c.snapshot_every);
    want_double("c_alpha", c.c_alpha);
    if (const std::string* v = get("restart")) c.restart = *v;
    want_int("order", c.order);
    want_int("repetitions", c.repetitions);
    want_int("margin_cells", c.margin_cells);
    want_int("rise_cells", c.rise_cells);
    want_double("margin", c.margin);
    want_double("rise", c.rise);
    want_double("nu", c.nu);
    want_double("domain_length", c.domain_length);
    want_double("omega_e", c.omega_e);
    want_double("r0", c.r0);
    want_double("half_width", c.half_width);
    want_double("diameter", c.diameter);
    want_double("frequency", c.frequency);
    want_double("amplitude", c.amplitude);
    want_double("lid_speed", c.lid_speed);
    want_double("side", c.side);
    want_int("active_cells", c.active_cells);
    want_int("wall_cells", c.wall_cells);
    want_int("lid_cells", c.lid_cells);
    want_int("channel_cells", c.channel_cells);

    if (c.n < 4 || c.n % 2 != 0) throw ConfigError("config key 'n' must be an even integer >= 4");
    if (!get("dt") || c.dt <= 0.0) throw ConfigError("config key 'dt' is required and must be > 0");
    if (!get("t_end") || c.t_end < 0.0)
        throw ConfigError("config key 't_end' is required and must be >= 0");
    if (c.snapshot_every < 0) throw ConfigError("config key 'snapshot_every' must be >= 0");
    if (get("c_alpha") && c.c_alpha <= 0.0)
        throw ConfigError("config key 'c_alpha' must be > 0 when given");
    if (c.order != -1 && (c.order < 0 || c.order > 2))
        throw ConfigError("config key 'order' must be 0, 1 or 2");
    if (c.repetitions != -1 && (c.repetitions < 1 || c.repetitions > 3))
        throw ConfigError("config key 'repetitions' must be 1, 2 or 3");
    auto positive = [](const char* key, double v, bool set) {
        if (set && v <= 0.0)
            throw ConfigError(std::string("config key '") + key + "' must be > 0");
    };
    positive("margin", c.margin, get("margin") != nullptr);
    positive("rise", c.rise, get("rise") != nullptr);
    if ((c.margin > 0.0) != (c.rise > 0.0))
        throw ConfigError("config keys 'margin' and 'rise' must be given together");
    positive("nu", c.nu, get("nu") != nullptr);
    positive("domain_length", c.domain_length, get("domain_length") != nullptr);
    positive("r0", c.r0, get("r0") != nullptr);
    positive("half_width", c.half_width, get("half_width") != nullptr);
    positive("diameter", c.diameter, get("diameter") != nullptr);
    positive("frequency", c.frequency, get("frequency") != nullptr);
    positive("amplitude", c.amplitude, get("amplitude") != nullptr);
    positive("side", c.side, get("side") != nullptr);
    return c;
}

inline RunConfig load_run_config(const std::string& path) {
    return run_config_from_map(load_config_file(path));
}

} // namespace ibps
