#include "rept/params.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace rept {

double SimulationParams::gamma_tilde() const { return std::sqrt(2.0 * gamma); }

void SimulationParams::validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("config: " + msg); };
    if (!(reynolds > 0.0)) fail("reynolds must be positive");
    if (!(omega > 0.0 && omega < 1.0)) fail("omega must lie strictly in (0, 1)");
    if (!(weissenberg > 0.0)) fail("weissenberg must be positive");
    if (!(mu > 0.0)) fail("mu must be positive");
    if (!(gamma > 0.0)) fail("gamma must be positive");
    if (n < 4) fail("n must be at least 4");
    if (n_t < 2) fail("n_t must be at least 2");
    if (n_s < 2 || n_s % 2 != 0) fail("n_s must be even and at least 2");
    if (n_q < 8) fail("n_q must be at least 8");
    if (p_max < 1 || p_max % 2 == 0) fail("p_max must be odd and positive");
    if (!(t_max > 0.0)) fail("t_max must be positive");
    if (!(dt > 0.0)) fail("dt must be positive");
    if (!(t_end > 0.0)) fail("t_end must be positive");
    const double slaved = weissenberg * age_dt();
    if (std::abs(dt - slaved) > 1e-12 * std::max(1.0, slaved))
        fail("age grid out of lockstep: dt must equal weissenberg * t_max / n_t (here " +
             std::to_string(slaved) + ")");
    if (mode != "full" && mode != "ia" && mode != "newtonian")
        fail("mode must be full, ia or newtonian");
    if (scenario != "rest" && scenario != "startup_shear" && scenario != "taylor_green")
        fail("scenario must be rest, startup_shear or taylor_green");
    if (output_every < 1) fail("output_every must be at least 1");
    if (snapshot_every < 0) fail("snapshot_every must be nonnegative");
}

NondimensionalTriple nondimensionalize(const DimensionalInputs& d) {
    auto pos = [](double v, const char* name) {
        if (!(v > 0.0))
            throw std::invalid_argument(std::string("nondimensionalize: ") + name +
                                        " must be positive");
    };
    pos(d.rho, "rho");
    pos(d.eta_s, "eta_s");
    pos(d.g_e, "g_e");
    pos(d.ell, "ell");
    pos(d.d_e, "d_e");
    pos(d.length, "length");
    pos(d.velocity, "velocity");
    const double eta_e = d.length * d.g_e / d.velocity;
    const double eta = d.eta_s + eta_e;
    NondimensionalTriple t;
    t.reynolds = d.rho * d.velocity * d.length / eta;
    t.omega = eta_e / eta;
    t.weissenberg = (d.ell * d.ell / d.d_e) * (d.velocity / d.length);
    return t;
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double as_number(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw std::invalid_argument("config: bad number for " + key + ": '" + v + "'");
    return x;
}

int as_int(const std::string& key, const std::string& v) {
    const double x = as_number(key, v);
    const double r = std::round(x);
    if (std::abs(x - r) > 0.0)
        throw std::invalid_argument("config: " + key + " must be an integer");
    return static_cast<int>(r);
}

std::string as_string(const std::string& key, const std::string& v) {
    if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') ||
                          (v.front() == '\'' && v.back() == '\'')))
        return v.substr(1, v.size() - 2);
    if (v.find_first_of(" \t") != std::string::npos)
        throw std::invalid_argument("config: unquoted string with spaces for " + key);
    return v;
}

bool as_bool(const std::string& key, const std::string& v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw std::invalid_argument("config: " + key + " must be true or false");
}

using Setter = std::function<void(SimulationParams&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"flow.reynolds", [](auto& p, auto& k, auto& v) { p.reynolds = as_number(k, v); }},
        {"flow.omega", [](auto& p, auto& k, auto& v) { p.omega = as_number(k, v); }},
        {"polymer.weissenberg",
         [](auto& p, auto& k, auto& v) { p.weissenberg = as_number(k, v); }},
        {"polymer.mu", [](auto& p, auto& k, auto& v) { p.mu = as_number(k, v); }},
        {"polymer.gamma", [](auto& p, auto& k, auto& v) { p.gamma = as_number(k, v); }},
        {"polymer.mode", [](auto& p, auto& k, auto& v) { p.mode = as_string(k, v); }},
        {"polymer.p_max", [](auto& p, auto& k, auto& v) { p.p_max = as_int(k, v); }},
        {"polymer.n_q", [](auto& p, auto& k, auto& v) { p.n_q = as_int(k, v); }},
        {"grids.n", [](auto& p, auto& k, auto& v) { p.n = as_int(k, v); }},
        {"grids.n_t", [](auto& p, auto& k, auto& v) { p.n_t = as_int(k, v); }},
        {"grids.n_s", [](auto& p, auto& k, auto& v) { p.n_s = as_int(k, v); }},
        {"grids.t_max", [](auto& p, auto& k, auto& v) { p.t_max = as_number(k, v); }},
        {"grids.dt", [](auto& p, auto& k, auto& v) { p.dt = as_number(k, v); }},
        {"scenario.name", [](auto& p, auto& k, auto& v) { p.scenario = as_string(k, v); }},
        {"scenario.amplitude",
         [](auto& p, auto& k, auto& v) { p.amplitude = as_number(k, v); }},
        {"scenario.t_end", [](auto& p, auto& k, auto& v) { p.t_end = as_number(k, v); }},
        {"output.dir", [](auto& p, auto& k, auto& v) { p.output_dir = as_string(k, v); }},
        {"output.every", [](auto& p, auto& k, auto& v) { p.output_every = as_int(k, v); }},
        {"output.snapshot_every",
         [](auto& p, auto& k, auto& v) { p.snapshot_every = as_int(k, v); }},
        {"output.abort_on_violation",
         [](auto& p, auto& k, auto& v) { p.abort_on_violation = as_bool(k, v); }},
    };
    return table;
}

void assign(SimulationParams& p, const std::string& key, const std::string& value) {
    const auto it = setters().find(key);
    if (it == setters().end()) throw std::invalid_argument("config: unknown key " + key);
    it->second(p, key, value);
}

}  // namespace

SimulationParams parse_config(std::istream& in) {
    SimulationParams p;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config: malformed section at line " +
                                            std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected key = value at line " +
                                        std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw std::invalid_argument("config: key " + key + " outside any section");
        assign(p, section + "." + key, value);
    }
    return p;
}

SimulationParams parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    return parse_config(in);
}

void apply_override(SimulationParams& p, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw std::invalid_argument("override must look like section.key=value: " + assignment);
    assign(p, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

}  // namespace rept
