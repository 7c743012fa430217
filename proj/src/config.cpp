#include "config.hpp"

#include "errors.hpp"

#include <json.hpp>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace vsel {

const char* engine_name(Engine e) {
    switch (e) {
        case Engine::analytic: return "analytic";
        case Engine::classical_quasistatic: return "classical-quasistatic";
        case Engine::classical_dynamic: return "classical-dynamic";
        case Engine::quantum: return "quantum";
    }
    return "?";
}

double RunConfig::t0_resolved() const {
    if (t0_given) return t0;
    return temperature_from_packet_width(x0, constants());
}

double RunConfig::x0_resolved() const {
    if (x0_given) return x0;
    return packet_width_from_temperature(t0, constants());
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(const std::string& key, int line, const std::string& msg) {
    std::ostringstream os;
    os << "config error";
    if (line > 0) os << " (line " << line << ")";
    if (!key.empty()) os << " [" << key << "]";
    os << ": " << msg;
    throw ConfigError(os.str());
}

double parse_number(const std::string& key, int line, const std::string& text) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || trim(end).size() > 0)
        fail(key, line, "expected a plain number, got '" + text + "'");
    return v;
}

// number + mandatory unit suffix, converted to internal units
double parse_dimensioned(const std::string& key, int line, const std::string& text,
                         const std::string& dimension, const PhysicalConstants& pc) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str())
        fail(key, line, "expected '<number> <unit>', got '" + text + "'");
    const std::string unit = trim(end);
    if (unit.empty())
        fail(key, line, "missing unit suffix on dimensioned value '" + text + "'");

    if (dimension == "length") {
        if (unit == "um") return v;
        if (unit == "mm") return v * 1e3;
        fail(key, line, "unit '" + unit + "' is not a length (um, mm)");
    } else if (dimension == "temperature") {
        if (unit == "nK") return v;
        if (unit == "uK") return v * 1e3;
        fail(key, line, "unit '" + unit + "' is not a temperature (nK, uK)");
    } else if (dimension == "velocity") {
        if (unit == "um/ms" || unit == "mm/s") return v;
        fail(key, line, "unit '" + unit + "' is not a velocity (um/ms, mm/s)");
    } else if (dimension == "time") {
        if (unit == "ms") return v;
        if (unit == "s") return v * 1e3;
        fail(key, line, "unit '" + unit + "' is not a time (ms, s)");
    } else if (dimension == "gradient") {
        if (unit == "nK/um") return v;
        if (unit == "G/cm") {
            if (v < 0.0) fail(key, line, "gradient must be non-negative");
            return gradient_to_internal(v, pc);
        }
        fail(key, line, "unit '" + unit + "' is not a gradient (nK/um, G/cm)");
    }
    fail(key, line, "internal: unknown dimension " + dimension);
}

std::int64_t parse_integer(const std::string& key, int line, const std::string& text) {
    char* end = nullptr;
    const long long v = std::strtoll(text.c_str(), &end, 10);
    if (end == text.c_str() || trim(end).size() > 0)
        fail(key, line, "expected an integer, got '" + text + "'");
    return v;
}

struct Assembler {
    RunConfig cfg;
    PhysicalConstants pc;  // updated as mass/mu overrides arrive
    bool engine_given = false;
    bool r0_given = false, gradient_given = false, w0_given = false, u0_given = false;

    void apply(const std::string& key, const std::string& value, int line) {
        if (key == "engine") {
            if (value == "analytic") cfg.engine = Engine::analytic;
            else if (value == "classical-quasistatic") cfg.engine = Engine::classical_quasistatic;
            else if (value == "classical-dynamic") cfg.engine = Engine::classical_dynamic;
            else if (value == "quantum") cfg.engine = Engine::quantum;
            else fail(key, line, "unknown engine '" + value + "'");
            engine_given = true;
        } else if (key == "r0") {
            cfg.r0 = parse_dimensioned(key, line, value, "length", pc);
            r0_given = true;
        } else if (key == "T0") {
            cfg.t0 = parse_dimensioned(key, line, value, "temperature", pc);
            cfg.t0_given = true;
        } else if (key == "x0") {
            cfg.x0 = parse_dimensioned(key, line, value, "length", pc);
            cfg.x0_given = true;
        } else if (key == "gradient") {
            cfg.gradient = parse_dimensioned(key, line, value, "gradient", pc);
            gradient_given = true;
        } else if (key == "U0") {
            cfg.u0_list = {parse_dimensioned(key, line, value, "temperature", pc)};
            cfg.u0_was_list = false;
            u0_given = true;
        } else if (key == "U0_list") {
            cfg.u0_list.clear();
            std::stringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ',')) {
                item = trim(item);
                if (item.empty()) continue;
                cfg.u0_list.push_back(parse_dimensioned(key, line, item, "temperature", pc));
            }
            if (cfg.u0_list.empty()) fail(key, line, "empty U0_list");
            cfg.u0_was_list = true;
            u0_given = true;
        } else if (key == "w0") {
            cfg.w0 = parse_dimensioned(key, line, value, "length", pc);
            w0_given = true;
        } else if (key == "x_D") {
            cfg.x_d = parse_dimensioned(key, line, value, "length", pc);
            cfg.x_d_given = true;
        } else if (key == "x_start") {
            cfg.x_start = parse_dimensioned(key, line, value, "length", pc);
            cfg.x_start_given = true;
        } else if (key == "x_end") {
            cfg.x_end = parse_dimensioned(key, line, value, "length", pc);
            cfg.x_end_given = true;
        } else if (key == "speed") {
            if (value == "auto") cfg.speed.reset();
            else cfg.speed = parse_dimensioned(key, line, value, "velocity", pc);
        } else if (key == "dt") {
            if (value == "auto") cfg.dt.reset();
            else cfg.dt = parse_dimensioned(key, line, value, "time", pc);
        } else if (key == "hold") {
            if (value == "auto") cfg.hold.reset();
            else cfg.hold = parse_dimensioned(key, line, value, "time", pc);
        } else if (key == "grid_min") {
            cfg.grid_min = parse_dimensioned(key, line, value, "length", pc);
        } else if (key == "grid_max") {
            cfg.grid_max = parse_dimensioned(key, line, value, "length", pc);
        } else if (key == "grid_points") {
            cfg.grid_points = static_cast<int>(parse_integer(key, line, value));
        } else if (key == "n_packets") {
            cfg.n_packets = static_cast<int>(parse_integer(key, line, value));
        } else if (key == "packet_mode") {
            if (value == "incoherent") cfg.coherent = false;
            else if (value == "coherent") cfg.coherent = true;
            else fail(key, line, "packet_mode must be incoherent or coherent");
        } else if (key == "center_sampling") {
            if (value == "stratified") cfg.iid_centers = false;
            else if (value == "iid") cfg.iid_centers = true;
            else fail(key, line, "center_sampling must be stratified or iid");
        } else if (key == "n_particles") {
            cfg.n_particles = parse_integer(key, line, value);
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(parse_integer(key, line, value));
        } else if (key == "snapshot_every") {
            cfg.snapshot_every = parse_integer(key, line, value);
        } else if (key == "threads") {
            cfg.threads = static_cast<unsigned>(parse_integer(key, line, value));
        } else if (key == "mass_amu") {
            cfg.mass_amu = parse_number(key, line, value);
            pc.mass_amu = cfg.mass_amu;
        } else if (key == "mu_scale") {
            cfg.mu_scale = parse_number(key, line, value);
            pc.mu_scale = cfg.mu_scale;
        } else {
            fail(key, line, "unknown key");
        }
    }

    RunConfig finish() {
        if (!engine_given) fail("engine", 0, "missing required key");
        if (!r0_given) fail("r0", 0, "missing required key");
        if (!gradient_given) fail("gradient", 0, "missing required key");
        if (!w0_given) fail("w0", 0, "missing required key");
        if (!u0_given) fail("U0", 0, "missing required key (U0 or U0_list)");

        if (cfg.engine == Engine::quantum) {
            if (cfg.t0_given == cfg.x0_given)
                fail("T0/x0", 0, "the quantum engine takes exactly one of T0 and x0");
        } else if (!cfg.t0_given && !cfg.x0_given) {
            fail("T0", 0, "missing required key (T0 or x0)");
        }
        if (cfg.t0_given && !(cfg.t0 > 0.0)) fail("T0", 0, "must be positive");
        if (cfg.x0_given && !(cfg.x0 > 0.0)) fail("x0", 0, "must be positive");
        if (!(cfg.r0 > 0.0)) fail("r0", 0, "must be positive");
        if (cfg.gradient < 0.0) fail("gradient", 0, "must be non-negative");
        if (!(cfg.w0 > 0.0)) fail("w0", 0, "must be positive");
        for (double u0 : cfg.u0_list)
            if (u0 < 0.0) fail("U0", 0, "barrier heights must be non-negative");

        const bool dynamic =
            cfg.engine == Engine::classical_dynamic || cfg.engine == Engine::quantum;
        if (dynamic) {
            if (!cfg.x_start_given) fail("x_start", 0, "required for swept engines");
            if (!cfg.x_end_given) fail("x_end", 0, "required for swept engines");
            if (!(cfg.x_end > cfg.x_start)) fail("x_end", 0, "must exceed x_start");
            if (cfg.speed && !(*cfg.speed > 0.0)) fail("speed", 0, "must be positive");
            if (cfg.dt && !(*cfg.dt > 0.0)) fail("dt", 0, "must be positive");
            if (cfg.hold && *cfg.hold < 0.0) fail("hold", 0, "must be non-negative");
        }
        if (!cfg.x_d_given) cfg.x_d = cfg.x_start_given ? cfg.x_start : 0.0;

        if (cfg.engine == Engine::quantum) {
            if (!(cfg.grid_max > cfg.grid_min)) fail("grid_max", 0, "must exceed grid_min");
            if (cfg.grid_points < 4 || (cfg.grid_points & (cfg.grid_points - 1)) != 0)
                fail("grid_points", 0, "must be a power of two >= 4");
            if (cfg.n_packets < 1) fail("n_packets", 0, "must be at least 1");
        }
        if (cfg.engine == Engine::classical_quasistatic ||
            cfg.engine == Engine::classical_dynamic) {
            if (cfg.n_particles < 1) fail("n_particles", 0, "must be at least 1");
        }
        if (cfg.snapshot_every < 0) fail("snapshot_every", 0, "must be non-negative");
        if (cfg.threads < 1) cfg.threads = 1;
        if (!(cfg.mass_amu > 0.0)) fail("mass_amu", 0, "must be positive");
        if (!(cfg.mu_scale > 0.0)) fail("mu_scale", 0, "must be positive");
        return cfg;
    }
};

void parse_flat(Assembler& as, const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            fail("", lineno, "expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail("", lineno, "empty key");
        as.apply(key, value, lineno);
    }
}

void parse_json_text(Assembler& as, const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        fail("", 0, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) fail("", 0, "JSON config must be an object");
    for (const auto& [key, value] : j.items()) {
        std::string v;
        if (value.is_string()) v = value.get<std::string>();
        else if (value.is_number_integer()) v = std::to_string(value.get<long long>());
        else if (value.is_number_float()) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", value.get<double>());
            v = buf;
        } else fail(key, 0, "JSON values must be strings or numbers");
        as.apply(key, v, 0);
    }
}

bool looks_like_json(const std::string& text) {
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return c == '{';
    }
    return false;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

RunConfig parse_config(const std::string& text) {
    Assembler as;
    if (looks_like_json(text))
        parse_json_text(as, text);
    else
        parse_flat(as, text);
    return as.finish();
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config error: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void apply_override(RunConfig& cfg, const std::string& key, const std::string& value) {
    // re-validate through the assembler so overrides obey the same rules
    Assembler as;
    as.cfg = cfg;
    as.pc = cfg.constants();
    as.engine_given = as.r0_given = as.gradient_given = as.w0_given = as.u0_given = true;
    as.apply(key, value, 0);
    cfg = as.finish();
}

std::string normalized_echo(const RunConfig& cfg) {
    std::ostringstream os;
    os << "engine = " << engine_name(cfg.engine) << "\n";
    os << "r0 = " << fmt(cfg.r0) << " um\n";
    if (cfg.t0_given) os << "T0 = " << fmt(cfg.t0) << " nK\n";
    if (cfg.x0_given) os << "x0 = " << fmt(cfg.x0) << " um\n";
    os << "gradient = " << fmt(cfg.gradient) << " nK/um\n";
    if (cfg.u0_was_list) {
        os << "U0_list = ";
        for (std::size_t i = 0; i < cfg.u0_list.size(); ++i)
            os << (i ? ", " : "") << fmt(cfg.u0_list[i]) << " nK";
        os << "\n";
    } else {
        os << "U0 = " << fmt(cfg.u0_list.at(0)) << " nK\n";
    }
    os << "w0 = " << fmt(cfg.w0) << " um\n";
    os << "x_D = " << fmt(cfg.x_d) << " um\n";
    if (cfg.x_start_given) os << "x_start = " << fmt(cfg.x_start) << " um\n";
    if (cfg.x_end_given) os << "x_end = " << fmt(cfg.x_end) << " um\n";
    os << "speed = " << (cfg.speed ? fmt(*cfg.speed) + " um/ms" : "auto") << "\n";
    os << "dt = " << (cfg.dt ? fmt(*cfg.dt) + " ms" : "auto") << "\n";
    os << "hold = " << (cfg.hold ? fmt(*cfg.hold) + " ms" : "auto") << "\n";
    if (cfg.engine == Engine::quantum) {
        os << "grid_min = " << fmt(cfg.grid_min) << " um\n";
        os << "grid_max = " << fmt(cfg.grid_max) << " um\n";
        os << "grid_points = " << cfg.grid_points << "\n";
        os << "n_packets = " << cfg.n_packets << "\n";
        os << "packet_mode = " << (cfg.coherent ? "coherent" : "incoherent") << "\n";
        os << "center_sampling = " << (cfg.iid_centers ? "iid" : "stratified") << "\n";
    }
    if (cfg.engine == Engine::classical_quasistatic || cfg.engine == Engine::classical_dynamic)
        os << "n_particles = " << cfg.n_particles << "\n";
    os << "seed = " << cfg.seed << "\n";
    os << "snapshot_every = " << cfg.snapshot_every << "\n";
    os << "threads = " << cfg.threads << "\n";
    os << "mass_amu = " << fmt(cfg.mass_amu) << "\n";
    os << "mu_scale = " << fmt(cfg.mu_scale) << "\n";
    return os.str();
}

double parse_quantity(const std::string& text, const std::string& dimension,
                      const PhysicalConstants& pc) {
    return parse_dimensioned(dimension, 0, trim(text), dimension, pc);
}

} // namespace vsel
