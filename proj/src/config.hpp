#ifndef VSEL_CONFIG_HPP
#define VSEL_CONFIG_HPP

#include "units.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace vsel {

enum class Engine { analytic, classical_quasistatic, classical_dynamic, quantum };

const char* engine_name(Engine e);

// A validated run description, all values already in internal units.
// Parsed from flat `key = value` text (# comments, mandatory unit suffixes on
// dimensioned values) or from a JSON object with the same keys and string
// values.
struct RunConfig {
    Engine engine = Engine::analytic;

    // cloud
    double r0 = 0.0;             // um
    double t0 = 0.0;             // nK
    double x0 = 0.0;             // um; > 0 iff given (or derived for quantum)
    bool t0_given = false;
    bool x0_given = false;

    // potential
    double gradient = 0.0;       // nK/um
    std::vector<double> u0_list; // nK; single entry when U0 given
    bool u0_was_list = false;
    double w0 = 0.0;             // um

    // analytic lower spatial limit; defaults to x_start
    double x_d = 0.0;
    bool x_d_given = false;

    // sweep schedule
    double x_start = 0.0;        // um
    double x_end = 0.0;          // um
    std::optional<double> speed; // um/ms; nullopt = auto (0.1 v_c)
    std::optional<double> dt;    // ms; nullopt = auto
    std::optional<double> hold;  // ms; nullopt = auto (5 well periods)
    bool x_start_given = false;
    bool x_end_given = false;

    // quantum numerics
    double grid_min = -200.0;    // um
    double grid_max = 200.0;     // um
    int grid_points = 8192;
    int n_packets = 64;
    bool coherent = false;
    bool iid_centers = false;

    // classical numerics
    std::int64_t n_particles = 100000;

    std::uint64_t seed = 1;
    std::int64_t snapshot_every = 0;
    unsigned threads = 1;

    // constants overrides
    double mass_amu = PhysicalConstants::rb85_amu;
    double mu_scale = 1.0;

    PhysicalConstants constants() const { return PhysicalConstants{mass_amu, mu_scale}; }
    // T0 resolved from x0 when only the packet width was given
    double t0_resolved() const;
    double x0_resolved() const;
};

// Throws ConfigError with the offending key and line on any problem.
RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Applies a single `key`, `value` override on top of previously parsed text
// semantics (same validation as the file parser).
void apply_override(RunConfig& cfg, const std::string& key, const std::string& value);

// Canonical `key = value` echo in internal units; reparsing it reproduces the
// config exactly.  Used for report headers and run manifests.
std::string normalized_echo(const RunConfig& cfg);

// One dimensioned quantity, e.g. ("0.5 G/cm", "gradient") -> 3.3585... nK/um.
// Dimensions: length, time, temperature, velocity, gradient.
double parse_quantity(const std::string& text, const std::string& dimension,
                      const PhysicalConstants& pc = {});

} // namespace vsel

#endif
