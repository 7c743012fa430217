#include "vsel.h"

#include "config.hpp"
#include "errors.hpp"
#include "potential.hpp"
#include "runner.hpp"

#include <cstring>
#include <string>

namespace {

thread_local std::string g_last_error;

int set_error(const std::exception& e, int code) {
    g_last_error = e.what();
    return code;
}

// Library-internal failures map onto the same codes the CLI exits with.
template <typename F>
int guarded(F&& f) {
    try {
        f();
        g_last_error.clear();
        return VSEL_OK;
    } catch (const vsel::ConfigError& e) {
        return set_error(e, VSEL_ERR_CONFIG);
    } catch (const vsel::NumericalAbort& e) {
        return set_error(e, VSEL_ERR_NUMERIC);
    } catch (const std::domain_error& e) {
        return set_error(e, VSEL_ERR_CONFIG);
    } catch (const std::exception& e) {
        return set_error(e, VSEL_ERR_NUMERIC);
    }
}

} // namespace

struct vsel_config {
    vsel::RunConfig cfg;
};

extern "C" {

const char* vsel_version(void) {
    static const std::string v = vsel::version_string();
    return v.c_str();
}

const char* vsel_last_error(void) {
    return g_last_error.c_str();
}

int vsel_config_parse_file(const char* path, vsel_config** out) {
    if (!path || !out) {
        g_last_error = "null argument";
        return VSEL_ERR_USAGE;
    }
    *out = nullptr;
    return guarded([&] { *out = new vsel_config{vsel::parse_config_file(path)}; });
}

int vsel_config_parse_text(const char* text, vsel_config** out) {
    if (!text || !out) {
        g_last_error = "null argument";
        return VSEL_ERR_USAGE;
    }
    *out = nullptr;
    return guarded([&] { *out = new vsel_config{vsel::parse_config(text)}; });
}

int vsel_config_set(vsel_config* cfg, const char* key, const char* value) {
    if (!cfg || !key || !value) {
        g_last_error = "null argument";
        return VSEL_ERR_USAGE;
    }
    return guarded([&] { vsel::apply_override(cfg->cfg, key, value); });
}

int vsel_config_echo(const vsel_config* cfg, char* buf, size_t bufsize) {
    if (!cfg) {
        g_last_error = "null argument";
        return -1;
    }
    const std::string echo = vsel::normalized_echo(cfg->cfg);
    if (buf && bufsize > 0) {
        const size_t n = std::min(bufsize - 1, echo.size());
        std::memcpy(buf, echo.data(), n);
        buf[n] = '\0';
    }
    return static_cast<int>(echo.size());
}

void vsel_config_free(vsel_config* cfg) {
    delete cfg;
}

int vsel_run(const vsel_config* cfg, const char* out_dir) {
    if (!cfg || !out_dir) {
        g_last_error = "null argument";
        return VSEL_ERR_USAGE;
    }
    return guarded([&] { vsel::run(cfg->cfg, out_dir); });
}

int vsel_compare(const vsel_config* cfg, const char* out_dir) {
    if (!cfg || !out_dir) {
        g_last_error = "null argument";
        return VSEL_ERR_USAGE;
    }
    return guarded([&] { vsel::compare_engines(cfg->cfg, out_dir); });
}

int vsel_well_analysis(double gradient_nk_um, double u0_nk, double w0_um, double xd_um,
                       vsel_well_report* out) {
    if (!out) {
        g_last_error = "null argument";
        return VSEL_ERR_USAGE;
    }
    return guarded([&] {
        const vsel::PotentialSpec spec{gradient_nk_um, u0_nk, w0_um, xd_um};
        const vsel::PhysicalConstants pc;
        const vsel::WellAnalysis w = vsel::well_analysis(spec, pc);
        out->exists = w.exists ? 1 : 0;
        out->x_local_max_um = w.x_localmax;
        out->x_local_min_um = w.x_localmin;
        out->u_min_nk = w.u_min;
        out->u_brim_nk = w.u_brim;
        out->u_eff_nk = w.u_eff;
        out->t_eff_nk = w.t_eff;
        out->omega_rad_per_ms = w.omega;
        out->e0_nk = w.e0;
        out->level_spacing_nk = w.level_spacing;
        out->v_critical_um_ms = w.exists ? vsel::critical_velocity(w.u_eff, pc) : 0.0;
        out->bound_states_est = w.exists ? vsel::bound_state_estimate(spec, w, pc) : 0;
    });
}

int vsel_quantity(const char* text, const char* dimension, double* out_internal) {
    if (!text || !dimension || !out_internal) {
        g_last_error = "null argument";
        return VSEL_ERR_USAGE;
    }
    return guarded([&] { *out_internal = vsel::parse_quantity(text, dimension); });
}

} // extern "C"
