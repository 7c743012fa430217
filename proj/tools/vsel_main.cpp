// Command line front end for the velocity-selection simulator.  Talks to the
// shared library strictly through the C API in vsel.h.

#include <vsel.h>

#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = "out";
    std::string seed;
    std::string threads;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required = true) {
    auto* c = cmd->add_option("--config", opts.config_path, "config file (flat key=value or JSON)");
    if (config_required) c->required();
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--seed", opts.seed, "override the RNG seed");
    cmd->add_option("--threads", opts.threads, "worker threads");
}

int fail(int code) {
    std::fprintf(stderr, "vsel: %s\n", vsel_last_error());
    return code;
}

int load_config(const CommonOpts& opts, const char* engine, vsel_config** cfg) {
    int rc = vsel_config_parse_file(opts.config_path.c_str(), cfg);
    if (rc != VSEL_OK) return rc;
    if (engine) {
        rc = vsel_config_set(*cfg, "engine", engine);
        if (rc != VSEL_OK) return rc;
    }
    if (!opts.seed.empty()) {
        rc = vsel_config_set(*cfg, "seed", opts.seed.c_str());
        if (rc != VSEL_OK) return rc;
    }
    if (!opts.threads.empty()) {
        rc = vsel_config_set(*cfg, "threads", opts.threads.c_str());
        if (rc != VSEL_OK) return rc;
    }
    return VSEL_OK;
}

std::string config_engine(vsel_config* cfg) {
    std::vector<char> buf(vsel_config_echo(cfg, nullptr, 0) + 1);
    vsel_config_echo(cfg, buf.data(), buf.size());
    const std::string echo(buf.data());
    const std::string key = "engine = ";
    const auto pos = echo.find(key);
    if (pos == std::string::npos) return "";
    const auto end = echo.find('\n', pos);
    return echo.substr(pos + key.size(), end - pos - key.size());
}

int run_engine(const CommonOpts& opts, const char* engine) {
    vsel_config* cfg = nullptr;
    int rc = load_config(opts, engine, &cfg);
    if (rc != VSEL_OK) {
        vsel_config_free(cfg);
        return fail(rc);
    }
    rc = vsel_run(cfg, opts.out_dir.c_str());
    vsel_config_free(cfg);
    if (rc != VSEL_OK) return fail(rc);
    std::printf("wrote %s/curve.csv\n", opts.out_dir.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"1D velocity selection of ultracold atoms by a swept dipole barrier"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(vsel_version()));

    CommonOpts a_opts, c_opts, q_opts, m_opts;
    auto* cmd_analytic = app.add_subcommand("analytic", "closed-form/quadrature efficiencies");
    add_common(cmd_analytic, a_opts);

    auto* cmd_classical = app.add_subcommand("classical", "Monte Carlo particle engine");
    add_common(cmd_classical, c_opts);
    std::string mode;
    cmd_classical->add_option("--mode", mode, "quasistatic or dynamic")
        ->check(CLI::IsMember({"quasistatic", "dynamic"}));

    auto* cmd_quantum = app.add_subcommand("quantum", "split-operator wavepacket engine");
    add_common(cmd_quantum, q_opts);

    auto* cmd_compare = app.add_subcommand("compare", "classical vs quantum over one U0 list");
    add_common(cmd_compare, m_opts);

    std::string wd_gradient = "10 nK/um", wd_u0 = "97 nK", wd_w0 = "5 um", wd_xd = "20 um";
    auto* cmd_well = app.add_subcommand("welldepth", "well geometry for one barrier setting");
    cmd_well->add_option("--gradient", wd_gradient, "e.g. '10 nK/um' or '0.5 G/cm'");
    cmd_well->add_option("--U0", wd_u0, "barrier height, e.g. '97 nK'");
    cmd_well->add_option("--w0", wd_w0, "barrier rms width, e.g. '5 um'");
    cmd_well->add_option("--xD", wd_xd, "barrier position, e.g. '20 um'");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : VSEL_ERR_CONFIG;
    }

    if (cmd_analytic->parsed()) return run_engine(a_opts, "analytic");

    if (cmd_classical->parsed()) {
        const char* engine = nullptr;
        if (mode == "dynamic") {
            engine = "classical-dynamic";
        } else if (mode == "quasistatic") {
            engine = "classical-quasistatic";
        } else {
            // keep a classical engine from the config, default to quasistatic
            vsel_config* probe = nullptr;
            if (load_config(c_opts, nullptr, &probe) == VSEL_OK) {
                const std::string cur = config_engine(probe);
                engine = cur == "classical-dynamic" ? "classical-dynamic"
                                                    : "classical-quasistatic";
            } else {
                engine = "classical-quasistatic";
            }
            vsel_config_free(probe);
        }
        return run_engine(c_opts, engine);
    }

    if (cmd_quantum->parsed()) return run_engine(q_opts, "quantum");

    if (cmd_compare->parsed()) {
        vsel_config* cfg = nullptr;
        int rc = load_config(m_opts, nullptr, &cfg);
        if (rc != VSEL_OK) {
            vsel_config_free(cfg);
            return fail(rc);
        }
        rc = vsel_compare(cfg, m_opts.out_dir.c_str());
        vsel_config_free(cfg);
        if (rc != VSEL_OK) return fail(rc);
        std::printf("wrote %s/compare.csv\n", m_opts.out_dir.c_str());
        return 0;
    }

    if (cmd_well->parsed()) {
        double g, u0, w0, xd;
        if (vsel_quantity(wd_gradient.c_str(), "gradient", &g) != VSEL_OK ||
            vsel_quantity(wd_u0.c_str(), "temperature", &u0) != VSEL_OK ||
            vsel_quantity(wd_w0.c_str(), "length", &w0) != VSEL_OK ||
            vsel_quantity(wd_xd.c_str(), "length", &xd) != VSEL_OK)
            return fail(VSEL_ERR_CONFIG);
        vsel_well_report rep;
        const int rc = vsel_well_analysis(g, u0, w0, xd, &rep);
        if (rc != VSEL_OK) return fail(rc);
        if (!rep.exists) {
            std::printf("no well: the barrier slope never beats the magnetic gradient\n");
            return 0;
        }
        std::printf("x_localmax    = %.6f um\n", rep.x_local_max_um);
        std::printf("x_localmin    = %.6f um\n", rep.x_local_min_um);
        std::printf("U_min         = %.6f nK\n", rep.u_min_nk);
        std::printf("U_brim        = %.6f nK\n", rep.u_brim_nk);
        std::printf("U_eff         = %.6f nK\n", rep.u_eff_nk);
        std::printf("T_eff         = %.6f nK\n", rep.t_eff_nk);
        std::printf("omega         = %.6f rad/ms\n", rep.omega_rad_per_ms);
        std::printf("E0            = %.6f nK\n", rep.e0_nk);
        std::printf("level spacing = %.6f nK\n", rep.level_spacing_nk);
        std::printf("v_critical    = %.6f um/ms\n", rep.v_critical_um_ms);
        std::printf("bound states  ~ %d\n", rep.bound_states_est);
        return 0;
    }

    return VSEL_ERR_CONFIG;
}
