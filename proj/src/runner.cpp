#include "runner.hpp"

#include "analytic.hpp"
#include "errors.hpp"
#include "potential.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace vsel {

namespace fs = std::filesystem;

std::string version_string() { return "0.1.0"; }

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// unlinks everything registered unless release() was called
class ScopedOutputs {
  public:
    ~ScopedOutputs() {
        if (armed_) {
            std::error_code ec;
            for (const auto& f : files_) fs::remove(f, ec);
        }
    }
    void add(const std::string& f) { files_.push_back(f); }
    void release() { armed_ = false; }
    const std::vector<std::string>& files() const { return files_; }

  private:
    std::vector<std::string> files_;
    bool armed_ = true;
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << text;
}

std::string csv_header() {
    return "U0_nK,U_eff_nK,T_eff_nK,eta_analytic,eta_engine,stderr,x_min_um\n";
}

std::string csv_rows(const std::vector<ReportRow>& rows) {
    std::string s;
    for (const auto& r : rows) {
        s += fmt(r.u0) + "," + fmt(r.u_eff) + "," + fmt(r.t_eff) + "," + fmt(r.eta_analytic) +
             "," + fmt(r.eta_engine) + "," + fmt(r.stderr_eta) + "," + fmt(r.x_localmin) + "\n";
    }
    return s;
}

std::string two_column(const std::vector<double>& xs, const std::vector<double>& ys) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i)
        s += fmt(xs[i]) + " " + fmt(ys[i]) + "\n";
    return s;
}

std::string manifest_text(const RunConfig& cfg, double wall_s) {
    std::string s;
    s += "# vsel run manifest\n";
    s += "# version = " + version_string() + "\n";
    s += "# wall_time_s = " + fmt(wall_s) + "\n";
    s += normalized_echo(cfg);
    return s;
}

double safe_x_min(const WellAnalysis& w) {
    return w.exists && std::isfinite(w.x_localmin) ? w.x_localmin : 0.0;
}

struct EngineOutput {
    std::vector<ReportRow> rows;
    // quantum extras, keyed by row order before sorting: density/spectra
    struct Snapshot {
        int u0_index = 0;
        std::string tag;  // "final" or "t<time>"
        std::vector<double> axis;
        std::vector<double> values;
        bool momentum = false;
    };
    std::vector<Snapshot> snapshots;
};

EngineOutput run_analytic(const RunConfig& cfg, const PhysicalConstants& pc) {
    EngineOutput out;
    const CloudSpec cloud{cfg.r0, cfg.t0_resolved()};
    const double xd_final = final_barrier_position(cfg);
    for (double u0 : cfg.u0_list) {
        PotentialSpec spec{cfg.gradient, u0, cfg.w0, xd_final};
        const WellAnalysis well = well_analysis(spec, pc);
        const double eta = well.exists
                               ? eta_full(well.u_eff, cloud, cfg.gradient, cfg.x_d, pc)
                               : 0.0;
        out.rows.push_back({u0, well.u_eff, well.t_eff, eta, eta, 0.0, safe_x_min(well)});
    }
    return out;
}

EngineOutput run_classical(const RunConfig& cfg, const PhysicalConstants& pc) {
    EngineOutput out;
    const CloudSpec cloud{cfg.r0, cfg.t0_resolved()};
    const auto particles = sample_cloud(cloud, cfg.n_particles, cfg.seed, pc);
    const double xd_final = final_barrier_position(cfg);
    for (double u0 : cfg.u0_list) {
        PotentialSpec spec{cfg.gradient, u0, cfg.w0, cfg.x_start};
        const PotentialSpec final_spec = spec.at(xd_final);
        const WellAnalysis well = well_analysis(final_spec, pc);
        EnsembleResult res;
        if (cfg.engine == Engine::classical_quasistatic) {
            res = select_quasistatic(particles, final_spec, well, cfg.x_start, pc, cfg.threads);
        } else {
            const SweepSchedule sch = make_schedule(cfg, well, true);
            res = simulate_sweep(particles, spec, sch, pc, cfg.threads);
        }
        const double eta_an =
            well.exists ? eta_full(well.u_eff, cloud, cfg.gradient, cfg.x_d, pc) : 0.0;
        out.rows.push_back(
            {u0, well.u_eff, well.t_eff, eta_an, res.eta, res.stderr_eta, safe_x_min(well)});
    }
    return out;
}

EngineOutput run_quantum(const RunConfig& cfg, const PhysicalConstants& pc) {
    EngineOutput out;
    const double x0 = cfg.x0_resolved();
    const double t0 = cfg.t0_resolved();
    const CloudSpec cloud{cfg.r0, t0};
    const Grid grid{cfg.grid_min, cfg.grid_max, cfg.grid_points};
    const WavepacketEnsemble initial =
        build_ensemble(cfg.r0, x0, grid, cfg.n_packets, cfg.seed,
                       cfg.coherent ? PacketMode::coherent : PacketMode::incoherent,
                       cfg.iid_centers ? CenterSampling::iid : CenterSampling::stratified, pc);
    PropagateOptions opt;
    opt.threads = cfg.threads;
    opt.snapshot_every = cfg.snapshot_every;

    const double xd_final = final_barrier_position(cfg);
    int idx = -1;
    for (double u0 : cfg.u0_list) {
        ++idx;
        PotentialSpec spec{cfg.gradient, u0, cfg.w0, cfg.x_start};
        const PotentialSpec final_spec = spec.at(xd_final);
        const WellAnalysis well = well_analysis(final_spec, pc);
        const double eta_an =
            well.exists ? eta_full(well.u_eff, cloud, cfg.gradient, cfg.x_d, pc) : 0.0;
        if (!well.exists) {
            out.rows.push_back({u0, 0.0, 0.0, eta_an, 0.0, 0.0, 0.0});
            continue;
        }
        const SweepSchedule sch = make_schedule(cfg, well, false);
        WavepacketEnsemble ens = initial;
        const PropagateReport rep = propagate(ens, spec, sch, sch.dt, pc, opt);
        const QuantumResult q = selected_observables(ens, final_spec, well, pc);
        out.rows.push_back({u0, well.u_eff, well.t_eff, eta_an, q.eta, 0.0, safe_x_min(well)});

        std::vector<double> xs(grid.n);
        for (int i = 0; i < grid.n; ++i) xs[i] = grid.x(i);
        out.snapshots.push_back({idx, "final", xs, ens.density(), false});
        const MomentumSpectrum ms = momentum_spectrum(ens, pc);
        out.snapshots.push_back({idx, "final", ms.p, ms.density, true});
        for (const auto& [t, dens] : rep.snapshots) {
            char tag[40];
            std::snprintf(tag, sizeof tag, "t%.6f", t);
            out.snapshots.push_back({idx, tag, xs, dens, false});
        }
    }
    return out;
}

} // namespace

double final_barrier_position(const RunConfig& cfg) {
    if (cfg.x_end_given) return cfg.x_end;
    // no sweep configured; analyze the well at a clean +x-side rest position
    return std::max(cfg.x_d, 4.0 * cfg.w0);
}

SweepSchedule make_schedule(const RunConfig& cfg, const WellAnalysis& well, bool classical) {
    const PhysicalConstants pc = cfg.constants();
    SweepSchedule s;
    s.x_start = cfg.x_start;
    s.x_end = cfg.x_end;
    const double v_c = well.exists ? critical_velocity(well.u_eff, pc) : 0.0;
    s.speed = cfg.speed ? *cfg.speed : std::max(0.1 * v_c, 1e-2);
    if (cfg.dt) {
        s.dt = *cfg.dt;
    } else if (classical) {
        const double v0 = velocity_from_temperature(cfg.t0_resolved(), pc);
        const double vref = std::max({s.speed, v_c, 4.0 * v0});
        s.dt = cfg.w0 / (10.0 * vref);
    } else {
        s.dt = auto_dt(cfg.x0_resolved(), well.exists ? well.u_eff : 0.0, s.speed, pc);
    }
    if (cfg.hold) {
        s.hold_time = *cfg.hold;
    } else {
        s.hold_time = well.exists && well.omega > 0.0 ? 5.0 * 2.0 * M_PI / well.omega : 0.0;
    }
    return s;
}

namespace {

EngineOutput dispatch(const RunConfig& cfg, const PhysicalConstants& pc) {
    switch (cfg.engine) {
        case Engine::analytic: return run_analytic(cfg, pc);
        case Engine::classical_quasistatic:
        case Engine::classical_dynamic: return run_classical(cfg, pc);
        case Engine::quantum: return run_quantum(cfg, pc);
    }
    throw ConfigError("unknown engine");
}

void sort_rows(std::vector<ReportRow>& rows) {
    std::sort(rows.begin(), rows.end(),
              [](const ReportRow& a, const ReportRow& b) { return a.u_eff < b.u_eff; });
}

} // namespace

RunResult run(const RunConfig& cfg, const std::string& out_dir) {
    const auto start = std::chrono::steady_clock::now();
    const PhysicalConstants pc = cfg.constants();
    fs::create_directories(out_dir);
    ScopedOutputs scoped;

    EngineOutput eng = dispatch(cfg, pc);
    sort_rows(eng.rows);

    const std::string curve_path = (fs::path(out_dir) / "curve.csv").string();
    write_text(curve_path, csv_header() + csv_rows(eng.rows));
    scoped.add(curve_path);

    for (const auto& snap : eng.snapshots) {
        char name[80];
        std::snprintf(name, sizeof name, "%s_%03d_%s.txt", snap.momentum ? "spectrum" : "density",
                      snap.u0_index, snap.tag.c_str());
        const std::string path = (fs::path(out_dir) / name).string();
        write_text(path, two_column(snap.axis, snap.values));
        scoped.add(path);
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::string manifest_path = (fs::path(out_dir) / "manifest.txt").string();
    write_text(manifest_path, manifest_text(cfg, wall));
    scoped.add(manifest_path);

    RunResult res;
    res.rows = std::move(eng.rows);
    res.files = scoped.files();
    res.wall_seconds = wall;
    scoped.release();
    return res;
}

CompareResult compare_engines(const RunConfig& cfg, const std::string& out_dir) {
    const auto start = std::chrono::steady_clock::now();
    const PhysicalConstants pc = cfg.constants();
    fs::create_directories(out_dir);
    ScopedOutputs scoped;

    RunConfig ccfg = cfg;
    ccfg.engine = cfg.engine == Engine::classical_quasistatic ? Engine::classical_quasistatic
                                                              : Engine::classical_dynamic;
    RunConfig qcfg = cfg;
    qcfg.engine = Engine::quantum;

    EngineOutput cls = run_classical(ccfg, pc);
    EngineOutput qnt = run_quantum(qcfg, pc);
    sort_rows(cls.rows);
    sort_rows(qnt.rows);
    if (cls.rows.size() != qnt.rows.size())
        throw NumericalAbort("engine row count mismatch in compare");

    CompareResult res;
    res.classical_rows = cls.rows;
    res.quantum_rows = qnt.rows;

    std::string csv = "U0_nK,U_eff_nK,T_eff_nK,eta_analytic,eta_classical,stderr_classical,"
                      "eta_quantum,x_min_um\n";
    double sum = 0.0, mx = 0.0;
    for (std::size_t i = 0; i < cls.rows.size(); ++i) {
        const auto& c = cls.rows[i];
        const auto& q = qnt.rows[i];
        const double d = std::fabs(c.eta_engine - q.eta_engine);
        sum += d;
        mx = std::max(mx, d);
        csv += fmt(c.u0) + "," + fmt(c.u_eff) + "," + fmt(c.t_eff) + "," + fmt(c.eta_analytic) +
               "," + fmt(c.eta_engine) + "," + fmt(c.stderr_eta) + "," + fmt(q.eta_engine) + "," +
               fmt(c.x_localmin) + "\n";
    }
    res.max_abs_diff = mx;
    res.mean_abs_diff = cls.rows.empty() ? 0.0 : sum / cls.rows.size();

    const std::string cmp_path = (fs::path(out_dir) / "compare.csv").string();
    write_text(cmp_path, csv);
    scoped.add(cmp_path);

    std::string summary;
    summary += "engines = " + std::string(engine_name(ccfg.engine)) + " vs quantum\n";
    summary += "max_abs_eta_diff = " + fmt(res.max_abs_diff) + "\n";
    summary += "mean_abs_eta_diff = " + fmt(res.mean_abs_diff) + "\n";
    const std::string sum_path = (fs::path(out_dir) / "divergence.txt").string();
    write_text(sum_path, summary);
    scoped.add(sum_path);

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::string manifest_path = (fs::path(out_dir) / "manifest.txt").string();
    write_text(manifest_path, manifest_text(cfg, wall));
    scoped.add(manifest_path);

    res.files = scoped.files();
    scoped.release();
    return res;
}

} // namespace vsel
