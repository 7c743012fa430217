#include "qsim.hpp"

#include "errors.hpp"
#include "fft.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace vsel {

void Grid::validate() const {
    if (!(x_max > x_min)) throw std::domain_error("grid needs x_max > x_min");
    if (n < 4 || (n & (n - 1)) != 0) throw std::domain_error("grid size must be a power of two >= 4");
}

double Grid::p(int k, const PhysicalConstants& pc) const {
    const double dp = 2.0 * M_PI * pc.hbar() / length();
    const int kk = k < n / 2 ? k : k - n;
    return dp * kk;
}

double Grid::p_max(const PhysicalConstants& pc) const {
    return M_PI * pc.hbar() / dx();
}

std::vector<double> WavepacketEnsemble::density() const {
    std::vector<double> rho(grid.n, 0.0);
    for (std::size_t s = 0; s < packets.size(); ++s) {
        const double w = mode == PacketMode::incoherent ? weights[s] : 1.0;
        const auto& psi = packets[s];
        for (int i = 0; i < grid.n; ++i) rho[i] += w * std::norm(psi[i]);
    }
    return rho;
}

double WavepacketEnsemble::norm() const {
    const auto rho = density();
    double s = 0.0;
    for (double v : rho) s += v;
    return s * grid.dx();
}

WavepacketEnsemble build_ensemble(double r0, double x0, const Grid& grid, int n_packets,
                                  std::uint64_t seed, PacketMode mode,
                                  CenterSampling sampling, const PhysicalConstants& pc) {
    grid.validate();
    (void)pc;
    if (!(r0 > 0.0)) throw std::domain_error("cloud radius r0 must be positive");
    if (!(x0 > 0.0)) throw std::domain_error("packet width x0 must be positive");
    if (n_packets < 1) throw std::domain_error("need at least one packet");
    if (x0 < 4.0 * grid.dx())
        throw std::domain_error("packet width x0 below 4 dx; refine the grid");

    WavepacketEnsemble ens;
    ens.grid = grid;
    ens.x0 = x0;
    ens.r0 = r0;
    ens.mode = mode;
    ens.centers.resize(n_packets);
    ens.weights.resize(n_packets);
    ens.phases.resize(n_packets);

    for (int s = 0; s < n_packets; ++s) {
        Rng rng(seed, static_cast<std::uint64_t>(s));
        ens.phases[s] = 2.0 * M_PI * rng.uniform();
        if (sampling == CenterSampling::stratified) {
            // deterministic midpoint grid over +-4 r0, weighted by the envelope
            const double width = 8.0 * r0;
            ens.centers[s] = -4.0 * r0 + (s + 0.5) * width / n_packets;
        } else {
            ens.centers[s] = r0 * rng.normal();
        }
    }
    if (sampling == CenterSampling::stratified) {
        double wsum = 0.0;
        for (int s = 0; s < n_packets; ++s) {
            ens.weights[s] = std::exp(-ens.centers[s] * ens.centers[s] / (2.0 * r0 * r0));
            wsum += ens.weights[s];
        }
        for (double& w : ens.weights) w /= wsum;
    } else {
        std::fill(ens.weights.begin(), ens.weights.end(), 1.0 / n_packets);
    }

    const int n = grid.n;
    const double dx = grid.dx();
    auto make_packet = [&](double center) {
        std::vector<std::complex<double>> psi(n);
        double nrm = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d = grid.x(i) - center;
            const double a = std::exp(-d * d / (4.0 * x0 * x0));
            psi[i] = a;
            nrm += a * a;
        }
        nrm *= dx;
        // |psi|^2 integrates to sqrt(2 pi) x0 on an unbounded grid; a shortfall
        // means the packet is clipped by the grid edge
        if (nrm < 0.999 * std::sqrt(2.0 * M_PI) * x0)
            throw std::domain_error("packet center too close to the grid boundary");
        const double s = 1.0 / std::sqrt(nrm);
        for (auto& c : psi) c *= s;
        return psi;
    };

    if (mode == PacketMode::incoherent) {
        ens.packets.reserve(n_packets);
        for (int s = 0; s < n_packets; ++s) ens.packets.push_back(make_packet(ens.centers[s]));
    } else {
        std::vector<std::complex<double>> comp(n, 0.0);
        for (int s = 0; s < n_packets; ++s) {
            const auto psi = make_packet(ens.centers[s]);
            const std::complex<double> coef =
                std::sqrt(ens.weights[s]) * std::polar(1.0, ens.phases[s]);
            for (int i = 0; i < n; ++i) comp[i] += coef * psi[i];
        }
        double nrm = 0.0;
        for (const auto& c : comp) nrm += std::norm(c);
        nrm *= dx;
        const double s = 1.0 / std::sqrt(nrm);
        for (auto& c : comp) c *= s;
        ens.packets.push_back(std::move(comp));
    }
    return ens;
}

namespace {

// |psi~(p_k)|^2 from an FFT of the grid samples; scaled so that
// sum_k |psi~|^2 dp = sum_j |psi|^2 dx exactly (discrete Parseval).
void accumulate_momentum_density(const std::vector<std::complex<double>>& psi, double weight,
                                 const Grid& grid, const PhysicalConstants& pc, Fft& fft,
                                 std::vector<double>& dens) {
    std::memcpy(fft.data(), psi.data(), sizeof(std::complex<double>) * grid.n);
    fft.forward();
    const double scale = grid.dx() * grid.dx() / (2.0 * M_PI * pc.hbar());
    for (int k = 0; k < grid.n; ++k) dens[k] += weight * scale * std::norm(fft.data()[k]);
}

} // namespace

MomentumSpectrum momentum_spectrum(const WavepacketEnsemble& ens, const PhysicalConstants& pc) {
    const Grid& grid = ens.grid;
    Fft fft(grid.n);
    std::vector<double> dens(grid.n, 0.0);
    for (std::size_t s = 0; s < ens.packets.size(); ++s) {
        const double w = ens.mode == PacketMode::incoherent ? ens.weights[s] : 1.0;
        accumulate_momentum_density(ens.packets[s], w, grid, pc, fft, dens);
    }

    MomentumSpectrum spec;
    spec.p.resize(grid.n);
    spec.density.resize(grid.n);
    // reorder to ascending momentum
    const int half = grid.n / 2;
    for (int k = 0; k < grid.n; ++k) {
        const int src = (k + half) % grid.n;
        spec.p[k] = grid.p(src, pc);
        spec.density[k] = dens[src];
    }
    const double dp = 2.0 * M_PI * pc.hbar() / grid.length();
    double m0 = 0.0, m2 = 0.0;
    for (int k = 0; k < grid.n; ++k) {
        m0 += spec.density[k] * dp;
        m2 += spec.p[k] * spec.p[k] * spec.density[k] * dp;
    }
    spec.rms_p = m0 > 0.0 ? std::sqrt(m2 / m0) : 0.0;
    return spec;
}

void split_step(std::vector<std::complex<double>>& psi, const std::vector<double>& u_of_x,
                const Grid& grid, double dt, const PhysicalConstants& pc, Fft& fft) {
    if (!(dt > 0.0)) throw std::domain_error("dt must be positive");
    if (static_cast<int>(psi.size()) != grid.n || static_cast<int>(u_of_x.size()) != grid.n)
        throw std::invalid_argument("state/potential size mismatch");
    const double hbar = pc.hbar();
    const double m = pc.mass();

    std::memcpy(fft.data(), psi.data(), sizeof(std::complex<double>) * grid.n);
    auto half_kinetic = [&] {
        fft.forward();
        for (int k = 0; k < grid.n; ++k) {
            const double p = grid.p(k, pc);
            fft.data()[k] *= std::polar(1.0, -0.5 * dt * p * p / (2.0 * m * hbar));
        }
        fft.inverse();
    };
    half_kinetic();
    for (int i = 0; i < grid.n; ++i)
        fft.data()[i] *= std::polar(1.0, -dt * u_of_x[i] / hbar);
    half_kinetic();
    std::memcpy(psi.data(), fft.data(), sizeof(std::complex<double>) * grid.n);
}

double auto_dt(double x0, double u_eff, double sweep_speed, const PhysicalConstants& pc) {
    const double m = pc.mass();
    const double p0 = pc.hbar() / (2.0 * x0);
    const double q = 4.0 * std::max({p0, m * critical_velocity(std::max(u_eff, 0.0), pc),
                                     m * sweep_speed});
    const double rate = q * q / (2.0 * m * pc.hbar());
    return (M_PI / 8.0) / rate;
}

namespace {

struct StepPlan {
    std::vector<std::complex<double>> kin_full;
    std::vector<std::complex<double>> kin_half;
    std::vector<std::complex<double>> mag_phase;
    std::vector<double> xs;
    double dt;
    double hbar;
};

// The per-step potential phase splits into a static magnetic factor and a
// barrier factor with support only within 8 w0 of the barrier center.
struct BarrierPhase {
    int lo = 0, hi = 0;
    std::vector<std::complex<double>> phase;
    double at_xd = std::numeric_limits<double>::quiet_NaN();

    void build(const StepPlan& plan, const PotentialSpec& base, double xd, const Grid& grid) {
        if (xd == at_xd) return;
        at_xd = xd;
        const double reach = 8.0 * base.barrier_width;
        lo = std::max(0, static_cast<int>(std::floor((xd - reach - grid.x_min) / grid.dx())));
        hi = std::min(grid.n, static_cast<int>(std::ceil((xd + reach - grid.x_min) / grid.dx())) + 1);
        phase.resize(std::max(0, hi - lo));
        const double w2 = 2.0 * base.barrier_width * base.barrier_width;
        for (int i = lo; i < hi; ++i) {
            const double u = plan.xs[i] - xd;
            const double ub = base.barrier_height * std::exp(-u * u / w2);
            phase[i - lo] = std::polar(1.0, -plan.dt * ub / plan.hbar);
        }
    }
};

class PacketEvolver {
  public:
    PacketEvolver(const Grid& grid, const StepPlan& plan, const PotentialSpec& base,
                  const SweepSchedule& schedule)
        : grid_(grid), plan_(plan), base_(base), schedule_(schedule), fft_(grid.n) {}

    // Advances psi over steps [k0, k1) assuming and restoring a physical
    // state; one extra transform pair per segment merges the half kicks.
    void advance_segment(std::vector<std::complex<double>>& psi, std::int64_t k0,
                         std::int64_t k1) {
        if (k1 <= k0) return;
        auto* buf = fft_.data();
        std::memcpy(buf, psi.data(), sizeof(std::complex<double>) * grid_.n);
        apply_kinetic(plan_.kin_half);
        for (std::int64_t k = k0; k < k1; ++k) {
            const double t_mid = (k + 0.5) * plan_.dt;
            barrier_.build(plan_, base_, schedule_.position(t_mid), grid_);
            const auto& mag = plan_.mag_phase;
            for (int i = 0; i < grid_.n; ++i) buf[i] *= mag[i];
            for (int i = barrier_.lo; i < barrier_.hi; ++i)
                buf[i] *= barrier_.phase[i - barrier_.lo];
            apply_kinetic(k + 1 < k1 ? plan_.kin_full : plan_.kin_half);
        }
        std::memcpy(psi.data(), buf, sizeof(std::complex<double>) * grid_.n);
    }

  private:
    void apply_kinetic(const std::vector<std::complex<double>>& phase) {
        fft_.forward();
        auto* buf = fft_.data();
        for (int k = 0; k < grid_.n; ++k) buf[k] *= phase[k];
        fft_.inverse();
    }

    const Grid& grid_;
    const StepPlan& plan_;
    const PotentialSpec& base_;
    const SweepSchedule& schedule_;
    Fft fft_;
    BarrierPhase barrier_;
};

double boundary_fraction(const std::vector<std::complex<double>>& psi, int n, int band) {
    double edge = 0.0, total = 0.0;
    for (int i = 0; i < n; ++i) {
        const double d = std::norm(psi[i]);
        total += d;
        if (i < band || i >= n - band) edge += d;
    }
    return total > 0.0 ? edge / total : 0.0;
}

} // namespace

PropagateReport propagate(WavepacketEnsemble& ens, const PotentialSpec& base,
                          const SweepSchedule& schedule, double dt,
                          const PhysicalConstants& pc, const PropagateOptions& opt) {
    base.validate();
    schedule.validate();
    ens.grid.validate();
    if (!(dt > 0.0)) throw std::domain_error("dt must be positive");

    const Grid& grid = ens.grid;
    const WellAnalysis well = well_analysis(base.at(schedule.x_end), pc);
    const double p0 = pc.hbar() / (2.0 * ens.x0);
    const double q_guard = 4.0 * std::max({p0,
                                           pc.mass() * critical_velocity(well.exists ? well.u_eff : 0.0, pc),
                                           pc.mass() * schedule.speed});
    if (grid.p_max(pc) <= q_guard)
        throw NumericalAbort("momentum cutoff pi hbar/dx below the 4 max(p0, m v_c, m u) guard; "
                             "refine the grid");

    const std::int64_t nsteps =
        static_cast<std::int64_t>(std::ceil(schedule.total_time() / dt));

    StepPlan plan;
    plan.dt = dt;
    plan.hbar = pc.hbar();
    plan.kin_full.resize(grid.n);
    plan.kin_half.resize(grid.n);
    plan.mag_phase.resize(grid.n);
    plan.xs.resize(grid.n);
    const double m = pc.mass();
    for (int k = 0; k < grid.n; ++k) {
        const double p = grid.p(k, pc);
        const double th = -dt * p * p / (2.0 * m * plan.hbar);
        plan.kin_full[k] = std::polar(1.0, th);
        plan.kin_half[k] = std::polar(1.0, 0.5 * th);
    }
    for (int i = 0; i < grid.n; ++i) {
        plan.xs[i] = grid.x(i);
        plan.mag_phase[i] = std::polar(1.0, -dt * base.gradient * std::fabs(plan.xs[i]) / plan.hbar);
    }

    // physical-state checkpoints: leak checks, snapshots, final step
    std::vector<std::int64_t> checkpoints;
    for (std::int64_t k = opt.leak_check_every; k < nsteps; k += opt.leak_check_every)
        checkpoints.push_back(k);
    if (opt.snapshot_every > 0)
        for (std::int64_t k = opt.snapshot_every; k < nsteps; k += opt.snapshot_every)
            checkpoints.push_back(k);
    checkpoints.push_back(nsteps);
    std::sort(checkpoints.begin(), checkpoints.end());
    checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());

    auto is_snapshot = [&](std::int64_t k) {
        return opt.snapshot_every > 0 && (k % opt.snapshot_every == 0 || k == nsteps);
    };

    PropagateReport report;
    report.steps = nsteps;
    report.final_time = nsteps * dt;
    if (opt.snapshot_every > 0) {
        for (std::int64_t k : checkpoints)
            if (is_snapshot(k))
                report.snapshots.emplace_back(k * dt, std::vector<double>(grid.n, 0.0));
    }

    const int band = std::max(4, grid.n / 256);
    std::mutex merge_mutex;
    std::string abort_msg;
    const std::size_t npackets = ens.packets.size();
    const unsigned nworkers =
        std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(npackets)));

    auto worker = [&](unsigned wid) {
        PacketEvolver evolver(grid, plan, base, schedule);
        double local_max_edge = 0.0;
        std::vector<std::pair<std::size_t, std::vector<double>>> local_snaps;
        try {
            for (std::size_t s = wid; s < npackets; s += nworkers) {
                auto& psi = ens.packets[s];
                const double w = ens.mode == PacketMode::incoherent ? ens.weights[s] : 1.0;
                std::int64_t k0 = 0;
                std::size_t snap_idx = 0;
                for (std::int64_t k1 : checkpoints) {
                    evolver.advance_segment(psi, k0, k1);
                    k0 = k1;
                    const double frac = boundary_fraction(psi, grid.n, band);
                    local_max_edge = std::max(local_max_edge, frac);
                    if (frac > opt.leak_threshold)
                        throw NumericalAbort(
                            "norm fraction " + std::to_string(frac) +
                            " reached the grid edge band; enlarge the grid");
                    if (is_snapshot(k1)) {
                        if (local_snaps.size() <= snap_idx)
                            local_snaps.emplace_back(snap_idx, std::vector<double>(grid.n, 0.0));
                        auto& acc = local_snaps[snap_idx].second;
                        for (int i = 0; i < grid.n; ++i) acc[i] += w * std::norm(psi[i]);
                        ++snap_idx;
                    }
                }
            }
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(merge_mutex);
            if (abort_msg.empty()) abort_msg = e.what();
            return;
        }
        std::lock_guard<std::mutex> lock(merge_mutex);
        report.max_boundary_fraction = std::max(report.max_boundary_fraction, local_max_edge);
        for (auto& [idx, acc] : local_snaps) {
            auto& dst = report.snapshots[idx].second;
            for (int i = 0; i < grid.n; ++i) dst[i] += acc[i];
        }
    };

    if (nworkers == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nworkers; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }
    if (!abort_msg.empty()) throw NumericalAbort(abort_msg);
    return report;
}

SelectionWindow selection_window(const Grid& grid, const PotentialSpec& final_spec,
                                 const WellAnalysis& well) {
    if (!well.exists) throw std::domain_error("selection window needs an existing well");
    SelectionWindow win;
    win.x_lo = well.x_localmax;
    win.x_hi = final_spec.gradient > 0.0 ? well.u_brim / final_spec.gradient : grid.x_max;
    win.x_hi = std::min(win.x_hi, grid.x_max);
    const double dx = grid.dx();
    win.i_lo = std::max(0, static_cast<int>(std::ceil((win.x_lo - grid.x_min) / dx)));
    win.i_hi = std::min(grid.n, static_cast<int>(std::floor((win.x_hi - grid.x_min) / dx)) + 1);
    if (win.i_hi < win.i_lo) win.i_hi = win.i_lo;
    return win;
}

QuantumResult selected_observables(const WavepacketEnsemble& ens,
                                   const PotentialSpec& final_spec, const WellAnalysis& well,
                                   const PhysicalConstants& pc) {
    const Grid& grid = ens.grid;
    QuantumResult res;
    res.window = selection_window(grid, final_spec, well);
    const int ilo = res.window.i_lo, ihi = res.window.i_hi;
    const double dx = grid.dx();

    std::vector<double> u(grid.n);
    for (int i = 0; i < grid.n; ++i) u[i] = evaluate(final_spec, grid.x(i));

    Fft fft(grid.n);
    const double m = pc.mass();
    const double spectral_scale = dx * dx / (2.0 * M_PI * pc.hbar());
    const double dp = 2.0 * M_PI * pc.hbar() / grid.length();

    double eta = 0.0, pe = 0.0, ke = 0.0, sx = 0.0, sxx = 0.0;
    for (std::size_t s = 0; s < ens.packets.size(); ++s) {
        const double w = ens.mode == PacketMode::incoherent ? ens.weights[s] : 1.0;
        const auto& psi = ens.packets[s];
        double n_s = 0.0;
        for (int i = ilo; i < ihi; ++i) {
            const double d = std::norm(psi[i]);
            n_s += d;
            pe += w * d * (u[i] - well.u_min) * dx;
            sx += w * d * grid.x(i) * dx;
            sxx += w * d * grid.x(i) * grid.x(i) * dx;
        }
        eta += w * n_s * dx;

        // momentum moments of the windowed state
        std::fill(fft.data(), fft.data() + grid.n, std::complex<double>(0.0, 0.0));
        for (int i = ilo; i < ihi; ++i) fft.data()[i] = psi[i];
        fft.forward();
        double ke_s = 0.0;
        for (int k = 0; k < grid.n; ++k) {
            const double p = grid.p(k, pc);
            ke_s += spectral_scale * std::norm(fft.data()[k]) * p * p / (2.0 * m) * dp;
        }
        ke += w * ke_s;
    }

    res.eta = eta;
    if (eta < 1e-12) {
        res.pe_s = res.ke_s = res.rms_width = std::numeric_limits<double>::quiet_NaN();
        return res;
    }
    res.pe_s = pe / eta;
    res.ke_s = ke / eta;
    const double mean = sx / eta;
    res.rms_width = std::sqrt(std::max(0.0, sxx / eta - mean * mean));
    return res;
}

std::vector<QuantumCurveRow> efficiency_curve_quantum(
    const WavepacketEnsemble& initial, const PotentialSpec& base, double x_end,
    const std::vector<double>& u0_list,
    const std::function<SweepSchedule(double, const WellAnalysis&)>& schedule_for,
    const std::function<double(double, const WellAnalysis&)>& dt_for,
    const PhysicalConstants& pc, const PropagateOptions& opt) {
    std::vector<QuantumCurveRow> rows;
    rows.reserve(u0_list.size());
    for (double u0 : u0_list) {
        PotentialSpec spec = base;
        spec.barrier_height = u0;
        QuantumCurveRow row;
        row.u0 = u0;
        const WellAnalysis well = well_analysis(spec.at(x_end), pc);
        row.u_eff = well.u_eff;
        row.t_eff = well.t_eff;
        row.x_localmin = well.exists && std::isfinite(well.x_localmin) ? well.x_localmin : 0.0;
        if (!well.exists) {
            rows.push_back(row);  // no well, nothing selected
            continue;
        }
        const SweepSchedule sch = schedule_for(u0, well);
        WavepacketEnsemble ens = initial;
        propagate(ens, spec, sch, dt_for(u0, well), pc, opt);
        row.detail = selected_observables(ens, spec.at(sch.x_end), well, pc);
        row.eta = row.detail.eta;
        rows.push_back(row);
    }
    std::sort(rows.begin(), rows.end(),
              [](const QuantumCurveRow& a, const QuantumCurveRow& b) { return a.u_eff < b.u_eff; });
    return rows;
}

} // namespace vsel
