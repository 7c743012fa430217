#include "ensemble.hpp"

#include "errors.hpp"
#include "parallel.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vsel {

void SweepSchedule::validate() const {
    if (!(x_end > x_start)) throw std::domain_error("sweep requires x_end > x_start");
    if (!(speed > 0.0)) throw std::domain_error("sweep speed must be positive");
    if (!(dt > 0.0)) throw std::domain_error("integrator dt must be positive");
    if (hold_time < 0.0) throw std::domain_error("hold time must be non-negative");
}

double SweepSchedule::position(double t) const {
    return std::min(x_start + speed * t, x_end);
}

std::vector<Particle> sample_cloud(const CloudSpec& cloud, std::int64_t n,
                                   std::uint64_t seed, const PhysicalConstants& pc) {
    cloud.validate();
    if (n < 1) throw std::domain_error("ensemble size must be at least 1");
    const double v0 = cloud.v0(pc);
    std::vector<Particle> out(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        Rng rng(seed, static_cast<std::uint64_t>(i));
        double a, b;
        rng.normal_pair(a, b);
        out[static_cast<std::size_t>(i)] = {cloud.r0 * a, v0 * b};
    }
    return out;
}

namespace {

struct Tally {
    std::int64_t selected = 0;
    Kahan v2;
};

EnsembleResult tally_to_result(const std::vector<Tally>& tallies, std::int64_t n,
                               const PhysicalConstants& pc) {
    EnsembleResult r;
    r.n_total = n;
    Kahan v2;
    for (const auto& t : tallies) {
        r.n_selected += t.selected;
        v2.merge(t.v2);
    }
    r.eta = n > 0 ? static_cast<double>(r.n_selected) / static_cast<double>(n) : 0.0;
    r.stderr_eta = n > 0 ? std::sqrt(std::max(0.0, r.eta * (1.0 - r.eta) / static_cast<double>(n))) : 0.0;
    r.t_selected = r.n_selected > 0 ? pc.mass() * v2.sum / static_cast<double>(r.n_selected) : 0.0;
    return r;
}

constexpr std::size_t kGrain = 4096;

} // namespace

EnsembleResult select_quasistatic(const std::vector<Particle>& particles,
                                  const PotentialSpec& final_spec, const WellAnalysis& well,
                                  double x_start, const PhysicalConstants& pc,
                                  unsigned threads) {
    if (!well.exists) {
        EnsembleResult r;
        r.n_total = static_cast<std::int64_t>(particles.size());
        r.well_missing = true;
        return r;
    }
    const double g = final_spec.gradient;
    const double half_m = 0.5 * pc.mass();
    const double u_eff = well.u_eff;

    const std::size_t nchunks = (particles.size() + kGrain - 1) / kGrain;
    std::vector<Tally> tallies(std::max<std::size_t>(nchunks, 1));
    parallel_chunks(particles.size(), kGrain, threads,
                    [&](std::size_t c, std::size_t lo, std::size_t hi) {
                        Tally& t = tallies[c];
                        for (std::size_t i = lo; i < hi; ++i) {
                            const Particle& p = particles[i];
                            if (p.x > x_start &&
                                g * std::fabs(p.x) + half_m * p.v * p.v < u_eff) {
                                ++t.selected;
                                t.v2.add(p.v * p.v);
                            }
                        }
                    });
    return tally_to_result(tallies, static_cast<std::int64_t>(particles.size()), pc);
}

namespace {

// One velocity-Verlet trajectory through the sweep.  Force is evaluated with
// the barrier at the actual substep times t and t+dt.
void integrate_particle(Particle& p, const PotentialSpec& base, const SweepSchedule& sch,
                        double inv_m, std::int64_t nsteps) {
    const double dt = sch.dt;
    PotentialSpec spec = base;
    spec.barrier_pos = sch.position(0.0);
    double a = force(spec, p.x) * inv_m;
    for (std::int64_t k = 0; k < nsteps; ++k) {
        p.x += (p.v + 0.5 * a * dt) * dt;
        spec.barrier_pos = sch.position((k + 1) * dt);
        const double a1 = force(spec, p.x) * inv_m;
        p.v += 0.5 * (a + a1) * dt;
        a = a1;
    }
}

double particle_energy(const PotentialSpec& spec, const Particle& p, double m) {
    return evaluate(spec, p.x) + 0.5 * m * p.v * p.v;
}

// Energy-conservation probe in the frozen potential; catches a dt that cannot
// resolve the barrier curvature or the |x| kink.
void static_self_test(const PotentialSpec& base, const SweepSchedule& sch,
                      const WellAnalysis& well, const PhysicalConstants& pc) {
    PotentialSpec frozen = base;
    frozen.barrier_pos = sch.x_start;
    SweepSchedule still = sch;
    still.x_start = sch.x_start;
    still.x_end = sch.x_start + 1e-12;
    still.speed = 1e-15;  // effectively static

    const double m = pc.mass();
    std::vector<Particle> probes;
    const double vref = well.exists ? std::max(critical_velocity(well.u_eff, pc), 0.1)
                                    : 1.0;
    probes.push_back({sch.x_start + 2.0 * base.barrier_width, vref});
    probes.push_back({sch.x_start + 4.0 * base.barrier_width, -0.5 * vref});
    if (well.exists && std::isfinite(well.x_localmin))
        probes.push_back({well.x_localmin - sch.x_end + sch.x_start, 0.5 * vref});

    for (Particle p : probes) {
        const double e0 = particle_energy(frozen, p, m);
        Particle q = p;
        integrate_particle(q, frozen, still, 1.0 / m, 2000);
        const double e1 = particle_energy(frozen, q, m);
        const double scale = std::max(std::fabs(e0), 1e-12);
        if (std::fabs(e1 - e0) / scale > 0.10)
            throw NumericalAbort("integrator self-test failed: energy drift " +
                                 std::to_string(std::fabs(e1 - e0) / scale) +
                                 " over 2000 static steps; reduce dt");
    }
}

} // namespace

SweepTrace simulate_sweep_trace(const std::vector<Particle>& particles,
                                const PotentialSpec& base, const SweepSchedule& schedule,
                                const PhysicalConstants& pc, unsigned threads) {
    base.validate();
    schedule.validate();
    const PotentialSpec final_spec = base.at(schedule.x_end);
    const WellAnalysis well = well_analysis(final_spec, pc);

    const double m = pc.mass();
    // dt sanity: a step should move a particle far less than the barrier width
    const double a_max = base.gradient / m +
                         base.barrier_height / (base.barrier_width * std::sqrt(M_E)) / m;
    if (a_max * schedule.dt * schedule.dt > 0.1 * base.barrier_width)
        throw NumericalAbort("dt too coarse for the barrier width; reduce dt");
    static_self_test(base, schedule, well, pc);

    const double total = schedule.total_time();
    const std::int64_t nsteps = static_cast<std::int64_t>(std::ceil(total / schedule.dt));

    SweepTrace trace;
    trace.final_state = particles;
    const std::size_t nchunks = (particles.size() + kGrain - 1) / kGrain;
    std::vector<Tally> tallies(std::max<std::size_t>(nchunks, 1));

    const double g = base.gradient;
    const double half_m = 0.5 * m;
    parallel_chunks(particles.size(), kGrain, threads,
                    [&](std::size_t c, std::size_t lo, std::size_t hi) {
                        Tally& t = tallies[c];
                        for (std::size_t i = lo; i < hi; ++i) {
                            Particle& p = trace.final_state[i];
                            integrate_particle(p, base, schedule, 1.0 / m, nsteps);
                            if (well.exists && p.x > well.x_localmax &&
                                g * std::fabs(p.x) + half_m * p.v * p.v - well.u_min < well.u_eff) {
                                ++t.selected;
                                t.v2.add(p.v * p.v);
                            }
                        }
                    });
    trace.result = tally_to_result(tallies, static_cast<std::int64_t>(particles.size()), pc);
    trace.result.well_missing = !well.exists;
    return trace;
}

EnsembleResult simulate_sweep(const std::vector<Particle>& particles,
                              const PotentialSpec& base, const SweepSchedule& schedule,
                              const PhysicalConstants& pc, unsigned threads) {
    return simulate_sweep_trace(particles, base, schedule, pc, threads).result;
}

std::vector<CurveRow> efficiency_curve_classical(
    const PotentialSpec& base, const std::vector<double>& u0_list, ClassicalMode mode,
    const CloudSpec& cloud, const SweepSchedule& schedule, std::int64_t n_particles,
    std::uint64_t seed, const PhysicalConstants& pc, unsigned threads) {
    const std::vector<Particle> particles = sample_cloud(cloud, n_particles, seed, pc);
    std::vector<CurveRow> rows;
    rows.reserve(u0_list.size());
    for (double u0 : u0_list) {
        PotentialSpec spec = base;
        spec.barrier_height = u0;
        const PotentialSpec final_spec = spec.at(schedule.x_end);
        const WellAnalysis well = well_analysis(final_spec, pc);
        EnsembleResult res;
        if (mode == ClassicalMode::quasistatic)
            res = select_quasistatic(particles, final_spec, well, schedule.x_start, pc, threads);
        else
            res = simulate_sweep(particles, spec, schedule, pc, threads);
        rows.push_back({u0, well.u_eff, well.t_eff, res.eta, res.stderr_eta,
                        well.exists ? well.x_localmin : 0.0});
    }
    std::sort(rows.begin(), rows.end(),
              [](const CurveRow& a, const CurveRow& b) { return a.u_eff < b.u_eff; });
    return rows;
}

} // namespace vsel
