#ifndef VSEL_ENSEMBLE_HPP
#define VSEL_ENSEMBLE_HPP

#include "analytic.hpp"
#include "potential.hpp"
#include "units.hpp"

#include <cstdint>
#include <vector>

namespace vsel {

struct Particle {
    double x = 0.0;  // um
    double v = 0.0;  // um/ms
};

// Barrier drag protocol: x_D(t) = min(x_start + speed t, x_end), then held for
// hold_time so transient barely-bound atoms resolve before counting.
struct SweepSchedule {
    double x_start = 0.0;   // um
    double x_end = 0.0;     // um
    double speed = 0.0;     // um/ms, > 0
    double dt = 0.0;        // ms, integrator step
    double hold_time = 0.0; // ms

    void validate() const;
    double position(double t) const;
    double sweep_time() const { return (x_end - x_start) / speed; }
    double total_time() const { return sweep_time() + hold_time; }
};

struct EnsembleResult {
    std::int64_t n_total = 0;
    std::int64_t n_selected = 0;
    double eta = 0.0;
    double stderr_eta = 0.0;   // binomial, sqrt(eta (1-eta) / N)
    double t_selected = 0.0;   // nK, m <v^2> over the selected subpopulation
    bool well_missing = false; // selection against a non-existent well
};

// Gaussian phase-space sample: x ~ N(0, r0^2), v ~ N(0, v0^2), stream derived
// from (seed, particle index).  n must be >= 1.
std::vector<Particle> sample_cloud(const CloudSpec& cloud, std::int64_t n,
                                   std::uint64_t seed, const PhysicalConstants& pc = {});

// Slow-sweep limit: an atom is swept up iff it starts on the sweep-ahead side
// (x > x_start) and its total energy is below the well depth,
// g |x| + m v^2/2 < U_eff.
EnsembleResult select_quasistatic(const std::vector<Particle>& particles,
                                  const PotentialSpec& final_spec, const WellAnalysis& well,
                                  double x_start, const PhysicalConstants& pc = {},
                                  unsigned threads = 1);

// Full trajectory integration under the swept barrier with velocity-Verlet
// (forces from the analytic derivative of the potential; the time-dependent
// barrier position is evaluated at each force time, t_n and t_n+dt within a
// step).  After sweep + hold a particle counts as selected when it sits beyond
// the final well rim with energy inside the well:
// x > x_localmax and g |x| + m v^2/2 - U_min < U_eff.
// Throws NumericalAbort if a static-potential probe shows > 10% energy drift
// at the requested dt.
EnsembleResult simulate_sweep(const std::vector<Particle>& particles,
                              const PotentialSpec& base, const SweepSchedule& schedule,
                              const PhysicalConstants& pc = {}, unsigned threads = 1);

// Convenience used by the sweep harness: final state of every particle.
struct SweepTrace {
    std::vector<Particle> final_state;
    EnsembleResult result;
};
SweepTrace simulate_sweep_trace(const std::vector<Particle>& particles,
                                const PotentialSpec& base, const SweepSchedule& schedule,
                                const PhysicalConstants& pc = {}, unsigned threads = 1);

struct CurveRow {
    double u0 = 0.0;
    double u_eff = 0.0;
    double t_eff = 0.0;
    double eta = 0.0;
    double stderr_eta = 0.0;
    double x_localmin = 0.0;
};

enum class ClassicalMode { quasistatic, dynamic };

// One row per barrier height, ordered by U_eff.  The same sampled cloud is
// reused across rows so the curve varies only through the selection.
std::vector<CurveRow> efficiency_curve_classical(
    const PotentialSpec& base, const std::vector<double>& u0_list, ClassicalMode mode,
    const CloudSpec& cloud, const SweepSchedule& schedule, std::int64_t n_particles,
    std::uint64_t seed, const PhysicalConstants& pc = {}, unsigned threads = 1);

} // namespace vsel

#endif
