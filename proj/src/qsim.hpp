#ifndef VSEL_QSIM_HPP
#define VSEL_QSIM_HPP

#include "ensemble.hpp"
#include "potential.hpp"
#include "units.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace vsel {

class Fft;

// Uniform spatial grid with the discrete Fourier momentum convention
// p_k = 2 pi hbar k / L, k = -n/2 .. n/2-1 (stored in FFT index order).
struct Grid {
    double x_min = -200.0;  // um
    double x_max = 200.0;   // um
    int n = 8192;           // power of two

    void validate() const;
    double length() const { return x_max - x_min; }
    double dx() const { return length() / n; }
    double x(int i) const { return x_min + i * dx(); }
    // momentum at FFT index k, in units of mass * um/ms
    double p(int k, const PhysicalConstants& pc = {}) const;
    double p_max(const PhysicalConstants& pc = {}) const;
};

enum class PacketMode { incoherent, coherent };
enum class CenterSampling { stratified, iid };

// Random-phase mixture of minimum-uncertainty Gaussian packets representing a
// thermal cloud: centers x_n weighted by the cloud envelope
// P_n ~ exp(-x_n^2/(2 r0^2)), per-packet rms width x0, phases uniform on
// [0, 2pi).  Incoherent mode keeps the packets separate (the ensemble-average
// density equals the weighted sum of packet densities); coherent mode
// assembles sum_n sqrt(P_n) e^{i phi_n} psi_n, renormalized since the cross
// terms leave the printed composite unnormalized.
struct WavepacketEnsemble {
    Grid grid;
    double x0 = 0.1;             // um, per-packet rms width
    double r0 = 1.0;             // um, cloud envelope rms
    PacketMode mode = PacketMode::incoherent;
    std::vector<double> centers;  // um
    std::vector<double> weights;  // P_n, sum to 1
    std::vector<double> phases;   // rad
    // incoherent: one row per packet; coherent: a single composite row
    std::vector<std::vector<std::complex<double>>> packets;

    std::size_t n_states() const { return packets.size(); }
    // incoherent density sum_n P_n |psi_n|^2 (or |Psi|^2 in coherent mode)
    std::vector<double> density() const;
    double norm() const;
};

WavepacketEnsemble build_ensemble(double r0, double x0, const Grid& grid, int n_packets,
                                  std::uint64_t seed, PacketMode mode = PacketMode::incoherent,
                                  CenterSampling sampling = CenterSampling::stratified,
                                  const PhysicalConstants& pc = {});

struct MomentumSpectrum {
    std::vector<double> p;        // ascending, mass um/ms units
    std::vector<double> density;  // |psi~|^2 per unit p
    double rms_p = 0.0;
};

MomentumSpectrum momentum_spectrum(const WavepacketEnsemble& ens,
                                   const PhysicalConstants& pc = {});

// One Strang step exp(-i dt T/2hbar) exp(-i dt U/hbar) exp(-i dt T/2hbar),
// kinetic factors applied spectrally, potential pointwise; the caller samples
// U on the grid at the step's midpoint time.  Unitary by construction.
void split_step(std::vector<std::complex<double>>& psi, const std::vector<double>& u_of_x,
                const Grid& grid, double dt, const PhysicalConstants& pc, Fft& fft);

struct PropagateOptions {
    double leak_threshold = 1e-6;   // abort when this norm fraction reaches the edge band
    std::int64_t leak_check_every = 1000;
    std::int64_t snapshot_every = 0;  // 0: no intermediate snapshots
    unsigned threads = 1;
};

struct PropagateReport {
    std::int64_t steps = 0;
    double final_time = 0.0;
    double max_boundary_fraction = 0.0;
    // incoherent densities at the snapshot cadence (pairs of time, density)
    std::vector<std::pair<double, std::vector<double>>> snapshots;
};

// Evolves every packet independently through the identical swept potential
// (grid-sampled at each step's midpoint time).  Consecutive half-kinetic
// factors are merged into full kicks between steps; states are regrouped to
// physical time for leak checks and snapshots, so the applied operator string
// is exactly the printed kinetic-potential-kinetic product.
// Throws NumericalAbort when the edge band accumulates more norm than
// leak_threshold (grid too small) or the momentum cutoff fails the
// 4 max(p0, m v_c, m u) resolution guard.
PropagateReport propagate(WavepacketEnsemble& ens, const PotentialSpec& base,
                          const SweepSchedule& schedule, double dt,
                          const PhysicalConstants& pc = {}, const PropagateOptions& opt = {});

// Spatial window of the selected state: [x_localmax, x_turn], x_turn the outer
// classical turning point at the brim energy (g x_turn = U(x_localmax)).
struct SelectionWindow {
    int i_lo = 0, i_hi = 0;  // cell range [i_lo, i_hi)
    double x_lo = 0.0, x_hi = 0.0;
};

SelectionWindow selection_window(const Grid& grid, const PotentialSpec& final_spec,
                                 const WellAnalysis& well);

struct QuantumResult {
    double eta = 0.0;
    double pe_s = 0.0;          // nK per selected atom, measured from U_min
    double ke_s = 0.0;          // nK per selected atom
    double rms_width = 0.0;     // um, of the selected density
    SelectionWindow window;
};

// Projects each packet onto the window and evaluates the selected-state
// observables: eta = integral of the selected density, PE from U - U_min,
// KE from the momentum-space second moment of the windowed state.  Energies
// are per selected atom (divided by eta); below eta = 1e-12 they are NaN.
QuantumResult selected_observables(const WavepacketEnsemble& ens,
                                   const PotentialSpec& final_spec, const WellAnalysis& well,
                                   const PhysicalConstants& pc = {});

// pi/8 of kinetic phase per step at the occupied-momentum guard
// q = 4 max(p0, m v_c, m u).
double auto_dt(double x0, double u_eff, double sweep_speed, const PhysicalConstants& pc = {});

struct QuantumCurveRow {
    double u0 = 0.0;
    double u_eff = 0.0;
    double t_eff = 0.0;
    double eta = 0.0;
    double x_localmin = 0.0;
    QuantumResult detail;
};

// One full propagation per barrier height, all starting from the same initial
// ensemble; rows ordered by U_eff.  The well is analyzed at the common sweep
// end x_end; schedule_for(u0, well) supplies the sweep (speed may depend on
// the well depth and must end at x_end), dt_for the step.
std::vector<QuantumCurveRow> efficiency_curve_quantum(
    const WavepacketEnsemble& initial, const PotentialSpec& base, double x_end,
    const std::vector<double>& u0_list,
    const std::function<SweepSchedule(double, const WellAnalysis&)>& schedule_for,
    const std::function<double(double, const WellAnalysis&)>& dt_for,
    const PhysicalConstants& pc = {}, const PropagateOptions& opt = {});

} // namespace vsel

#endif
