#ifndef VSEL_UNITS_HPP
#define VSEL_UNITS_HPP

// Internal unit system: length in um, time in ms, velocity in um/ms (= mm/s),
// energy as E/kB in nK, phase in radians.  All module APIs exchange quantities
// in these units only; conversions from external units (G/cm, uK, ...) happen
// at the config boundary.  In this scaling every quantity of interest stays
// O(1)-O(1e3), which keeps the propagator phase factors well conditioned.

namespace vsel {

// Source-of-truth table (SI, CODATA 2018 / AME2020):
//   kB   = 1.380649e-23    J/K    (exact)
//   hbar = 1.054571817e-34 J s
//   muB  = 9.2740100783e-24 J/T
//   amu  = 1.66053906660e-27 kg
//   m(85Rb) = 84.911789738 amu
struct PhysicalConstants {
    static constexpr double kb_si   = 1.380649e-23;
    static constexpr double hbar_si = 1.054571817e-34;
    static constexpr double mub_si  = 9.2740100783e-24;
    static constexpr double amu_si  = 1.66053906660e-27;
    static constexpr double rb85_amu = 84.911789738;

    // Atom mass in amu; defaults to 85Rb.
    double mass_amu = rb85_amu;
    // Magnetic moment in units of muB.  The Bohr magneton reproduces the
    // published 373:1 kinetic/potential regime ratio exactly, so it is the
    // default; a Zeeman sub-state factor can be dialed in here.
    double mu_scale = 1.0;

    // hbar/kB in nK ms
    double hbar() const { return hbar_si / kb_si * 1e12; }
    // m/kB in nK ms^2/um^2, i.e. m v^2 in nK for v in um/ms
    double mass() const { return mass_amu * amu_si * 1e3 / kb_si; }
    // mu/kB in nK/G
    double mu_per_gauss() const { return mu_scale * mub_si / kb_si * 1e5; }
};

// mu B' / kB for a gradient B' in G/cm, as nK/um.  Throws std::domain_error
// for negative input.
double gradient_to_internal(double bprime_g_per_cm, const PhysicalConstants& pc = {});

// Temperature (nK) of a minimum-uncertainty packet of rms position width x0:
// rms momentum p0 = hbar/(2 x0), T0 = m v0^2 with v0 = p0/m, so that the mean
// kinetic energy is T0/2.  x0 must be positive.
double temperature_from_packet_width(double x0_um, const PhysicalConstants& pc = {});

// Inverse of the above.
double packet_width_from_temperature(double t0_nk, const PhysicalConstants& pc = {});

// v0 = sqrt(T0/m) in um/ms for T0 in nK; T0 >= 0.
double velocity_from_temperature(double t0_nk, const PhysicalConstants& pc = {});

// T0 = m v0^2 in nK.
double temperature_from_velocity(double v0_um_ms, const PhysicalConstants& pc = {});

} // namespace vsel

#endif
