#ifndef VSEL_POTENTIAL_HPP
#define VSEL_POTENTIAL_HPP

#include "units.hpp"

namespace vsel {

// Combined magnetic-trap + dipole-barrier potential
//   U(x) = g |x| + U0 exp(-(x - xD)^2 / (2 w0^2))
// with everything in internal units (nK, um).
struct PotentialSpec {
    double gradient = 0.0;        // g, nK/um
    double barrier_height = 0.0;  // U0, nK
    double barrier_width = 1.0;   // w0 (rms), um
    double barrier_pos = 0.0;     // xD, um

    void validate() const;  // throws std::domain_error
    PotentialSpec at(double xd) const { PotentialSpec s = *this; s.barrier_pos = xd; return s; }
};

double evaluate(const PotentialSpec& s, double x);
// dU/dx with the |x| kink resolved as sign(0) = 0
double derivative(const PotentialSpec& s, double x);
// d2U/dx2 of the barrier term (the magnetic part is flat away from x = 0)
double second_derivative(const PotentialSpec& s, double x);
double force(const PotentialSpec& s, double x);

// Geometry of the selection well on the far (+x) side of the barrier.
struct WellAnalysis {
    bool exists = false;
    double x_localmax = 0.0;   // um, inner rim of the well
    double x_localmin = 0.0;   // um (+inf in the g = 0 limit)
    double u_min = 0.0;        // nK, U at the local minimum
    double u_brim = 0.0;       // nK, U at the local maximum
    double u_eff = 0.0;        // nK, brim - floor; the true trap depth
    double t_eff = 0.0;        // nK, 2 u_eff
    double omega = 0.0;        // rad/ms, harmonic frequency at the minimum
    double e0 = 0.0;           // nK, hbar*omega/2
    double level_spacing = 0.0; // nK, hbar*omega
};

// Locates the stationary points of U for x > xD by bracketing the sign change
// of dU/dx and bisecting.  U_eff = U(x_localmax) - U(x_localmin); omega from
// the closed-form second derivative.  No well (barrier too weak to beat the
// gradient, U0 <= g w0 sqrt(e)) is reported through the exists flag, not as an
// error.  The degenerate g = 0 case reports U_eff = U0 against a flat floor at
// infinity with omega = 0.
WellAnalysis well_analysis(const PotentialSpec& s, const PhysicalConstants& pc = {});

// T_eff = 2 U_eff: the maximum kinetic energy of any selected atom, not an
// rms temperature.
double effective_temperature(double u_eff);

// v_c = sqrt(2 U_eff / m) in um/ms
double critical_velocity(double u_eff, const PhysicalConstants& pc = {});

// Action integral S(E) = 2 int sqrt(2 m (E_abs - U)) dx over the well orbit at
// energy E above the well floor (E_abs = u_min + E).  Valid for 0 < E <= u_eff.
double well_action(const PotentialSpec& s, const WellAnalysis& w, double e_above_min,
                   const PhysicalConstants& pc = {});

// Bound states the well admits by Bohr-Sommerfeld quantization
// S(E_n) = 2 pi hbar (n + 1/2), counted at the brim energy.
int bound_state_estimate(const PotentialSpec& s, const WellAnalysis& w,
                         const PhysicalConstants& pc = {});

} // namespace vsel

#endif
