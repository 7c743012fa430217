#ifndef VSEL_ANALYTIC_HPP
#define VSEL_ANALYTIC_HPP

#include "units.hpp"

#include <string>

namespace vsel {

// Initial thermal cloud: Gaussian in position (rms r0) and velocity (rms v0),
// with T0 = m v0^2.
struct CloudSpec {
    double r0 = 1.0;  // um
    double t0 = 1.0;  // nK

    void validate() const;
    double v0(const PhysicalConstants& pc = {}) const;
};

// Derived selection thresholds for a given well.
struct SelectionSpec {
    double u_eff = 0.0;   // nK
    double t_eff = 0.0;   // nK, = 2 u_eff
    double v_c = 0.0;     // um/ms
    double gradient = 0.0; // nK/um
    double x_d = 0.0;     // um, barrier rest position = lower spatial limit
};

SelectionSpec make_selection(double u_eff, double gradient, double x_d,
                             const PhysicalConstants& pc = {});

// Which energy scale dominates the selection: the cloud's kinetic energy or
// the magnetic potential energy varied across it.
enum class Regime { kinetic_dominated, intermediate, potential_dominated };

struct RegimeReport {
    double ke_i = 0.0;   // nK, <KE>_i = T0/2
    double pe_i = 0.0;   // nK, <PE>_i = sqrt(2/pi) g r0
    double ratio = 0.0;  // ke_i / pe_i (inf when g = 0)
    Regime regime = Regime::kinetic_dominated;
};

const char* regime_name(Regime r);

// Velocity-only selection efficiency (the error function of the original
// Gaussian velocity distribution): erf(sqrt(T_eff / (2 T0))).
double eta_ke(double t_eff, double t0);

// Low-barrier approximation sqrt(2 T_eff / (pi T0)), valid for T_eff < T0.
double eta_ke_lowbarrier(double t_eff, double t0);

// Position-only selection efficiency: Gaussian weight of [x_D, x_c] with
// x_c = T_eff/(2 g), the zero-velocity critical position.  One-sided, exactly
// as the integral is printed: atoms below the sweep start never enter.
double eta_pe(double t_eff, const CloudSpec& cloud, double gradient, double x_d);

// Low-barrier approximation sqrt(2/pi) x_c / r0.
double eta_pe_lowbarrier(double t_eff, const CloudSpec& cloud, double gradient);

// Combined low-barrier law beta T_eff^{3/2}, beta = 1/(sqrt(T0) r0 pi g).
double eta_lowbarrier_combined(double t_eff, const CloudSpec& cloud, double gradient);

// The exact double integral: outer adaptive quadrature over the velocity
// Gaussian of the closed-form inner spatial integral, with the
// velocity-dependent critical position x_c(v) = (U_eff - m v^2/2)/g clipped
// at x_D.  Absolute tolerance 1e-6.  g = 0 degenerates to x_c -> inf and
// reduces to eta_ke times the cloud fraction above x_D.
double eta_full(double u_eff, const CloudSpec& cloud, double gradient, double x_d,
                const PhysicalConstants& pc = {});

RegimeReport regime(const CloudSpec& cloud, double gradient, const PhysicalConstants& pc = {});

} // namespace vsel

#endif
