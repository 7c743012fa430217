#include "units.hpp"

#include <cmath>
#include <stdexcept>

namespace vsel {

double gradient_to_internal(double bprime_g_per_cm, const PhysicalConstants& pc) {
    if (bprime_g_per_cm < 0.0)
        throw std::domain_error("magnetic gradient must be non-negative");
    // nK/G  *  G/cm  *  cm/um
    return pc.mu_per_gauss() * bprime_g_per_cm * 1e-4;
}

double temperature_from_packet_width(double x0_um, const PhysicalConstants& pc) {
    if (!(x0_um > 0.0))
        throw std::domain_error("packet width x0 must be positive");
    const double hb = pc.hbar();
    return hb * hb / (4.0 * pc.mass() * x0_um * x0_um);
}

double packet_width_from_temperature(double t0_nk, const PhysicalConstants& pc) {
    if (!(t0_nk > 0.0))
        throw std::domain_error("temperature must be positive");
    return pc.hbar() / (2.0 * std::sqrt(pc.mass() * t0_nk));
}

double velocity_from_temperature(double t0_nk, const PhysicalConstants& pc) {
    if (t0_nk < 0.0)
        throw std::domain_error("temperature must be non-negative");
    return std::sqrt(t0_nk / pc.mass());
}

double temperature_from_velocity(double v0_um_ms, const PhysicalConstants& pc) {
    return pc.mass() * v0_um_ms * v0_um_ms;
}

} // namespace vsel
