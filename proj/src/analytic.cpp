#include "analytic.hpp"

#include "potential.hpp"
#include "quad.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace vsel {

void CloudSpec::validate() const {
    if (!(r0 > 0.0)) throw std::domain_error("cloud radius r0 must be positive");
    if (!(t0 > 0.0)) throw std::domain_error("cloud temperature T0 must be positive");
}

double CloudSpec::v0(const PhysicalConstants& pc) const {
    return velocity_from_temperature(t0, pc);
}

SelectionSpec make_selection(double u_eff, double gradient, double x_d,
                             const PhysicalConstants& pc) {
    SelectionSpec s;
    s.u_eff = u_eff;
    s.t_eff = effective_temperature(u_eff);
    s.v_c = critical_velocity(u_eff, pc);
    s.gradient = gradient;
    s.x_d = x_d;
    return s;
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::kinetic_dominated: return "kinetic-dominated";
        case Regime::intermediate: return "intermediate";
        case Regime::potential_dominated: return "potential-dominated";
    }
    return "?";
}

double eta_ke(double t_eff, double t0) {
    if (!(t0 > 0.0)) throw std::domain_error("T0 must be positive");
    if (t_eff < 0.0) throw std::domain_error("T_eff must be non-negative");
    return std::erf(std::sqrt(t_eff / (2.0 * t0)));
}

double eta_ke_lowbarrier(double t_eff, double t0) {
    if (!(t0 > 0.0)) throw std::domain_error("T0 must be positive");
    if (t_eff < 0.0) throw std::domain_error("T_eff must be non-negative");
    return std::sqrt(2.0 * t_eff / (M_PI * t0));
}

double eta_pe(double t_eff, const CloudSpec& cloud, double gradient, double x_d) {
    cloud.validate();
    if (!(gradient > 0.0)) throw std::domain_error("eta_pe needs a positive gradient");
    const double x_c = t_eff / (2.0 * gradient);
    if (x_c <= x_d) return 0.0;
    return normal_cdf(x_c / cloud.r0) - normal_cdf(x_d / cloud.r0);
}

double eta_pe_lowbarrier(double t_eff, const CloudSpec& cloud, double gradient) {
    cloud.validate();
    if (!(gradient > 0.0)) throw std::domain_error("eta_pe needs a positive gradient");
    return std::sqrt(2.0 / M_PI) * t_eff / (2.0 * cloud.r0 * gradient);
}

double eta_lowbarrier_combined(double t_eff, const CloudSpec& cloud, double gradient) {
    cloud.validate();
    if (!(gradient > 0.0)) throw std::domain_error("combined law needs a positive gradient");
    const double beta = 1.0 / (std::sqrt(cloud.t0) * cloud.r0 * M_PI * gradient);
    return beta * std::pow(t_eff, 1.5);
}

double eta_full(double u_eff, const CloudSpec& cloud, double gradient, double x_d,
                const PhysicalConstants& pc) {
    cloud.validate();
    if (gradient < 0.0) throw std::domain_error("gradient must be non-negative");
    if (u_eff <= 0.0) return 0.0;

    const double t_eff = 2.0 * u_eff;
    if (gradient == 0.0) {
        // x_c -> inf: every position above the barrier start qualifies
        return eta_ke(t_eff, cloud.t0) * (1.0 - normal_cdf(x_d / cloud.r0));
    }

    const double v0 = cloud.v0(pc);
    const double v_c = critical_velocity(u_eff, pc);
    const double m = pc.mass();
    const double r0 = cloud.r0;
    const double phi_lo = normal_cdf(x_d / r0);

    // integrand even in v; fold to [0, v_c]
    auto f = [&](double v) {
        double x_c = (u_eff - 0.5 * m * v * v) / gradient;
        if (x_c < x_d) x_c = x_d;
        const double spatial = normal_cdf(x_c / r0) - phi_lo;
        return std::exp(-v * v / (2.0 * v0 * v0)) * spatial;
    };
    const double outer = integrate(f, 0.0, v_c, 0.5e-6 * std::sqrt(2.0 * M_PI) * v0, 48);
    return 2.0 * outer / (std::sqrt(2.0 * M_PI) * v0);
}

RegimeReport regime(const CloudSpec& cloud, double gradient, const PhysicalConstants& pc) {
    cloud.validate();
    if (gradient < 0.0) throw std::domain_error("gradient must be non-negative");
    (void)pc;
    RegimeReport r;
    r.ke_i = 0.5 * cloud.t0;
    r.pe_i = std::sqrt(2.0 / M_PI) * gradient * cloud.r0;
    r.ratio = r.pe_i > 0.0 ? r.ke_i / r.pe_i : std::numeric_limits<double>::infinity();
    if (r.ratio > 10.0)
        r.regime = Regime::kinetic_dominated;
    else if (r.ratio < 0.1)
        r.regime = Regime::potential_dominated;
    else
        r.regime = Regime::intermediate;
    return r;
}

} // namespace vsel
