#include <doctest.h>

#include "analytic.hpp"
#include "potential.hpp"
#include "rng.hpp"
#include "units.hpp"

#include <cmath>
#include <initializer_list>
#include <stdexcept>

using namespace vsel;

TEST_SUITE_BEGIN("analytic");

namespace {

// independent oracle for the velocity error-function integral: fixed Simpson
// over the Gaussian, no erf
double oracle_eta_ke(double t_eff, double t0, int n = 20000) {
    const PhysicalConstants pc;
    const double v0 = velocity_from_temperature(t0, pc);
    const double vc = critical_velocity(0.5 * t_eff, pc);
    if (vc == 0.0) return 0.0;
    const double h = 2.0 * vc / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double v = -vc + i * h;
        const double f = std::exp(-v * v / (2.0 * v0 * v0));
        acc += (i == 0 || i == n) ? f : (i % 2 ? 4.0 * f : 2.0 * f);
    }
    return acc * h / 3.0 / (std::sqrt(2.0 * M_PI) * v0);
}

// brute 2D quadrature of the exact double integral
double oracle_eta_full(double u_eff, const CloudSpec& cloud, double g, double x_d,
                       int nv = 1200, int nx = 1200) {
    const PhysicalConstants pc;
    const double v0 = cloud.v0(pc);
    const double vc = critical_velocity(u_eff, pc);
    const double m = pc.mass();
    const double hv = 2.0 * vc / nv;
    double acc = 0.0;
    for (int i = 0; i <= nv; ++i) {
        const double v = -vc + i * hv;
        const double xc = g > 0 ? (u_eff - 0.5 * m * v * v) / g : 6.0 * cloud.r0;
        double inner = 0.0;
        if (xc > x_d) {
            const double hx = (xc - x_d) / nx;
            for (int j = 0; j <= nx; ++j) {
                const double x = x_d + j * hx;
                const double f = std::exp(-x * x / (2.0 * cloud.r0 * cloud.r0));
                inner += (j == 0 || j == nx) ? f : (j % 2 ? 4.0 * f : 2.0 * f);
            }
            inner *= hx / 3.0;
        }
        const double f = std::exp(-v * v / (2.0 * v0 * v0)) * inner;
        acc += (i == 0 || i == nv) ? f : (i % 2 ? 4.0 * f : 2.0 * f);
    }
    return acc * hv / 3.0 / (2.0 * M_PI * v0 * cloud.r0);
}

} // namespace

TEST_CASE("eta_ke anchors") {
    CHECK(eta_ke(0.0, 100.0) == 0.0);
    // the ~8% claim: 10 nK selected from 1 uK
    CHECK(eta_ke(10.0, 1000.0) == doctest::Approx(0.0798).epsilon(2e-3));
    CHECK(eta_ke(100.0, 100.0) == doctest::Approx(0.6827).epsilon(1e-3));
    // quadrature oracle across the range
    for (double ratio : {1e-3, 0.01, 0.2, 1.0, 4.0})
        CHECK(eta_ke(ratio * 50.0, 50.0) == doctest::Approx(oracle_eta_ke(ratio * 50.0, 50.0)).epsilon(1e-8));
}

TEST_CASE("eta_ke low-barrier approximation") {
    CHECK(eta_ke_lowbarrier(0.0, 100.0) == 0.0);
    CHECK(eta_ke_lowbarrier(10.0, 1000.0) == doctest::Approx(0.0798).epsilon(1e-3));
    // the linearized erf always overestimates, converging from above
    for (double ratio : {1e-4, 1e-3, 0.01, 0.1, 0.5, 1.0}) {
        const double lo = eta_ke(ratio * 100.0, 100.0);
        const double hi = eta_ke_lowbarrier(ratio * 100.0, 100.0);
        CHECK(hi >= lo);
        if (ratio <= 0.02) CHECK((hi - lo) / lo < 0.01);
    }
}

TEST_CASE("eta_pe") {
    const CloudSpec cloud{25.0, 5e4};
    // empty interval
    CHECK(eta_pe(2.0 * 10.0 * 5.0, cloud, 10.0, 5.0) == doctest::Approx(0.0));
    // half-Gaussian: x_c -> inf
    CHECK(eta_pe(1e12, cloud, 1.0, 0.0) == doctest::Approx(0.5).epsilon(1e-9));
    // x_D = 0, x_c = r0: one-sided one-sigma mass of the standard normal
    const double g = 3.0;
    const double t_eff = 2.0 * g * cloud.r0;
    CHECK(eta_pe(t_eff, cloud, g, 0.0) == doctest::Approx(0.3413).epsilon(1e-3));
}

TEST_CASE("eta_pe low-barrier approximation") {
    const CloudSpec cloud{25.0, 5e4};
    CHECK(eta_pe_lowbarrier(0.0, cloud, 10.0) == 0.0);
    CHECK(eta_pe_lowbarrier(8.0, cloud, 10.0) ==
          doctest::Approx(2.0 * eta_pe_lowbarrier(4.0, cloud, 10.0)).epsilon(1e-12));
    // agrees with the one-sided integral from x_D = 0 when x_c << r0
    const double g = 10.0;
    const double t_eff = 2.0 * g * (0.1 * cloud.r0);  // x_c = r0/10
    const double approx = eta_pe_lowbarrier(t_eff, cloud, g);
    const double exact = 2.0 * eta_pe(t_eff, cloud, g, 0.0);  // doubled one-sided
    CHECK(approx == doctest::Approx(exact).epsilon(0.02));
}

TEST_CASE("combined low-barrier law") {
    const CloudSpec cloud{25.0, 5e4};
    CHECK(eta_lowbarrier_combined(0.0, cloud, 671.7) == 0.0);
    CHECK(eta_lowbarrier_combined(4.0 * 7.0, cloud, 671.7) ==
          doctest::Approx(8.0 * eta_lowbarrier_combined(7.0, cloud, 671.7)).epsilon(1e-12));
}

TEST_CASE("eta_full basics") {
    const CloudSpec cloud{25.0, 5e4};
    CHECK(eta_full(0.0, cloud, 3.36, 0.0) == 0.0);
    // g -> 0 with x_D far below the cloud reduces to eta_ke
    const double u_eff = 250.0;
    CHECK(eta_full(u_eff, cloud, 0.0, -5.0 * cloud.r0 - 10.0) ==
          doctest::Approx(eta_ke(2.0 * u_eff, cloud.t0)).epsilon(1e-4));
    // tiny gradient approaches the same limit
    CHECK(eta_full(u_eff, cloud, 1e-6, -5.0 * cloud.r0 - 10.0) ==
          doctest::Approx(eta_ke(2.0 * u_eff, cloud.t0)).epsilon(1e-3));
}

TEST_CASE("eta_full against the brute 2D quadrature") {
    Rng rng(515, 3);
    for (int trial = 0; trial < 10; ++trial) {
        CloudSpec cloud;
        cloud.r0 = 5.0 + 40.0 * rng.uniform();
        cloud.t0 = 100.0 + 5e4 * rng.uniform();
        const double g = 1.0 + 100.0 * rng.uniform();
        const double u_eff = (0.02 + 0.3 * rng.uniform()) * cloud.t0 / 2.0;
        const double x_d = cloud.r0 * rng.uniform();
        const double got = eta_full(u_eff, cloud, g, x_d);
        const double want = oracle_eta_full(u_eff, cloud, g, x_d);
        CHECK(got == doctest::Approx(want).epsilon(5e-5));
        CHECK(got >= 0.0);
        CHECK(got <= 1.0);
    }
}

TEST_CASE("eta_full monotonicity") {
    Rng rng(99, 1);
    for (int trial = 0; trial < 6; ++trial) {
        CloudSpec cloud;
        cloud.r0 = 5.0 + 30.0 * rng.uniform();
        cloud.t0 = 500.0 + 3e4 * rng.uniform();
        const double g = 1.0 + 30.0 * rng.uniform();
        // non-decreasing in U_eff
        double prev = -1.0;
        for (double u = 1.0; u < cloud.t0; u *= 2.2) {
            const double eta = eta_full(u, cloud, g, 0.0);
            CHECK(eta >= prev - 1e-12);
            prev = eta;
        }
        // non-increasing in T0
        CloudSpec hot = cloud;
        hot.t0 = 2.0 * cloud.t0;
        CHECK(eta_full(cloud.t0 / 20.0, hot, g, 0.0) <=
              eta_full(cloud.t0 / 20.0, cloud, g, 0.0) + 1e-12);
    }
}

TEST_CASE("regime anchors") {
    // the published kinetic/potential energy ratios
    const CloudSpec cloud{25.0, 5e4};
    const RegimeReport weak = regime(cloud, gradient_to_internal(0.5));
    CHECK(weak.ratio == doctest::Approx(373.0).epsilon(0.005));
    CHECK(weak.regime == Regime::kinetic_dominated);

    const RegimeReport strong = regime(cloud, gradient_to_internal(100.0));
    CHECK(strong.ratio == doctest::Approx(373.17 / 200.0).epsilon(1e-3));
    CHECK(strong.regime == Regime::intermediate);

    const RegimeReport free_cloud = regime(cloud, 0.0);
    CHECK(std::isinf(free_cloud.ratio));
    CHECK(free_cloud.regime == Regime::kinetic_dominated);
}

TEST_CASE("efficiencies stay in [0, 1]") {
    Rng rng(7, 7);
    for (int trial = 0; trial < 30; ++trial) {
        CloudSpec cloud;
        cloud.r0 = 0.5 + 60.0 * rng.uniform();
        cloud.t0 = 1.0 + 1e5 * rng.uniform();
        const double g = 200.0 * rng.uniform();
        const double t_eff = 4.0 * cloud.t0 * rng.uniform();
        const double vals[] = {
            eta_ke(t_eff, cloud.t0),
            std::min(eta_ke_lowbarrier(t_eff, cloud.t0), 1e9),  // approximation may exceed 1
            g > 0 ? eta_pe(t_eff, cloud, g, 0.0) : 0.0,
            eta_full(0.5 * t_eff, cloud, g, 0.0),
        };
        CHECK(vals[0] >= 0.0);
        CHECK(vals[0] <= 1.0);
        CHECK(vals[2] >= 0.0);
        CHECK(vals[2] <= 1.0);
        CHECK(vals[3] >= 0.0);
        CHECK(vals[3] <= 1.0);
    }
}

TEST_SUITE_END();
