#include <doctest.h>

#include "potential.hpp"
#include "rng.hpp"

#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <limits>

using namespace vsel;

TEST_SUITE_BEGIN("potential");

namespace {

// independent oracle: dense scan of U over the +x side of the barrier
struct BruteWell {
    bool exists = false;
    double x_max = 0.0, x_min = 0.0, u_eff = 0.0;
};

BruteWell brute_scan(const PotentialSpec& s, int npts = 1000000) {
    BruteWell b;
    const double lo = std::max(s.barrier_pos, 0.0);
    const double hi = s.barrier_pos + 20.0 * s.barrier_width;
    const double dx = (hi - lo) / npts;
    double best_max = -1e300;
    int i_max = -1;
    // first local max after the barrier center
    double prev = evaluate(s, lo);
    for (int i = 1; i < npts; ++i) {
        const double x = lo + i * dx;
        const double u = evaluate(s, x);
        const double next = evaluate(s, x + dx);
        if (u > prev && u > next) {
            best_max = u;
            i_max = i;
            break;
        }
        prev = u;
    }
    if (i_max < 0) return b;
    double best_min = 1e300;
    int i_min = -1;
    for (int i = i_max + 1; i < npts; ++i) {
        const double x = lo + i * dx;
        const double u = evaluate(s, x);
        if (u < best_min) {
            best_min = u;
            i_min = i;
        }
    }
    if (i_min < 0 || i_min == npts - 1) return b;
    b.exists = true;
    b.x_max = lo + i_max * dx;
    b.x_min = lo + i_min * dx;
    b.u_eff = best_max - best_min;
    return b;
}

double fd_second_derivative(const PotentialSpec& s, double x, double h = 1e-4) {
    return (evaluate(s, x + h) - 2.0 * evaluate(s, x) + evaluate(s, x - h)) / (h * h);
}

} // namespace

TEST_CASE("evaluate") {
    CHECK(evaluate({10, 0, 5, 0}, 3.0) == doctest::Approx(30.0));
    CHECK(evaluate({0, 97, 5, 20}, 20.0) == doctest::Approx(97.0));
    // 271.3 from the gradient plus 35.1 of barrier tail
    CHECK(evaluate({10, 97, 5, 20}, 27.13) == doctest::Approx(306.39).epsilon(1e-3));
    // symmetric in |x| for the magnetic part
    CHECK(evaluate({10, 0, 5, 0}, -3.0) == doctest::Approx(30.0));
}

TEST_CASE("well anchors from the deep-well configuration") {
    const PotentialSpec s{10, 97, 5, 20};
    const WellAnalysis w = well_analysis(s);
    REQUIRE(w.exists);
    CHECK(w.u_eff == doctest::Approx(4.6).epsilon(0.03));
    CHECK(w.x_localmin == doctest::Approx(27.0).epsilon(0.02));
    CHECK(w.u_eff <= s.barrier_height);
    CHECK(w.x_localmin > w.x_localmax);
    CHECK(w.x_localmax > s.barrier_pos);

    const WellAnalysis w107 = well_analysis({10, 107, 5, 20});
    CHECK(w107.u_eff == doctest::Approx(9.8).epsilon(0.03));
}

TEST_CASE("stationary points satisfy dU/dx = 0 with the right curvatures") {
    const PotentialSpec s{10, 97, 5, 20};
    const WellAnalysis w = well_analysis(s);
    REQUIRE(w.exists);
    CHECK(std::fabs(derivative(s, w.x_localmax)) < 1e-9);
    CHECK(std::fabs(derivative(s, w.x_localmin)) < 1e-9);
    CHECK(second_derivative(s, w.x_localmin) > 0.0);
    CHECK(second_derivative(s, w.x_localmax) < 0.0);
    // analytic curvature against central differences
    CHECK(second_derivative(s, w.x_localmin) ==
          doctest::Approx(fd_second_derivative(s, w.x_localmin)).epsilon(1e-4));
}

TEST_CASE("gradient-free limit") {
    const WellAnalysis w = well_analysis({0, 97, 5, 0});
    REQUIRE(w.exists);
    CHECK(w.u_eff == doctest::Approx(97.0));
    CHECK(w.omega == 0.0);
    CHECK(std::isinf(w.x_localmin));
}

TEST_CASE("existence threshold U0 = g w0 sqrt(e)") {
    const double thresh = 10.0 * 5.0 * std::exp(0.5);
    CHECK_FALSE(well_analysis({10, thresh - 1e-9, 5, 20}).exists);
    CHECK_FALSE(well_analysis({10, thresh, 5, 20}).exists);
    CHECK(well_analysis({10, thresh + 1e-3, 5, 20}).exists);
    // brute-force confirmation just above threshold
    const PotentialSpec s{10, thresh + 0.5, 5, 20};
    CHECK(brute_scan(s, 200000).exists == well_analysis(s).exists);
}

TEST_CASE("well analysis agrees with a dense-grid scan on random specs") {
    Rng rng(2024, 7);
    int found = 0;
    for (int trial = 0; trial < 12; ++trial) {
        PotentialSpec s;
        s.gradient = 0.5 + 15.0 * rng.uniform();
        s.barrier_width = 1.0 + 7.0 * rng.uniform();
        s.barrier_pos = 30.0 * rng.uniform();
        // sample both sides of the existence threshold
        s.barrier_height = s.gradient * s.barrier_width * std::exp(0.5) * (0.6 + rng.uniform());
        const WellAnalysis w = well_analysis(s);
        const BruteWell b = brute_scan(s);
        REQUIRE(w.exists == b.exists);
        if (w.exists) {
            ++found;
            CHECK(w.u_eff == doctest::Approx(b.u_eff).epsilon(1e-4));
            CHECK(w.x_localmin == doctest::Approx(b.x_min).epsilon(1e-3));
            CHECK(w.u_eff <= s.barrier_height);
        }
    }
    CHECK(found >= 3);  // the draw spans the threshold, some wells must exist
}

TEST_CASE("U_eff monotone in U0") {
    Rng rng(11, 0);
    for (int trial = 0; trial < 8; ++trial) {
        const double g = 1.0 + 20.0 * rng.uniform();
        const double w0 = 1.0 + 6.0 * rng.uniform();
        double prev = 0.0;
        for (double u0 = g * w0 * std::exp(0.5) * 1.01; u0 < g * w0 * 20.0; u0 *= 1.3) {
            const WellAnalysis w = well_analysis({g, u0, w0, 10.0});
            REQUIRE(w.exists);
            CHECK(w.u_eff >= prev);
            prev = w.u_eff;
        }
    }
}

TEST_CASE("effective temperature doubles the depth") {
    CHECK(effective_temperature(4.6) == doctest::Approx(9.2));
    CHECK(effective_temperature(0.0) == 0.0);
    CHECK(effective_temperature(250.0) == doctest::Approx(500.0));
    CHECK_THROWS_AS(effective_temperature(-1.0), std::domain_error);
}

TEST_CASE("critical velocity") {
    CHECK(critical_velocity(0.0) == 0.0);
    CHECK(critical_velocity(4.6) == doctest::Approx(0.95).epsilon(2e-3));
    CHECK(critical_velocity(4.0 * 7.3) == doctest::Approx(2.0 * critical_velocity(7.3)).epsilon(1e-12));
}

TEST_CASE("well action and bound-state count against a harmonic well") {
    // deep narrow well: nearly harmonic near the floor, so the action at small
    // E matches the harmonic S(E) = 2 pi E / omega
    const PotentialSpec s{2.0, 400.0, 2.0, 30.0};
    const WellAnalysis w = well_analysis(s);
    REQUIRE(w.exists);
    const PhysicalConstants pc;
    const double e = 0.002 * w.u_eff;  // small enough that anharmonicity is negligible
    const double s_harm = 2.0 * M_PI * e / w.omega;
    CHECK(well_action(s, w, e, pc) == doctest::Approx(s_harm).epsilon(0.03));
    // count grows with depth
    const int n1 = bound_state_estimate(s, w, pc);
    const PotentialSpec s2{2.0, 800.0, 2.0, 30.0};
    const int n2 = bound_state_estimate(s2, well_analysis(s2), pc);
    CHECK(n2 > n1);
    CHECK(n1 > 0);
}

TEST_CASE("validation") {
    CHECK_THROWS_AS(well_analysis({-1, 97, 5, 20}), std::domain_error);
    CHECK_THROWS_AS(well_analysis({10, -5, 5, 20}), std::domain_error);
    CHECK_THROWS_AS(well_analysis({10, 97, 0, 20}), std::domain_error);
}

TEST_SUITE_END();
