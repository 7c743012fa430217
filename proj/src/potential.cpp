#include "potential.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace vsel {

void PotentialSpec::validate() const {
    if (gradient < 0.0) throw std::domain_error("gradient must be non-negative");
    if (barrier_height < 0.0) throw std::domain_error("barrier height U0 must be non-negative");
    if (!(barrier_width > 0.0)) throw std::domain_error("barrier width w0 must be positive");
    if (!std::isfinite(barrier_pos)) throw std::domain_error("barrier position must be finite");
}

double evaluate(const PotentialSpec& s, double x) {
    const double u = x - s.barrier_pos;
    return s.gradient * std::fabs(x) +
           s.barrier_height * std::exp(-u * u / (2.0 * s.barrier_width * s.barrier_width));
}

double derivative(const PotentialSpec& s, double x) {
    const double u = x - s.barrier_pos;
    const double w2 = s.barrier_width * s.barrier_width;
    const double sgn = (x > 0.0) - (x < 0.0);
    return s.gradient * sgn - s.barrier_height * u / w2 * std::exp(-u * u / (2.0 * w2));
}

double second_derivative(const PotentialSpec& s, double x) {
    const double u = x - s.barrier_pos;
    const double w2 = s.barrier_width * s.barrier_width;
    return s.barrier_height * (u * u - w2) / (w2 * w2) * std::exp(-u * u / (2.0 * w2));
}

double force(const PotentialSpec& s, double x) {
    return -derivative(s, x);
}

namespace {

// h(u) = u exp(-u^2/(2 w0^2)); stationary points of U sit where h(u) = g w0^2 / U0.
double stationary_lhs(double u, double w0) {
    return u * std::exp(-u * u / (2.0 * w0 * w0));
}

// Bisect h(u) = c on [lo, hi] where h - c changes sign.  Runs to floating-point
// resolution; the spec tolerance of 1e-6 um is met with a wide margin.
double bisect_stationary(double lo, double hi, double c, double w0) {
    double flo = stationary_lhs(lo, w0) - c;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double fm = stationary_lhs(mid, w0) - c;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

WellAnalysis well_analysis(const PotentialSpec& s, const PhysicalConstants& pc) {
    s.validate();
    WellAnalysis w;
    const double g = s.gradient, u0 = s.barrier_height, w0 = s.barrier_width;

    if (u0 <= 0.0) return w;  // no barrier, no well

    if (g == 0.0) {
        // flat floor at infinity; by convention the well is the whole barrier
        w.exists = true;
        w.x_localmax = s.barrier_pos;
        w.x_localmin = std::numeric_limits<double>::infinity();
        w.u_brim = u0;
        w.u_min = 0.0;
        w.u_eff = u0;
        w.t_eff = 2.0 * u0;
        w.omega = w.e0 = w.level_spacing = 0.0;
        return w;
    }

    // dU/dx = 0 for x > max(xD, 0) iff h(u) = g w0^2/U0 with u = x - xD.
    // h peaks at u = w0 with value w0 e^{-1/2}; existence needs U0 > g w0 sqrt(e).
    const double c = g * w0 * w0 / u0;
    const double hpeak = w0 * std::exp(-0.5);
    if (c >= hpeak) return w;  // barrier slope never beats the gradient

    const double u1 = bisect_stationary(0.0, w0, c, w0);        // local max of U
    double hi = 2.0 * w0;
    while (stationary_lhs(hi, w0) > c) hi *= 2.0;
    const double u2 = bisect_stationary(w0, hi, c, w0);         // local min of U

    const double xmax = s.barrier_pos + u1;
    const double xmin = s.barrier_pos + u2;
    if (xmax <= 0.0) return w;  // well folded over the trap center; not a +x-side well

    w.exists = true;
    w.x_localmax = xmax;
    w.x_localmin = xmin;
    w.u_brim = evaluate(s, xmax);
    w.u_min = evaluate(s, xmin);
    w.u_eff = w.u_brim - w.u_min;
    w.t_eff = 2.0 * w.u_eff;
    const double curv = second_derivative(s, xmin);  // |x| part is flat for x > 0
    w.omega = curv > 0.0 ? std::sqrt(curv / pc.mass()) : 0.0;
    w.e0 = 0.5 * pc.hbar() * w.omega;
    w.level_spacing = pc.hbar() * w.omega;
    return w;
}

double effective_temperature(double u_eff) {
    if (u_eff < 0.0) throw std::domain_error("U_eff must be non-negative");
    return 2.0 * u_eff;
}

double critical_velocity(double u_eff, const PhysicalConstants& pc) {
    if (u_eff < 0.0) throw std::domain_error("U_eff must be non-negative");
    return std::sqrt(2.0 * u_eff / pc.mass());
}

namespace {

double bisect_turning(const PotentialSpec& s, double lo, double hi, double e_abs) {
    double flo = evaluate(s, lo) - e_abs;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double fm = evaluate(s, mid) - e_abs;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

double well_action(const PotentialSpec& s, const WellAnalysis& w, double e_above_min,
                   const PhysicalConstants& pc) {
    if (!w.exists || !(e_above_min > 0.0)) return 0.0;
    const double e_abs = w.u_min + std::min(e_above_min, w.u_eff);
    const double xa = bisect_turning(s, w.x_localmax, w.x_localmin, e_abs);
    // outer turning point: U rises monotonically past the minimum up to the
    // magnetic slope, so expand the bracket until U > E.
    double hi = w.x_localmin + (w.x_localmin - s.barrier_pos);
    while (evaluate(s, hi) < e_abs) hi += s.barrier_width;
    const double xb = bisect_turning(s, hi, w.x_localmin, e_abs);

    // sqrt-singular at both turning points; substitute x = a + t^2 (resp.
    // b - t^2) on each half so the integrand is smooth, then Simpson.
    const double twom = 2.0 * pc.mass();
    auto p = [&](double x) {
        const double k = e_abs - evaluate(s, x);
        return k > 0.0 ? std::sqrt(twom * k) : 0.0;
    };
    const double mid = 0.5 * (xa + xb);
    const int n = 512;
    double total = 0.0;
    {   // left half, x = xa + t^2
        const double tmax = std::sqrt(mid - xa);
        const double dt = tmax / n;
        double acc = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double t = i * dt;
            const double f = 2.0 * t * p(xa + t * t);
            acc += (i == 0 || i == n) ? f : (i % 2 ? 4.0 * f : 2.0 * f);
        }
        total += acc * dt / 3.0;
    }
    {   // right half, x = xb - t^2
        const double tmax = std::sqrt(xb - mid);
        const double dt = tmax / n;
        double acc = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double t = i * dt;
            const double f = 2.0 * t * p(xb - t * t);
            acc += (i == 0 || i == n) ? f : (i % 2 ? 4.0 * f : 2.0 * f);
        }
        total += acc * dt / 3.0;
    }
    return 2.0 * total;  // there and back
}

int bound_state_estimate(const PotentialSpec& s, const WellAnalysis& w,
                         const PhysicalConstants& pc) {
    if (!w.exists || w.u_eff <= 0.0) return 0;
    const double smax = well_action(s, w, w.u_eff, pc);
    const double n = smax / (2.0 * M_PI * pc.hbar()) + 0.5;
    return n > 0.0 ? static_cast<int>(n) : 0;
}

} // namespace vsel
