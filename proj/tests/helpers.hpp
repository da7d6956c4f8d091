// Shared builders for the test suites: the standard projective-space
// data, a rank-2 torus example, random loop-space points, and small
// finite-difference utilities used as oracles.
#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

#include "vortex/approx.hpp"
#include "vortex/flow.hpp"
#include "vortex/fourier.hpp"
#include "vortex/loopspace.hpp"
#include "vortex/rng.hpp"
#include "vortex/toric.hpp"

namespace testutil {

using namespace vortex;

// C^3 with the diagonal circle action: quotient is the projective plane
inline TorusAction cp2_action(double tau = 1.0) {
    Eigen::MatrixXi w(3, 1);
    w << 1, 1, 1;
    Eigen::VectorXd t(1);
    t << tau;
    return TorusAction::create(w, t);
}

inline TorusAction cp2_exact(long num = 1, long den = 1) {
    Eigen::MatrixXi w(3, 1);
    w << 1, 1, 1;
    return TorusAction::create_exact(w, RationalVector{Rational(num, den)});
}

inline ApproxSpace cp2_space(int lo = 0, int hi = 2, double tau = 1.0) {
    return build(cp2_action(tau), std::vector<Band>(3, Band{lo, hi}));
}

// rank-2 action on C^3, proper, with regular value (2, 1)
inline TorusAction rank2_action() {
    Eigen::MatrixXi w(3, 2);
    w << 1, 0, 0, 1, 1, 1;
    Eigen::VectorXd t(2);
    t << 2.0, 1.0;
    return TorusAction::create(w, t);
}

inline Eigen::VectorXcd random_coeffs(Rng& rng, int size, double scale) {
    Eigen::VectorXcd c(size);
    for (int i = 0; i < size; ++i)
        c(i) = std::complex<double>(rng.normal(), rng.normal()) * scale;
    return c;
}

inline Eigen::VectorXd random_real(Rng& rng, int size, double scale) {
    Eigen::VectorXd v(size);
    for (int i = 0; i < size; ++i)
        v(i) = rng.normal() * scale;
    return v;
}

// copies a loop onto a (possibly larger) band set, preserving coefficients
inline FourierLoop lift(const FourierLoop& z, const std::vector<Band>& bands, int grid) {
    FourierLoop out = FourierLoop::zero(bands, grid);
    for (int j = 0; j < z.n(); ++j)
        for (int m = z.band(j).lo; m <= z.band(j).hi; ++m)
            out.set_coeff(j, m, z.coeff(j, m));
    return out;
}

// union band set of two loops
inline std::vector<Band> band_union(const FourierLoop& a, const FourierLoop& b) {
    std::vector<Band> bands;
    for (int j = 0; j < a.n(); ++j) {
        Band u;
        u.lo = std::min(a.band(j).lo, b.band(j).lo);
        u.hi = std::max(a.band(j).hi, b.band(j).hi);
        bands.push_back(u);
    }
    return bands;
}

// z + eps * zhat on the union band
inline FourierLoop add_scaled(const FourierLoop& z, const FourierLoop& zhat, double eps) {
    const std::vector<Band> bands = band_union(z, zhat);
    const int grid = std::max(z.grid_size(), zhat.grid_size());
    FourierLoop out = lift(z, bands, grid);
    for (int j = 0; j < zhat.n(); ++j)
        for (int m = zhat.band(j).lo; m <= zhat.band(j).hi; ++m)
            out.set_coeff(j, m, out.coeff(j, m) + eps * zhat.coeff(j, m));
    return out;
}

// centered finite difference of a scalar function of one real parameter
template <typename F>
double central_diff(F&& f, double h = 1e-5) {
    return (f(h) - f(-h)) / (2.0 * h);
}

// Initial state on the stable branch toward the nondegenerate rest point
// of the reduced projective-space dynamics (u, eta) with u = mean moment
// value: udot = -2 eta u, etadot = tau - u. Starts with u0 > tau flow
// into the rest point (u, eta) = (tau, 0) along eta_0 =
// sqrt(u0 - tau - tau ln(u0/tau)) (level set of the conserved quantity
// eta^2 + tau ln u - u). Mass is split over the three m = 0 slots with
// random phases; a tiny m = -1 seed exercises the decaying directions.
inline FlowState saddle_start(const ApproxSpace& space, Rng& rng, double u0, double tau = 1.0) {
    const double mags[3] = {0.5, 0.3, 0.2};
    FlowState st;
    st.c = Eigen::VectorXcd::Zero(space.N);
    st.eta = Eigen::VectorXd::Constant(1, std::sqrt(u0 - tau - tau * std::log(u0 / tau)));
    for (int l = 0; l < space.N; ++l) {
        if (space.modes[l] == 0)
            st.c(l) = std::polar(std::sqrt(2.0 * u0 * mags[space.rho[l]]), rng.uniform(0.0, kTwoPi));
        else if (space.modes[l] == -1)
            st.c(l) = std::polar(1e-6, rng.uniform(0.0, kTwoPi));
    }
    return st;
}

// Fixed start on a nonpositive band used by the metric-family runs:
// m = 0 mass on the expanding branch plus decaying-mode content, phases
// drawn once from a fixed seed so every run sees the same point.
inline FlowState decaying_band_start(const ApproxSpace& space) {
    Rng rng(90);
    const double mags[3] = {0.5, 0.3, 0.2};
    FlowState st;
    st.c = Eigen::VectorXcd::Zero(space.N);
    st.eta = Eigen::VectorXd::Constant(1, 0.15);
    for (int l = 0; l < space.N; ++l) {
        const double phase = rng.uniform(0.0, kTwoPi);
        if (space.modes[l] == 0)
            st.c(l) = std::polar(std::sqrt(2.0 * 1.2 * mags[space.rho[l]]), phase);
        else if (space.modes[l] == -1)
            st.c(l) = std::polar(0.25, phase);
        else
            st.c(l) = std::polar(0.1, phase);
    }
    return st;
}

// Integrator settings that resolve the slow saddle passage: the flow
// spends a long stretch near the rest point where the field norm decays
// through the convergence threshold, so the tolerances must keep the
// numerical closest approach (about sqrt(d0 * rk_tol)) well below
// grad_tol, and the dwell window must be shorter than the passage.
inline FlowOptions converged_flow_options() {
    FlowOptions o;
    o.s_max = 40.0;
    o.grad_tol = 1e-5;
    o.dwell = 0.3;
    o.rk_abs_tol = 1e-13;
    o.rk_rel_tol = 5e-13;
    o.record_ds = 0.05;
    return o;
}

} // namespace testutil
