// Action functional, gauge action, metric family, and gradient duality
// on the Coulomb slice. The central property: for every metric
// parameter r, g_r(grad_r A0, v) is the directional derivative of A0
// along v.
#include <cmath>
#include <complex>
#include <vector>

#include <doctest.h>

#include "helpers.hpp"
#include "vortex/approx.hpp"
#include "vortex/errors.hpp"
#include "vortex/fourier.hpp"
#include "vortex/loopspace.hpp"
#include "vortex/rng.hpp"

using namespace vortex;
using namespace testutil;

namespace {

// L^2 norm of the loop via Parseval on its coefficients
double loop_l2(const FourierLoop& z) {
    double s = 0.0;
    for (int j = 0; j < z.n(); ++j)
        for (int m = z.band(j).lo; m <= z.band(j).hi; ++m)
            s += std::norm(z.coeff(j, m));
    return std::sqrt(s);
}

// pointwise moment map samples, k x T
Eigen::MatrixXd moment_samples(const TorusAction& action, const FourierLoop& z) {
    const Eigen::MatrixXcd zs = z.samples();
    Eigen::MatrixXd out(action.k(), zs.cols());
    for (int p = 0; p < zs.cols(); ++p)
        for (int r = 0; r < action.k(); ++r) {
            double acc = 0.0;
            for (int j = 0; j < action.n(); ++j)
                acc += action.weights(j, r) * std::norm(zs(j, p));
            out(r, p) = 0.5 * acc;
        }
    return out;
}

} // namespace

TEST_CASE("slice action matches the trapezoid oracle and the closed form") {
    ApproxSpace sp = cp2_space(-1, 2);
    Rng rng(101);
    for (int trial = 0; trial < 8; ++trial) {
        const Eigen::VectorXcd c = random_coeffs(rng, sp.N, 0.7);
        const FourierLoop z = embed(sp, c);

        // loop term: int sum_j y_j x_j' dt on the sample grid
        const Eigen::MatrixXcd zs = z.samples();
        const Eigen::MatrixXd x = zs.real(), y = zs.imag();
        const double loop_term = loop_inner(y, loop_derivative(x));

        double closed = 0.0;
        for (int l = 0; l < sp.N; ++l)
            closed += -0.5 * kTwoPi * sp.modes[l] * std::norm(c(l));

        const double a0_zero_eta =
            action_A0(sp.action, LoopPoint::coulomb(z, Eigen::VectorXd::Zero(1)));
        CHECK(a0_zero_eta == doctest::Approx(loop_term).epsilon(1e-11));
        CHECK(a0_zero_eta == doctest::Approx(closed).epsilon(1e-11));

        // multiplier term adds <eta, mu_bar - tau>
        const Eigen::VectorXd eta = random_real(rng, 1, 1.0);
        const double a0 = action_A0(sp.action, LoopPoint::coulomb(z, eta));
        const Eigen::VectorXd gap = mu_bar(sp.action, z) - sp.action.tau;
        CHECK(a0 == doctest::Approx(closed + eta.dot(gap)).epsilon(1e-11));
    }
}

TEST_CASE("full-space action: slice restriction and gauge behavior") {
    ApproxSpace sp = cp2_space(-1, 1);
    Rng rng(202);
    const Eigen::VectorXcd c = random_coeffs(rng, sp.N, 0.6);
    const FourierLoop z = embed(sp, c);
    const int T = z.grid_size();

    SUBCASE("restriction to constant eta agrees with the slice action") {
        const Eigen::VectorXd eta = random_real(rng, 1, 0.8);
        const LoopPoint p = LoopPoint::coulomb(z, eta);
        CHECK(action_full(sp.action, p) == doctest::Approx(action_A0(sp.action, p)).epsilon(1e-12));
    }

    SUBCASE("gauge transformations shift the action by 2 pi <winding, tau>") {
        Eigen::MatrixXd eta_t(1, T);
        for (int p = 0; p < T; ++p)
            eta_t(0, p) = 0.4 + 0.3 * std::cos(kTwoPi * p / T);
        const LoopPoint p0 = LoopPoint::general(z, eta_t);
        const double a_before = action_full(sp.action, p0);

        GaugeElement h = GaugeElement::identity(1, T);
        h.base(0) = 1.3;
        h.winding(0) = 1;
        for (int p = 0; p < T; ++p)
            h.periodic(0, p) = 0.2 * std::sin(kTwoPi * p / T) + 0.1 * std::cos(2 * kTwoPi * p / T);
        h.periodic.row(0).array() -= h.periodic.row(0).mean();

        const LoopPoint p1 = apply_gauge(sp.action, h, p0);
        const double shift = kTwoPi * (h.winding.cast<double>().dot(sp.action.tau));
        CHECK(action_full(sp.action, p1) == doctest::Approx(a_before + shift).epsilon(1e-8));
    }
}

TEST_CASE("gradient duality: g_r(grad_r A0, v) equals the derivative of A0") {
    ApproxSpace sp = cp2_space(0, 2);
    Rng rng(303);
    for (double r : {0.0, 0.5, 1.0}) {
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            const FourierLoop z = embed(sp, random_coeffs(rng, sp.N, 0.6));
            const Eigen::VectorXd eta = random_real(rng, 1, 1.0);
            const LoopPoint p = LoopPoint::coulomb(z, eta);

            const FourierLoop z_hat = embed(sp, random_coeffs(rng, sp.N, 1.0));
            const TangentVec v{z_hat, random_real(rng, 1, 1.0)};

            const TangentVec g = grad(sp.action, p, r);
            const double pairing = metric_gr(sp.action, p, g, v, r);
            const double fd = central_diff([&](double e) {
                const LoopPoint q = LoopPoint::coulomb(add_scaled(z, z_hat, e), eta + e * v.eta_hat);
                return action_A0(sp.action, q);
            });
            worst = std::max(worst, std::abs(pairing - fd) / std::max(1.0, std::abs(fd)));
        }
        CAPTURE(r);
        CHECK(worst <= 1e-6);
    }
}

TEST_CASE("metric family: ordering, sandwich bounds, Poincare inequality") {
    ApproxSpace sp = cp2_space(-1, 2);
    Rng rng(404);

    // calibrated sandwich constant; the sampled ratio ||v||_0 /
    // ((1 + ||z||) ||v||_1) stays below 0.49 on this family
    const double kSandwichC = 1.0;

    for (int trial = 0; trial < 50; ++trial) {
        const FourierLoop z = embed(sp, random_coeffs(rng, sp.N, 0.8));
        const LoopPoint p = LoopPoint::coulomb(z, random_real(rng, 1, 0.5));
        const TangentVec v{embed(sp, random_coeffs(rng, sp.N, 1.0)), random_real(rng, 1, 1.0)};

        const double n0 = std::sqrt(metric_g0(p, v, v));
        const double nh = std::sqrt(metric_gr(sp.action, p, v, v, 0.5));
        const double n1 = std::sqrt(metric_g1(sp.action, p, v, v));

        // the compensation is variational, so the norm decreases in r
        CHECK(n1 <= nh * (1.0 + 1e-12));
        CHECK(nh <= n0 * (1.0 + 1e-12));
        CHECK(n0 <= kSandwichC * (1.0 + loop_l2(z)) * n1 * (1.0 + 1e-12));
    }

    // degenerate parameter reproduces the slice metric exactly
    {
        const FourierLoop z = embed(sp, random_coeffs(rng, sp.N, 0.8));
        const LoopPoint p = LoopPoint::coulomb(z, random_real(rng, 1, 0.5));
        const TangentVec v{embed(sp, random_coeffs(rng, sp.N, 1.0)), random_real(rng, 1, 1.0)};
        CHECK(metric_gr(sp.action, p, v, v, 0.0) == doctest::Approx(metric_g0(p, v, v)).epsilon(1e-14));
    }

    // Poincare: 2 pi ||u|| <= ||u'|| for mean-zero loops, sharp on the
    // first mode
    const int T = 32;
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::MatrixXd u(2, T);
        for (int i = 0; i < 2; ++i)
            for (int p = 0; p < T; ++p)
                u(i, p) = rng.normal();
        u.row(0).array() -= u.row(0).mean();
        u.row(1).array() -= u.row(1).mean();
        const double nu = std::sqrt(loop_inner(u, u));
        const Eigen::MatrixXd du = loop_derivative(u);
        CHECK(kTwoPi * nu <= std::sqrt(loop_inner(du, du)) * (1.0 + 1e-12));
    }
    {
        Eigen::MatrixXd u(1, T);
        for (int p = 0; p < T; ++p)
            u(0, p) = std::cos(kTwoPi * p / T);
        const Eigen::MatrixXd du = loop_derivative(u);
        CHECK(kTwoPi * std::sqrt(loop_inner(u, u)) ==
              doctest::Approx(std::sqrt(loop_inner(du, du))).epsilon(1e-12));
    }
}

TEST_CASE("compensation field solves its defining ODE with zero mean") {
    ApproxSpace sp = cp2_space(-1, 2);
    Rng rng(505);
    const FourierLoop z = embed(sp, random_coeffs(rng, sp.N, 0.8));

    CHECK(solve_xi(sp.action, z, 0.0).cwiseAbs().maxCoeff() == 0.0);

    for (double r : {0.5, 1.0}) {
        const Eigen::MatrixXd xi = solve_xi(sp.action, z, r);
        CHECK(std::abs(xi.row(0).mean()) <= 1e-13);
        const Eigen::MatrixXd mu_t = moment_samples(sp.action, z);
        const Eigen::MatrixXd rhs = r * r * (mu_t.array() - mu_t.row(0).mean()).matrix();
        const Eigen::MatrixXd defect = loop_derivative(xi) - rhs;
        CHECK(defect.cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("coulomb normalization lands on the slice and preserves the action") {
    ApproxSpace sp = cp2_space(-1, 1);
    Rng rng(606);
    const FourierLoop z = embed(sp, random_coeffs(rng, sp.N, 0.6));
    const int T = z.grid_size();
    Eigen::MatrixXd eta_t(1, T);
    for (int p = 0; p < T; ++p)
        eta_t(0, p) = -0.3 + 0.25 * std::sin(kTwoPi * p / T) + 0.1 * std::cos(2 * kTwoPi * p / T);
    const LoopPoint p0 = LoopPoint::general(z, eta_t);

    const auto [q, h] = coulomb_gauge(sp.action, p0);
    CHECK(q.on_coulomb_slice());
    CHECK(q.eta()(0) == doctest::Approx(eta_t.row(0).mean()).epsilon(1e-12));
    CHECK(h.winding(0) == 0);
    CHECK(action_full(sp.action, q) == doctest::Approx(action_full(sp.action, p0)).epsilon(1e-8));

    // the returned element reproduces the normalized point
    const LoopPoint q2 = apply_gauge(sp.action, h, p0);
    CHECK((q2.eta_samples() - q.eta_samples()).cwiseAbs().maxCoeff() <= 1e-10);
    const Eigen::MatrixXcd dz = q2.z().samples() - q.z().samples();
    CHECK(dz.cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("residual normalization: fundamental domain and action shift") {
    ApproxSpace sp = cp2_space(-2, 2);
    Rng rng(707);
    const FourierLoop z = embed(sp, random_coeffs(rng, sp.N, 0.5));

    for (double eta0 : {7.0, -1.0, 0.5}) {
        const LoopPoint p = LoopPoint::coulomb(z, Eigen::VectorXd::Constant(1, eta0));
        const auto [q, h] = normalize_by_H(sp.action, p);
        CHECK(q.on_coulomb_slice());
        CHECK(q.eta()(0) >= 0.0);
        CHECK(q.eta()(0) < kTwoPi);
        CHECK(q.eta()(0) == doctest::Approx(eta0 - kTwoPi * h.winding(0)).epsilon(1e-12));

        const double shift = kTwoPi * h.winding.cast<double>().dot(sp.action.tau);
        CHECK(action_A0(sp.action, q) ==
              doctest::Approx(action_A0(sp.action, p) + shift).epsilon(1e-10));
    }
}
