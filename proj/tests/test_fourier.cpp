#include <doctest.h>

#include <cmath>
#include <complex>

#include "helpers.hpp"
#include "vortex/errors.hpp"
#include "vortex/fourier.hpp"
#include "vortex/rng.hpp"

using namespace vortex;
using testutil::random_coeffs;

namespace {

FourierLoop random_loop(Rng& rng, const std::vector<Band>& bands, double scale) {
    FourierLoop z = FourierLoop::zero(bands, choose_grid_size(bands));
    for (int j = 0; j < z.n(); ++j)
        z.coeffs(j) = random_coeffs(rng, z.band(j).size(), scale);
    return z;
}

} // namespace

TEST_CASE("synthesis and analysis are inverse on banded data") {
    Rng rng(5);
    const std::vector<Band> bands = {{-2, 3}, {0, 0}, {-1, 1}};
    const FourierLoop z = random_loop(rng, bands, 1.0);
    const FourierLoop back = FourierLoop::from_samples(z.samples(), bands);
    for (int j = 0; j < z.n(); ++j)
        CHECK((back.coeffs(j) - z.coeffs(j)).norm() < 1e-13);
}

TEST_CASE("derivative matches the mode law and finite differences") {
    Rng rng(6);
    const std::vector<Band> bands = {{-3, 3}};
    const FourierLoop z = random_loop(rng, bands, 1.0);
    const FourierLoop dz = z.derivative();
    for (int m = -3; m <= 3; ++m)
        CHECK(std::abs(dz.coeff(0, m) -
                       std::complex<double>(0, kTwoPi * m) * z.coeff(0, m)) < 1e-14);

    // centered difference of the synthesized samples
    const Eigen::MatrixXcd zs = z.samples();
    const Eigen::MatrixXcd ds = dz.samples();
    const int T = z.grid_size();
    const double h = 1.0 / T;
    for (int p = 0; p < T; ++p) {
        const std::complex<double> fd =
            (zs(0, (p + 1) % T) - zs(0, (p + T - 1) % T)) / (2.0 * h);
        // second-order accuracy with the exact value available
        CHECK(std::abs(fd - ds(0, p)) < kTwoPi * kTwoPi * kTwoPi * 27.0 * h * h);
    }
}

TEST_CASE("Parseval: coefficient norm equals quadrature of |z|^2") {
    Rng rng(7);
    const std::vector<Band> bands = {{-2, 2}, {1, 4}};
    const FourierLoop z = random_loop(rng, bands, 0.7);
    const Eigen::MatrixXcd s = z.samples();
    double quad = 0.0;
    for (int p = 0; p < z.grid_size(); ++p)
        quad += s.col(p).squaredNorm();
    quad /= z.grid_size();
    CHECK(z.norm_l2_sq() == doctest::Approx(quad).epsilon(1e-12));
}

TEST_CASE("real loop helpers: derivative and antiderivative invert") {
    Rng rng(8);
    const int T = 32;
    Eigen::MatrixXd u(2, T);
    for (int i = 0; i < 2; ++i)
        for (int p = 0; p < T; ++p)
            u(i, p) = rng.normal();
    // remove means so the antiderivative is defined
    u.row(0).array() -= u.row(0).mean();
    u.row(1).array() -= u.row(1).mean();
    // drop the Nyquist mode, which the derivative cannot represent
    for (int i = 0; i < 2; ++i) {
        double c = 0.0;
        for (int p = 0; p < T; ++p)
            c += u(i, p) * ((p % 2 == 0) ? 1.0 : -1.0);
        c /= T;
        for (int p = 0; p < T; ++p)
            u(i, p) -= c * ((p % 2 == 0) ? 1.0 : -1.0);
    }
    const Eigen::MatrixXd du = loop_derivative(u);
    const Eigen::MatrixXd back = loop_antiderivative(du);
    CHECK((back - u).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(loop_mean(back).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("antiderivative rejects non-mean-zero input") {
    Eigen::MatrixXd u = Eigen::MatrixXd::Ones(1, 16);
    CHECK_THROWS_AS(loop_antiderivative(u), NonMeanZeroData);
}

TEST_CASE("loop_inner is the trapezoid pairing") {
    const int T = 16;
    Eigen::MatrixXd u(1, T), v(1, T);
    for (int p = 0; p < T; ++p) {
        u(0, p) = std::cos(kTwoPi * p / T);
        v(0, p) = std::cos(kTwoPi * p / T);
    }
    CHECK(loop_inner(u, v) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("grid size maintains the quartic quadrature margin") {
    const std::vector<Band> bands = {{-3, 5}, {0, 2}};
    const int T = choose_grid_size(bands);
    CHECK((T & (T - 1)) == 0); // power of two
    CHECK(T > 2 * 5);
}
