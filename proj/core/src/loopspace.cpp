// Loop-space functionals, gauge transformations and the g_r metric
// family on the Coulomb slice.
//
// Mathematical background. Loops (z, eta) in C^n x R^k carry the action
// functional
//
//     A(z, eta) = int lambda(z) z' dt + int <mu(z(t)) - tau, eta(t)> dt,
//
// lambda = sum_j y_j dx_j, whose symplectic part evaluates exactly in
// Fourier modes as -pi sum_{j,m} m |c_{jm}|^2. The gauge group acts by
// z |-> e^{-iA theta} z, eta |-> eta - theta'; A is invariant and every
// orbit meets the Coulomb slice {eta constant} along the identity
// component. The residual group H = T^k x Z^k acts on the slice by mode
// relabeling, shifting A by 2 pi <winding, tau>.
//
// Gradients of A0 = A|slice in the metric family g_r are
//
//     grad_r A0 = ( i z' - i L_z eta - L_z xi_r,  mu_bar(z) - tau ),
//     xi_r' = r^2 (mu(z(t)) - mu_bar(z)),   xi_r mean-zero,
//
// assembled here fully spectrally: the first two terms are the
// band-preserving multiplications ((A eta)_j - 2 pi m) c_{jm}, and
// L_z xi_r is a banded convolution against the autocorrelation spectrum
// of z, enlarging each band by the bandwidth of mu(z).

#include "vortex/loopspace.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "vortex/errors.hpp"

namespace vortex {

namespace {

using std::complex;
const complex<double> kI(0.0, 1.0);

// synthesis of a banded loop on a (possibly finer) power-of-two grid;
// exact because the data is band-limited below the target Nyquist
Eigen::MatrixXcd synth_on_grid(const FourierLoop& z, int grid) {
    if (grid == z.grid_size())
        return z.samples();
    if (grid <= 2 * z.max_abs_mode())
        throw GridMismatch("synthesis grid below the Nyquist margin of the band");
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(z.n(), grid);
    for (int j = 0; j < z.n(); ++j) {
        const Band& b = z.band(j);
        for (int p = 0; p < grid; ++p) {
            complex<double> acc(0.0, 0.0);
            for (int m = b.lo; m <= b.hi; ++m) {
                const double ang = kTwoPi * m * p / grid;
                acc += z.coeff(j, m) * complex<double>(std::cos(ang), std::sin(ang));
            }
            out(j, p) = acc;
        }
    }
    return out;
}

Eigen::MatrixXd mu_samples(const TorusAction& action, const Eigen::MatrixXcd& zs) {
    const Eigen::MatrixXd abs2 = zs.cwiseAbs2();
    return 0.5 * action.weights.cast<double>().transpose() * abs2;
}

// -pi sum_{j,m} m |c_{jm}|^2, the exact symplectic-area term
double symplectic_part(const FourierLoop& z) {
    double s = 0.0;
    for (int j = 0; j < z.n(); ++j) {
        const Band& b = z.band(j);
        for (int m = b.lo; m <= b.hi; ++m)
            s += static_cast<double>(m) * std::norm(z.coeff(j, m));
    }
    return -0.5 * kTwoPi * s; // -pi * sum
}

void check_point(const TorusAction& action, const LoopPoint& p) {
    if (p.z().n() != action.n())
        throw DimensionMismatch("loop has a different number of coordinates than the action");
    if (p.eta_samples().rows() != action.k())
        throw DimensionMismatch("eta has a different number of components than the torus");
}

void check_tangent(const TorusAction& action, const TangentVec& u) {
    if (u.z_hat.n() != action.n() || u.eta_hat.size() != action.k())
        throw DimensionMismatch("tangent vector dimensions do not match the action");
}

// multiply a loop by per-coordinate phases e^{-i (A theta(t))_j} in
// sample space and re-analyze on the widest band the grid represents
FourierLoop phase_multiply(const TorusAction& action, const FourierLoop& z,
                           const Eigen::MatrixXd& theta) {
    const int T = z.grid_size();
    Eigen::MatrixXcd zs = z.samples();
    const Eigen::MatrixXd phase_angle =
        action.weights.cast<double>() * theta; // n x T, (A theta(t))_j
    for (int j = 0; j < z.n(); ++j)
        for (int p = 0; p < T; ++p)
            zs(j, p) *= std::exp(-kI * phase_angle(j, p));
    const int half = T / 2 - 1;
    std::vector<Band> bands(static_cast<std::size_t>(z.n()), Band{-half, half});
    return FourierLoop::from_samples(zs, std::move(bands));
}

} // namespace

LoopPoint LoopPoint::general(FourierLoop z, Eigen::MatrixXd eta_samples) {
    if (eta_samples.cols() != z.grid_size())
        throw GridMismatch("eta samples must live on the grid of z");
    LoopPoint p;
    p.z_ = std::move(z);
    p.eta_ = std::move(eta_samples);
    p.constant_eta_ = true;
    for (int q = 1; q < p.eta_.cols() && p.constant_eta_; ++q)
        if (p.eta_.col(q) != p.eta_.col(0))
            p.constant_eta_ = false;
    return p;
}

LoopPoint LoopPoint::coulomb(FourierLoop z, Eigen::VectorXd eta) {
    LoopPoint p;
    p.eta_ = eta.replicate(1, z.grid_size());
    p.z_ = std::move(z);
    p.constant_eta_ = true;
    return p;
}

Eigen::VectorXd LoopPoint::eta() const {
    if (!constant_eta_)
        throw InvalidOptions("point is not on the Coulomb slice: eta is not constant");
    return eta_.col(0);
}

GaugeElement GaugeElement::identity(int k, int grid_size) {
    return GaugeElement{Eigen::VectorXd::Zero(k), Eigen::VectorXi::Zero(k),
                        Eigen::MatrixXd::Zero(k, grid_size)};
}

LoopPoint apply_gauge(const TorusAction& action, const GaugeElement& h, const LoopPoint& p) {
    check_point(action, p);
    const int k = action.k();
    const int T = p.z().grid_size();
    if (h.base.size() != k || h.winding.size() != k)
        throw DimensionMismatch("gauge element dimensions do not match the torus");
    if (h.periodic.rows() != k || h.periodic.cols() != T)
        throw GridMismatch("gauge periodic part must be k samples rows on the grid of z");

    const Eigen::VectorXi aw = action.weights * h.winding;       // (A winding)_j
    const Eigen::VectorXd ab = action.weights.cast<double>() * h.base;

    if (h.periodic.isZero(0.0)) {
        // residual element: exact mode relabeling m -> m - (A w)_j with
        // the constant phase e^{-i (A base)_j}
        std::vector<Band> bands;
        bands.reserve(static_cast<std::size_t>(p.z().n()));
        for (int j = 0; j < p.z().n(); ++j) {
            const Band& b = p.z().band(j);
            bands.push_back(Band{b.lo - aw(j), b.hi - aw(j)});
        }
        FourierLoop zn = FourierLoop::zero(bands, choose_grid_size(bands, T));
        for (int j = 0; j < p.z().n(); ++j) {
            const complex<double> phase = std::exp(-kI * ab(j));
            const Band& b = p.z().band(j);
            for (int m = b.lo; m <= b.hi; ++m)
                zn.set_coeff(j, m - aw(j), phase * p.z().coeff(j, m));
        }
        Eigen::MatrixXd eta = p.eta_samples();
        eta.colwise() -= kTwoPi * h.winding.cast<double>();
        if (eta.cols() != zn.grid_size()) {
            // the relabeled band needed a finer grid; eta is resampled by
            // constant extension per column block (it is unchanged as a
            // function of t only when constant, otherwise respread)
            Eigen::MatrixXd fine(k, zn.grid_size());
            const int ratio = zn.grid_size() / T;
            for (int q = 0; q < zn.grid_size(); ++q)
                fine.col(q) = eta.col(q / ratio);
            eta = std::move(fine);
        }
        return LoopPoint::general(std::move(zn), std::move(eta));
    }

    // full transformation in sample space
    Eigen::MatrixXd theta = h.periodic;
    for (int r = 0; r < k; ++r)
        for (int q = 0; q < T; ++q)
            theta(r, q) += h.base(r) + kTwoPi * h.winding(r) * (static_cast<double>(q) / T);
    FourierLoop zn = phase_multiply(action, p.z(), theta);
    Eigen::MatrixXd eta = p.eta_samples() - loop_derivative(h.periodic);
    eta.colwise() -= kTwoPi * h.winding.cast<double>();
    return LoopPoint::general(std::move(zn), std::move(eta));
}

double action_full(const TorusAction& action, const LoopPoint& p) {
    check_point(action, p);
    Eigen::MatrixXd m = mu_samples(action, p.z().samples());
    m.colwise() -= action.tau;
    return symplectic_part(p.z()) + loop_inner(m, p.eta_samples());
}

double action_A0(const TorusAction& action, const LoopPoint& p) {
    check_point(action, p);
    const Eigen::VectorXd eta = p.eta(); // throws off the slice
    return symplectic_part(p.z()) + eta.dot(mu_bar(action, p.z()) - action.tau);
}

Eigen::VectorXd mu_bar(const TorusAction& action, const FourierLoop& z) {
    if (z.n() != action.n())
        throw DimensionMismatch("loop has a different number of coordinates than the action");
    Eigen::VectorXd power(z.n()); // int |z_j|^2 dt by Parseval
    for (int j = 0; j < z.n(); ++j)
        power(j) = z.coeffs(j).squaredNorm();
    return 0.5 * action.weights.cast<double>().transpose() * power;
}

std::pair<LoopPoint, GaugeElement> coulomb_gauge(const TorusAction& action, const LoopPoint& p) {
    check_point(action, p);
    const Eigen::VectorXd eta_bar = loop_mean(p.eta_samples());
    Eigen::MatrixXd dev = p.eta_samples();
    dev.colwise() -= eta_bar;
    GaugeElement h{Eigen::VectorXd::Zero(action.k()), Eigen::VectorXi::Zero(action.k()),
                   loop_antiderivative(dev)};
    // the image lies exactly on the slice; build it there directly
    FourierLoop zn = phase_multiply(action, p.z(), h.periodic);
    return {LoopPoint::coulomb(std::move(zn), eta_bar), std::move(h)};
}

std::pair<LoopPoint, GaugeElement> normalize_by_H(const TorusAction& action, const LoopPoint& p) {
    check_point(action, p);
    const Eigen::VectorXd eta = p.eta();
    Eigen::VectorXi v(action.k());
    for (int r = 0; r < action.k(); ++r)
        v(r) = static_cast<int>(std::floor(eta(r) / kTwoPi));
    GaugeElement h = GaugeElement::identity(action.k(), p.z().grid_size());
    h.winding = v;
    if (v.isZero())
        return {p, std::move(h)};
    return {apply_gauge(action, h, p), std::move(h)};
}

double metric_g0(const LoopPoint& p, const TangentVec& u, const TangentVec& v) {
    if (u.z_hat.n() != p.z().n() || v.z_hat.n() != p.z().n() ||
        u.eta_hat.size() != v.eta_hat.size())
        throw DimensionMismatch("tangent vectors do not match the base point");
    double s = u.eta_hat.dot(v.eta_hat);
    for (int j = 0; j < p.z().n(); ++j) {
        const Band& b = u.z_hat.band(j);
        for (int m = b.lo; m <= b.hi; ++m)
            s += (std::conj(u.z_hat.coeff(j, m)) * v.z_hat.coeff(j, m)).real();
    }
    return s;
}

Eigen::MatrixXd solve_xi(const TorusAction& action, const FourierLoop& z, double r) {
    if (z.n() != action.n())
        throw DimensionMismatch("loop has a different number of coordinates than the action");
    if (r == 0.0)
        return Eigen::MatrixXd::Zero(action.k(), z.grid_size());
    Eigen::MatrixXd m = mu_samples(action, z.samples());
    m.colwise() -= loop_mean(m);
    return (r * r) * loop_antiderivative(m);
}

double metric_gr(const TorusAction& action, const LoopPoint& p, const TangentVec& u,
                 const TangentVec& v, double r) {
    check_point(action, p);
    check_tangent(action, u);
    check_tangent(action, v);
    if (!(r >= 0.0 && r <= 1.0))
        throw InvalidOptions("metric parameter r must lie in [0, 1]");
    if (r == 0.0)
        return metric_g0(p, u, v);

    const int k = action.k();
    const int n = action.n();
    const int T = std::max(p.z().grid_size(),
                           std::max(u.z_hat.grid_size(), v.z_hat.grid_size()));
    const double invr2 = 1.0 / (r * r);

    const Eigen::MatrixXcd zs = synth_on_grid(p.z(), T);
    const Eigen::MatrixXcd us = synth_on_grid(u.z_hat, T);
    const Eigen::MatrixXcd vs = synth_on_grid(v.z_hat, T);
    const Eigen::MatrixXd ad = action.weights.cast<double>();

    // spectral second-derivative stencil d2(p - q mod T)
    Eigen::VectorXd d2 = Eigen::VectorXd::Zero(T);
    for (int d = 0; d < T; ++d) {
        double acc = 0.0;
        for (int m = 1; m < T / 2; ++m) {
            const double w = kTwoPi * m;
            acc -= 2.0 * w * w * std::cos(kTwoPi * m * d / T);
        }
        const double wn = kTwoPi * (T / 2); // Nyquist cosine mode
        acc -= wn * wn * ((d % 2 == 0) ? 1.0 : -1.0);
        d2(d) = acc / T;
    }

    // unknowns [xi_{0,.}, ..., xi_{k-1,.}, c]: per sample
    //   -G(t_p) xi(t_p) + (1/r^2)(D2 xi)(t_p) - c = -L_z^* zhat (t_p),
    // G(t) = A^T diag(|z(t)|^2) A, plus k mean-zero rows
    const int dim = k * T + k;
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(dim, 2);
    for (int pidx = 0; pidx < T; ++pidx) {
        const Eigen::VectorXd w = zs.col(pidx).cwiseAbs2();
        const Eigen::MatrixXd G = ad.transpose() * w.asDiagonal() * ad;
        for (int a = 0; a < k; ++a) {
            const int row = a * T + pidx;
            for (int b = 0; b < k; ++b)
                S(row, b * T + pidx) -= G(a, b);
            for (int q = 0; q < T; ++q)
                S(row, a * T + q) += invr2 * d2((pidx - q + T) % T);
            S(row, k * T + a) = -1.0;
            for (int j = 0; j < n; ++j) {
                rhs(row, 0) -= ad(j, a) * (std::conj(zs(j, pidx)) * us(j, pidx)).imag();
                rhs(row, 1) -= ad(j, a) * (std::conj(zs(j, pidx)) * vs(j, pidx)).imag();
            }
        }
    }
    for (int a = 0; a < k; ++a)
        for (int q = 0; q < T; ++q)
            S(k * T + a, a * T + q) = 1.0;

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(S);
    const Eigen::MatrixXd sol = qr.solve(rhs);
    const double resid = (S * sol - rhs).norm();
    if (!(resid <= 1e-7 * std::max(1.0, rhs.norm())))
        throw LinearSolveFailure("compensation system for g_r could not be solved accurately");

    Eigen::MatrixXd xu(k, T), xv(k, T);
    for (int a = 0; a < k; ++a)
        for (int q = 0; q < T; ++q) {
            xu(a, q) = sol(a * T + q, 0);
            xv(a, q) = sol(a * T + q, 1);
        }

    // int <zhat_u - L_z xi_u, zhat_v - L_z xi_v> dt by the trapezoid rule
    double term1 = 0.0;
    for (int pidx = 0; pidx < T; ++pidx) {
        const Eigen::VectorXd pu = ad * xu.col(pidx);
        const Eigen::VectorXd pv = ad * xv.col(pidx);
        for (int j = 0; j < n; ++j) {
            const complex<double> au = us(j, pidx) - kI * pu(j) * zs(j, pidx);
            const complex<double> av = vs(j, pidx) - kI * pv(j) * zs(j, pidx);
            term1 += (std::conj(au) * av).real();
        }
    }
    term1 /= T;

    const double term2 = invr2 * loop_inner(loop_derivative(xu), loop_derivative(xv));
    return term1 + term2 + u.eta_hat.dot(v.eta_hat);
}

double metric_g1(const TorusAction& action, const LoopPoint& p, const TangentVec& u,
                 const TangentVec& v) {
    return metric_gr(action, p, u, v, 1.0);
}

TangentVec grad(const TorusAction& action, const LoopPoint& p, double r) {
    check_point(action, p);
    if (!(r >= 0.0 && r <= 1.0))
        throw InvalidOptions("gradient parameter r must lie in [0, 1]");
    const Eigen::VectorXd eta = p.eta(); // gradient of A0 lives on the slice
    const FourierLoop& z = p.z();
    const int n = z.n();
    const int k = action.k();
    const Eigen::VectorXd aeta = action.weights.cast<double>() * eta;

    TangentVec g;
    g.eta_hat = mu_bar(action, z) - action.tau;

    // bandwidth of mu(z): the autocorrelation of each coordinate reaches
    // lags up to hi_j - lo_j
    int width = 0;
    for (int j = 0; j < n; ++j)
        width = std::max(width, z.band(j).size() - 1);

    // xi_r in modes: xi_hat_r(m) = r^2 mu_hat_r(m) / (2 pi i m), m != 0
    Eigen::MatrixXcd xi_hat = Eigen::MatrixXcd::Zero(k, 2 * width + 1); // column w <-> lag w - width
    bool xi_zero = true;
    if (r > 0.0 && width > 0) {
        for (int lag = -width; lag <= width; ++lag) {
            if (lag == 0)
                continue;
            Eigen::VectorXcd mu_hat = Eigen::VectorXcd::Zero(k);
            for (int j = 0; j < n; ++j) {
                const Band& b = z.band(j);
                complex<double> ac(0.0, 0.0);
                for (int m = b.lo; m <= b.hi; ++m)
                    if (b.contains(m - lag))
                        ac += z.coeff(j, m) * std::conj(z.coeff(j, m - lag));
                for (int a = 0; a < k; ++a)
                    mu_hat(a) += 0.5 * action.weights(j, a) * ac;
            }
            const complex<double> col = (r * r) / (kTwoPi * lag * kI);
            for (int a = 0; a < k; ++a) {
                xi_hat(a, lag + width) = col * mu_hat(a);
                if (xi_hat(a, lag + width) != 0.0)
                    xi_zero = false;
            }
        }
    }

    if (r == 0.0 || xi_zero) {
        // band-preserving part only: ((A eta)_j - 2 pi m) c_{jm}
        FourierLoop gz = FourierLoop::zero(z.bands(), z.grid_size());
        for (int j = 0; j < n; ++j) {
            const Band& b = z.band(j);
            for (int m = b.lo; m <= b.hi; ++m)
                gz.set_coeff(j, m, (aeta(j) - kTwoPi * m) * z.coeff(j, m));
        }
        g.z_hat = std::move(gz);
        return g;
    }

    // (A xi_hat)_j per lag
    Eigen::MatrixXcd axi = Eigen::MatrixXcd::Zero(n, 2 * width + 1);
    for (int j = 0; j < n; ++j)
        for (int lag = -width; lag <= width; ++lag)
            for (int a = 0; a < k; ++a)
                axi(j, lag + width) += static_cast<double>(action.weights(j, a)) * xi_hat(a, lag + width);

    std::vector<Band> enlarged;
    enlarged.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        enlarged.push_back(Band{z.band(j).lo - width, z.band(j).hi + width});
    FourierLoop gz = FourierLoop::zero(enlarged, choose_grid_size(enlarged, z.grid_size()));
    for (int j = 0; j < n; ++j) {
        const Band& b = z.band(j);
        for (int m = b.lo - width; m <= b.hi + width; ++m) {
            complex<double> c(0.0, 0.0);
            if (b.contains(m))
                c += (aeta(j) - kTwoPi * m) * z.coeff(j, m);
            // -(L_z xi)_j(m) = -i sum_lag (A xi_hat)_j(lag) c_{j, m-lag}
            for (int lag = -width; lag <= width; ++lag)
                if (lag != 0 && b.contains(m - lag))
                    c -= kI * axi(j, lag + width) * z.coeff(j, m - lag);
            gz.set_coeff(j, m, c);
        }
    }
    g.z_hat = std::move(gz);
    return g;
}

} // namespace vortex
