// Neumann solver on the finite cylinder [-L, L] x S^1 for mean-zero
// data, the W^{2,2} a-priori ratio used to confirm its length-uniform
// constant, and the Coulomb gauge transform on the cylinder.
//
// The t-direction is periodic and handled spectrally (uniform samples,
// exact mode calculus below the Nyquist frequency). The s-direction
// carries the boundary conditions and is handled by collocation: either
// Chebyshev-Lobatto nodes with barycentric differentiation (spectral
// accuracy; the default) or a uniform second-order finite-difference
// grid. Each nonzero t-mode m of Delta f = h decouples into the
// two-point boundary-value problem
//
//     f_m'' - (2 pi m)^2 f_m = h_m,   +f_m'(+L) = (g+)_m,
//                                     -f_m'(-L) = (g-)_m,
//
// solved by replacing the boundary collocation rows with the Neumann
// rows. The m = 0 mode is excluded by the mean-zero hypothesis, which
// is validated, not enforced by projection.

#include "vortex/cylinder.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "vortex/errors.hpp"
#include "vortex/fourier.hpp"

namespace vortex {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

void check_nt(int nt) {
    if (nt < 4 || nt % 2 != 0)
        throw GridMismatch("t grid must have an even number >= 4 of samples");
}

// forward t-mode m of a real field: (1/nt) sum_p f(., p) e^{-2 pi i m p / nt}
Eigen::VectorXcd t_mode(const Eigen::MatrixXd& f, int m) {
    const int nt = static_cast<int>(f.cols());
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(f.rows());
    for (int p = 0; p < nt; ++p) {
        const double ang = -kTwoPi * m * p / nt;
        c += f.col(p) * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return c / nt;
}

// spectral t-derivative of a real field (Nyquist mode dropped: its
// derivative has no consistent real representative)
Eigen::MatrixXd t_derivative_real(const Eigen::MatrixXd& f) {
    const int nt = static_cast<int>(f.cols());
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(f.rows(), nt);
    for (int m = 1; m < nt / 2; ++m) {
        const Eigen::VectorXcd cm = t_mode(f, m) * (kTwoPi * m * kI);
        for (int p = 0; p < nt; ++p) {
            const double ang = kTwoPi * m * p / nt;
            out.col(p) +=
                2.0 * (cm * std::complex<double>(std::cos(ang), std::sin(ang))).real();
        }
    }
    return out;
}

// spectral t-second-derivative; unlike the first derivative, the Nyquist
// cosine maps to a grid-representable cosine and is kept
Eigen::MatrixXd t_second_derivative_real(const Eigen::MatrixXd& f) {
    const int nt = static_cast<int>(f.cols());
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(f.rows(), nt);
    for (int m = 1; m <= nt / 2; ++m) {
        const double w2 = (kTwoPi * m) * (kTwoPi * m);
        const Eigen::VectorXcd cm = t_mode(f, m) * (-w2);
        const double dup = (m == nt / 2) ? 1.0 : 2.0;
        for (int p = 0; p < nt; ++p) {
            const double ang = kTwoPi * m * p / nt;
            out.col(p) +=
                dup * (cm * std::complex<double>(std::cos(ang), std::sin(ang))).real();
        }
    }
    return out;
}

Eigen::MatrixXcd t_derivative_complex(const Eigen::MatrixXcd& f) {
    const int nt = static_cast<int>(f.cols());
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(f.rows(), nt);
    for (int m = -(nt / 2 - 1); m <= nt / 2 - 1; ++m) {
        if (m == 0)
            continue;
        Eigen::VectorXcd cm = Eigen::VectorXcd::Zero(f.rows());
        for (int p = 0; p < nt; ++p) {
            const double ang = -kTwoPi * m * p / nt;
            cm += f.col(p) * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        cm *= (kTwoPi * m) * kI / static_cast<double>(nt);
        for (int p = 0; p < nt; ++p) {
            const double ang = kTwoPi * m * p / nt;
            out.col(p) += cm * std::complex<double>(std::cos(ang), std::sin(ang));
        }
    }
    return out;
}

void check_mean_zero(const Eigen::MatrixXd& f, const char* what) {
    const double scale = std::max(1.0, f.cwiseAbs().maxCoeff());
    const Eigen::VectorXd means = f.rowwise().mean();
    if (means.cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw NonMeanZeroData(std::string(what) + " must have zero t-mean on every s slice");
}

void check_mean_zero(const Eigen::VectorXd& g, const char* what) {
    const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    if (std::abs(g.mean()) > 1e-12 * scale)
        throw NonMeanZeroData(std::string(what) + " must have zero mean");
}

double quad_norm(const SCollocation& sc, const Eigen::MatrixXd& f) {
    const int nt = static_cast<int>(f.cols());
    double acc = 0.0;
    for (int i = 0; i < f.rows(); ++i)
        acc += sc.weights(i) * f.row(i).squaredNorm() / nt;
    return std::sqrt(std::max(acc, 0.0));
}

} // namespace

int resolve_resolution(const NeumannOptions& opts) {
    if (opts.resolution < 0)
        throw InvalidOptions("resolution must be nonnegative");
    if (opts.resolution == 0)
        return opts.backend == SBackend::Chebyshev ? 49 : 512;
    if (opts.resolution < 8)
        throw InvalidOptions("resolution must be at least 8 nodes");
    return opts.resolution;
}

SCollocation make_collocation(double half_length, SBackend backend, int resolution) {
    if (!(half_length > 0.0))
        throw InvalidOptions("cylinder half length must be positive");
    if (resolution < 8)
        throw InvalidOptions("resolution must be at least 8 nodes");
    const int ns = resolution;
    SCollocation sc;
    sc.nodes.resize(ns);
    sc.D = Eigen::MatrixXd::Zero(ns, ns);
    sc.weights.resize(ns);
    const double L = half_length;

    if (backend == SBackend::Chebyshev) {
        const int n = ns - 1;
        Eigen::VectorXd x(ns), lam(ns);
        for (int i = 0; i <= n; ++i) {
            x(i) = -std::cos(kTwoPi / 2.0 * i / n); // ascending Lobatto nodes
            lam(i) = (i % 2 == 0 ? 1.0 : -1.0) * ((i == 0 || i == n) ? 0.5 : 1.0);
        }
        for (int i = 0; i <= n; ++i) {
            double rowsum = 0.0;
            for (int j = 0; j <= n; ++j) {
                if (i == j)
                    continue;
                sc.D(i, j) = (lam(j) / lam(i)) / (x(i) - x(j));
                rowsum += sc.D(i, j);
            }
            sc.D(i, i) = -rowsum; // negative-sum trick
        }
        sc.D /= L;
        sc.nodes = L * x;

        // Clenshaw-Curtis weights on [-1, 1], scaled by L
        const double pi = kTwoPi / 2.0;
        for (int j = 0; j <= n; ++j)
            sc.weights(j) = 0.0;
        if (n % 2 == 0) {
            sc.weights(0) = sc.weights(n) = 1.0 / (n * n - 1.0);
            for (int j = 1; j < n; ++j) {
                double v = 1.0;
                for (int k = 1; k <= n / 2 - 1; ++k)
                    v -= 2.0 * std::cos(2.0 * k * pi * j / n) / (4.0 * k * k - 1.0);
                v -= std::cos(pi * j) / (n * n - 1.0);
                sc.weights(j) = 2.0 * v / n;
            }
        } else {
            sc.weights(0) = sc.weights(n) = 1.0 / (n * n);
            for (int j = 1; j < n; ++j) {
                double v = 1.0;
                for (int k = 1; k <= (n - 1) / 2; ++k)
                    v -= 2.0 * std::cos(2.0 * k * pi * j / n) / (4.0 * k * k - 1.0);
                sc.weights(j) = 2.0 * v / n;
            }
        }
        sc.weights *= L;
        sc.D2 = sc.D * sc.D;
    } else {
        const double h = 2.0 * L / (ns - 1);
        for (int i = 0; i < ns; ++i)
            sc.nodes(i) = -L + i * h;
        sc.D2 = Eigen::MatrixXd::Zero(ns, ns);
        for (int i = 1; i + 1 < ns; ++i) {
            sc.D(i, i - 1) = -0.5 / h;
            sc.D(i, i + 1) = 0.5 / h;
            sc.D2(i, i - 1) = 1.0 / (h * h);
            sc.D2(i, i) = -2.0 / (h * h);
            sc.D2(i, i + 1) = 1.0 / (h * h);
        }
        // second-order one-sided rows at the ends
        sc.D(0, 0) = -1.5 / h;
        sc.D(0, 1) = 2.0 / h;
        sc.D(0, 2) = -0.5 / h;
        sc.D(ns - 1, ns - 1) = 1.5 / h;
        sc.D(ns - 1, ns - 2) = -2.0 / h;
        sc.D(ns - 1, ns - 3) = 0.5 / h;
        sc.D2(0, 0) = 2.0 / (h * h);
        sc.D2(0, 1) = -5.0 / (h * h);
        sc.D2(0, 2) = 4.0 / (h * h);
        sc.D2(0, 3) = -1.0 / (h * h);
        sc.D2(ns - 1, ns - 1) = 2.0 / (h * h);
        sc.D2(ns - 1, ns - 2) = -5.0 / (h * h);
        sc.D2(ns - 1, ns - 3) = 4.0 / (h * h);
        sc.D2(ns - 1, ns - 4) = -1.0 / (h * h);
        sc.weights = Eigen::VectorXd::Constant(ns, h);
        sc.weights(0) = sc.weights(ns - 1) = 0.5 * h;
    }
    return sc;
}

CylinderField solve_neumann(const CylinderField& h, const Eigen::VectorXd& g_plus,
                            const Eigen::VectorXd& g_minus, const NeumannOptions& opts) {
    const int ns = resolve_resolution(opts);
    const int nt = static_cast<int>(h.values.cols());
    check_nt(nt);
    if (static_cast<int>(h.values.rows()) != ns)
        throw GridMismatch("h must be sampled on the solver's s-collocation nodes");
    if (g_plus.size() != nt || g_minus.size() != nt)
        throw GridMismatch("boundary data must share the t grid of h");
    check_mean_zero(h.values, "h");
    check_mean_zero(g_plus, "g_plus");
    check_mean_zero(g_minus, "g_minus");

    const SCollocation sc = make_collocation(h.half_length, opts.backend, ns);
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(ns, nt);

    for (int m = 1; m <= nt / 2; ++m) {
        const Eigen::VectorXcd hm = t_mode(h.values, m);
        std::complex<double> gpm(0.0, 0.0), gmm(0.0, 0.0);
        for (int p = 0; p < nt; ++p) {
            const double ang = -kTwoPi * m * p / nt;
            const std::complex<double> e(std::cos(ang), std::sin(ang));
            gpm += g_plus(p) * e;
            gmm += g_minus(p) * e;
        }
        gpm /= nt;
        gmm /= nt;
        const double data_scale = hm.norm() + std::abs(gpm) + std::abs(gmm);
        if (data_scale == 0.0)
            continue;

        const double w = kTwoPi * m;
        Eigen::MatrixXd A = sc.D2 - w * w * Eigen::MatrixXd::Identity(ns, ns);
        A.row(0) = -sc.D.row(0);        // -d_s f(-L) = g_minus
        A.row(ns - 1) = sc.D.row(ns - 1); // +d_s f(+L) = g_plus
        const Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);

        Eigen::VectorXd rhs_re(ns), rhs_im(ns);
        rhs_re = hm.real();
        rhs_im = hm.imag();
        rhs_re(0) = gmm.real();
        rhs_im(0) = gmm.imag();
        rhs_re(ns - 1) = gpm.real();
        rhs_im(ns - 1) = gpm.imag();

        const Eigen::VectorXd um_re = lu.solve(rhs_re);
        const Eigen::VectorXd um_im = lu.solve(rhs_im);
        const double resid = std::sqrt((A * um_re - rhs_re).squaredNorm() +
                                       (A * um_im - rhs_im).squaredNorm());
        const double sol_scale =
            std::max(1.0, std::sqrt(um_re.squaredNorm() + um_im.squaredNorm()));
        if (resid > opts.residual_tol * std::max(data_scale, sol_scale))
            throw LinearSolveFailure("mode solve did not reach the residual tolerance");

        const double nyquist = (m == nt / 2) ? 0.5 : 1.0; // avoid double-counting +/-Nyquist
        for (int p = 0; p < nt; ++p) {
            const double ang = kTwoPi * m * p / nt;
            const double c = std::cos(ang), s = std::sin(ang);
            f.col(p) += 2.0 * nyquist * (um_re * c - um_im * s);
        }
    }
    CylinderField out;
    out.half_length = h.half_length;
    out.values = std::move(f);
    out.mean_zero_in_t = true;
    return out;
}

NeumannResidual neumann_residual(const CylinderField& f, const CylinderField& h,
                                 const Eigen::VectorXd& g_plus, const Eigen::VectorXd& g_minus,
                                 const NeumannOptions& opts) {
    const int ns = resolve_resolution(opts);
    const int nt = static_cast<int>(f.values.cols());
    check_nt(nt);
    if (static_cast<int>(f.values.rows()) != ns || h.values.rows() != f.values.rows() ||
        h.values.cols() != f.values.cols())
        throw GridMismatch("fields must share the solver grid");
    const SCollocation sc = make_collocation(f.half_length, opts.backend, ns);
    const Eigen::MatrixXd lap = sc.D2 * f.values + t_second_derivative_real(f.values);
    Eigen::MatrixXd defect = lap - h.values;
    defect.row(0).setZero();
    defect.row(ns - 1).setZero();
    NeumannResidual res;
    res.interior = quad_norm(sc, defect);
    const Eigen::MatrixXd dsf = sc.D * f.values;
    const double b_plus = (dsf.row(ns - 1).transpose() - g_plus).norm() / std::sqrt(double(nt));
    const double b_minus = (-dsf.row(0).transpose() - g_minus).norm() / std::sqrt(double(nt));
    res.boundary = std::max(b_plus, b_minus);
    return res;
}

double estimate_ratio(const CylinderField& f, const CylinderField& h,
                      const Eigen::VectorXd& g_plus, const Eigen::VectorXd& g_minus,
                      const NeumannOptions& opts) {
    const int ns = resolve_resolution(opts);
    const int nt = static_cast<int>(f.values.cols());
    check_nt(nt);
    if (static_cast<int>(f.values.rows()) != ns || h.values.rows() != f.values.rows())
        throw GridMismatch("fields must share the solver grid");
    const SCollocation sc = make_collocation(f.half_length, opts.backend, ns);

    const Eigen::MatrixXd fs = sc.D * f.values;
    const Eigen::MatrixXd ft = t_derivative_real(f.values);
    const Eigen::MatrixXd fss = sc.D2 * f.values;
    const Eigen::MatrixXd fst = sc.D * ft;
    const Eigen::MatrixXd ftt = t_second_derivative_real(f.values);
    const double w22 = std::sqrt(
        std::pow(quad_norm(sc, f.values), 2) + std::pow(quad_norm(sc, fs), 2) +
        std::pow(quad_norm(sc, ft), 2) + std::pow(quad_norm(sc, fss), 2) +
        std::pow(quad_norm(sc, fst), 2) + std::pow(quad_norm(sc, ftt), 2));

    auto loop_w12 = [&](const Eigen::VectorXd& g) {
        double n2 = g.squaredNorm() / nt;
        Eigen::MatrixXd row(1, nt);
        row.row(0) = g.transpose();
        const Eigen::MatrixXd dg = t_derivative_real(row);
        n2 += dg.row(0).squaredNorm() / nt;
        return std::sqrt(n2);
    };
    const double rhs = quad_norm(sc, h.values) + loop_w12(g_plus) + loop_w12(g_minus);
    if (rhs == 0.0)
        return 0.0;
    return w22 / rhs;
}

CoulombResult cylinder_coulomb(const TorusAction& action, const CylinderTriple& fields, double r,
                               const NeumannOptions& opts) {
    const int n = action.n();
    const int k = action.k();
    if (static_cast<int>(fields.z.size()) != n || static_cast<int>(fields.eta.size()) != k ||
        static_cast<int>(fields.xi.size()) != k)
        throw DimensionMismatch("field component counts must match the torus action");
    const int ns = resolve_resolution(opts);
    const int nt = fields.z.empty() ? 0 : static_cast<int>(fields.z[0].cols());
    check_nt(nt);
    for (const auto& m : fields.z)
        if (m.rows() != ns || m.cols() != nt)
            throw GridMismatch("z components must share the solver grid");
    for (const auto& m : fields.eta)
        if (m.rows() != ns || m.cols() != nt)
            throw GridMismatch("eta components must share the solver grid");
    for (const auto& m : fields.xi)
        if (m.rows() != ns || m.cols() != nt)
            throw GridMismatch("xi components must share the solver grid");

    const SCollocation sc = make_collocation(fields.half_length, opts.backend, ns);
    const Eigen::VectorXd zero_loop = Eigen::VectorXd::Zero(nt);

    CoulombResult out;
    out.theta.resize(static_cast<std::size_t>(k));
    std::vector<Eigen::MatrixXd> theta_t(static_cast<std::size_t>(k)),
        theta_s(static_cast<std::size_t>(k));
    for (int a = 0; a < k; ++a) {
        CylinderField rhs;
        rhs.half_length = fields.half_length;
        rhs.values = sc.D * fields.xi[static_cast<std::size_t>(a)] +
                     t_derivative_real(fields.eta[static_cast<std::size_t>(a)]);
        rhs.mean_zero_in_t = true;
        const CylinderField th = solve_neumann(rhs, zero_loop, zero_loop, opts);
        out.theta[static_cast<std::size_t>(a)] = th.values;
        theta_t[static_cast<std::size_t>(a)] = t_derivative_real(th.values);
        theta_s[static_cast<std::size_t>(a)] = sc.D * th.values;
    }

    // transformed fields
    out.transformed.half_length = fields.half_length;
    out.transformed.z.resize(static_cast<std::size_t>(n));
    out.transformed.eta.resize(static_cast<std::size_t>(k));
    out.transformed.xi.resize(static_cast<std::size_t>(k));
    for (int j = 0; j < n; ++j) {
        Eigen::MatrixXd phase = Eigen::MatrixXd::Zero(ns, nt);
        for (int a = 0; a < k; ++a)
            phase += action.weights(j, a) * out.theta[static_cast<std::size_t>(a)];
        Eigen::MatrixXcd zt(ns, nt);
        for (int i = 0; i < ns; ++i)
            for (int p = 0; p < nt; ++p)
                zt(i, p) = fields.z[static_cast<std::size_t>(j)](i, p) *
                           std::exp(-kI * phase(i, p));
        out.transformed.z[static_cast<std::size_t>(j)] = std::move(zt);
    }
    for (int a = 0; a < k; ++a) {
        out.transformed.eta[static_cast<std::size_t>(a)] =
            fields.eta[static_cast<std::size_t>(a)] - theta_t[static_cast<std::size_t>(a)];
        out.transformed.xi[static_cast<std::size_t>(a)] =
            fields.xi[static_cast<std::size_t>(a)] - theta_s[static_cast<std::size_t>(a)];
    }

    // residuals of the gauged system, same discrete operators
    const auto& zt = out.transformed.z;
    const auto& et = out.transformed.eta;
    const auto& xt = out.transformed.xi;

    // pointwise moment map and its t-mean
    std::vector<Eigen::MatrixXd> mu(static_cast<std::size_t>(k));
    for (int a = 0; a < k; ++a) {
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(ns, nt);
        for (int j = 0; j < n; ++j)
            acc += 0.5 * action.weights(j, a) * zt[static_cast<std::size_t>(j)].cwiseAbs2();
        mu[static_cast<std::size_t>(a)] = std::move(acc);
    }

    double cr2 = 0.0;
    for (int j = 0; j < n; ++j) {
        const Eigen::MatrixXcd& zj = zt[static_cast<std::size_t>(j)];
        Eigen::MatrixXcd e1 = sc.D * zj + kI * t_derivative_complex(zj);
        for (int i = 0; i < ns; ++i)
            for (int p = 0; p < nt; ++p) {
                double ae = 0.0, ax = 0.0;
                for (int a = 0; a < k; ++a) {
                    ae += action.weights(j, a) * et[static_cast<std::size_t>(a)](i, p);
                    ax += action.weights(j, a) * xt[static_cast<std::size_t>(a)](i, p);
                }
                e1(i, p) += (std::complex<double>(ae, 0.0) - kI * ax) * zj(i, p);
            }
        const Eigen::MatrixXd mags = e1.cwiseAbs();
        cr2 += std::pow(quad_norm(sc, mags), 2);
    }
    out.residual_cauchy_riemann = std::sqrt(cr2);

    double curv2 = 0.0;
    for (int a = 0; a < k; ++a) {
        const Eigen::MatrixXd& mua = mu[static_cast<std::size_t>(a)];
        const Eigen::VectorXd mu_bar = mua.rowwise().mean();
        Eigen::MatrixXd e2 = sc.D * et[static_cast<std::size_t>(a)] -
                             t_derivative_real(xt[static_cast<std::size_t>(a)]);
        for (int i = 0; i < ns; ++i)
            for (int p = 0; p < nt; ++p)
                e2(i, p) += (1.0 - r * r) * mu_bar(i) + r * r * mua(i, p) - action.tau(a);
        curv2 += std::pow(quad_norm(sc, e2), 2);
    }
    out.residual_curvature = std::sqrt(curv2);

    double coul2 = 0.0;
    double xi_mean = 0.0;
    for (int a = 0; a < k; ++a) {
        const Eigen::MatrixXd e3 = sc.D * xt[static_cast<std::size_t>(a)] +
                                   t_derivative_real(et[static_cast<std::size_t>(a)]);
        coul2 += std::pow(quad_norm(sc, e3), 2);
        xi_mean = std::max(
            xi_mean,
            xt[static_cast<std::size_t>(a)].rowwise().mean().cwiseAbs().maxCoeff());
    }
    out.residual_coulomb = std::sqrt(coul2);
    out.max_xi_mean = xi_mean;
    return out;
}

} // namespace vortex
