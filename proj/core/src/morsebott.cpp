// Morse-Bott verification of the critical set of F_0(x, eta) =
// <eta, h(x)>, the Conley-index descriptor built from it, and the
// tameness constants that confine all critical points of the family
// F_r = r f + <eta, h> to a fixed compact set.
//
// At a critical point (x, 0), the Hessian of F_0 is the anti-diagonal
// block matrix with blocks dh(x) and dh(x)^T; its spectrum is
// {+/- sigma_i(dh)} plus a kernel of dimension 2N - k, so regularity of
// tau makes the critical manifold Morse-Bott with normal and negative
// ranks both k. The invariant (Thom space of the negative bundle) is
// reported through its determining dimensions, computed independently
// from the full Hessian spectrum or from the Jacobian singular values.

#include "vortex/morsebott.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "vortex/errors.hpp"
#include "vortex/parallel.hpp"
#include "vortex/rng.hpp"

namespace vortex {

namespace {

TorusAction induced_action(const ApproxSpace& space) {
    if (space.action.tau_exact)
        return TorusAction::create_exact(space.A_V, *space.action.tau_exact);
    return TorusAction::create(space.A_V, space.action.tau);
}

RationalVector rational_tau(const ApproxSpace& space) {
    if (space.action.tau_exact)
        return *space.action.tau_exact;
    RationalVector t(static_cast<std::size_t>(space.k()));
    for (int r = 0; r < space.k(); ++r)
        t[static_cast<std::size_t>(r)] = Rational(space.action.tau(r));
    return t;
}

// rational unit vectors covering the sphere directions: the coordinate
// axes plus stereographic images (2v, 1 - |v|^2) / (1 + |v|^2) of a
// small rational grid in R^{k-1}, together with their antipodes
std::vector<RationalVector> sphere_directions(int k) {
    std::vector<RationalVector> dirs;
    auto push_with_antipode = [&](const RationalVector& u) {
        dirs.push_back(u);
        RationalVector m(u.size());
        for (std::size_t i = 0; i < u.size(); ++i)
            m[i] = -u[i];
        dirs.push_back(std::move(m));
    };
    for (int i = 0; i < k; ++i) {
        RationalVector e(static_cast<std::size_t>(k));
        e[static_cast<std::size_t>(i)] = 1;
        push_with_antipode(e);
    }
    if (k == 1)
        return dirs;
    const Rational grid[3] = {Rational(-1), Rational(1, 2), Rational(1)};
    std::vector<RationalVector> vs;
    vs.emplace_back(static_cast<std::size_t>(k - 1)); // v = 0 -> north pole, already axis
    for (std::size_t base = 0; base < vs.size() && vs.size() < 40; ++base) {
        for (const Rational& g : grid) {
            for (int slot = 0; slot < k - 1 && vs.size() < 40; ++slot) {
                RationalVector v = vs[base];
                v[static_cast<std::size_t>(slot)] += g;
                vs.push_back(std::move(v));
            }
        }
    }
    for (const RationalVector& v : vs) {
        Rational norm2 = 0;
        for (const Rational& c : v)
            norm2 += c * c;
        if (norm2 == 0)
            continue;
        RationalVector u(static_cast<std::size_t>(k));
        const Rational denom = 1 + norm2;
        for (int i = 0; i < k - 1; ++i)
            u[static_cast<std::size_t>(i)] = 2 * v[static_cast<std::size_t>(i)] / denom;
        u[static_cast<std::size_t>(k - 1)] = (1 - norm2) / denom;
        push_with_antipode(u);
    }
    return dirs;
}

// pull x back into the shell |h| <= target by damped Gauss-Newton steps
bool pull_into_shell(const ApproxSpace& space, Eigen::VectorXcd& x, double target) {
    for (int it = 0; it < 25; ++it) {
        const Eigen::VectorXd h = constraint(space, x);
        if (h.norm() <= target)
            return true;
        const Eigen::MatrixXd J = constraint_jacobian(space, x);
        const Eigen::VectorXd u = (J * J.transpose())
                                      .ldlt()
                                      .solve(h);
        const Eigen::VectorXd step = J.transpose() * u; // 2N real
        for (int l = 0; l < space.N; ++l)
            x(l) -= std::complex<double>(step(2 * l), step(2 * l + 1));
        if (!x.allFinite())
            return false;
    }
    return constraint(space, x).norm() <= target;
}

double sigma_min(const ApproxSpace& space, const Eigen::VectorXcd& x) {
    const Eigen::MatrixXd J = constraint_jacobian(space, x);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
    return svd.singularValues().minCoeff();
}

} // namespace

Eigen::MatrixXd hessian_F0(const ApproxSpace& space, const Eigen::VectorXcd& x) {
    if (x.size() != space.N)
        throw DimensionMismatch("point does not match the approximation space");
    if (constraint(space, x).norm() > 1e-8)
        throw NotOnLevelSet("Hessian of F0 is taken at critical points, which lie on the level set");
    const int N = space.N;
    const int k = space.k();
    const Eigen::MatrixXd J = constraint_jacobian(space, x); // k x 2N
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(2 * N + k, 2 * N + k);
    H.topRightCorner(2 * N, k) = J.transpose();
    H.bottomLeftCorner(k, 2 * N) = J;
    return H;
}

ConleyReport conley_report(const ApproxSpace& space, ConleyPipeline pipeline, int samples,
                           std::uint64_t seed, int threads) {
    if (samples < 1)
        throw InvalidOptions("sample count must be positive");
    {
        const RegularityVerdict v = classify_value(induced_action(space));
        if (v.status != Regularity::Regular)
            throw RegularityViolated("tau is not a regular value of the induced moment map");
    }
    const int N = space.N;
    const int k = space.k();
    ConleyReport rep;
    rep.N = N;
    rep.k = k;
    rep.critical_dim = 2 * N - k;
    rep.normal_rank = k;
    rep.negative_rank = k;
    rep.samples = samples;
    rep.min_nonzero_eig = std::numeric_limits<double>::infinity();
    rep.max_kernel_eig = 0.0;

    const std::vector<Eigen::VectorXcd> points = sample_level_set(space, samples, seed, threads);
    std::vector<char> ok(points.size(), 0);
    std::vector<double> min_nonzero(points.size(), 0.0);
    std::vector<double> max_kernel(points.size(), 0.0);

    parallel_for(points.size(), threads, [&](std::size_t i) {
        const Eigen::VectorXcd& x = points[i];
        bool good = false;
        if (pipeline == ConleyPipeline::JacobianSVD) {
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(constraint_jacobian(space, x));
            const Eigen::VectorXd sv = svd.singularValues();
            min_nonzero[i] = sv.minCoeff();
            max_kernel[i] = 0.0; // anti-diagonal blocks: the kernel is exact
            good = sv.minCoeff() > 1e-8;
        } else {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hessian_F0(space, x));
            const Eigen::VectorXd ev = es.eigenvalues(); // ascending
            const int dim = static_cast<int>(ev.size());
            int neg = 0, pos = 0;
            for (int a = 0; a < dim; ++a) {
                if (ev(a) < -1e-8)
                    ++neg;
                else if (ev(a) > 1e-8)
                    ++pos;
            }
            bool symmetric = true;
            for (int a = 0; a < dim; ++a)
                if (std::abs(ev(a) + ev(dim - 1 - a)) > 1e-10 * std::max(1.0, std::abs(ev(a))))
                    symmetric = false;
            double mk = 0.0;
            double mn = std::numeric_limits<double>::infinity();
            for (int a = 0; a < dim; ++a) {
                const double mag = std::abs(ev(a));
                if (a >= neg && a < dim - pos)
                    mk = std::max(mk, mag);
                else
                    mn = std::min(mn, mag);
            }
            min_nonzero[i] = mn;
            max_kernel[i] = mk;
            good = neg == k && pos == k && symmetric && mk < 1e-10;
        }
        ok[i] = good ? 1 : 0;
    });

    rep.morse_bott_verified = true;
    for (std::size_t i = 0; i < points.size(); ++i) {
        rep.morse_bott_verified = rep.morse_bott_verified && ok[i];
        rep.min_nonzero_eig = std::min(rep.min_nonzero_eig, min_nonzero[i]);
        rep.max_kernel_eig = std::max(rep.max_kernel_eig, max_kernel[i]);
    }
    return rep;
}

TameConstants tame_constants(const ApproxSpace& space, const TameOptions& opts) {
    if (opts.epsilon_grid.empty())
        throw InvalidOptions("epsilon grid must be nonempty");
    if (opts.sample_count < 1)
        throw InvalidOptions("sample count must be positive");
    for (double e : opts.epsilon_grid)
        if (!(e > 0.0))
            throw InvalidOptions("epsilon candidates must be positive");

    TameConstants out;
    out.sample_count = opts.sample_count;
    out.seed = opts.seed;

    // epsilon: the largest candidate whose whole direction sphere stays
    // regular (exact test per direction; ball regularity is a recorded
    // heuristic, not a certificate)
    const std::vector<RationalVector> dirs = sphere_directions(space.k());
    out.epsilon_directions = static_cast<int>(dirs.size());
    const RationalVector tau = rational_tau(space);
    std::vector<double> grid = opts.epsilon_grid;
    std::sort(grid.begin(), grid.end(), std::greater<double>());
    bool found = false;
    for (double cand : grid) {
        const Rational eps(cand);
        bool all_regular = true;
        for (const RationalVector& u : dirs) {
            RationalVector shifted(tau.size());
            for (std::size_t i = 0; i < tau.size(); ++i)
                shifted[i] = tau[i] + eps * u[i];
            const RegularityVerdict v =
                classify_value(TorusAction::create_exact(space.A_V, shifted));
            if (v.status != Regularity::Regular) {
                all_regular = false;
                break;
            }
        }
        if (all_regular) {
            out.epsilon = cand;
            found = true;
            break;
        }
    }
    if (!found)
        throw RegularityViolated("no candidate radius keeps the direction sphere regular");

    const double eps = out.epsilon;
    const std::vector<Eigen::VectorXcd> bases =
        sample_level_set(space, opts.sample_count, Rng::derive(opts.seed, 11), opts.threads);

    // whether f carries any modes at all (f = -pi sum m_l |c_l|^2)
    bool f_trivial = true;
    for (int m : space.modes)
        if (m != 0)
            f_trivial = false;

    std::vector<double> local_delta(bases.size(), std::numeric_limits<double>::infinity());
    std::vector<double> local_c(bases.size(), 0.0);

    parallel_for(bases.size(), opts.threads, [&](std::size_t i) {
        Rng rng(Rng::derive(opts.seed, 100 + i));

        // minimize sigma_min(dh) over the shell by projected descent
        Eigen::VectorXcd x = bases[i];
        double best = sigma_min(space, x);
        double scale = 0.25;
        for (int attempt = 0; attempt < 3; ++attempt) {
            Eigen::VectorXcd y = bases[i];
            for (int l = 0; l < space.N; ++l)
                y(l) += scale * std::complex<double>(rng.normal(), rng.normal());
            if (!pull_into_shell(space, y, 0.95 * eps))
                continue;
            double cur = sigma_min(space, y);
            best = std::min(best, cur);
            double step = 0.1;
            for (int it = 0; it < 30 && step > 1e-6; ++it) {
                // finite-difference gradient of sigma_min
                Eigen::VectorXcd g(space.N);
                const double fd = 1e-6 * std::max(1.0, y.norm());
                for (int l = 0; l < space.N; ++l) {
                    Eigen::VectorXcd yp = y;
                    yp(l) += fd;
                    const double dre = (sigma_min(space, yp) - cur) / fd;
                    yp = y;
                    yp(l) += std::complex<double>(0.0, fd);
                    const double dim_ = (sigma_min(space, yp) - cur) / fd;
                    g(l) = std::complex<double>(dre, dim_);
                }
                const double gn = g.norm();
                if (gn < 1e-12)
                    break;
                Eigen::VectorXcd trial = y - (step / gn) * g;
                if (!pull_into_shell(space, trial, eps)) {
                    step *= 0.5;
                    continue;
                }
                const double tv = sigma_min(space, trial);
                if (tv < cur) {
                    y = trial;
                    cur = tv;
                    best = std::min(best, tv);
                    step *= 1.3;
                } else {
                    step *= 0.5;
                }
            }
        }
        local_delta[i] = best;

        // maximize |grad f| over the shell; the gradient of
        // |grad f|^2 = sum (2 pi m_l)^2 |c_l|^2 is linear
        if (!f_trivial) {
            Eigen::VectorXcd y = bases[i];
            double cur = floer_gradient(space, y).norm();
            double cbest = cur;
            double step = 0.2;
            for (int it = 0; it < 60 && step > 1e-8; ++it) {
                Eigen::VectorXcd dir(space.N);
                for (int l = 0; l < space.N; ++l) {
                    const double w = kTwoPi * space.modes[static_cast<std::size_t>(l)];
                    dir(l) = w * w * y(l);
                }
                const double dn = dir.norm();
                if (dn < 1e-12)
                    break;
                Eigen::VectorXcd trial = y + (step / dn) * dir;
                if (!pull_into_shell(space, trial, eps)) {
                    step *= 0.5;
                    continue;
                }
                const double tv = floer_gradient(space, trial).norm();
                if (tv > cur) {
                    y = trial;
                    cur = tv;
                    cbest = std::max(cbest, tv);
                    step *= 1.3;
                } else {
                    step *= 0.5;
                }
            }
            local_c[i] = cbest;
        }
    });

    out.delta = *std::min_element(local_delta.begin(), local_delta.end());
    out.c = f_trivial ? 0.0 : *std::max_element(local_c.begin(), local_c.end());
    if (!(out.delta > 0.0))
        throw LinearSolveFailure("estimated delta is not positive; tau is too close to irregular");
    out.lambda_bound = (out.c + out.epsilon) / out.delta;
    return out;
}

PalaisSmaleReport verify_palais_smale(const ApproxSpace& space, const TameConstants& constants,
                                      const std::vector<double>& r_grid, int sample_count,
                                      std::uint64_t seed, int threads) {
    if (r_grid.empty())
        throw InvalidOptions("r grid must be nonempty");
    if (sample_count < 1)
        throw InvalidOptions("sample count must be positive");
    const double eps = constants.epsilon;
    const int N = space.N;
    const int k = space.k();

    auto margin_at = [&](const Eigen::VectorXcd& x, const Eigen::VectorXd& lam) {
        double worst = std::numeric_limits<double>::infinity();
        for (double r : r_grid)
            worst = std::min(worst, restricted_F_gradient(space, x, lam, r).norm() - eps);
        return worst;
    };

    std::vector<double> margin_a(static_cast<std::size_t>(sample_count));
    std::vector<double> margin_b(static_cast<std::size_t>(sample_count));

    // regime |h(x)| > epsilon, lambda unrestricted
    parallel_for(static_cast<std::size_t>(sample_count), threads, [&](std::size_t i) {
        Rng rng(Rng::derive(seed, 500 + i));
        Eigen::VectorXcd x(N);
        double scale = 0.5 + 2.0 * rng.uniform();
        for (int attempt = 0;; ++attempt) {
            if (attempt >= 60)
                throw NumericalError("could not sample a point outside the shell");
            for (int l = 0; l < N; ++l)
                x(l) = scale * std::complex<double>(rng.normal(), rng.normal());
            if (constraint(space, x).norm() > 1.0001 * eps)
                break;
            scale *= 1.6;
        }
        Eigen::VectorXd lam(k);
        for (int a = 0; a < k; ++a)
            lam(a) = rng.normal();
        lam *= (2.0 * rng.uniform()) * constants.lambda_bound / std::max(lam.norm(), 1e-12);
        margin_a[i] = margin_at(x, lam);
    });

    // regime x in the shell, |lambda| = 1.25 lambda_bound
    const std::vector<Eigen::VectorXcd> bases =
        sample_level_set(space, sample_count, Rng::derive(seed, 900), threads);
    parallel_for(bases.size(), threads, [&](std::size_t i) {
        Rng rng(Rng::derive(seed, 1500 + i));
        Eigen::VectorXcd x = bases[i];
        for (int l = 0; l < N; ++l)
            x(l) += 0.1 * eps * std::complex<double>(rng.normal(), rng.normal());
        if (!pull_into_shell(space, x, 0.9 * eps))
            x = bases[i];
        Eigen::VectorXd lam(k);
        for (int a = 0; a < k; ++a)
            lam(a) = rng.normal();
        if (lam.norm() < 1e-12)
            lam.setOnes();
        lam *= 1.25 * constants.lambda_bound / lam.norm();
        margin_b[i] = margin_at(x, lam);
    });

    PalaisSmaleReport rep;
    rep.samples_outside_shell = sample_count;
    rep.samples_large_lambda = static_cast<int>(bases.size());
    rep.min_margin_outside_shell = *std::min_element(margin_a.begin(), margin_a.end());
    rep.min_margin_large_lambda = *std::min_element(margin_b.begin(), margin_b.end());
    rep.min_margin = std::min(rep.min_margin_outside_shell, rep.min_margin_large_lambda);
    rep.all_positive = rep.min_margin > 0.0;
    return rep;
}

} // namespace vortex
