// Finite-dimensional approximation spaces and the restricted
// functionals on them.
//
// V is the space of loops band-limited to [m_j^-, m_j^+] per coordinate.
// Under the slot identification V = C^N the restricted action functional
// splits as A0(c, eta) = f(c) + <eta, mu_V(c) - tau> with the quadratic
// Liouville term f(c) = -pi sum m_l |c_l|^2 (the closed form of
// int lambda(z) z' dt on Fourier modes, cross-checked against quadrature
// in the tests) and mu_V the moment map of the induced A_V-action.
// Points of mu_V^{-1}(tau) are produced by Gauss-Newton projection: the
// level set is compact for proper actions and regular tau, so damped
// projection from generic starts converges.

#include "vortex/approx.hpp"

#include <cmath>
#include <utility>

#include <Eigen/Dense>

#include "vortex/errors.hpp"
#include "vortex/parallel.hpp"
#include "vortex/rng.hpp"

namespace vortex {

ApproxSpace build(const TorusAction& action, std::vector<Band> bands) {
    if (static_cast<int>(bands.size()) != action.n())
        throw DimensionMismatch("one band per coordinate is required");
    for (const Band& b : bands)
        if (b.lo > b.hi)
            throw ValidationError("empty band");
    ApproxSpace space;
    space.action = action;
    space.bands = std::move(bands);
    space.N = 0;
    for (const Band& b : space.bands)
        space.N += b.size();
    space.A_V.resize(space.N, action.k());
    space.rho.reserve(static_cast<std::size_t>(space.N));
    space.modes.reserve(static_cast<std::size_t>(space.N));
    int l = 0;
    for (int j = 0; j < action.n(); ++j)
        for (int m = space.bands[static_cast<std::size_t>(j)].lo;
             m <= space.bands[static_cast<std::size_t>(j)].hi; ++m, ++l) {
            space.A_V.row(l) = action.weights.row(j);
            space.rho.push_back(j);
            space.modes.push_back(m);
        }
    space.grid_size = choose_grid_size(space.bands);
    return space;
}

FourierLoop embed(const ApproxSpace& space, const Eigen::VectorXcd& c) {
    if (c.size() != space.N)
        throw DimensionMismatch("slot vector has wrong length");
    FourierLoop z = FourierLoop::zero(space.bands, space.grid_size);
    for (int l = 0; l < space.N; ++l)
        z.set_coeff(space.rho[static_cast<std::size_t>(l)],
                    space.modes[static_cast<std::size_t>(l)], c(l));
    return z;
}

Eigen::VectorXcd restrict_loop(const ApproxSpace& space, const FourierLoop& z) {
    if (z.n() != space.n())
        throw DimensionMismatch("loop has wrong number of coordinates");
    Eigen::VectorXcd c(space.N);
    for (int l = 0; l < space.N; ++l)
        c(l) = z.coeff(space.rho[static_cast<std::size_t>(l)],
                       space.modes[static_cast<std::size_t>(l)]);
    return c;
}

Eigen::VectorXd moment_map_V(const ApproxSpace& space, const Eigen::VectorXcd& c) {
    if (c.size() != space.N)
        throw DimensionMismatch("slot vector has wrong length");
    return 0.5 * space.A_V.cast<double>().transpose() * c.cwiseAbs2().matrix();
}

Eigen::VectorXd constraint(const ApproxSpace& space, const Eigen::VectorXcd& c) {
    return moment_map_V(space, c) - space.action.tau;
}

double floer_quadratic(const ApproxSpace& space, const Eigen::VectorXcd& c) {
    if (c.size() != space.N)
        throw DimensionMismatch("slot vector has wrong length");
    double s = 0.0;
    for (int l = 0; l < space.N; ++l)
        s += space.modes[static_cast<std::size_t>(l)] * std::norm(c(l));
    return -0.5 * kTwoPi * s;
}

Eigen::VectorXcd floer_gradient(const ApproxSpace& space, const Eigen::VectorXcd& c) {
    if (c.size() != space.N)
        throw DimensionMismatch("slot vector has wrong length");
    Eigen::VectorXcd g(space.N);
    for (int l = 0; l < space.N; ++l)
        g(l) = -kTwoPi * space.modes[static_cast<std::size_t>(l)] * c(l);
    return g;
}

double restricted_F(const ApproxSpace& space, const Eigen::VectorXcd& c,
                    const Eigen::VectorXd& eta, double r) {
    if (eta.size() != space.k())
        throw DimensionMismatch("eta has wrong length");
    return r * floer_quadratic(space, c) + eta.dot(constraint(space, c));
}

double FGradient::norm() const {
    return std::sqrt(c_part.squaredNorm() + eta_part.squaredNorm());
}

FGradient restricted_F_gradient(const ApproxSpace& space, const Eigen::VectorXcd& c,
                                const Eigen::VectorXd& eta, double r) {
    if (eta.size() != space.k())
        throw DimensionMismatch("eta has wrong length");
    FGradient g;
    g.c_part = r * floer_gradient(space, c);
    const Eigen::VectorXd aeta = space.A_V.cast<double>() * eta;
    for (int l = 0; l < space.N; ++l)
        g.c_part(l) += aeta(l) * c(l);
    g.eta_part = constraint(space, c);
    return g;
}

Eigen::MatrixXd constraint_jacobian(const ApproxSpace& space, const Eigen::VectorXcd& c) {
    if (c.size() != space.N)
        throw DimensionMismatch("slot vector has wrong length");
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(space.k(), 2 * space.N);
    for (int l = 0; l < space.N; ++l)
        for (int r = 0; r < space.k(); ++r) {
            jac(r, 2 * l) = space.A_V(l, r) * c(l).real();
            jac(r, 2 * l + 1) = space.A_V(l, r) * c(l).imag();
        }
    return jac;
}

bool project_to_level_set(const ApproxSpace& space, Eigen::VectorXcd& c, double tol,
                          int max_iter) {
    Eigen::VectorXd h = constraint(space, c);
    for (int it = 0; it < max_iter; ++it) {
        if (h.norm() <= tol)
            return true;
        const Eigen::MatrixXd jac = constraint_jacobian(space, c);
        const Eigen::MatrixXd gram = jac * jac.transpose(); // k x k
        const Eigen::VectorXd d = gram.ldlt().solve(h);
        if (!d.allFinite())
            return false;
        // Gauss-Newton step -J^T (J J^T)^{-1} h with halving on
        // residual increase
        Eigen::VectorXd step = -jac.transpose() * d; // length 2N
        double lambda = 1.0;
        for (int half = 0; half < 40; ++half) {
            Eigen::VectorXcd trial = c;
            for (int l = 0; l < space.N; ++l)
                trial(l) += lambda * std::complex<double>(step(2 * l), step(2 * l + 1));
            Eigen::VectorXd ht = constraint(space, trial);
            if (ht.norm() < h.norm()) {
                c = std::move(trial);
                h = std::move(ht);
                break;
            }
            lambda *= 0.5;
            if (half == 39)
                return false;
        }
    }
    return constraint(space, c).norm() <= tol;
}

std::vector<Eigen::VectorXcd> sample_level_set(const ApproxSpace& space, int count,
                                               std::uint64_t seed, int threads) {
    TorusAction induced = space.action.tau_exact
                              ? TorusAction::create_exact(space.A_V, *space.action.tau_exact)
                              : TorusAction::create(space.A_V, space.action.tau);
    const RegularityVerdict verdict = classify_value(induced);
    if (verdict.status != Regularity::Regular)
        throw RegularityViolated("tau is not a regular value of the induced moment map");

    std::vector<Eigen::VectorXcd> points(static_cast<std::size_t>(count));
    const double tau_norm = space.action.tau.norm();
    parallel_for(count, threads, [&](int idx) {
        Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(idx)));
        for (int attempt = 0; attempt < 50; ++attempt) {
            Eigen::VectorXcd c(space.N);
            for (int l = 0; l < space.N; ++l)
                c(l) = std::complex<double>(rng.normal(), rng.normal());
            // scale so |mu_V| starts near |tau| (mu_V is quadratic)
            const double m0 = moment_map_V(space, c).norm();
            if (m0 > 0.0 && tau_norm > 0.0)
                c *= std::sqrt(tau_norm / m0);
            if (project_to_level_set(space, c) &&
                constraint(space, c).norm() <= 1e-10) {
                points[static_cast<std::size_t>(idx)] = std::move(c);
                return;
            }
        }
        throw ProjectionDiverged("level-set projection failed from all retries");
    });
    return points;
}

} // namespace vortex
