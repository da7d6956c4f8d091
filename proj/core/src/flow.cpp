// Negative gradient flow of the restricted action functional on the
// approximation space, with the diagnostics that make its qualitative
// theory checkable: mode-window bounds from the multiplier limits, the
// a-priori radius bound, and the convexity of |z|^2 outside that radius.
//
// The r = 0 flow decouples into the mode law
//
//     c_l' = (2 pi m_l - (A_V eta)_l) c_l,      eta' = tau - mu_V(c),
//
// so bands are exactly invariant; for r > 0 the compensation term
// L_z xi_r is projected back onto the band (the flow is the metric
// gradient within the submanifold V) and the discarded magnitude is
// reported. Energy is carried as an extra state component so that the
// identity E = A0(start) - A0(end) at r = 0 holds to integrator
// accuracy.

#include "vortex/flow.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Dense>

#include "vortex/errors.hpp"
#include "vortex/loopspace.hpp"
#include "vortex/rational.hpp"
#include "vortex/rng.hpp"

namespace vortex {

namespace {

void check_state(const ApproxSpace& space, const FlowState& state) {
    if (state.c.size() != space.N || state.eta.size() != space.k())
        throw DimensionMismatch("flow state does not match the approximation space");
}

double action_value(const ApproxSpace& space, const FlowState& state) {
    return restricted_F(space, state.c, state.eta, 1.0);
}

} // namespace

double FlowField::norm() const {
    return std::sqrt(c_dot.squaredNorm() + eta_dot.squaredNorm());
}

FlowField vector_field(const ApproxSpace& space, const FlowState& state, double r) {
    check_state(space, state);
    if (!(r >= 0.0 && r <= 1.0))
        throw InvalidOptions("metric parameter r must lie in [0, 1]");
    FlowField out;
    out.eta_dot = space.action.tau - moment_map_V(space, state.c);
    const Eigen::VectorXd aeta = space.A_V.cast<double>() * state.eta;
    out.c_dot.resize(space.N);
    for (int l = 0; l < space.N; ++l)
        out.c_dot(l) =
            (kTwoPi * space.modes[static_cast<std::size_t>(l)] - aeta(l)) * state.c(l);
    if (r == 0.0)
        return out;

    // r > 0: subtract the full gradient's compensation term, projected
    // onto the band
    const TangentVec g =
        grad(space.action, LoopPoint::coulomb(embed(space, state.c), state.eta), r);
    double off = 0.0;
    for (int j = 0; j < space.n(); ++j) {
        const Band big = g.z_hat.band(j);
        const Band own = space.bands[static_cast<std::size_t>(j)];
        for (int m = big.lo; m <= big.hi; ++m)
            if (!own.contains(m))
                off += std::norm(g.z_hat.coeff(j, m));
    }
    out.offband_residual = std::sqrt(off);
    const Eigen::VectorXcd gc = restrict_loop(space, g.z_hat);
    for (int l = 0; l < space.N; ++l)
        out.c_dot(l) = -gc(l);
    return out;
}

double energy_rate(const ApproxSpace& space, const FlowState& state) {
    check_state(space, state);
    const Eigen::VectorXd aeta = space.A_V.cast<double>() * state.eta;
    double s = 0.0;
    for (int l = 0; l < space.N; ++l) {
        const double w = aeta(l) - kTwoPi * space.modes[static_cast<std::size_t>(l)];
        s += w * w * std::norm(state.c(l));
    }
    return s + constraint(space, state.c).squaredNorm();
}

FlowTrajectory integrate(const ApproxSpace& space, const FlowState& initial, double r,
                         const FlowOptions& opts) {
    check_state(space, initial);
    if (!(opts.s_max > 0.0) || !(opts.grad_tol > 0.0) || !(opts.blowup_radius > 0.0) ||
        !(opts.rk_abs_tol > 0.0) || !(opts.rk_rel_tol > 0.0) || !(opts.dwell >= 0.0) ||
        !(opts.record_ds >= 0.0) || opts.max_steps <= 0)
        throw InvalidOptions("flow options must be positive");

    const int N = space.N;
    const int k = space.k();
    const int dim = 2 * N + k + 1; // Re c, Im c, eta, accumulated energy

    FlowTrajectory traj;
    traj.space = space;
    traj.r = r;

    auto unpack = [&](const Eigen::VectorXd& y) {
        FlowState st;
        st.c.resize(N);
        for (int l = 0; l < N; ++l)
            st.c(l) = std::complex<double>(y(l), y(N + l));
        st.eta = y.segment(2 * N, k);
        return st;
    };
    auto deriv = [&](const Eigen::VectorXd& y) {
        const FlowState st = unpack(y);
        const FlowField f = vector_field(space, st, r);
        traj.max_offband_residual = std::max(traj.max_offband_residual, f.offband_residual);
        Eigen::VectorXd dy(dim);
        for (int l = 0; l < N; ++l) {
            dy(l) = f.c_dot(l).real();
            dy(N + l) = f.c_dot(l).imag();
        }
        dy.segment(2 * N, k) = f.eta_dot;
        dy(dim - 1) = energy_rate(space, st);
        return dy;
    };
    auto record = [&](double s, const Eigen::VectorXd& y, double grad_norm) {
        if (!traj.s_grid.empty() && s <= traj.s_grid.back())
            return;
        const FlowState st = unpack(y);
        FlowRecord rec;
        rec.s = s;
        rec.action = action_value(space, st);
        rec.grad_norm = grad_norm;
        rec.mu_err = constraint(space, st.c).norm();
        rec.energy_acc = y(dim - 1);
        rec.c_norm = st.c.norm();
        rec.eta_norm = st.eta.norm();
        traj.s_grid.push_back(s);
        traj.states.push_back(st);
        traj.records.push_back(rec);
    };

    // Dormand-Prince 5(4) tableau
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                        e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

    Eigen::VectorXd y(dim);
    for (int l = 0; l < N; ++l) {
        y(l) = initial.c(l).real();
        y(N + l) = initial.c(l).imag();
    }
    y.segment(2 * N, k) = initial.eta;
    y(dim - 1) = 0.0;

    double s = 0.0;
    Eigen::VectorXd k1 = deriv(y);
    double grad_norm = std::sqrt(k1.head(dim - 1).squaredNorm());
    record(0.0, y, grad_norm);

    bool dwelling = grad_norm < opts.grad_tol;
    double dwell_start = 0.0;
    traj.status = FlowStatus::MaxTimeReached;

    double next_record = opts.record_ds > 0.0 ? opts.record_ds : 0.0;
    double h = std::clamp(0.01 / (1.0 + k1.norm()), 1e-6, 0.05);
    long steps = 0;
    bool done = false;

    while (!done) {
        if (++steps > opts.max_steps)
            throw IntegratorFailure("step budget exceeded before any stopping condition");
        h = std::min(h, opts.s_max - s);
        if (opts.record_ds > 0.0 && next_record > s)
            h = std::min(h, next_record - s);
        if (h < 1e-13 * std::max(1.0, std::abs(s)))
            throw IntegratorFailure("step size underflow");

        const Eigen::VectorXd k2 = deriv(y + h * (a21 * k1));
        const Eigen::VectorXd k3 = deriv(y + h * (a31 * k1 + a32 * k2));
        const Eigen::VectorXd k4 = deriv(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const Eigen::VectorXd k5 = deriv(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Eigen::VectorXd k6 =
            deriv(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Eigen::VectorXd ynew =
            y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Eigen::VectorXd k7 = deriv(ynew);
        const Eigen::VectorXd y4 =
            y + h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double err = 0.0;
        for (int i = 0; i < dim; ++i) {
            const double sc =
                opts.rk_abs_tol +
                opts.rk_rel_tol * std::max(std::abs(y(i)), std::abs(ynew(i)));
            const double q = (ynew(i) - y4(i)) / sc;
            err += q * q;
        }
        err = std::sqrt(err / dim);

        if (err <= 1.0) {
            s += h;
            y = ynew;
            k1 = k7; // first-same-as-last
            grad_norm = std::sqrt(k1.head(dim - 1).squaredNorm());

            const double state_norm = std::sqrt(y.head(dim - 1).squaredNorm());
            const bool rec_point =
                opts.record_ds == 0.0 || s >= next_record - 1e-12 || s >= opts.s_max - 1e-12;
            if (rec_point) {
                record(s, y, grad_norm);
                if (opts.record_ds > 0.0)
                    while (next_record <= s + 1e-12)
                        next_record += opts.record_ds;
            }

            if (state_norm > opts.blowup_radius) {
                traj.status = FlowStatus::Blowup;
                record(s, y, grad_norm);
                done = true;
            } else if (grad_norm < opts.grad_tol) {
                if (!dwelling) {
                    dwelling = true;
                    dwell_start = s;
                }
                if (s - dwell_start >= opts.dwell) {
                    traj.status = FlowStatus::Converged;
                    record(s, y, grad_norm);
                    done = true;
                }
            } else {
                dwelling = false;
            }
            if (!done && s >= opts.s_max - 1e-12) {
                traj.status = FlowStatus::MaxTimeReached;
                record(s, y, grad_norm);
                done = true;
            }
        }
        if (!done) {
            const double factor =
                err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
            h *= std::clamp(factor, 0.2, 5.0);
        }
    }
    return traj;
}

double energy(const FlowTrajectory& traj) {
    if (traj.records.empty())
        throw InvalidOptions("trajectory is empty");
    return traj.records.back().energy_acc - traj.records.front().energy_acc;
}

FlowState detect_limit(const FlowTrajectory& traj, double support_tol) {
    if (traj.states.empty())
        throw InvalidOptions("trajectory is empty");
    FlowState limit = traj.states.back();
    std::vector<int> support;
    for (int l = 0; l < traj.space.N; ++l) {
        if (std::abs(limit.c(l)) > support_tol)
            support.push_back(l);
        else
            limit.c(l) = 0.0;
    }
    if (!support.empty()) {
        // the multiplier of the limiting critical point satisfies
        // (A eta)_j = 2 pi m on the supported slots
        Eigen::MatrixXd rows(static_cast<int>(support.size()), traj.space.k());
        Eigen::VectorXd rhs(static_cast<int>(support.size()));
        for (int i = 0; i < static_cast<int>(support.size()); ++i) {
            rows.row(i) = traj.space.A_V.row(support[static_cast<std::size_t>(i)]).cast<double>();
            rhs(i) = kTwoPi * traj.space.modes[static_cast<std::size_t>(
                                  support[static_cast<std::size_t>(i)])];
        }
        limit.eta = rows.colPivHouseholderQr().solve(rhs);
    }
    return limit;
}

BandBound theorem_B_band(const TorusAction& action, const Eigen::VectorXd& eta_minus,
                         const Eigen::VectorXd& eta_plus) {
    if (eta_minus.size() != action.k() || eta_plus.size() != action.k())
        throw DimensionMismatch("multiplier limits have wrong length");
    const Eigen::VectorXd lo = action.weights.cast<double>() * eta_minus;
    const Eigen::VectorXd hi = action.weights.cast<double>() * eta_plus;
    BandBound b;
    b.m_minus.resize(action.n());
    b.m_plus.resize(action.n());
    b.forced_zero.resize(static_cast<std::size_t>(action.n()));
    for (int j = 0; j < action.n(); ++j) {
        b.m_minus(j) = static_cast<int>(std::ceil(lo(j) / kTwoPi));
        b.m_plus(j) = static_cast<int>(std::floor(hi(j) / kTwoPi));
        b.forced_zero[static_cast<std::size_t>(j)] = b.m_minus(j) > b.m_plus(j);
    }
    return b;
}

namespace {

// W* at unit level: max sum w, w >= 0, |B w| <= 1 with B = (1/2) A^T.
// Exact maximization of sum(w) over w >= 0, |B w| <= 1 (the caller has
// already excluded recession directions). The optimum is attained on a
// support whose columns are linearly independent: on a dependent
// support one can move along a kernel direction of B without changing
// the constraint and without decreasing the objective until some
// coordinate vanishes. On an independent support S the KKT system is
// (B_S^T B_S) u = 1 with u > 0, and the rescaled optimizer has
// objective value sqrt(1^T u). Supports have size <= rows(B), so the
// enumeration is polynomial for fixed torus rank.
double unit_radius_budget(const Eigen::MatrixXd& B) {
    const int n = static_cast<int>(B.cols());
    const int k = static_cast<int>(B.rows());
    const int max_size = std::min(n, k);
    double best = 0.0;
    long combos = 0;
    std::vector<int> support;
    auto visit = [&](const std::vector<int>& s) {
        if (++combos > 2000000)
            throw EnumerationCapExceeded("radius-budget support enumeration exceeds the cap");
        const int sz = static_cast<int>(s.size());
        Eigen::MatrixXd bs(k, sz);
        for (int a = 0; a < sz; ++a)
            bs.col(a) = B.col(s[static_cast<std::size_t>(a)]);
        const Eigen::MatrixXd gs = bs.transpose() * bs;
        const Eigen::FullPivLU<Eigen::MatrixXd> lu(gs);
        if (lu.rank() < sz)
            return; // dependent columns: covered by a sub-support
        const Eigen::VectorXd u = lu.solve(Eigen::VectorXd::Ones(sz));
        if (u.minCoeff() <= 0.0)
            return; // KKT infeasible here: optimum sits on a sub-support
        best = std::max(best, std::sqrt(u.sum()));
    };
    // enumerate supports of each size by lexicographic succession
    for (int size = 1; size <= max_size; ++size) {
        support.resize(static_cast<std::size_t>(size));
        for (int i = 0; i < size; ++i)
            support[static_cast<std::size_t>(i)] = i;
        while (true) {
            visit(support);
            int i = size - 1;
            while (i >= 0 && support[static_cast<std::size_t>(i)] == n - size + i)
                --i;
            if (i < 0)
                break;
            ++support[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < size; ++j)
                support[static_cast<std::size_t>(j)] = support[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    return best;
}

} // namespace

double compute_R(const TorusAction& action) {
    // unboundedness check, exact: a nonzero w >= 0 with A^T w = 0 is a
    // recession direction of the feasible set
    {
        RationalMatrix M(static_cast<std::size_t>(action.k() + 1),
                         RationalVector(static_cast<std::size_t>(action.n())));
        RationalVector rhs(static_cast<std::size_t>(action.k() + 1));
        for (int r = 0; r < action.k(); ++r)
            for (int j = 0; j < action.n(); ++j)
                M[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] =
                    Rational(action.weights(j, r));
        for (int j = 0; j < action.n(); ++j)
            M[static_cast<std::size_t>(action.k())][static_cast<std::size_t>(j)] = 1;
        rhs[static_cast<std::size_t>(action.k())] = 1;
        if (solve_nonnegative(M, rhs))
            throw NotProper("the radius budget is unbounded: some nonnegative "
                            "combination of the rows vanishes");
    }
    const double tau_norm = action.tau.norm();
    if (tau_norm == 0.0)
        return 0.0;
    const Eigen::MatrixXd B = 0.5 * action.weights.cast<double>().transpose();
    // the feasible set {w >= 0, |B w| <= |tau|} is |tau| times the unit
    // one, so W* scales linearly and R^2 = |tau| W*_1 exactly
    return std::sqrt(tau_norm * unit_radius_budget(B));
}

LinftyReport check_linfty(const FlowTrajectory& traj, double R, double margin,
                          int s_resolution) {
    if (traj.states.size() < 2)
        throw InvalidOptions("trajectory too short for resampling");
    if (s_resolution < 5)
        throw InvalidOptions("s resolution too small");
    const ApproxSpace& space = traj.space;
    const int T = space.grid_size;
    const int ns = s_resolution;
    const double s_end = traj.s_grid.back();
    const double ds = s_end / (ns - 1);

    // fields at the stored states, for Hermite interpolation
    std::vector<Eigen::VectorXcd> state_dc(traj.states.size());
    std::vector<Eigen::VectorXd> state_de(traj.states.size());
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const FlowField f = vector_field(space, traj.states[i], traj.r);
        state_dc[i] = f.c_dot;
        state_de[i] = f.eta_dot;
    }
    auto sample_state = [&](double s) {
        std::size_t i = 0;
        while (i + 2 < traj.s_grid.size() && traj.s_grid[i + 1] < s)
            ++i;
        const double h = traj.s_grid[i + 1] - traj.s_grid[i];
        const double t = std::clamp((s - traj.s_grid[i]) / h, 0.0, 1.0);
        const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
        const double h10 = t * (1 - t) * (1 - t);
        const double h01 = t * t * (3 - 2 * t);
        const double h11 = t * t * (t - 1);
        FlowState st;
        st.c = h00 * traj.states[i].c + (h10 * h) * state_dc[i] +
               h01 * traj.states[i + 1].c + (h11 * h) * state_dc[i + 1];
        st.eta = h00 * traj.states[i].eta + (h10 * h) * state_de[i] +
                 h01 * traj.states[i + 1].eta + (h11 * h) * state_de[i + 1];
        return st;
    };

    int width = 0;
    for (const Band& b : space.bands)
        width = std::max(width, b.size() - 1);

    // F = |z|^2 / 2 on the uniform (s, t) grid; F_tt exact from the
    // autocorrelation spectrum of z, F_ss by central differences
    Eigen::MatrixXd F(ns, T), Ftt(ns, T);
    std::vector<Eigen::MatrixXd> mu_grid(static_cast<std::size_t>(ns));
    double sup_abs = 0.0;
    for (int i = 0; i < ns; ++i) {
        const FlowState st = sample_state(i * ds);
        const FourierLoop z = embed(space, st.c);
        const Eigen::MatrixXcd zs = z.samples();
        mu_grid[static_cast<std::size_t>(i)] =
            0.5 * space.action.weights.cast<double>().transpose() * zs.cwiseAbs2();
        for (int p = 0; p < T; ++p) {
            F(i, p) = 0.5 * zs.col(p).squaredNorm();
            sup_abs = std::max(sup_abs, std::sqrt(2.0 * F(i, p)));
        }
        for (int p = 0; p < T; ++p) {
            std::complex<double> acc(0.0, 0.0);
            for (int lag = -width; lag <= width; ++lag) {
                if (lag == 0)
                    continue;
                std::complex<double> q(0.0, 0.0);
                for (int j = 0; j < space.n(); ++j) {
                    const Band& b = z.band(j);
                    for (int m = b.lo; m <= b.hi; ++m)
                        if (b.contains(m - lag))
                            q += z.coeff(j, m) * std::conj(z.coeff(j, m - lag));
                }
                const double w = kTwoPi * lag;
                const double ang = kTwoPi * lag * p / T;
                acc -= 0.5 * w * w * q * std::complex<double>(std::cos(ang), std::sin(ang));
            }
            Ftt(i, p) = acc.real();
        }
    }

    LinftyReport rep;
    rep.sup_abs_z = sup_abs;
    rep.bound = 2.0 * R;
    rep.within_bound = sup_abs <= 2.0 * R;
    rep.margin = margin;
    rep.min_slack = std::numeric_limits<double>::quiet_NaN();
    const double tau_norm = space.action.tau.norm();
    const double cutoff = R * (1.0 + margin);
    for (int i = 1; i + 1 < ns; ++i)
        for (int p = 0; p < T; ++p) {
            if (std::sqrt(2.0 * F(i, p)) <= cutoff)
                continue;
            const double fss = (F(i - 1, p) - 2.0 * F(i, p) + F(i + 1, p)) / (ds * ds);
            const double mu_abs = mu_grid[static_cast<std::size_t>(i)].col(p).norm();
            const double slack =
                fss + Ftt(i, p) - 2.0 * traj.r * traj.r * mu_abs * (mu_abs - tau_norm);
            if (rep.slack_samples == 0 || slack < rep.min_slack)
                rep.min_slack = slack;
            ++rep.slack_samples;
        }
    return rep;
}

} // namespace vortex
