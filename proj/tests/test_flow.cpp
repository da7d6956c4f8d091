// Negative gradient flow on the mode spaces: the exact r = 0 mode law,
// convergence to critical points with the energy identity, the limit
// band window, the a-priori radius bound, and the metric-family
// continuity of trajectories.
#include <cmath>
#include <complex>
#include <vector>

#include <doctest.h>

#include "helpers.hpp"
#include "vortex/approx.hpp"
#include "vortex/errors.hpp"
#include "vortex/flow.hpp"
#include "vortex/loopspace.hpp"
#include "vortex/rng.hpp"

using namespace vortex;
using namespace testutil;

namespace {

double action_at(const ApproxSpace& sp, const FlowState& st) {
    return action_A0(sp.action, LoopPoint::coulomb(embed(sp, st.c), st.eta));
}

} // namespace

TEST_CASE("r = 0 field: exact mode law, zero off-band residual") {
    ApproxSpace sp = cp2_space(-1, 2);
    Rng rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        FlowState st{random_coeffs(rng, sp.N, 0.8), random_real(rng, 1, 1.0)};
        const FlowField f = vector_field(sp, st, 0.0);
        CHECK(f.offband_residual == 0.0);
        const Eigen::VectorXd av = sp.A_V.cast<double>() * st.eta;
        for (int l = 0; l < sp.N; ++l) {
            const std::complex<double> expect = (kTwoPi * sp.modes[l] - av(l)) * st.c(l);
            CHECK(std::abs(f.c_dot(l) - expect) <= 1e-14);
        }
        CHECK((f.eta_dot - (sp.action.tau - moment_map_V(sp, st.c))).cwiseAbs().maxCoeff() <= 1e-14);

        // flow speed in the slice metric is the energy density
        CHECK(energy_rate(sp, st) == doctest::Approx(f.norm() * f.norm()).epsilon(1e-12));
    }

    // the compensation term at r = 1 leaves the band and is reported
    FlowState st{random_coeffs(rng, sp.N, 0.8), random_real(rng, 1, 1.0)};
    CHECK(vector_field(sp, st, 1.0).offband_residual > 0.0);
}

TEST_CASE("converged flows: limit band window and energy identity") {
    ApproxSpace sp = cp2_space(-1, 2);
    Rng rng(31);
    const FlowOptions opts = converged_flow_options();
    int converged = 0;
    for (int trial = 0; trial < 3; ++trial) {
        const FlowState start = saddle_start(sp, rng, 1.1 + 0.1 * trial);
        const FlowTrajectory traj = integrate(sp, start, 0.0, opts);
        REQUIRE(traj.status == FlowStatus::Converged);
        ++converged;
        CHECK(traj.max_offband_residual == 0.0);

        const FlowState limit = detect_limit(traj);
        CHECK(limit.eta.cwiseAbs().maxCoeff() == 0.0);

        // the limit multiplier dictates which modes may survive
        const BandBound bb = theorem_B_band(sp.action, limit.eta, limit.eta);
        const FlowState& terminal = traj.states.back();
        for (int l = 0; l < sp.N; ++l) {
            const int j = sp.rho[l];
            const bool inside = !bb.forced_zero[static_cast<std::size_t>(j)] &&
                                sp.modes[l] >= bb.m_minus(j) && sp.modes[l] <= bb.m_plus(j);
            if (!inside) {
                CAPTURE(l);
                CHECK(std::abs(terminal.c(l)) < 1e-8);
                CHECK(std::abs(limit.c(l)) == 0.0);
            }
        }

        // energy identity: accumulated energy equals the action drop
        const double drop = action_at(sp, start) - action_at(sp, terminal);
        const double e = energy(traj);
        CHECK(std::abs(e - drop) / std::max(1.0, std::abs(drop)) <= 1e-5);

        // records are monotone in action (negative flow)
        for (std::size_t i = 1; i < traj.records.size(); ++i)
            CHECK(traj.records[i].action <= traj.records[i - 1].action + 1e-10);
    }
    CHECK(converged == 3);
}

TEST_CASE("limit band window arithmetic") {
    const TorusAction act = cp2_action();
    const auto vec1 = [](double v) { return Eigen::VectorXd::Constant(1, v); };

    SUBCASE("zero multiplier keeps exactly the constant modes") {
        const BandBound b = theorem_B_band(act, vec1(0.0), vec1(0.0));
        for (int j = 0; j < 3; ++j) {
            CHECK(b.m_minus(j) == 0);
            CHECK(b.m_plus(j) == 0);
            CHECK_FALSE(b.forced_zero[static_cast<std::size_t>(j)]);
        }
    }
    SUBCASE("a full period shifts the window by one mode") {
        const BandBound b = theorem_B_band(act, vec1(kTwoPi), vec1(kTwoPi));
        CHECK(b.m_minus(0) == 1);
        CHECK(b.m_plus(0) == 1);
    }
    SUBCASE("a multiplier range spans a window") {
        const BandBound b = theorem_B_band(act, vec1(0.0), vec1(1.5 * kTwoPi));
        CHECK(b.m_minus(0) == 0);
        CHECK(b.m_plus(0) == 1);
    }
    SUBCASE("a range strictly inside one period forces the coordinate to zero") {
        const BandBound b = theorem_B_band(act, vec1(0.1 * kTwoPi), vec1(0.9 * kTwoPi));
        CHECK(b.m_minus(0) == 1);
        CHECK(b.m_plus(0) == 0);
        CHECK(b.forced_zero[0]);
    }
    SUBCASE("weights scale the window per coordinate") {
        Eigen::MatrixXi w(2, 1);
        w << 2, -1;
        Eigen::VectorXd tau(1);
        tau << 1.0;
        const TorusAction mixed = TorusAction::create(w, tau);
        const BandBound b = theorem_B_band(mixed, vec1(kTwoPi), vec1(kTwoPi));
        CHECK(b.m_minus(0) == 2);
        CHECK(b.m_plus(0) == 2);
        CHECK(b.m_minus(1) == -1);
        CHECK(b.m_plus(1) == -1);
    }
}

TEST_CASE("radius bound: closed-form values and properness guard") {
    CHECK(compute_R(cp2_action()) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

    {
        Eigen::MatrixXi w(1, 1);
        w << 1;
        Eigen::VectorXd tau(1);
        tau << 1.0;
        CHECK(compute_R(TorusAction::create(w, tau)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    }
    {
        Eigen::MatrixXi w(2, 1);
        w << 2, 2;
        Eigen::VectorXd tau(1);
        tau << 1.0;
        CHECK(compute_R(TorusAction::create(w, tau)) == doctest::Approx(1.0).epsilon(1e-12));
    }
    {
        // budget splits across two independent columns: W* = 2 sqrt 2
        // at unit level, scaled by |tau| = sqrt 5
        CHECK(compute_R(rank2_action()) == doctest::Approx(2.514866859366).epsilon(1e-10));
    }
    {
        // a weight-zero coordinate makes the budget unbounded
        Eigen::MatrixXi w(2, 1);
        w << 1, 0;
        Eigen::VectorXd tau(1);
        tau << 1.0;
        CHECK_THROWS_AS((void)compute_R(TorusAction::create(w, tau)), const NotProper&);
    }
}

TEST_CASE("bounded flows respect the a-priori radius bound") {
    const double R = compute_R(cp2_action());

    // r = 0, expanding-branch start, bounded segment
    {
        ApproxSpace sp = cp2_space(-1, 2);
        Rng rng(53);
        FlowOptions opts;
        opts.s_max = 5.0;
        opts.grad_tol = 1e-14; // run the full window
        opts.rk_abs_tol = 1e-12;
        opts.rk_rel_tol = 1e-10;
        opts.record_ds = 0.05;
        const FlowTrajectory traj = integrate(sp, saddle_start(sp, rng, 1.3), 0.0, opts);
        REQUIRE(traj.status == FlowStatus::MaxTimeReached);
        const LinftyReport rep = check_linfty(traj, R);
        CHECK(rep.bound == doctest::Approx(2.0 * R));
        CHECK(rep.within_bound);
        CHECK(rep.sup_abs_z <= 2.0 * R);
        if (rep.slack_samples > 0)
            CHECK(rep.min_slack >= 0.0);
    }

    // r = 1 on a decaying band
    {
        ApproxSpace sp = cp2_space(-2, 0);
        FlowOptions opts;
        opts.s_max = 5.0;
        opts.grad_tol = 1e-14;
        opts.rk_abs_tol = 1e-12;
        opts.rk_rel_tol = 1e-10;
        opts.record_ds = 0.05;
        const FlowTrajectory traj = integrate(sp, decaying_band_start(sp), 1.0, opts);
        REQUIRE(traj.status == FlowStatus::MaxTimeReached);
        const LinftyReport rep = check_linfty(traj, R);
        CHECK(rep.within_bound);
        if (rep.slack_samples > 0)
            CHECK(rep.min_slack >= 0.0);
    }
}

TEST_CASE("trajectories vary continuously in the metric parameter") {
    ApproxSpace sp = cp2_space(-2, 0);
    const FlowState start = decaying_band_start(sp);
    FlowOptions opts;
    opts.s_max = 5.0;
    opts.grad_tol = 1e-14;
    opts.rk_abs_tol = 1e-12;
    opts.rk_rel_tol = 1e-10;
    opts.record_ds = 0.05;

    std::vector<FlowTrajectory> trajs;
    for (int nu = 1; nu <= 5; ++nu) {
        const double r = 0.5 - std::pow(4.0, -nu);
        trajs.push_back(integrate(sp, start, r, opts));
        REQUIRE(trajs.back().status == FlowStatus::MaxTimeReached);
    }

    std::vector<double> diffs;
    for (std::size_t i = 0; i + 1 < trajs.size(); ++i) {
        REQUIRE(trajs[i].states.size() == trajs[i + 1].states.size());
        double sup = 0.0;
        for (std::size_t j = 0; j < trajs[i].states.size(); ++j) {
            sup = std::max(sup, (trajs[i].states[j].c - trajs[i + 1].states[j].c).cwiseAbs().maxCoeff());
            sup = std::max(sup, (trajs[i].states[j].eta - trajs[i + 1].states[j].eta).cwiseAbs().maxCoeff());
        }
        diffs.push_back(sup);
    }
    for (std::size_t i = 0; i + 1 < diffs.size(); ++i) {
        CHECK(diffs[i + 1] < diffs[i]);
        CHECK(diffs[i + 1] / diffs[i] < 0.4); // parameter spacing contracts by 4
    }
    CHECK(diffs.back() <= 1e-3);
}

TEST_CASE("flow status taxonomy") {
    SUBCASE("expanding modes with no brake blow up") {
        ApproxSpace sp = cp2_space(0, 1);
        FlowState st;
        st.c = Eigen::VectorXcd::Zero(sp.N);
        st.eta = Eigen::VectorXd::Zero(1);
        for (int l = 0; l < sp.N; ++l)
            if (sp.modes[l] == 1)
                st.c(l) = 5.0;
        FlowOptions opts;
        opts.s_max = 50.0;
        opts.blowup_radius = 1e4;
        const FlowTrajectory traj = integrate(sp, st, 0.0, opts);
        CHECK(traj.status == FlowStatus::Blowup);
    }
    SUBCASE("a short window reports the time limit") {
        ApproxSpace sp = cp2_space(-1, 2);
        Rng rng(71);
        FlowOptions opts;
        opts.s_max = 0.1;
        opts.grad_tol = 1e-14;
        const FlowTrajectory traj = integrate(sp, saddle_start(sp, rng, 1.2), 0.0, opts);
        CHECK(traj.status == FlowStatus::MaxTimeReached);
    }
}
