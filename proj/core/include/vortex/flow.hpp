// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The vortex library authors

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "vortex/approx.hpp"

namespace vortex {

// One state of the restricted negative gradient flow on V x t^k.
struct FlowState {
    Eigen::VectorXcd c;
    Eigen::VectorXd eta;
};

// The flow field -P_V grad_r A0 at a state. At r = 0 the c-component is
// the exact mode law c_l' = (2 pi m_l - (A_V eta)_l) c_l (off-band
// content identically zero); for r > 0 the compensation term L_z xi_r
// leaves the band and is projected back, with the discarded off-band
// magnitude reported.
struct FlowField {
    Eigen::VectorXcd c_dot;
    Eigen::VectorXd eta_dot;
    double offband_residual = 0.0;
    double norm() const;
};

FlowField vector_field(const ApproxSpace& space, const FlowState& state, double r);

// squared flow speed in the r = 0 metric at a state,
// sum_l ((A_V eta)_l - 2 pi m_l)^2 |c_l|^2 + |mu_V(c) - tau|^2;
// this is the energy density of the flow line
double energy_rate(const ApproxSpace& space, const FlowState& state);

enum class FlowStatus { Converged, MaxTimeReached, Blowup };

struct FlowOptions {
    double s_max = 50.0;
    double grad_tol = 1e-9;       // convergence threshold on the field norm
    double dwell = 1.0;           // time the norm must stay below grad_tol
    double blowup_radius = 1e6;
    double rk_abs_tol = 1e-10;
    double rk_rel_tol = 1e-8;
    double record_ds = 0.0;       // 0: record every accepted step
    long max_steps = 2000000;
};

struct FlowRecord {
    double s = 0.0;
    double action = 0.0;      // A0 at the state
    double grad_norm = 0.0;   // field norm (projected gradient)
    double mu_err = 0.0;      // |mu_V(c) - tau|
    double energy_acc = 0.0;  // int_0^s energy_rate, integrated with the state
    double c_norm = 0.0;
    double eta_norm = 0.0;
};

struct FlowTrajectory {
    ApproxSpace space;
    double r = 0.0;
    std::vector<double> s_grid;
    std::vector<FlowState> states;
    std::vector<FlowRecord> records;
    FlowStatus status = FlowStatus::MaxTimeReached;
    double max_offband_residual = 0.0;
};

// Adaptive Dormand-Prince 5(4) integration of the flow from the given
// state. The energy integral is carried as an extra state component, so
// the energy identity is resolved to integrator accuracy. Converged
// means the field norm stayed below grad_tol for a dwell window.
FlowTrajectory integrate(const ApproxSpace& space, const FlowState& initial, double r,
                         const FlowOptions& opts = FlowOptions{});

// accumulated energy int (|d_t z - L_z eta|^2 + |mu_bar - tau|^2) ds of
// the trajectory; equals A0(start) - A0(end) for r = 0 flows
double energy(const FlowTrajectory& traj);

// The critical point a converged trajectory has reached: slots below
// support_tol are zeroed and eta is snapped to the exact multiplier of
// the remaining support (least squares on (A eta)_j = 2 pi m over
// supported slots). This is the detected limit of the flow line.
FlowState detect_limit(const FlowTrajectory& traj, double support_tol = 1e-8);

// Mode window of a flow line with multiplier limits eta-: per
// coordinate, m_j^- = ceil((A eta^-)_j / 2 pi) and m_j^+ =
// floor((A eta^+)_j / 2 pi); coordinates with m^- > m^+ carry no modes
// at all (forced zero).
struct BandBound {
    Eigen::VectorXi m_minus;
    Eigen::VectorXi m_plus;
    std::vector<bool> forced_zero;
};

BandBound theorem_B_band(const TorusAction& action, const Eigen::VectorXd& eta_minus,
                         const Eigen::VectorXd& eta_plus);

// radius bound R = sqrt(W*), W* = max{ sum w_j : w >= 0,
// |(1/2) A^T w| <= |tau| }. The feasible set scales linearly in |tau|,
// so W* is solved once at unit level and rescaled (doubling |tau|
// doubles R^2 exactly). Throws NotProper when the maximum is unbounded
// (some nonzero w >= 0 with A^T w = 0, e.g. a zero row).
double compute_R(const TorusAction& action);

struct LinftyReport {
    double sup_abs_z = 0.0;  // sup over (s, t) samples of |z(s, t)|
    double bound = 0.0;      // 2R
    bool within_bound = false;
    // minimum of the convexity slack Delta |z|^2/2 - 2 r^2 |mu| (|mu| - |tau|)
    // over interior samples with |z| > R (1 + margin); NaN if none
    double min_slack = 0.0;
    int slack_samples = 0;
    double margin = 0.0;
};

// Samples the trajectory on a uniform (s, t) grid (cubic Hermite in s
// from the recorded states and their field values, spectral in t) and
// checks the a-priori bound sup |z| <= 2R together with the discrete
// convexity of |z|^2/2 outside the R-ball.
LinftyReport check_linfty(const FlowTrajectory& traj, double R, double margin = 1e-3,
                          int s_resolution = 201);

} // namespace vortex
