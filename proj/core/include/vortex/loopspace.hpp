// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The vortex library authors

#pragma once

#include <optional>
#include <utility>

#include <Eigen/Core>

#include "vortex/fourier.hpp"
#include "vortex/toric.hpp"

namespace vortex {

// Points of the loop space C^inf(S^1, C^n x t^k) and of its Coulomb
// slice (eta constant in t). eta is stored as k x T samples; on the
// Coulomb slice all columns are equal.
//
// Gauge conventions (fixed here, used everywhere): a gauge phase theta
// acts by
//
//     z |-> e^{-i A theta} z,     eta |-> eta - d(theta)/dt.
//
// This is the direction that leaves the action functional invariant for
// the library's representation rho(e^{iv}) z = e^{iAv} z and moment map
// mu = (1/2) A^T |z|^2.
class LoopPoint {
  public:
    // general point: eta sampled on the loop (k x T, T = z grid size)
    static LoopPoint general(FourierLoop z, Eigen::MatrixXd eta_samples);
    // Coulomb-slice point: eta constant
    static LoopPoint coulomb(FourierLoop z, Eigen::VectorXd eta);

    const FourierLoop& z() const { return z_; }
    FourierLoop& z() { return z_; }
    const Eigen::MatrixXd& eta_samples() const { return eta_; }
    bool on_coulomb_slice() const { return constant_eta_; }
    // constant eta accessor; throws unless on the Coulomb slice
    Eigen::VectorXd eta() const;

  private:
    FourierLoop z_;
    Eigen::MatrixXd eta_; // k x T
    bool constant_eta_ = false;
};

// Tangent vector at a Coulomb-slice point.
struct TangentVec {
    FourierLoop z_hat;
    Eigen::VectorXd eta_hat;
};

// Gauge transformation split as theta(t) = base + 2 pi * winding * t +
// periodic(t), with periodic mean-zero. The identity component has
// winding = 0; the residual group H ~ T^k x Z^k is (base, winding) with
// zero periodic part.
struct GaugeElement {
    Eigen::VectorXd base;        // in [0, 2 pi)^k
    Eigen::VectorXi winding;     // integer k-vector
    Eigen::MatrixXd periodic;    // k x T mean-zero samples

    static GaugeElement identity(int k, int grid_size);
};

// Applies the gauge transformation to a point (general or Coulomb). For
// pure residual elements (zero periodic part) the z-update is the exact
// mode relabeling m -> m - (A*winding)_j together with the constant
// phase e^{-i(A*base)_j}; otherwise z is multiplied in sample space and
// re-analyzed on the full representable band.
LoopPoint apply_gauge(const TorusAction& action, const GaugeElement& h, const LoopPoint& p);

// Action functional on the full loop space:
//     A(z, eta) = int lambda(z) z' dt + int <mu(z(t)) - tau, eta(t)> dt,
// lambda = sum y_j dx_j, the t-derivative taken spectrally.
double action_full(const TorusAction& action, const LoopPoint& p);

// Restriction to the Coulomb slice:
//     A0(z, eta) = int lambda(z) z' dt + <eta, mu_bar(z) - tau>,
// mu_bar(z) = int mu(z(t)) dt. Throws unless eta is constant.
double action_A0(const TorusAction& action, const LoopPoint& p);

// mean moment map over the loop
Eigen::VectorXd mu_bar(const TorusAction& action, const FourierLoop& z);

// Coulomb normalization: the identity-component gauge with
// theta(t) = int_0^t (eta - eta_bar), shifted to mean zero, carries p to
// a point with constant eta = eta_bar. Returns (transformed point, h).
std::pair<LoopPoint, GaugeElement> coulomb_gauge(const TorusAction& action, const LoopPoint& p);

// Residual normalization: shifts each eta component into [0, 2 pi) by a
// winding gauge e^{2 pi i v t}; z modes relabel by -(A v)_j. Returns the
// transformed point and the residual element used.
std::pair<LoopPoint, GaugeElement> normalize_by_H(const TorusAction& action, const LoopPoint& p);

// L^2 metric on the Coulomb slice: int <z1^, z2^> dt + <eta1^, eta2^>,
// evaluated spectrally (Parseval).
double metric_g0(const LoopPoint& p, const TangentVec& u, const TangentVec& v);

// Gauged metric family. For r in (0, 1] the Lie-algebra compensation
// xi_i of each tangent argument solves the periodic mean-zero problem
//
//     L_z^* zhat_i - L_z^* L_z xi_i + (1/r^2) xi_i'' = const,
//
// and
//
//     g_r(u, v) = int <zhat_1 - L_z xi_1, zhat_2 - L_z xi_2> dt
//               + (1/r^2) int <xi_1', xi_2'> dt + <etahat_1, etahat_2>.
//
// r = 1 is the gauged metric; r = 0 degenerates to g0 (xi = 0).
double metric_gr(const TorusAction& action, const LoopPoint& p, const TangentVec& u, const TangentVec& v,
                 double r);
double metric_g1(const TorusAction& action, const LoopPoint& p, const TangentVec& u, const TangentVec& v);

// The compensation field of the gradient family: the unique mean-zero
// periodic solution of d(xi)/dt = r^2 (mu(z(t)) - mu_bar(z)), computed
// mode-wise. Returned as k x T samples.
Eigen::MatrixXd solve_xi(const TorusAction& action, const FourierLoop& z, double r);

// Gradient of A0 in the metric g_r at a Coulomb-slice point:
//
//     grad_r A0 (z, eta) = ( i z' - i L_z eta - L_z xi_r,  mu_bar(z) - tau ),
//
// with xi_r = solve_xi(z, r). The first two z-terms are band-preserving
// mode multiplications; L_z xi_r widens the band, so the result is
// returned on the minimal structurally enlarged band (no enlargement at
// r = 0 or when xi vanishes).
TangentVec grad(const TorusAction& action, const LoopPoint& p, double r);

} // namespace vortex
