// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The vortex library authors

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "vortex/fourier.hpp"
#include "vortex/toric.hpp"

namespace vortex {

// Finite-dimensional approximation space V of the loop space: loops with
// Fourier modes confined to per-coordinate bands [m_j^-, m_j^+],
// identified with C^N, N = sum_j (m_j^+ - m_j^- + 1). Slots are ordered
// coordinate-major:
//
//     (z_{1,m_1^-}, ..., z_{1,m_1^+}, z_{2,m_2^-}, ..., z_{n,m_n^+}).
//
// The torus acts on slot l through row rho(l) of A (rho = the coordinate
// the slot belongs to), collected as the N x k induced weight matrix A_V
// whose row l is row rho(l) of A. The induced moment map is
// mu_V(c) = (1/2) A_V^T (|c_l|^2); by Parseval mu_V(coeffs(z)) is the
// mean moment map mu_bar(z) of the loop.
struct ApproxSpace {
    TorusAction action;
    std::vector<Band> bands;   // one band per coordinate of C^n
    int N = 0;                 // total number of slots
    Eigen::MatrixXi A_V;       // N x k, row l = row rho(l) of A
    std::vector<int> rho;      // slot -> coordinate (0-based)
    std::vector<int> modes;    // slot -> Fourier mode m_l
    int grid_size = 0;         // quadrature grid for embedded loops

    int n() const { return action.n(); }
    int k() const { return action.k(); }
};

ApproxSpace build(const TorusAction& action, std::vector<Band> bands);

// slot vector -> banded loop and backify
FourierLoop embed(const ApproxSpace& space, const Eigen::VectorXcd& c);
Eigen::VectorXcd restrict_loop(const ApproxSpace& space, const FourierLoop& z);

// mu_V(c) = (1/2) A_V^T (|c_l|^2)
Eigen::VectorXd moment_map_V(const ApproxSpace& space, const Eigen::VectorXcd& c);

// constraint map h(c) = mu_V(c) - tau
Eigen::VectorXd constraint(const ApproxSpace& space, const Eigen::VectorXcd& c);

// the Liouville/Floer term in closed form: f(c) = -pi sum_l m_l |c_l|^2
double floer_quadratic(const ApproxSpace& space, const Eigen::VectorXcd& c);

// gradient of f under the identification C^N = R^{2N}: slot l carries
// -2 pi m_l c_l
Eigen::VectorXcd floer_gradient(const ApproxSpace& space, const Eigen::VectorXcd& c);

// F_r(c, eta) = r f(c) + <eta, mu_V(c) - tau>; r = 1 is the restricted
// action functional A0|_V, r = 0 the pure Lagrange-multiplier function
double restricted_F(const ApproxSpace& space, const Eigen::VectorXcd& c,
                    const Eigen::VectorXd& eta, double r);

// Euclidean gradient of F_r: c-part r*floer_gradient + (A_V eta)_l c_l,
// eta-part h(c)
struct FGradient {
    Eigen::VectorXcd c_part;
    Eigen::VectorXd eta_part;
    double norm() const;
};
FGradient restricted_F_gradient(const ApproxSpace& space, const Eigen::VectorXcd& c,
                                const Eigen::VectorXd& eta, double r);

// real k x 2N Jacobian of h at c, columns ordered (Re c_0, Im c_0,
// Re c_1, ...): d h_r = sum_l A_V(l,r) (x_l dx_l + y_l dy_l)
Eigen::MatrixXd constraint_jacobian(const ApproxSpace& space, const Eigen::VectorXcd& c);

// 'count' points of the level set mu_V^{-1}(tau), |h| <= 1e-10 each,
// found by Gauss-Newton projection from random starts (damping 1/2 on
// residual increase, 50 restarts per point). Deterministic in 'seed'
// independent of 'threads'. Requires tau regular for A_V.
std::vector<Eigen::VectorXcd> sample_level_set(const ApproxSpace& space, int count,
                                               std::uint64_t seed, int threads = 1);

// single projection used by sample_level_set; returns true on success
bool project_to_level_set(const ApproxSpace& space, Eigen::VectorXcd& c,
                          double tol = 1e-12, int max_iter = 80);

} // namespace vortex
