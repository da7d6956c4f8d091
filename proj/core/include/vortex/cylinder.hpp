// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The vortex library authors

#pragma once

#include <vector>

#include <Eigen/Core>

#include "vortex/toric.hpp"

namespace vortex {

// Discretization of the finite cylinder [-L, L] x S^1: collocation in s
// (Chebyshev-Lobatto with barycentric differentiation, or second-order
// finite differences on a uniform grid) and uniform spectral samples
// in t.
enum class SBackend { Chebyshev, FiniteDifference };

struct NeumannOptions {
    SBackend backend = SBackend::Chebyshev;
    // number of s-collocation nodes; 0 picks the backend default
    // (Chebyshev 49, finite differences 512)
    int resolution = 0;
    // relative linear-solve residual accepted per t-mode
    double residual_tol = 1e-8;
};

int resolve_resolution(const NeumannOptions& opts);

// s-collocation data on [-L, L]: ascending nodes, first/second
// derivative matrices (D2 = D*D for Chebyshev; 3-point stencil for
// finite differences), and quadrature weights (Clenshaw-Curtis or
// trapezoid)
struct SCollocation {
    Eigen::VectorXd nodes;
    Eigen::MatrixXd D;
    Eigen::MatrixXd D2;
    Eigen::VectorXd weights;
};

SCollocation make_collocation(double half_length, SBackend backend, int resolution);

// scalar field on the cylinder: rows = s-collocation nodes (ascending),
// columns = uniform t samples t_p = p / nt
struct CylinderField {
    double half_length = 1.0;
    Eigen::MatrixXd values;
    bool mean_zero_in_t = false;
};

// Solves the Neumann problem with mean value zero,
//
//     Delta f = h  on [-L, L] x S^1,
//     +d_s f(+L, t) = g_plus(t),   -d_s f(-L, t) = g_minus(t),
//     int f(s, .) dt = 0,
//
// t-mode by t-mode: f_m'' - (2 pi m)^2 f_m = h_m with the Neumann rows
// replacing the boundary collocation rows. Inputs must be mean-zero in
// t (the m = 0 mode is excluded by hypothesis and rejected, not
// projected away). g_plus / g_minus are sampled on the same t grid as h.
CylinderField solve_neumann(const CylinderField& h, const Eigen::VectorXd& g_plus,
                            const Eigen::VectorXd& g_minus, const NeumannOptions& opts = {});

// residuals of a candidate solution under the same discrete operators
struct NeumannResidual {
    double interior = 0.0; // L2 norm of Delta f - h
    double boundary = 0.0; // max of the two Neumann row residual norms
};

NeumannResidual neumann_residual(const CylinderField& f, const CylinderField& h,
                                 const Eigen::VectorXd& g_plus, const Eigen::VectorXd& g_minus,
                                 const NeumannOptions& opts = {});

// ratio ||f||_{W^{2,2}} / (||h||_{L^2} + ||g+||_{W^{1,2}} + ||g-||_{W^{1,2}}),
// all derivatives discrete (spectral in t, collocation in s); the
// a-priori estimate for the Neumann problem asserts this is bounded
// uniformly in the cylinder length. Returns 0 for zero data.
double estimate_ratio(const CylinderField& f, const CylinderField& h,
                      const Eigen::VectorXd& g_plus, const Eigen::VectorXd& g_minus,
                      const NeumannOptions& opts = {});

// fields of a gauged-flow candidate on a common cylinder grid
struct CylinderTriple {
    double half_length = 1.0;
    std::vector<Eigen::MatrixXcd> z;  // n components
    std::vector<Eigen::MatrixXd> eta; // k components
    std::vector<Eigen::MatrixXd> xi;  // k components
};

// Coulomb gauge on the cylinder: the phase theta solves the Neumann
// problem Delta theta = d_s xi + d_t eta with zero boundary data and
// zero t-mean (one scalar solve per torus factor), and the triple
// transforms as
//
//     z   -> e^{-i A theta} z,
//     eta -> eta - d_t theta,
//     xi  -> xi - d_s theta,
//
// after which d_s xi + d_t eta vanishes up to the solver residual. The
// four residuals reported are the gauged first-order system evaluated
// with the same discrete operators: the Cauchy-Riemann-type equation,
// the curvature equation with (1-r^2) mean weighting, the Coulomb
// condition, and the largest |t-mean of xi|.
struct CoulombResult {
    CylinderTriple transformed;
    std::vector<Eigen::MatrixXd> theta; // k components of the gauge phase
    double residual_cauchy_riemann = 0.0;
    double residual_curvature = 0.0;
    double residual_coulomb = 0.0;
    double max_xi_mean = 0.0;
};

CoulombResult cylinder_coulomb(const TorusAction& action, const CylinderTriple& fields, double r,
                               const NeumannOptions& opts = {});

} // namespace vortex
