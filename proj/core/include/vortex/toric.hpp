// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The vortex library authors

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "vortex/rational.hpp"

namespace vortex {

// A torus T^k acting on C^n through an integer weight matrix A (n rows,
// k columns; row j is the weight vector a_j of coordinate z_j):
//
//     rho(e^{iv}) z = e^{iAv} z.
//
// Lie-algebra convention, fixed once for the whole library: elements of
// t^k = i R^k are stored as real k-vectors (iv <-> v) with the standard
// Euclidean inner product. The moment map in this real representation is
//
//     mu(z) = (1/2) A^T (|z_1|^2, ..., |z_n|^2),
//
// and every sign below follows from rho(e^{iv}) z = e^{iAv} z. tau is a
// real k-vector in the same convention; when exactness matters it is
// carried alongside as a rational vector.
struct TorusAction {
    Eigen::MatrixXi weights;                    // n x k
    Eigen::VectorXd tau;                        // target level, real convention
    std::optional<RationalVector> tau_exact;    // set when tau was given as rationals

    int n() const { return static_cast<int>(weights.rows()); }
    int k() const { return static_cast<int>(weights.cols()); }

    // validated constructors (k <= n, dimensions consistent)
    static TorusAction create(Eigen::MatrixXi weights, Eigen::VectorXd tau);
    static TorusAction create_exact(Eigen::MatrixXi weights, RationalVector tau);
};

enum class Regularity { Regular, IrregularZero, IrregularCone };

std::string to_string(Regularity r);

// Certificate that tau is irregular through a rank-deficient row subset:
// sum_{l in rows} coeffs_l * a_l = 2*tau with coeffs >= 0 and
// rank{a_l} = rank_of_rows < k. Verified exactly before any verdict
// carrying one is returned.
struct ConeWitness {
    std::vector<int> rows;       // 0-based indices into the rows of A
    RationalVector coeffs;       // one nonnegative coefficient per listed row
    int rank_of_rows = 0;        // rank of the selected rows, < k
};

struct RegularityVerdict {
    Regularity status = Regularity::Regular;
    std::optional<ConeWitness> witness; // present iff status == IrregularCone
    // true when the verdict was produced by the floating-point fallback
    // (tolerance decisions instead of exact arithmetic)
    bool approximate = false;
};

// mu(z) = (1/2) A^T (|z_j|^2)
Eigen::VectorXd moment_map(const TorusAction& action, const Eigen::VectorXcd& z);

// L_z v, component j = i (A v)_j z_j
Eigen::VectorXcd infinitesimal_action(const TorusAction& action, const Eigen::VectorXcd& z,
                                      const Eigen::VectorXd& v);

// L_z^* w, component r = sum_j A_{jr} Im(conj(z_j) w_j); adjoint of L_z
// for the real inner product Re<., .> on C^n
Eigen::VectorXd adjoint_infinitesimal(const TorusAction& action, const Eigen::VectorXcd& z,
                                      const Eigen::VectorXcd& w);

// Properness of mu: every column of A has fixed sign on its nonzero
// entries. (Quantified per column; zero entries are ignored.)
bool is_proper(const TorusAction& action);

// Combinatorial regularity test, exact arithmetic. tau is irregular iff
// tau = 0 or 2*tau is a nonnegative combination of a rank-deficient set
// of rows of A. Enumeration is over maximal rank-deficient subsets: the
// full row set when rank(A) < k, otherwise the span-closures of
// independent (k-1)-subsets. n is capped at 20.
RegularityVerdict classify_value(const TorusAction& action, const RationalVector& tau);

// Floating-point fallback with the same enumeration; feasibility becomes
// "NNLS residual <= tol" and ranks come from singular values. The
// verdict is flagged approximate.
RegularityVerdict classify_value_approx(const TorusAction& action, const Eigen::VectorXd& tau,
                                        double tol = 1e-9);

// Dispatch: exact when the action carries tau_exact, fallback otherwise.
RegularityVerdict classify_value(const TorusAction& action);

// Irregularity transfer: if every row of A satisfies a_l = lambda_l *
// b_{row_map(l)} exactly (lambda_l > 0), a witness for (A, tau) is
// rebuilt into a witness for (B, tau) by aggregating lambda*w over the
// preimages of row_map. Throws ProportionalityViolated when the
// proportionality precondition fails.
RegularityVerdict transfer_irregularity(const TorusAction& action_A, const TorusAction& action_B,
                                        const std::vector<int>& row_map, const RationalVector& scales,
                                        const RationalVector& tau, const RegularityVerdict& verdict_A);

} // namespace vortex
