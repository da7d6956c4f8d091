// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The vortex library authors

#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>
#include <boost/multiprecision/cpp_int.hpp>

namespace vortex {

// Exact rational scalar used for all yes/no algebraic decisions.
using Rational = boost::multiprecision::cpp_rational;

using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>; // row-major

// Rank of a rational matrix by fraction-free Gaussian elimination.
int rational_rank(const RationalMatrix& m);

// Decides exact feasibility of  M w = b, w >= 0  (M is k x p) by a
// phase-1 simplex with Bland's rule (terminating, exact). Returns the
// feasible w on success.
std::optional<RationalVector> solve_nonnegative(const RationalMatrix& M, const RationalVector& b);

// Floating-point fallback for the same question: least-squares
// min ||M w - b|| over w >= 0 via Lawson–Hanson NNLS. Returns the
// minimizer; feasibility is then "residual <= tol" at the call site.
Eigen::VectorXd nnls(const Eigen::MatrixXd& M, const Eigen::VectorXd& b);

inline double to_double(const Rational& q) { return static_cast<double>(q); }

} // namespace vortex
