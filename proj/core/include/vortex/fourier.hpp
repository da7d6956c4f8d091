// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The vortex library authors

#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

namespace vortex {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Closed integer interval of Fourier modes [lo, hi].
struct Band {
    int lo = 0;
    int hi = 0;

    int size() const { return hi - lo + 1; }
    bool contains(int m) const { return m >= lo && m <= hi; }
};

// A loop in C^n stored as banded Fourier coefficients,
//
//     z_j(t) = sum_{m = lo_j}^{hi_j} c_{jm} e^{2 pi i m t},    t in [0, 1),
//
// together with the uniform grid size T used for sample-space work.
// T is a power of two and satisfies the Nyquist margin T > 2 max|m|,
// which makes trapezoid quadrature exact on products of two loops from
// the band (their product has modes of magnitude < T).
class FourierLoop {
  public:
    FourierLoop() = default;

    static FourierLoop zero(std::vector<Band> bands, int grid_size);

    int n() const { return static_cast<int>(bands_.size()); }
    int grid_size() const { return grid_size_; }
    const std::vector<Band>& bands() const { return bands_; }
    const Band& band(int j) const { return bands_[static_cast<std::size_t>(j)]; }

    const Eigen::VectorXcd& coeffs(int j) const { return coeffs_[static_cast<std::size_t>(j)]; }
    Eigen::VectorXcd& coeffs(int j) { return coeffs_[static_cast<std::size_t>(j)]; }

    std::complex<double> coeff(int j, int m) const;
    void set_coeff(int j, int m, std::complex<double> v);

    // synthesis on the uniform grid t_p = p/T; rows are coordinates
    Eigen::MatrixXcd samples() const;

    // analysis by the discrete Fourier sum (exact for data band-limited
    // to the target bands)
    static FourierLoop from_samples(const Eigen::MatrixXcd& samples, std::vector<Band> bands);

    // mode-wise d/dt (multiplication by 2 pi i m)
    FourierLoop derivative() const;

    // integral of |z(t)|^2 dt = sum of |c|^2 (Parseval)
    double norm_l2_sq() const;

    int max_abs_mode() const;

    // total number of complex coefficients
    int coeff_count() const;

  private:
    std::vector<Band> bands_;
    std::vector<Eigen::VectorXcd> coeffs_;
    int grid_size_ = 0;
};

// grid size chosen for a band set: a power of two with margin enough to
// make quadrature of quartic expressions (|z|^2 products) exact
int choose_grid_size(const std::vector<Band>& bands, int minimum = 16);

// --- spectral helpers for real k-vector loops sampled on the uniform ---
// --- grid (rows = components, columns = samples) ---

// mean over t per component
Eigen::VectorXd loop_mean(const Eigen::MatrixXd& samples);

// spectral d/dt (the Nyquist mode is dropped, standard for real data)
Eigen::MatrixXd loop_derivative(const Eigen::MatrixXd& samples);

// the unique mean-zero periodic antiderivative of a mean-zero input
// (mode-wise division by 2 pi i m); throws NonMeanZeroData beyond tol
Eigen::MatrixXd loop_antiderivative(const Eigen::MatrixXd& samples, double mean_tol = 1e-9);

// trapezoid quadrature of sum_r u_r(t) v_r(t) dt on the uniform grid
double loop_inner(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v);

} // namespace vortex
