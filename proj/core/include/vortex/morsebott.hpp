// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The vortex library authors

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "vortex/approx.hpp"

namespace vortex {

// Hessian of the Lagrange-multiplier functional F_0(x, eta) =
// <eta, h(x)> at a critical point (x, 0) with h(x) = mu_V(x) - tau = 0:
// the symmetric (2N+k) x (2N+k) block matrix
//
//     [ 0        dh(x)^T ]
//     [ dh(x)    0       ]
//
// in real coordinates (Re c_0, Im c_0, ..., eta). Its nonzero
// eigenvalues are exactly +/- the singular values of dh(x), so at a
// regular point the rank is 2k with k negative directions: the critical
// manifold h^{-1}(0) x {0} is nondegenerate in the normal directions
// and its negative bundle has the same rank as the normal bundle of
// h^{-1}(0).
Eigen::MatrixXd hessian_F0(const ApproxSpace& space, const Eigen::VectorXcd& x);

// The two independent ways of extracting the normal spectrum at a
// sample: a full eigendecomposition of hessian_F0, or a singular value
// decomposition of the constraint Jacobian alone. They must produce the
// same descriptor.
enum class ConleyPipeline { HessianEigen, JacobianSVD };

// Conley-index descriptor of the critical set C = h^{-1}(0) x {0}: the
// invariant is the Thom space of the rank-k negative bundle over C, and
// the descriptor records the dimensions that determine it together with
// the sampled nondegeneracy evidence.
struct ConleyReport {
    int N = 0;                 // complex dimension of the mode space
    int k = 0;                 // torus rank
    int critical_dim = 0;      // real dimension of C, 2N - k
    int normal_rank = 0;       // rank of the normal bundle, k
    int negative_rank = 0;     // rank of the negative bundle, k
    bool morse_bott_verified = false;
    int samples = 0;
    double min_nonzero_eig = 0.0;  // smallest nonzero |eigenvalue| seen
    double max_kernel_eig = 0.0;   // largest |eigenvalue| among the 2N-k kernel ones

    // the discrete invariant (dimensions, ranks, verification flag);
    // the floating-point diagnostics are excluded on purpose
    bool same_descriptor(const ConleyReport& other) const {
        return N == other.N && k == other.k && critical_dim == other.critical_dim &&
               normal_rank == other.normal_rank && negative_rank == other.negative_rank &&
               morse_bott_verified == other.morse_bott_verified;
    }
};

// Samples the level set and verifies the Morse-Bott structure at every
// sample: rank 2k, spectrum symmetric about zero, exactly k eigenvalues
// on each side above magnitude 1e-8, kernel eigenvalues below 1e-10.
// Requires tau regular for the induced action.
ConleyReport conley_report(const ApproxSpace& space,
                           ConleyPipeline pipeline = ConleyPipeline::HessianEigen,
                           int samples = 50, std::uint64_t seed = 1, int threads = 1);

// Constants of the tameness estimate for the family
// F_r(x, eta) = r f(x) + <eta, h(x)>, r in [0, 1]: outside
// K = {|h(x)| <= epsilon, |eta| <= lambda_bound} the gradient norm
// stays above epsilon, because the eta-part of the gradient is h(x)
// itself (regime |h| > epsilon) and the x-part dominates
// delta |eta| - c when eta is large (regime |h| <= epsilon).
struct TameConstants {
    double epsilon = 0.0;       // radius of the regular-value ball around tau
    double delta = 0.0;         // min singular value of dh over h^{-1}(B_eps), estimated
    double c = 0.0;             // max |grad f| over h^{-1}(B_eps), estimated
    double lambda_bound = 0.0;  // (c + epsilon) / delta
    int epsilon_directions = 0; // sphere directions checked per candidate radius
    int sample_count = 0;
    std::uint64_t seed = 0;
};

struct TameOptions {
    std::vector<double> epsilon_grid; // candidate radii; largest passing one wins
    int sample_count = 120;
    std::uint64_t seed = 1;
    int threads = 1;
};

// epsilon: largest grid radius whose sphere of rational directions
// consists of regular values (exact test per direction; a heuristic for
// ball regularity, recorded as such). delta and c: multi-start
// projected extremization over the shell h^{-1}(B_eps) seeded from
// level-set samples. All three are sampling estimates, not certified
// bounds.
TameConstants tame_constants(const ApproxSpace& space, const TameOptions& opts);

struct PalaisSmaleReport {
    double min_margin = 0.0;          // min over samples and r of |grad F_r| - epsilon
    double min_margin_outside_shell = 0.0; // regime |h(x)| > epsilon
    double min_margin_large_lambda = 0.0;  // regime x in shell, |eta| = 1.25 lambda_bound
    int samples_outside_shell = 0;
    int samples_large_lambda = 0;
    bool all_positive = false;
};

// Samples both exterior regimes of K and checks |grad F_r| > epsilon
// for every r in r_grid, reporting the worst margin.
PalaisSmaleReport verify_palais_smale(const ApproxSpace& space, const TameConstants& constants,
                                      const std::vector<double>& r_grid, int sample_count,
                                      std::uint64_t seed, int threads = 1);

} // namespace vortex
