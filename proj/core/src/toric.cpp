#include "vortex/toric.hpp"

#include <algorithm>
#include <set>

#include <Eigen/Dense>

#include "vortex/errors.hpp"

namespace vortex {

namespace {

constexpr int kEnumerationCap = 20;

void check_shape(const Eigen::MatrixXi& weights, Eigen::Index tau_size) {
    if (weights.rows() < 1 || weights.cols() < 1) {
        throw DimensionMismatch("weight matrix must be nonempty");
    }
    if (weights.cols() > weights.rows()) {
        throw DimensionMismatch("torus rank k must satisfy k <= n");
    }
    if (tau_size != weights.cols()) {
        throw DimensionMismatch("tau must have k components");
    }
}

} // namespace

TorusAction TorusAction::create(Eigen::MatrixXi weights, Eigen::VectorXd tau) {
    check_shape(weights, tau.size());
    TorusAction a;
    a.weights = std::move(weights);
    a.tau = std::move(tau);
    return a;
}

TorusAction TorusAction::create_exact(Eigen::MatrixXi weights, RationalVector tau) {
    check_shape(weights, static_cast<Eigen::Index>(tau.size()));
    TorusAction a;
    a.weights = std::move(weights);
    a.tau.resize(static_cast<Eigen::Index>(tau.size()));
    for (std::size_t i = 0; i < tau.size(); ++i) a.tau(static_cast<Eigen::Index>(i)) = to_double(tau[i]);
    a.tau_exact = std::move(tau);
    return a;
}

std::string to_string(Regularity r) {
    switch (r) {
        case Regularity::Regular: return "Regular";
        case Regularity::IrregularZero: return "IrregularZero";
        case Regularity::IrregularCone: return "IrregularCone";
    }
    return "?";
}

Eigen::VectorXd moment_map(const TorusAction& action, const Eigen::VectorXcd& z) {
    if (z.size() != action.n()) throw DimensionMismatch("moment_map: z must have n components");
    const Eigen::VectorXd sq = z.cwiseAbs2();
    return 0.5 * action.weights.cast<double>().transpose() * sq;
}

Eigen::VectorXcd infinitesimal_action(const TorusAction& action, const Eigen::VectorXcd& z,
                                      const Eigen::VectorXd& v) {
    if (z.size() != action.n()) throw DimensionMismatch("infinitesimal_action: z must have n components");
    if (v.size() != action.k()) throw DimensionMismatch("infinitesimal_action: v must have k components");
    const Eigen::VectorXd av = action.weights.cast<double>() * v;
    Eigen::VectorXcd out(z.size());
    for (Eigen::Index j = 0; j < z.size(); ++j) out(j) = std::complex<double>(0.0, av(j)) * z(j);
    return out;
}

Eigen::VectorXd adjoint_infinitesimal(const TorusAction& action, const Eigen::VectorXcd& z,
                                      const Eigen::VectorXcd& w) {
    if (z.size() != action.n() || w.size() != action.n()) {
        throw DimensionMismatch("adjoint_infinitesimal: z, w must have n components");
    }
    Eigen::VectorXd im(z.size());
    for (Eigen::Index j = 0; j < z.size(); ++j) im(j) = std::imag(std::conj(z(j)) * w(j));
    return action.weights.cast<double>().transpose() * im;
}

bool is_proper(const TorusAction& action) {
    for (int r = 0; r < action.k(); ++r) {
        int sign = 0;
        for (int j = 0; j < action.n(); ++j) {
            const int a = action.weights(j, r);
            if (a == 0) continue;
            const int s = a > 0 ? 1 : -1;
            if (sign == 0) {
                sign = s;
            } else if (sign != s) {
                return false;
            }
        }
    }
    return true;
}

namespace {

// rows of A as rationals, restricted to a subset
RationalMatrix select_rows(const Eigen::MatrixXi& A, const std::vector<int>& rows) {
    RationalMatrix m(rows.size(), RationalVector(static_cast<std::size_t>(A.cols())));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (Eigen::Index c = 0; c < A.cols(); ++c) m[i][static_cast<std::size_t>(c)] = A(rows[i], c);
    }
    return m;
}

// the k x |S| system matrix whose columns are the selected rows of A
RationalMatrix system_for(const Eigen::MatrixXi& A, const std::vector<int>& rows) {
    RationalMatrix m(static_cast<std::size_t>(A.cols()), RationalVector(rows.size()));
    for (std::size_t c = 0; c < rows.size(); ++c) {
        for (Eigen::Index r = 0; r < A.cols(); ++r) m[static_cast<std::size_t>(r)][c] = A(rows[c], r);
    }
    return m;
}

void verify_witness(const Eigen::MatrixXi& A, const RationalVector& tau, const ConeWitness& w) {
    const int k = static_cast<int>(A.cols());
    if (w.rows.size() != w.coeffs.size()) throw std::logic_error("witness shape");
    for (const Rational& c : w.coeffs) {
        if (c < 0) throw std::logic_error("witness coefficient negative");
    }
    for (int r = 0; r < k; ++r) {
        Rational s = 0;
        for (std::size_t i = 0; i < w.rows.size(); ++i) {
            s += w.coeffs[i] * Rational(A(w.rows[i], r));
        }
        if (s != 2 * tau[static_cast<std::size_t>(r)]) throw std::logic_error("witness does not reproduce 2*tau");
    }
    if (rational_rank(select_rows(A, w.rows)) >= k) throw std::logic_error("witness rows not rank-deficient");
    if (w.rank_of_rows >= k) throw std::logic_error("witness rank field not below k");
}

// All maximal rank-deficient row subsets, as sorted index lists:
// the full set when rank(A) < k, otherwise the span-closures of
// independent (k-1)-subsets (deduplicated). A witness supported on any
// rank-deficient subset extends by zeros to the maximal subset
// containing its span, so checking these suffices.
std::vector<std::vector<int>> maximal_rank_deficient_subsets(const Eigen::MatrixXi& A) {
    const int n = static_cast<int>(A.rows());
    const int k = static_cast<int>(A.cols());

    std::vector<int> all(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
    if (rational_rank(select_rows(A, all)) < k) return {all};

    std::vector<std::vector<int>> out;
    std::set<std::uint32_t> seen;

    // enumerate all (k-1)-subsets of rows via lexicographic combinations
    const int m = k - 1;
    std::vector<int> idx(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) idx[static_cast<std::size_t>(i)] = i;
    const auto emit = [&](const std::vector<int>& base) {
        if (rational_rank(select_rows(A, base)) != static_cast<int>(base.size())) return; // not independent
        // closure: all rows inside the span of base
        std::vector<int> closure;
        std::uint32_t mask = 0;
        for (int row = 0; row < n; ++row) {
            std::vector<int> probe = base;
            probe.push_back(row);
            if (rational_rank(select_rows(A, probe)) == static_cast<int>(base.size())) {
                closure.push_back(row);
                mask |= (1u << row);
            }
        }
        if (closure.empty()) return;
        if (seen.insert(mask).second) out.push_back(std::move(closure));
    };

    if (m == 0) {
        emit({}); // k = 1: the closure of the empty span = zero rows
    } else {
        while (true) {
            emit(idx);
            int i = m - 1;
            while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - m + i) --i;
            if (i < 0) break;
            ++idx[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < m; ++j) {
                idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
            }
        }
    }
    return out;
}

} // namespace

RegularityVerdict classify_value(const TorusAction& action, const RationalVector& tau) {
    const int n = action.n();
    const int k = action.k();
    if (static_cast<int>(tau.size()) != k) throw DimensionMismatch("classify_value: tau must have k components");
    if (n > kEnumerationCap) {
        throw EnumerationCapExceeded("classify_value: n exceeds the enumeration cap (20)");
    }

    RegularityVerdict verdict;
    if (std::all_of(tau.begin(), tau.end(), [](const Rational& q) { return q == 0; })) {
        verdict.status = Regularity::IrregularZero;
        return verdict;
    }

    RationalVector two_tau(tau.size());
    for (std::size_t i = 0; i < tau.size(); ++i) two_tau[i] = 2 * tau[i];

    for (const auto& subset : maximal_rank_deficient_subsets(action.weights)) {
        auto w = solve_nonnegative(system_for(action.weights, subset), two_tau);
        if (!w) continue;
        ConeWitness witness;
        // drop zero coefficients: the support is the meaningful subset
        for (std::size_t i = 0; i < subset.size(); ++i) {
            if ((*w)[i] != 0) {
                witness.rows.push_back(subset[i]);
                witness.coeffs.push_back((*w)[i]);
            }
        }
        if (witness.rows.empty()) {
            // 2*tau = 0 is handled above; a zero combination cannot
            // reproduce a nonzero tau
            continue;
        }
        witness.rank_of_rows = rational_rank(select_rows(action.weights, witness.rows));
        verify_witness(action.weights, tau, witness);
        verdict.status = Regularity::IrregularCone;
        verdict.witness = std::move(witness);
        return verdict;
    }
    verdict.status = Regularity::Regular;
    return verdict;
}

RegularityVerdict classify_value_approx(const TorusAction& action, const Eigen::VectorXd& tau, double tol) {
    const int n = action.n();
    const int k = action.k();
    if (tau.size() != k) throw DimensionMismatch("classify_value_approx: tau must have k components");
    if (n > kEnumerationCap) {
        throw EnumerationCapExceeded("classify_value_approx: n exceeds the enumeration cap (20)");
    }

    RegularityVerdict verdict;
    verdict.approximate = true;
    if (tau.norm() <= tol) {
        verdict.status = Regularity::IrregularZero;
        return verdict;
    }

    const Eigen::MatrixXd A = action.weights.cast<double>();
    for (const auto& subset : maximal_rank_deficient_subsets(action.weights)) {
        Eigen::MatrixXd M(k, static_cast<Eigen::Index>(subset.size()));
        for (std::size_t c = 0; c < subset.size(); ++c) M.col(static_cast<Eigen::Index>(c)) = A.row(subset[c]).transpose();
        const Eigen::VectorXd w = nnls(M, 2.0 * tau);
        if ((M * w - 2.0 * tau).norm() > tol) continue;
        ConeWitness witness;
        for (std::size_t i = 0; i < subset.size(); ++i) {
            const double wi = w(static_cast<Eigen::Index>(i));
            if (wi > tol) {
                witness.rows.push_back(subset[i]);
                // rationalized only for reporting; the verdict stays flagged approximate
                witness.coeffs.push_back(Rational(wi));
            }
        }
        witness.rank_of_rows = rational_rank(select_rows(action.weights, subset));
        verdict.status = Regularity::IrregularCone;
        verdict.witness = std::move(witness);
        return verdict;
    }
    verdict.status = Regularity::Regular;
    return verdict;
}

RegularityVerdict classify_value(const TorusAction& action) {
    if (action.tau_exact) return classify_value(action, *action.tau_exact);
    return classify_value_approx(action, action.tau);
}

RegularityVerdict transfer_irregularity(const TorusAction& action_A, const TorusAction& action_B,
                                        const std::vector<int>& row_map, const RationalVector& scales,
                                        const RationalVector& tau, const RegularityVerdict& verdict_A) {
    const int nA = action_A.n();
    const int nB = action_B.n();
    const int k = action_A.k();
    if (action_B.k() != k) throw DimensionMismatch("transfer_irregularity: actions must share the torus rank");
    if (static_cast<int>(row_map.size()) != nA || static_cast<int>(scales.size()) != nA) {
        throw DimensionMismatch("transfer_irregularity: row_map and scales must cover the rows of A");
    }
    // precondition: a_l = lambda_l * b_{row_map(l)} exactly, lambda > 0
    for (int l = 0; l < nA; ++l) {
        const int j = row_map[static_cast<std::size_t>(l)];
        if (j < 0 || j >= nB) throw ProportionalityViolated("transfer_irregularity: row_map out of range");
        const Rational lambda = scales[static_cast<std::size_t>(l)];
        if (lambda <= 0) throw ProportionalityViolated("transfer_irregularity: scales must be positive");
        for (int r = 0; r < k; ++r) {
            if (Rational(action_A.weights(l, r)) != lambda * Rational(action_B.weights(j, r))) {
                throw ProportionalityViolated("transfer_irregularity: a_l != lambda_l * b_{row_map(l)}");
            }
        }
    }

    if (verdict_A.status == Regularity::Regular) {
        throw ValidationError("transfer_irregularity: verdict_A must be irregular");
    }
    RegularityVerdict out;
    out.approximate = verdict_A.approximate;
    if (verdict_A.status == Regularity::IrregularZero) {
        out.status = Regularity::IrregularZero;
        return out;
    }

    // aggregate: for each row j of B, w~_j = sum of lambda_l * w_l over
    // the witness rows l with row_map(l) = j
    const ConeWitness& win = *verdict_A.witness;
    RationalVector agg(static_cast<std::size_t>(nB), Rational(0));
    for (std::size_t i = 0; i < win.rows.size(); ++i) {
        const int l = win.rows[i];
        agg[static_cast<std::size_t>(row_map[static_cast<std::size_t>(l)])] +=
            scales[static_cast<std::size_t>(l)] * win.coeffs[i];
    }
    ConeWitness witness;
    for (int j = 0; j < nB; ++j) {
        if (agg[static_cast<std::size_t>(j)] != 0) {
            witness.rows.push_back(j);
            witness.coeffs.push_back(agg[static_cast<std::size_t>(j)]);
        }
    }
    RationalMatrix rows_B(witness.rows.size(), RationalVector(static_cast<std::size_t>(k)));
    for (std::size_t i = 0; i < witness.rows.size(); ++i) {
        for (int r = 0; r < k; ++r) rows_B[i][static_cast<std::size_t>(r)] = action_B.weights(witness.rows[i], r);
    }
    witness.rank_of_rows = rational_rank(rows_B);
    // the invariant is re-verified exactly before the verdict leaves
    {
        const int kB = action_B.k();
        for (int r = 0; r < kB; ++r) {
            Rational s = 0;
            for (std::size_t i = 0; i < witness.rows.size(); ++i) {
                s += witness.coeffs[i] * Rational(action_B.weights(witness.rows[i], r));
            }
            if (s != 2 * tau[static_cast<std::size_t>(r)]) {
                throw ProportionalityViolated("transfer_irregularity: aggregated witness fails 2*tau check");
            }
        }
        if (witness.rank_of_rows >= kB) {
            throw ProportionalityViolated("transfer_irregularity: aggregated witness rows not rank-deficient");
        }
    }
    out.status = Regularity::IrregularCone;
    out.witness = std::move(witness);
    return out;
}

} // namespace vortex
