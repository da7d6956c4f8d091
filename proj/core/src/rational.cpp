#include "vortex/rational.hpp"

#include <Eigen/Dense>

#include <cstddef>

namespace vortex {

int rational_rank(const RationalMatrix& m) {
    if (m.empty()) return 0;
    RationalMatrix a = m;
    const std::size_t rows = a.size();
    const std::size_t cols = a[0].size();
    int rank = 0;
    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < cols && pivot_row < rows; ++col) {
        std::size_t sel = pivot_row;
        while (sel < rows && a[sel][col] == 0) ++sel;
        if (sel == rows) continue;
        std::swap(a[sel], a[pivot_row]);
        const Rational inv = Rational(1) / a[pivot_row][col];
        for (std::size_t j = col; j < cols; ++j) a[pivot_row][j] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == pivot_row || a[i][col] == 0) continue;
            const Rational f = a[i][col];
            for (std::size_t j = col; j < cols; ++j) a[i][j] -= f * a[pivot_row][j];
        }
        ++pivot_row;
        ++rank;
    }
    return rank;
}

std::optional<RationalVector> solve_nonnegative(const RationalMatrix& M, const RationalVector& b) {
    const std::size_t k = b.size();
    const std::size_t p = M.empty() ? 0 : M[0].size();

    // tableau with artificial basis: rows k, columns p (original) + k
    // (artificials) + 1 (rhs); phase-1 minimizes the artificial sum.
    RationalMatrix tab(k, RationalVector(p + k + 1, Rational(0)));
    std::vector<std::size_t> basis(k);
    for (std::size_t i = 0; i < k; ++i) {
        const bool flip = b[i] < 0;
        for (std::size_t j = 0; j < p; ++j) tab[i][j] = flip ? -M[i][j] : M[i][j];
        tab[i][p + i] = 1;
        tab[i][p + k] = flip ? -b[i] : b[i];
        basis[i] = p + i;
    }

    // objective row (reduced costs): cost 1 on artificials, canonical
    // form obtained by folding in the all-artificial starting basis
    RationalVector cost(p + k + 1, Rational(0));
    for (std::size_t j = p; j < p + k; ++j) cost[j] = 1;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j <= p + k; ++j) cost[j] -= tab[i][j];
    }

    const auto pivot = [&](std::size_t row, std::size_t col) {
        const Rational inv = Rational(1) / tab[row][col];
        for (std::size_t j = 0; j <= p + k; ++j) tab[row][j] *= inv;
        for (std::size_t i = 0; i < k; ++i) {
            if (i == row || tab[i][col] == 0) continue;
            const Rational f = tab[i][col];
            for (std::size_t j = 0; j <= p + k; ++j) tab[i][j] -= f * tab[row][j];
        }
        if (cost[col] != 0) {
            const Rational f = cost[col];
            for (std::size_t j = 0; j <= p + k; ++j) cost[j] -= f * tab[row][j];
        }
        basis[row] = col;
    };

    while (true) {
        // Bland's rule: entering column = smallest index with negative
        // reduced cost (guarantees termination in exact arithmetic)
        std::size_t enter = p + k;
        for (std::size_t j = 0; j < p + k; ++j) {
            if (cost[j] < 0) {
                enter = j;
                break;
            }
        }
        if (enter == p + k) break; // optimal
        std::size_t leave = k;
        Rational best;
        for (std::size_t i = 0; i < k; ++i) {
            if (tab[i][enter] <= 0) continue;
            const Rational ratio = tab[i][p + k] / tab[i][enter];
            if (leave == k || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                best = ratio;
                leave = i;
            }
        }
        if (leave == k) break; // unbounded phase-1 cannot happen; defensive
        pivot(leave, enter);
    }

    // objective value = -cost[rhs]
    if (-cost[p + k] != 0) return std::nullopt; // infeasible

    RationalVector w(p, Rational(0));
    for (std::size_t i = 0; i < k; ++i) {
        if (basis[i] < p) {
            w[basis[i]] = tab[i][p + k];
        } else if (tab[i][p + k] != 0) {
            // degenerate artificial stuck in the basis with nonzero
            // value would contradict objective 0; defensive
            return std::nullopt;
        }
    }
    return w;
}

Eigen::VectorXd nnls(const Eigen::MatrixXd& M, const Eigen::VectorXd& b) {
    // Lawson–Hanson active-set NNLS.
    const Eigen::Index p = M.cols();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(p);
    std::vector<bool> passive(static_cast<std::size_t>(p), false);
    Eigen::VectorXd w = M.transpose() * (b - M * x);
    const double tol = 1e-12 * (1.0 + b.norm()) * (1.0 + M.norm());

    for (int outer = 0; outer < 30 * static_cast<int>(p) + 30; ++outer) {
        // find the most violated inactive constraint
        Eigen::Index t = -1;
        double best = tol;
        for (Eigen::Index j = 0; j < p; ++j) {
            if (!passive[static_cast<std::size_t>(j)] && w(j) > best) {
                best = w(j);
                t = j;
            }
        }
        if (t < 0) break; // KKT satisfied
        passive[static_cast<std::size_t>(t)] = true;

        for (int inner = 0; inner < 30 * static_cast<int>(p) + 30; ++inner) {
            // least squares on the passive set
            std::vector<Eigen::Index> idx;
            for (Eigen::Index j = 0; j < p; ++j) {
                if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
            }
            Eigen::MatrixXd Mp(M.rows(), static_cast<Eigen::Index>(idx.size()));
            for (std::size_t c = 0; c < idx.size(); ++c) Mp.col(static_cast<Eigen::Index>(c)) = M.col(idx[c]);
            const Eigen::VectorXd zp = Mp.colPivHouseholderQr().solve(b);

            bool all_positive = true;
            for (std::size_t c = 0; c < idx.size(); ++c) {
                if (zp(static_cast<Eigen::Index>(c)) <= tol) {
                    all_positive = false;
                    break;
                }
            }
            if (all_positive) {
                x.setZero();
                for (std::size_t c = 0; c < idx.size(); ++c) x(idx[c]) = zp(static_cast<Eigen::Index>(c));
                break;
            }
            // step toward zp until the first coordinate hits zero
            double alpha = 1.0;
            for (std::size_t c = 0; c < idx.size(); ++c) {
                const double zj = zp(static_cast<Eigen::Index>(c));
                const double xj = x(idx[c]);
                if (zj <= tol && xj != zj) alpha = std::min(alpha, xj / (xj - zj));
            }
            for (std::size_t c = 0; c < idx.size(); ++c) {
                const Eigen::Index j = idx[c];
                x(j) += alpha * (zp(static_cast<Eigen::Index>(c)) - x(j));
                if (x(j) <= tol) {
                    x(j) = 0.0;
                    passive[static_cast<std::size_t>(j)] = false;
                }
            }
        }
        w = M.transpose() * (b - M * x);
    }
    return x;
}

} // namespace vortex
