#pragma once

#include "gamehedge/linalg.hpp"

#include <optional>
#include <vector>

namespace gamehedge {

enum class LpStatus { optimal, infeasible, unbounded };

const char* to_string(LpStatus status);

template <typename Scalar>
struct StandardFormResult {
    LpStatus status = LpStatus::infeasible;
    VectorX<Scalar> solution;     // primal point, when optimal
    VectorX<Scalar> multipliers;  // y with A^T y <= c and b.y = value, when optimal
    VectorX<Scalar> ray;          // w >= 0, A w = 0, c.w < 0, when unbounded
    Scalar value = 0;
};

/// Two-phase tableau simplex for min c.w s.t. A w = b, w >= 0.
/// Bland's rule for both phases, so it terminates on degenerate problems.
template <typename Scalar>
StandardFormResult<Scalar> solve_standard_form(const MatrixX<Scalar>& A, const VectorX<Scalar>& b,
                                               const VectorX<Scalar>& c) {
    const Eigen::Index m = A.rows();
    const Eigen::Index n = A.cols();
    // Columns: [0, n) structural, [n, n+m) artificial, last column rhs.
    const Eigen::Index rhs = n + m;
    MatrixX<Scalar> T = MatrixX<Scalar>::Constant(m, n + m + 1, Scalar(0));
    std::vector<int> row_sign(static_cast<std::size_t>(m), 1);
    for (Eigen::Index i = 0; i < m; ++i) {
        int s = b(i) < 0 ? -1 : 1;
        row_sign[static_cast<std::size_t>(i)] = s;
        for (Eigen::Index j = 0; j < n; ++j) T(i, j) = s < 0 ? Scalar(-A(i, j)) : A(i, j);
        T(i, n + i) = 1;
        T(i, rhs) = s < 0 ? Scalar(-b(i)) : b(i);
    }
    std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;
    std::vector<bool> row_alive(static_cast<std::size_t>(m), true);

    auto pivot = [&](Eigen::Index r, Eigen::Index col) {
        const Scalar p = T(r, col);
        std::vector<Eigen::Index> nz;
        for (Eigen::Index j = 0; j <= rhs; ++j) {
            if (T(r, j) != 0) {
                T(r, j) /= p;
                nz.push_back(j);
            }
        }
        for (Eigen::Index i = 0; i < m; ++i) {
            if (i == r || T(i, col) == 0) continue;
            const Scalar f = T(i, col);
            for (Eigen::Index j : nz) T(i, j) -= f * T(r, j);
        }
        basis[static_cast<std::size_t>(r)] = col;
    };

    // Returns false when unbounded; `entering_limit` excludes artificial columns in phase 2.
    auto run = [&](const VectorX<Scalar>& cost, Eigen::Index entering_limit,
                   Eigen::Index& unbounded_col) {
        for (;;) {
            Eigen::Index enter = -1;
            for (Eigen::Index j = 0; j < entering_limit && enter < 0; ++j) {
                Scalar reduced = cost(j);
                for (Eigen::Index i = 0; i < m; ++i) {
                    if (!row_alive[static_cast<std::size_t>(i)] || T(i, j) == 0) continue;
                    reduced -= cost(basis[static_cast<std::size_t>(i)]) * T(i, j);
                }
                if (reduced < 0) enter = j;
            }
            if (enter < 0) return true;
            Eigen::Index leave = -1;
            Scalar best = 0;
            for (Eigen::Index i = 0; i < m; ++i) {
                if (!row_alive[static_cast<std::size_t>(i)] || T(i, enter) <= 0) continue;
                Scalar ratio = T(i, rhs) / T(i, enter);
                if (leave < 0 || ratio < best ||
                    (ratio == best && basis[static_cast<std::size_t>(i)] <
                                          basis[static_cast<std::size_t>(leave)])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave < 0) {
                unbounded_col = enter;
                return false;
            }
            pivot(leave, enter);
        }
    };

    StandardFormResult<Scalar> result;
    VectorX<Scalar> phase1 = VectorX<Scalar>::Constant(n + m, Scalar(0));
    for (Eigen::Index i = 0; i < m; ++i) phase1(n + i) = 1;
    Eigen::Index dummy = -1;
    run(phase1, n + m, dummy);
    Scalar infeasibility = 0;
    for (Eigen::Index i = 0; i < m; ++i)
        if (basis[static_cast<std::size_t>(i)] >= n) infeasibility += T(i, rhs);
    if (infeasibility > 0) {
        result.status = LpStatus::infeasible;
        return result;
    }
    // Drive remaining (zero-level) artificials out; rows with no structural entry are redundant.
    for (Eigen::Index i = 0; i < m; ++i) {
        if (basis[static_cast<std::size_t>(i)] < n) continue;
        Eigen::Index col = -1;
        for (Eigen::Index j = 0; j < n && col < 0; ++j)
            if (T(i, j) != 0) col = j;
        if (col >= 0)
            pivot(i, col);
        else
            row_alive[static_cast<std::size_t>(i)] = false;
    }

    VectorX<Scalar> phase2 = VectorX<Scalar>::Constant(n + m, Scalar(0));
    phase2.head(n) = c;
    Eigen::Index unbounded_col = -1;
    if (!run(phase2, n, unbounded_col)) {
        result.status = LpStatus::unbounded;
        result.ray = VectorX<Scalar>::Constant(n, Scalar(0));
        result.ray(unbounded_col) = 1;
        for (Eigen::Index i = 0; i < m; ++i) {
            if (!row_alive[static_cast<std::size_t>(i)]) continue;
            Eigen::Index bv = basis[static_cast<std::size_t>(i)];
            if (bv < n) result.ray(bv) = -T(i, unbounded_col);
        }
        return result;
    }

    result.status = LpStatus::optimal;
    result.solution = VectorX<Scalar>::Constant(n, Scalar(0));
    for (Eigen::Index i = 0; i < m; ++i) {
        if (!row_alive[static_cast<std::size_t>(i)]) continue;
        Eigen::Index bv = basis[static_cast<std::size_t>(i)];
        if (bv < n) result.solution(bv) = T(i, rhs);
    }
    result.value = 0;
    for (Eigen::Index j = 0; j < n; ++j)
        if (result.solution(j) != 0) result.value += c(j) * result.solution(j);
    // y = c_B B^{-1}; the artificial block of the tableau holds B^{-1} for the sign-adjusted rows.
    result.multipliers = VectorX<Scalar>::Constant(m, Scalar(0));
    for (Eigen::Index k = 0; k < m; ++k) {
        Scalar y = 0;
        for (Eigen::Index i = 0; i < m; ++i) {
            if (!row_alive[static_cast<std::size_t>(i)]) continue;
            Eigen::Index bv = basis[static_cast<std::size_t>(i)];
            if (bv < n && T(i, n + k) != 0) y += c(bv) * T(i, n + k);
        }
        result.multipliers(k) = row_sign[static_cast<std::size_t>(k)] < 0 ? Scalar(-y) : y;
    }
    return result;
}

}  // namespace gamehedge
