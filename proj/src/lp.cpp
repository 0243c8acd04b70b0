#include "gamehedge/lp.hpp"

#include <stdexcept>

namespace gamehedge {

const char* to_string(LpStatus status) {
    switch (status) {
        case LpStatus::optimal: return "optimal";
        case LpStatus::infeasible: return "infeasible";
        case LpStatus::unbounded: return "unbounded";
    }
    return "unknown";
}

namespace {

Eigen::Index dimension_of(const LinearProgram& lp) {
    Eigen::Index n = lp.objective.size();
    for (const auto& h : lp.inequalities)
        if (h.normal.size() != n) throw std::invalid_argument("lp: dimension mismatch");
    for (const auto& h : lp.equalities)
        if (h.normal.size() != n) throw std::invalid_argument("lp: dimension mismatch");
    return n;
}

// x = x+ - x-, G x - s = h, E x = f, plus optional extra equality row `extra . x == extra_rhs`.
StandardFormResult<Rational> primal_feasibility(const std::vector<Halfspace>& G,
                                                const std::vector<Hyperplane>& E,
                                                Eigen::Index n, bool homogeneous,
                                                const VectorQ* extra, const Rational& extra_rhs) {
    const Eigen::Index m1 = static_cast<Eigen::Index>(G.size());
    const Eigen::Index m2 = static_cast<Eigen::Index>(E.size());
    const Eigen::Index rows = m1 + m2 + (extra ? 1 : 0);
    const Eigen::Index cols = 2 * n + m1;
    MatrixQ A = MatrixQ::Constant(rows, cols, Rational(0));
    VectorQ b = zeros(rows);
    for (Eigen::Index i = 0; i < m1; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            A(i, j) = G[static_cast<std::size_t>(i)].normal(j);
            A(i, n + j) = -G[static_cast<std::size_t>(i)].normal(j);
        }
        A(i, 2 * n + i) = -1;
        b(i) = homogeneous ? Rational(0) : G[static_cast<std::size_t>(i)].offset;
    }
    for (Eigen::Index i = 0; i < m2; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            A(m1 + i, j) = E[static_cast<std::size_t>(i)].normal(j);
            A(m1 + i, n + j) = -E[static_cast<std::size_t>(i)].normal(j);
        }
        b(m1 + i) = homogeneous ? Rational(0) : E[static_cast<std::size_t>(i)].offset;
    }
    if (extra) {
        for (Eigen::Index j = 0; j < n; ++j) {
            A(rows - 1, j) = (*extra)(j);
            A(rows - 1, n + j) = -(*extra)(j);
        }
        b(rows - 1) = extra_rhs;
    }
    return solve_standard_form<Rational>(A, b, zeros(cols));
}

VectorQ split_to_free(const VectorQ& w, Eigen::Index n) {
    VectorQ x(n);
    for (Eigen::Index j = 0; j < n; ++j) x(j) = w(j) - w(n + j);
    return x;
}

// u >= 0, v free: G^T u + E^T v = 0, h.u + f.v = 1.
VectorQ farkas_certificate(const LinearProgram& lp, Eigen::Index n) {
    const Eigen::Index m1 = static_cast<Eigen::Index>(lp.inequalities.size());
    const Eigen::Index m2 = static_cast<Eigen::Index>(lp.equalities.size());
    MatrixQ A = MatrixQ::Constant(n + 1, m1 + 2 * m2, Rational(0));
    VectorQ b = zeros(n + 1);
    for (Eigen::Index k = 0; k < m1; ++k) {
        const auto& h = lp.inequalities[static_cast<std::size_t>(k)];
        for (Eigen::Index j = 0; j < n; ++j) A(j, k) = h.normal(j);
        A(n, k) = h.offset;
    }
    for (Eigen::Index k = 0; k < m2; ++k) {
        const auto& e = lp.equalities[static_cast<std::size_t>(k)];
        for (Eigen::Index j = 0; j < n; ++j) {
            A(j, m1 + k) = e.normal(j);
            A(j, m1 + m2 + k) = -e.normal(j);
        }
        A(n, m1 + k) = e.offset;
        A(n, m1 + m2 + k) = -e.offset;
    }
    b(n) = 1;
    auto r = solve_standard_form<Rational>(A, b, zeros(m1 + 2 * m2));
    VectorQ cert = zeros(m1 + m2);
    if (r.status != LpStatus::optimal) return cert;
    for (Eigen::Index k = 0; k < m1; ++k) cert(k) = r.solution(k);
    for (Eigen::Index k = 0; k < m2; ++k) cert(m1 + k) = r.solution(m1 + k) - r.solution(m1 + m2 + k);
    return cert;
}

}  // namespace

// Solved through its dual, which is in standard form with one row per primal variable:
// max h.u + f.v  s.t.  G^T u + E^T v = c, u >= 0.  Primal x is minus the dual's multipliers.
LpResult lp_solve(const LinearProgram& lp) {
    const Eigen::Index n = dimension_of(lp);
    const Eigen::Index m1 = static_cast<Eigen::Index>(lp.inequalities.size());
    const Eigen::Index m2 = static_cast<Eigen::Index>(lp.equalities.size());
    MatrixQ A = MatrixQ::Constant(n, m1 + 2 * m2, Rational(0));
    VectorQ cost = zeros(m1 + 2 * m2);
    for (Eigen::Index k = 0; k < m1; ++k) {
        const auto& h = lp.inequalities[static_cast<std::size_t>(k)];
        for (Eigen::Index j = 0; j < n; ++j) A(j, k) = h.normal(j);
        cost(k) = -h.offset;
    }
    for (Eigen::Index k = 0; k < m2; ++k) {
        const auto& e = lp.equalities[static_cast<std::size_t>(k)];
        for (Eigen::Index j = 0; j < n; ++j) {
            A(j, m1 + k) = e.normal(j);
            A(j, m1 + m2 + k) = -e.normal(j);
        }
        cost(m1 + k) = -e.offset;
        cost(m1 + m2 + k) = e.offset;
    }
    auto dual = solve_standard_form<Rational>(A, lp.objective, cost);

    LpResult result;
    if (dual.status == LpStatus::optimal) {
        result.status = LpStatus::optimal;
        result.point = -dual.multipliers;
        result.value = dot(lp.objective, result.point);
        return result;
    }
    if (dual.status == LpStatus::unbounded) {
        result.status = LpStatus::infeasible;
        result.certificate = farkas_certificate(lp, n);
        return result;
    }
    // Dual infeasible: primal is unbounded if it is feasible at all.
    auto feas = primal_feasibility(lp.inequalities, lp.equalities, n, false, nullptr, 0);
    if (feas.status != LpStatus::optimal) {
        result.status = LpStatus::infeasible;
        result.certificate = farkas_certificate(lp, n);
        return result;
    }
    result.status = LpStatus::unbounded;
    result.point = split_to_free(feas.solution, n);
    auto ray = primal_feasibility(lp.inequalities, lp.equalities, n, true, &lp.objective, -1);
    if (ray.status == LpStatus::optimal) result.certificate = split_to_free(ray.solution, n);
    return result;
}

bool lp_feasible(const std::vector<Halfspace>& inequalities,
                 const std::vector<Hyperplane>& equalities, Eigen::Index dim) {
    LinearProgram lp{zeros(dim), inequalities, equalities};
    dimension_of(lp);
    return primal_feasibility(inequalities, equalities, dim, false, nullptr, 0).status ==
           LpStatus::optimal;
}

}  // namespace gamehedge
