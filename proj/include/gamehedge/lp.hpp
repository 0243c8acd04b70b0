#pragma once

#include "gamehedge/linalg.hpp"
#include "gamehedge/simplex.hpp"

#include <vector>

namespace gamehedge {

/// {x : normal . x >= offset}
struct Halfspace {
    VectorQ normal;
    Rational offset;

    bool contains(const VectorQ& x) const { return dot(normal, x) >= offset; }
    Rational slack(const VectorQ& x) const { return dot(normal, x) - offset; }
};

/// {x : normal . x == offset}
struct Hyperplane {
    VectorQ normal;
    Rational offset;

    bool contains(const VectorQ& x) const { return dot(normal, x) == offset; }
};

/// min objective . x over free x subject to inequality and equality rows.
struct LinearProgram {
    VectorQ objective;
    std::vector<Halfspace> inequalities;
    std::vector<Hyperplane> equalities;
};

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    VectorQ point;
    Rational value = 0;
    /// infeasible: Farkas multipliers (u >= 0 for inequalities, then v for equalities) with
    /// G^T u + E^T v = 0 and h.u + f.v = 1.  unbounded: direction d with c.d = -1.
    VectorQ certificate;
};

LpResult lp_solve(const LinearProgram& lp);

/// Feasibility only; cheaper than a full solve when the objective is irrelevant.
bool lp_feasible(const std::vector<Halfspace>& inequalities,
                 const std::vector<Hyperplane>& equalities, Eigen::Index dim);

}  // namespace gamehedge
