#pragma once

#include "gamehedge/linalg.hpp"

#include <vector>

namespace gamehedge {

/// Minimal generators of a polyhedral cone: the cone equals span(lines) + cone(rays),
/// and the rays are extreme modulo the lineality space.
struct ConeGenerators {
    std::vector<VectorZ> rays;
    std::vector<VectorZ> lines;
};

/// Double description for {r in Z^dim : A r >= 0, E r = 0}, with integer rows.
/// Rays come back primitive (coprime entries).
ConeGenerators enumerate_cone(const std::vector<VectorZ>& inequalities,
                              const std::vector<VectorZ>& equalities, Eigen::Index dim);

}  // namespace gamehedge
