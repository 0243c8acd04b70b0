#pragma once

#include "gamehedge/polyhedron.hpp"

#include <stdexcept>

namespace gamehedge {

inline constexpr std::size_t default_piece_cap = 512;

class PieceCapExceeded : public std::runtime_error {
public:
    PieceCapExceeded(std::size_t pieces, std::size_t cap);
    std::size_t pieces;
    std::size_t cap;
};

/// Finite union of convex pieces; no pieces means the empty set.
struct PolyhedralUnion {
    Eigen::Index dim = 0;
    std::vector<ConvexPolyhedron> pieces;

    static PolyhedralUnion of(ConvexPolyhedron p);
    bool empty() const { return pieces.empty(); }
};

/// Drops empty pieces and pieces inside another single piece; keeps construction order.
PolyhedralUnion prune(PolyhedralUnion u, std::size_t cap = default_piece_cap);

PolyhedralUnion union_intersect(const PolyhedralUnion& u, const PolyhedralUnion& v,
                                std::size_t cap = default_piece_cap);
PolyhedralUnion union_union(const PolyhedralUnion& u, const PolyhedralUnion& v,
                            std::size_t cap = default_piece_cap);
PolyhedralUnion union_intersect(const PolyhedralUnion& u, const ConvexPolyhedron& p,
                                std::size_t cap = default_piece_cap);
PolyhedralUnion union_add_cone(const PolyhedralUnion& u, const PolyCone& c,
                               std::size_t cap = default_piece_cap);

bool contains(const PolyhedralUnion& u, const VectorQ& x);
Extended min_coordinate(const PolyhedralUnion& u, Eigen::Index i);

/// Exact: p lies inside the union of qs (not only inside a single one).
bool covered(const ConvexPolyhedron& p, const std::vector<ConvexPolyhedron>& qs);
bool same_set(const PolyhedralUnion& u, const PolyhedralUnion& v);

}  // namespace gamehedge
