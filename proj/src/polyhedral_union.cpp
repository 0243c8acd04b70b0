#include "gamehedge/polyhedral_union.hpp"

namespace gamehedge {

namespace {

Eigen::Index affine_dim(const ConvexPolyhedron& p) {
    return p.dim() - static_cast<Eigen::Index>(p.equalities().size());
}

// Some point of p has a.x < b.
bool dips_below(const ConvexPolyhedron& p, const VectorQ& a, const Rational& b) {
    const Generators& g = p.generators();
    for (const auto& v : g.vertices)
        if (dot(a, v) < b) return true;
    for (const auto& r : g.rays)
        if (dot(a, r) < 0) return true;
    for (const auto& l : g.lines)
        if (dot(a, l) != 0) return true;
    return false;
}

}  // namespace

PieceCapExceeded::PieceCapExceeded(std::size_t pieces_, std::size_t cap_)
    : std::runtime_error("union has " + std::to_string(pieces_) + " pieces, cap is " +
                         std::to_string(cap_)),
      pieces(pieces_),
      cap(cap_) {}

PolyhedralUnion PolyhedralUnion::of(ConvexPolyhedron p) {
    PolyhedralUnion u{p.dim(), {}};
    u.pieces.push_back(std::move(p));
    return u;
}

PolyhedralUnion prune(PolyhedralUnion u, std::size_t cap) {
    std::vector<ConvexPolyhedron> ps;
    for (auto& p : u.pieces) {
        ConvexPolyhedron c = canonical(p);
        if (!c.is_empty()) ps.push_back(std::move(c));
    }
    std::vector<bool> removed(ps.size(), false);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        for (std::size_t j = 0; j < ps.size() && !removed[i]; ++j) {
            if (j == i || removed[j]) continue;
            if (includes(ps[j], ps[i]) && (j < i || !includes(ps[i], ps[j]))) removed[i] = true;
        }
    }
    PolyhedralUnion out{u.dim, {}};
    for (std::size_t i = 0; i < ps.size(); ++i)
        if (!removed[i]) out.pieces.push_back(std::move(ps[i]));
    if (out.pieces.size() > cap) throw PieceCapExceeded(out.pieces.size(), cap);
    return out;
}

PolyhedralUnion union_intersect(const PolyhedralUnion& u, const PolyhedralUnion& v,
                                std::size_t cap) {
    if (u.dim != v.dim) throw std::invalid_argument("union_intersect: dimension mismatch");
    PolyhedralUnion out{u.dim, {}};
    for (const auto& p : u.pieces)
        for (const auto& q : v.pieces) out.pieces.push_back(intersect(p, q));
    return prune(std::move(out), cap);
}

PolyhedralUnion union_intersect(const PolyhedralUnion& u, const ConvexPolyhedron& p,
                                std::size_t cap) {
    return union_intersect(u, PolyhedralUnion::of(p), cap);
}

PolyhedralUnion union_union(const PolyhedralUnion& u, const PolyhedralUnion& v, std::size_t cap) {
    if (u.dim != v.dim) throw std::invalid_argument("union_union: dimension mismatch");
    PolyhedralUnion out = u;
    out.pieces.insert(out.pieces.end(), v.pieces.begin(), v.pieces.end());
    return prune(std::move(out), cap);
}

PolyhedralUnion union_add_cone(const PolyhedralUnion& u, const PolyCone& c, std::size_t cap) {
    PolyhedralUnion out{u.dim, {}};
    for (const auto& p : u.pieces) out.pieces.push_back(add_cone(p, c));
    return prune(std::move(out), cap);
}

bool contains(const PolyhedralUnion& u, const VectorQ& x) {
    for (const auto& p : u.pieces)
        if (p.contains(x)) return true;
    return false;
}

Extended min_coordinate(const PolyhedralUnion& u, Eigen::Index i) {
    Extended best = Extended::plus_inf();
    for (const auto& p : u.pieces) {
        Extended e = min_coordinate(p, i);
        if (e.kind == Extended::Kind::minus_infinity) return e;
        if (e.finite() && (!best.finite() || e.value < best.value)) best = e;
    }
    return best;
}

bool covered(const ConvexPolyhedron& p, const std::vector<ConvexPolyhedron>& qs) {
    ConvexPolyhedron base = canonical(p);
    if (base.is_empty()) return true;
    const Eigen::Index full = affine_dim(base);

    // Full-dimensional (relative to p) cells of p not yet known to be covered.
    std::vector<ConvexPolyhedron> open{base};
    for (const auto& q0 : qs) {
        const ConvexPolyhedron q = canonical(q0);
        if (q.is_empty()) continue;
        std::vector<ConvexPolyhedron> next;
        for (const auto& r : open) {
            if (includes(q, r)) continue;
            const ConvexPolyhedron meet = intersect(r, q);
            if (meet.is_empty() || affine_dim(meet) < full) {
                next.push_back(r);
                continue;
            }
            std::vector<Halfspace> prior;
            for (const auto& h : q.inequalities()) {
                std::vector<Halfspace> rows = prior;
                rows.push_back({-h.normal, -h.offset});
                ConvexPolyhedron cell = intersect(r, ConvexPolyhedron(r.dim(), rows));
                if (!cell.is_empty() && affine_dim(cell) == full &&
                    dips_below(cell, h.normal, h.offset))
                    next.push_back(std::move(cell));
                prior.push_back(h);
            }
        }
        open = std::move(next);
        if (open.empty()) return true;
    }
    return open.empty();
}

bool same_set(const PolyhedralUnion& u, const PolyhedralUnion& v) {
    for (const auto& p : u.pieces)
        if (!covered(p, v.pieces)) return false;
    for (const auto& q : v.pieces)
        if (!covered(q, u.pieces)) return false;
    return true;
}

}  // namespace gamehedge
