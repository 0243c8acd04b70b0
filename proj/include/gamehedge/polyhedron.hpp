#pragma once

#include "gamehedge/lp.hpp"

#include <optional>
#include <vector>

namespace gamehedge {

/// V-representation: conv(vertices) + cone(rays) + span(lines).
struct Generators {
    std::vector<VectorQ> vertices;
    std::vector<VectorQ> rays;
    std::vector<VectorQ> lines;
};

class ConvexPolyhedron {
public:
    /// The whole space R^dim.
    explicit ConvexPolyhedron(Eigen::Index dim);
    ConvexPolyhedron(Eigen::Index dim, std::vector<Halfspace> inequalities,
                     std::vector<Hyperplane> equalities = {});

    static ConvexPolyhedron empty(Eigen::Index dim);
    /// V-rep only; call vrep_to_hrep or canonical before using H-rep queries.
    static ConvexPolyhedron from_generators(Eigen::Index dim, Generators g);
    /// Trusted: both representations already describe the same set irredundantly.
    static ConvexPolyhedron from_canonical(Eigen::Index dim, std::vector<Halfspace> inequalities,
                                           std::vector<Hyperplane> equalities, Generators g);

    Eigen::Index dim() const { return dim_; }
    bool has_hrep() const { return has_hrep_; }
    bool has_vrep() const { return vrep_.has_value(); }
    /// Both representations present and irredundant.
    bool is_canonical() const { return minimal_; }
    const std::vector<Halfspace>& inequalities() const { return ineqs_; }
    const std::vector<Hyperplane>& equalities() const { return eqs_; }
    const Generators& generators() const { return *vrep_; }

    /// Exact only once a V-rep is present (hrep_to_vrep); otherwise decided by LP.
    bool is_empty() const;
    bool contains(const VectorQ& x) const;

private:
    friend ConvexPolyhedron hrep_to_vrep(const ConvexPolyhedron&);
    friend ConvexPolyhedron vrep_to_hrep(const ConvexPolyhedron&);
    friend ConvexPolyhedron canonical(const ConvexPolyhedron&);

    Eigen::Index dim_;
    std::vector<Halfspace> ineqs_;
    std::vector<Hyperplane> eqs_;
    std::optional<Generators> vrep_;
    bool has_hrep_ = true;
    bool empty_ = false;
    bool minimal_ = false;
};

/// Cone generated by nonnegative combinations of `generators`.
struct PolyCone {
    Eigen::Index dim = 0;
    std::vector<VectorQ> generators;
    std::optional<std::vector<Halfspace>> hrep;
    /// Extreme rays and lineality basis, once known.
    std::optional<Generators> minimal;
};

/// Fills hrep and minimal.
PolyCone reduce_cone(PolyCone c);

/// Halfspaces through the origin describing the cone (minimal).
std::vector<Halfspace> cone_hrep(const PolyCone& c);
/// Extreme rays of {w : w . g >= 0 for every generator g}.
PolyCone polar(const PolyCone& c);
bool cone_contains(const PolyCone& c, const VectorQ& x);

ConvexPolyhedron hrep_to_vrep(const ConvexPolyhedron& p);
ConvexPolyhedron vrep_to_hrep(const ConvexPolyhedron& p);
/// Both representations present and minimal.
ConvexPolyhedron canonical(const ConvexPolyhedron& p);

ConvexPolyhedron intersect(const ConvexPolyhedron& p, const ConvexPolyhedron& q);
ConvexPolyhedron add_cone(const ConvexPolyhedron& p, const PolyCone& c);
ConvexPolyhedron minkowski_sum(const ConvexPolyhedron& p, const ConvexPolyhedron& q);
/// {x} + C
ConvexPolyhedron translate_cone(const VectorQ& x, const PolyCone& c);

/// inner is a subset of outer. Needs a V-rep of inner and an H-rep of outer.
bool includes(const ConvexPolyhedron& outer, const ConvexPolyhedron& inner);
bool same_set(const ConvexPolyhedron& p, const ConvexPolyhedron& q);

/// Rational or an infinite sentinel.
struct Extended {
    enum class Kind { finite, plus_infinity, minus_infinity };
    Kind kind = Kind::finite;
    Rational value = 0;

    static Extended plus_inf() { return {Kind::plus_infinity, 0}; }
    static Extended minus_inf() { return {Kind::minus_infinity, 0}; }
    bool finite() const { return kind == Kind::finite; }
};

std::string to_string(const Extended& e);

/// min {x : x e^i in P}
Extended min_coordinate(const ConvexPolyhedron& p, Eigen::Index i);

/// "a1 x1 + ... + ad xd >= b" per row; equalities use "=".
std::vector<std::string> format_hrep(const ConvexPolyhedron& p);

}  // namespace gamehedge
