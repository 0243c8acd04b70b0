#include "gamehedge/polyhedron.hpp"

#include "gamehedge/double_description.hpp"

#include <stdexcept>

namespace gamehedge {

namespace {

void require_dim(Eigen::Index a, Eigen::Index b, const char* op) {
    if (a != b) throw std::invalid_argument(std::string(op) + ": dimension mismatch");
}

VectorZ homogeneous_row(const VectorQ& a, const Rational& tail) {
    VectorQ row(a.size() + 1);
    row.head(a.size()) = a;
    row(a.size()) = tail;
    return primitive(row);
}

}  // namespace

ConvexPolyhedron::ConvexPolyhedron(Eigen::Index dim) : dim_(dim) {
    Generators g;
    g.vertices.push_back(zeros(dim));
    for (Eigen::Index k = 0; k < dim; ++k) g.lines.push_back(unit(dim, k));
    vrep_ = std::move(g);
    minimal_ = true;
}

ConvexPolyhedron::ConvexPolyhedron(Eigen::Index dim, std::vector<Halfspace> inequalities,
                                   std::vector<Hyperplane> equalities)
    : dim_(dim), ineqs_(std::move(inequalities)), eqs_(std::move(equalities)) {
    for (const auto& h : ineqs_) require_dim(h.normal.size(), dim_, "ConvexPolyhedron");
    for (const auto& h : eqs_) require_dim(h.normal.size(), dim_, "ConvexPolyhedron");
}

ConvexPolyhedron ConvexPolyhedron::empty(Eigen::Index dim) {
    ConvexPolyhedron p(dim, {{unit(dim, 0), 1}, {-unit(dim, 0), 0}});
    p.vrep_ = Generators{};
    p.empty_ = true;
    p.minimal_ = true;
    return p;
}

ConvexPolyhedron ConvexPolyhedron::from_generators(Eigen::Index dim, Generators g) {
    for (const auto* list : {&g.vertices, &g.rays, &g.lines})
        for (const auto& v : *list) require_dim(v.size(), dim, "from_generators");
    ConvexPolyhedron p(dim);
    p.has_hrep_ = false;
    p.minimal_ = false;
    p.empty_ = g.vertices.empty();
    p.vrep_ = std::move(g);
    return p;
}

bool ConvexPolyhedron::is_empty() const {
    if (empty_) return true;
    if (vrep_) return vrep_->vertices.empty();
    return !lp_feasible(ineqs_, eqs_, dim_);
}

bool ConvexPolyhedron::contains(const VectorQ& x) const {
    require_dim(x.size(), dim_, "contains");
    if (empty_) return false;
    if (!has_hrep_) return vrep_to_hrep(*this).contains(x);
    for (const auto& h : ineqs_)
        if (!h.contains(x)) return false;
    for (const auto& h : eqs_)
        if (!h.contains(x)) return false;
    return true;
}

ConvexPolyhedron hrep_to_vrep(const ConvexPolyhedron& p) {
    if (!p.has_hrep_) throw std::logic_error("hrep_to_vrep: no H-representation");
    if (p.vrep_) return p;
    const Eigen::Index d = p.dim_;
    std::vector<VectorZ> rows, eq_rows;
    VectorZ lambda = VectorZ::Constant(d + 1, Integer(0));
    lambda(d) = 1;
    rows.push_back(lambda);
    for (const auto& h : p.ineqs_) rows.push_back(homogeneous_row(h.normal, -h.offset));
    for (const auto& h : p.eqs_) eq_rows.push_back(homogeneous_row(h.normal, -h.offset));
    ConeGenerators cg = enumerate_cone(rows, eq_rows, d + 1);

    Generators g;
    for (const auto& r : cg.rays) {
        VectorQ x = to_rational(r.head(d));
        if (r(d) > 0) {
            x /= Rational(r(d));
            g.vertices.push_back(std::move(x));
        } else {
            g.rays.push_back(std::move(x));
        }
    }
    for (const auto& l : cg.lines) g.lines.push_back(to_rational(l.head(d)));

    ConvexPolyhedron out = p;
    out.empty_ = g.vertices.empty();
    if (out.empty_) g = Generators{};
    out.vrep_ = std::move(g);
    return out;
}

ConvexPolyhedron vrep_to_hrep(const ConvexPolyhedron& p) {
    if (!p.vrep_) throw std::logic_error("vrep_to_hrep: no V-representation");
    const Eigen::Index d = p.dim_;
    if (p.vrep_->vertices.empty()) return ConvexPolyhedron::empty(d);

    // (a, b) with a.v >= b for vertices, a.r >= 0 for rays, a.l = 0 for lines
    std::vector<VectorZ> rows, eq_rows;
    for (const auto& v : p.vrep_->vertices) rows.push_back(homogeneous_row(v, -1));
    for (const auto& r : p.vrep_->rays) rows.push_back(homogeneous_row(r, 0));
    for (const auto& l : p.vrep_->lines) eq_rows.push_back(homogeneous_row(l, 0));
    ConeGenerators cg = enumerate_cone(rows, eq_rows, d + 1);

    std::vector<Halfspace> ineqs;
    std::vector<Hyperplane> eqs;
    for (const auto& r : cg.rays) {
        VectorQ a = to_rational(r.head(d));
        if (is_zero(a)) continue;  // 0 >= -1
        ineqs.push_back({std::move(a), Rational(r(d))});
    }
    for (const auto& l : cg.lines) eqs.push_back({to_rational(l.head(d)), Rational(l(d))});

    ConvexPolyhedron out(d, std::move(ineqs), std::move(eqs));
    out.vrep_ = p.vrep_;
    return out;
}

namespace {

using Incidence = std::vector<char>;

bool strict_subset(const Incidence& a, const Incidence& b) {
    bool proper = false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] && !b[k]) return false;
        if (b[k] && !a[k]) proper = true;
    }
    return proper;
}

// Indices whose incidence set is maximal, first of each duplicate kept.
std::vector<std::size_t> maximal_sets(const std::vector<Incidence>& inc) {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < inc.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < inc.size() && !dominated; ++j) {
            if (j == i) continue;
            dominated = strict_subset(inc[i], inc[j]) || (j < i && inc[j] == inc[i]);
        }
        if (!dominated) keep.push_back(i);
    }
    return keep;
}

// Greedy linearly independent subset, by elimination against an echelon basis.
std::vector<std::size_t> independent(const std::vector<VectorQ>& rows) {
    std::vector<VectorQ> basis;
    std::vector<Eigen::Index> pivots;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        VectorQ r = rows[i];
        for (std::size_t b = 0; b < basis.size(); ++b)
            if (r(pivots[b]) != 0) r -= (r(pivots[b]) / basis[b](pivots[b])) * basis[b];
        Eigen::Index piv = -1;
        for (Eigen::Index k = 0; k < r.size() && piv < 0; ++k)
            if (r(k) != 0) piv = k;
        if (piv < 0) continue;
        basis.push_back(std::move(r));
        pivots.push_back(piv);
        keep.push_back(i);
    }
    return keep;
}

VectorQ normalized(const VectorQ& r) { return to_rational(primitive(r)); }

// Generators as integer rows [v, 1] and [r, 0] so incidence is an integer dot.
std::vector<VectorZ> homogeneous_generators(const std::vector<VectorQ>& vs, const std::vector<VectorQ>& rs) {
    std::vector<VectorZ> out;
    out.reserve(vs.size() + rs.size());
    for (const auto& v : vs) out.push_back(homogeneous_row(v, 1));
    for (const auto& r : rs) out.push_back(homogeneous_row(r, 0));
    return out;
}

Incidence incidence(const VectorZ& row, const std::vector<VectorZ>& gens) {
    Incidence t;
    t.reserve(gens.size());
    for (const auto& g : gens) t.push_back(dot(row, g) == 0);
    return t;
}

Halfspace from_row(const VectorZ& z) {
    const Eigen::Index d = z.size() - 1;
    return {to_rational(z.head(d)), Rational(-z(d))};
}

// Facets and affine hull from a valid H-rep and the minimal V-rep of the same set.
void reduce_hrep(std::vector<Halfspace>& ineqs, std::vector<Hyperplane>& eqs, const Generators& g) {
    const std::vector<VectorZ> gens = homogeneous_generators(g.vertices, g.rays);
    std::vector<VectorZ> candidates;
    std::vector<Incidence> inc;
    std::vector<VectorQ> eq_rows;
    for (const auto& h : eqs) eq_rows.push_back(to_rational(homogeneous_row(h.normal, -h.offset)));
    for (const auto& h : ineqs) {
        if (is_zero(h.normal)) continue;
        VectorZ row = homogeneous_row(h.normal, -h.offset);
        Incidence t = incidence(row, gens);
        bool any = false, all = true;
        for (char c : t) {
            any = any || c;
            all = all && c;
        }
        if (all) {
            eq_rows.push_back(to_rational(row));
        } else if (any) {
            candidates.push_back(std::move(row));
            inc.push_back(std::move(t));
        }
    }
    ineqs.clear();
    for (std::size_t i : maximal_sets(inc)) ineqs.push_back(from_row(candidates[i]));
    eqs.clear();
    for (std::size_t i : independent(eq_rows)) {
        Halfspace h = from_row(primitive(eq_rows[i]));
        eqs.push_back({h.normal, h.offset});
    }
}

// Minimal V-rep from any V-rep and the facets of the same set.
Generators reduce_vrep(const Generators& g, const std::vector<Halfspace>& facets) {
    std::vector<VectorZ> rows;
    for (const auto& h : facets) rows.push_back(homogeneous_row(h.normal, -h.offset));
    std::vector<VectorQ> lines = g.lines;
    std::vector<VectorQ> rays;
    std::vector<VectorZ> ray_rows;
    for (const auto& r : g.rays) {
        VectorZ z = homogeneous_row(r, 0);
        bool in_lineality = true;
        for (const auto& h : rows) in_lineality = in_lineality && dot(h, z) == 0;
        if (in_lineality) {
            lines.push_back(r);
        } else {
            rays.push_back(to_rational(z.head(r.size())));
            ray_rows.push_back(std::move(z));
        }
    }
    Generators out;
    for (std::size_t i : independent(lines)) out.lines.push_back(normalized(lines[i]));

    std::vector<Incidence> inc;
    for (const auto& v : g.vertices) {
        VectorZ z = homogeneous_row(v, 1);
        Incidence t{0};
        for (const auto& h : rows) t.push_back(dot(h, z) == 0);
        inc.push_back(std::move(t));
    }
    for (const auto& z : ray_rows) {
        Incidence t{1};
        for (const auto& h : rows) t.push_back(dot(h, z) == 0);
        inc.push_back(std::move(t));
    }
    const std::size_t nv = g.vertices.size();
    for (std::size_t i : maximal_sets(inc)) {
        if (i < nv) out.vertices.push_back(g.vertices[i]);
        else out.rays.push_back(rays[i - nv]);
    }
    return out;
}

}  // namespace

ConvexPolyhedron ConvexPolyhedron::from_canonical(Eigen::Index dim, std::vector<Halfspace> inequalities,
                                                  std::vector<Hyperplane> equalities, Generators g) {
    ConvexPolyhedron p(dim, std::move(inequalities), std::move(equalities));
    p.empty_ = g.vertices.empty();
    if (p.empty_) return empty(dim);
    p.vrep_ = std::move(g);
    p.minimal_ = true;
    return p;
}

ConvexPolyhedron canonical(const ConvexPolyhedron& p) {
    if (p.minimal_) return p;
    if (p.vrep_) {
        ConvexPolyhedron out = vrep_to_hrep(p);
        if (out.empty_) return out;
        out.vrep_ = reduce_vrep(*p.vrep_, out.ineqs_);
        out.minimal_ = true;
        return out;
    }
    ConvexPolyhedron out = hrep_to_vrep(p);
    if (out.empty_) return ConvexPolyhedron::empty(p.dim_);
    reduce_hrep(out.ineqs_, out.eqs_, *out.vrep_);
    out.minimal_ = true;
    return out;
}

ConvexPolyhedron intersect(const ConvexPolyhedron& p, const ConvexPolyhedron& q) {
    require_dim(p.dim(), q.dim(), "intersect");
    if ((p.has_vrep() && p.is_empty()) || (q.has_vrep() && q.is_empty()))
        return ConvexPolyhedron::empty(p.dim());
    const ConvexPolyhedron& a = p.has_hrep() ? p : vrep_to_hrep(p);
    ConvexPolyhedron qb = q.has_hrep() ? q : vrep_to_hrep(q);
    std::vector<Halfspace> ineqs = a.inequalities();
    std::vector<Hyperplane> eqs = a.equalities();
    ineqs.insert(ineqs.end(), qb.inequalities().begin(), qb.inequalities().end());
    eqs.insert(eqs.end(), qb.equalities().begin(), qb.equalities().end());
    return canonical(ConvexPolyhedron(p.dim(), std::move(ineqs), std::move(eqs)));
}

ConvexPolyhedron add_cone(const ConvexPolyhedron& p, const PolyCone& c) {
    require_dim(p.dim(), c.dim, "add_cone");
    ConvexPolyhedron a = p.has_vrep() ? p : hrep_to_vrep(p);
    if (a.is_empty()) return ConvexPolyhedron::empty(p.dim());
    Generators g = a.generators();
    if (c.minimal) {
        g.rays.insert(g.rays.end(), c.minimal->rays.begin(), c.minimal->rays.end());
        g.lines.insert(g.lines.end(), c.minimal->lines.begin(), c.minimal->lines.end());
    } else {
        for (const auto& r : c.generators)
            if (!is_zero(r)) g.rays.push_back(r);
    }
    return canonical(ConvexPolyhedron::from_generators(p.dim(), std::move(g)));
}

ConvexPolyhedron minkowski_sum(const ConvexPolyhedron& p, const ConvexPolyhedron& q) {
    require_dim(p.dim(), q.dim(), "minkowski_sum");
    ConvexPolyhedron a = p.has_vrep() ? p : hrep_to_vrep(p);
    ConvexPolyhedron b = q.has_vrep() ? q : hrep_to_vrep(q);
    if (a.is_empty() || b.is_empty()) return ConvexPolyhedron::empty(p.dim());
    const Generators& ga = a.generators();
    const Generators& gb = b.generators();
    Generators g;
    for (const auto& u : ga.vertices)
        for (const auto& v : gb.vertices) g.vertices.push_back(u + v);
    g.rays = ga.rays;
    g.rays.insert(g.rays.end(), gb.rays.begin(), gb.rays.end());
    g.lines = ga.lines;
    g.lines.insert(g.lines.end(), gb.lines.begin(), gb.lines.end());
    return canonical(ConvexPolyhedron::from_generators(p.dim(), std::move(g)));
}

ConvexPolyhedron translate_cone(const VectorQ& x, const PolyCone& c) {
    require_dim(x.size(), c.dim, "translate_cone");
    if (c.hrep && c.minimal && c.minimal->lines.size() < static_cast<std::size_t>(c.dim)) {
        // Full-dimensional reduced cone: its facets shift with x.
        Generators g = *c.minimal;
        g.vertices = {x};
        std::vector<Halfspace> facets;
        for (const auto& h : *c.hrep) facets.push_back({h.normal, dot(h.normal, x)});
        return ConvexPolyhedron::from_canonical(c.dim, std::move(facets), {}, std::move(g));
    }
    Generators g;
    g.vertices.push_back(x);
    for (const auto& r : c.generators)
        if (!is_zero(r)) g.rays.push_back(r);
    return canonical(ConvexPolyhedron::from_generators(c.dim, std::move(g)));
}

bool includes(const ConvexPolyhedron& outer, const ConvexPolyhedron& inner) {
    require_dim(outer.dim(), inner.dim(), "includes");
    const ConvexPolyhedron in = inner.has_vrep() ? inner : hrep_to_vrep(inner);
    if (in.is_empty()) return true;
    const ConvexPolyhedron out = outer.has_hrep() ? outer : vrep_to_hrep(outer);
    const Generators& g = in.generators();
    for (const auto& v : g.vertices)
        if (!out.contains(v)) return false;
    for (const auto& h : out.inequalities()) {
        for (const auto& r : g.rays)
            if (dot(h.normal, r) < 0) return false;
        for (const auto& l : g.lines)
            if (dot(h.normal, l) != 0) return false;
    }
    for (const auto& h : out.equalities()) {
        for (const auto& r : g.rays)
            if (dot(h.normal, r) != 0) return false;
        for (const auto& l : g.lines)
            if (dot(h.normal, l) != 0) return false;
    }
    return true;
}

bool same_set(const ConvexPolyhedron& p, const ConvexPolyhedron& q) {
    return includes(p, q) && includes(q, p);
}

std::vector<Halfspace> cone_hrep(const PolyCone& c) {
    if (c.hrep) return *c.hrep;
    std::vector<VectorZ> rows;
    for (const auto& g : c.generators) rows.push_back(primitive(g));
    ConeGenerators cg = enumerate_cone(rows, {}, c.dim);
    std::vector<Halfspace> out;
    for (const auto& r : cg.rays) out.push_back({to_rational(r), 0});
    for (const auto& l : cg.lines) {
        out.push_back({to_rational(l), 0});
        out.push_back({-to_rational(l), 0});
    }
    return out;
}

PolyCone reduce_cone(PolyCone c) {
    std::vector<VectorZ> rows;
    for (const auto& g : c.generators)
        if (!is_zero(g)) rows.push_back(primitive(g));
    ConeGenerators facets = enumerate_cone(rows, {}, c.dim);
    if (!facets.lines.empty()) {
        // Not full-dimensional: keep the generic description.
        c.hrep = cone_hrep(c);
        c.minimal.reset();
        return c;
    }
    std::vector<Halfspace> h;
    std::vector<VectorZ> h_rows;
    for (const auto& r : facets.rays) {
        h.push_back({to_rational(r), 0});
        h_rows.push_back(r);
    }
    ConeGenerators gens = enumerate_cone(h_rows, {}, c.dim);
    Generators m;
    m.vertices.push_back(zeros(c.dim));
    for (const auto& r : gens.rays) m.rays.push_back(to_rational(r));
    for (const auto& l : gens.lines) m.lines.push_back(to_rational(l));
    c.hrep = std::move(h);
    c.minimal = std::move(m);
    return c;
}

PolyCone polar(const PolyCone& c) {
    std::vector<VectorZ> rows;
    std::vector<Halfspace> hrep;
    for (const auto& g : c.generators) {
        if (is_zero(g)) continue;
        rows.push_back(primitive(g));
        hrep.push_back({g, 0});
    }
    ConeGenerators cg = enumerate_cone(rows, {}, c.dim);
    PolyCone out{c.dim, {}, std::move(hrep)};
    for (const auto& r : cg.rays) out.generators.push_back(to_rational(r));
    for (const auto& l : cg.lines) {
        out.generators.push_back(to_rational(l));
        out.generators.push_back(-to_rational(l));
    }
    return out;
}

bool cone_contains(const PolyCone& c, const VectorQ& x) {
    for (const auto& h : cone_hrep(c))
        if (!h.contains(x)) return false;
    return true;
}

std::string to_string(const Extended& e) {
    switch (e.kind) {
        case Extended::Kind::plus_infinity: return "+inf";
        case Extended::Kind::minus_infinity: return "-inf";
        default: return to_string(e.value);
    }
}

Extended min_coordinate(const ConvexPolyhedron& p, Eigen::Index i) {
    if (i < 0 || i >= p.dim()) throw std::out_of_range("min_coordinate: bad coordinate");
    if (p.has_vrep() && p.is_empty()) return Extended::plus_inf();
    const ConvexPolyhedron h = p.has_hrep() ? p : vrep_to_hrep(p);
    std::optional<Rational> lo, hi;
    auto raise_lo = [&](const Rational& v) { if (!lo || v > *lo) lo = v; };
    auto drop_hi = [&](const Rational& v) { if (!hi || v < *hi) hi = v; };
    for (const auto& s : h.inequalities()) {
        const Rational& a = s.normal(i);
        if (a > 0) raise_lo(s.offset / a);
        else if (a < 0) drop_hi(s.offset / a);
        else if (s.offset > 0) return Extended::plus_inf();
    }
    for (const auto& s : h.equalities()) {
        const Rational& a = s.normal(i);
        if (a != 0) {
            raise_lo(s.offset / a);
            drop_hi(s.offset / a);
        } else if (s.offset != 0) {
            return Extended::plus_inf();
        }
    }
    if (lo && hi && *lo > *hi) return Extended::plus_inf();
    if (!lo) return Extended::minus_inf();
    return {Extended::Kind::finite, *lo};
}

std::vector<std::string> format_hrep(const ConvexPolyhedron& p) {
    const ConvexPolyhedron h = p.has_hrep() ? p : vrep_to_hrep(p);
    auto render = [](const VectorQ& a, const Rational& b, const char* rel) {
        std::string s;
        for (Eigen::Index k = 0; k < a.size(); ++k) {
            if (a(k) == 0) continue;
            Rational c = a(k);
            if (s.empty()) {
                if (c < 0) s += "-";
            } else {
                s += c < 0 ? " - " : " + ";
            }
            if (c < 0) c = -c;
            if (c != 1) s += to_string(c) + " ";
            s += "x" + std::to_string(k + 1);
        }
        if (s.empty()) s = "0";
        return s + " " + rel + " " + to_string(b);
    };
    std::vector<std::string> out;
    for (const auto& s : h.inequalities()) out.push_back(render(s.normal, s.offset, ">="));
    for (const auto& s : h.equalities()) out.push_back(render(s.normal, s.offset, "="));
    return out;
}

}  // namespace gamehedge
