#include "gamehedge/pricing.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <ostream>
#include <thread>

namespace gamehedge {

const char* to_string(Side s) { return s == Side::seller ? "seller" : "buyer"; }

namespace {

unsigned worker_count(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("GAMEHEDGE_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return static_cast<unsigned>(n);
    }
    return 1;
}

template <typename Fn>
void parallel_for(const std::vector<std::size_t>& items, unsigned threads, Fn fn) {
    if (threads <= 1 || items.size() < 2) {
        for (std::size_t v : items) fn(v);
        return;
    }
    std::exception_ptr error;
    std::mutex lock;
    std::size_t next = 0;
    auto work = [&] {
        for (;;) {
            std::size_t k;
            {
                std::lock_guard<std::mutex> g(lock);
                if (next >= items.size() || error) return;
                k = next++;
            }
            try {
                fn(items[k]);
            } catch (...) {
                std::lock_guard<std::mutex> g(lock);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned n = std::min<unsigned>(threads, static_cast<unsigned>(items.size()));
    for (unsigned w = 0; w < n; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

ConvexPolyhedron shifted_cone(const VectorQ& x, const PolyCone& k) { return translate_cone(x, k); }

// x - K
ConvexPolyhedron reverse_cone(const VectorQ& x, const PolyCone& k) {
    std::vector<Halfspace> rows;
    for (const auto& h : *k.hrep) rows.push_back({-h.normal, -dot(h.normal, x)});
    return ConvexPolyhedron(x.size(), std::move(rows));
}

// Per-node inputs of Z = (V n A) u B, with Z_T = B_T. Absent A is the whole space,
// absent B the empty set.
struct Stage {
    std::optional<ConvexPolyhedron> A, B;
};

SetFamily run_recursion(const Model& m, Side side, bool american,
                        const std::function<Stage(std::size_t, bool)>& stage,
                        const RecursionOptions& opt) {
    const Eigen::Index d = m.currencies();
    const PolyhedralUnion nothing{d, {}};
    SetFamily f;
    f.side = side;
    f.american = american;
    f.nodes.assign(m.size(), NodeSets{ConvexPolyhedron(d), ConvexPolyhedron::empty(d), nothing,
                                      nothing, nothing});
    const unsigned threads = worker_count(opt.threads);
    for (int t = m.horizon(); t >= 0; --t) {
        parallel_for(m.level(t), threads, [&](std::size_t v) {
            NodeSets& s = f.nodes[v];
            const bool terminal = m.is_terminal(v);
            Stage st = stage(v, terminal);
            if (st.A) s.Y = *st.A;
            if (st.B) s.X = *st.B;
            if (terminal) {
                s.Z = prune(PolyhedralUnion::of(s.X), opt.piece_cap);
                return;
            }
            const auto& succ = m.node(v).successors;
            PolyhedralUnion w = f.nodes[succ.front()].Z;
            for (std::size_t k = 1; k < succ.size(); ++k)
                w = union_intersect(w, f.nodes[succ[k]].Z, opt.piece_cap);
            s.W = std::move(w);
            s.V = union_add_cone(s.W, m.solvency(v), opt.piece_cap);
            PolyhedralUnion z = st.A ? union_intersect(s.V, *st.A, opt.piece_cap) : s.V;
            if (st.B) z = union_union(z, PolyhedralUnion::of(*st.B), opt.piece_cap);
            s.Z = std::move(z);
        });
    }
    return f;
}

void require_payoff(const Model& m, const GamePayoff& g) {
    if (g.nodes.size() != m.size()) throw std::invalid_argument("payoff does not match model");
}

}  // namespace

SetFamily seller_sets(const Model& m, const GamePayoff& g, const RecursionOptions& opt) {
    require_payoff(m, g);
    return run_recursion(
        m, Side::seller, false,
        [&](std::size_t v, bool terminal) {
            const PolyCone& k = m.solvency(v);
            const PayoffTriple& p = g.at(v);
            return Stage{shifted_cone(p.Y, k), shifted_cone(terminal ? p.Xprime : p.X, k)};
        },
        opt);
}

SetFamily buyer_sets(const Model& m, const GamePayoff& g, const RecursionOptions& opt) {
    require_payoff(m, g);
    return run_recursion(
        m, Side::buyer, false,
        [&](std::size_t v, bool terminal) {
            const PolyCone& k = m.solvency(v);
            const PayoffTriple& p = g.at(v);
            return Stage{shifted_cone(-p.X, k), shifted_cone(terminal ? VectorQ(-p.Xprime) : VectorQ(-p.Y), k)};
        },
        opt);
}

SetFamily american_sets(const Model& m, const GamePayoff& g, Side side,
                        const RecursionOptions& opt) {
    require_payoff(m, g);
    if (side == Side::seller)
        return run_recursion(
            m, side, true,
            [&](std::size_t v, bool terminal) {
                ConvexPolyhedron a = shifted_cone(g.at(v).Y, m.solvency(v));
                if (terminal) return Stage{a, a};
                return Stage{a, std::nullopt};
            },
            opt);
    return run_recursion(
        m, side, true,
        [&](std::size_t v, bool) {
            return Stage{std::nullopt, shifted_cone(-g.at(v).Y, m.solvency(v))};
        },
        opt);
}

Extended ask_price(const SetFamily& f, Eigen::Index i) {
    if (f.side != Side::seller) throw std::invalid_argument("ask_price needs seller sets");
    return min_coordinate(f.nodes.front().Z, i);
}

Extended bid_price(const SetFamily& f, Eigen::Index i) {
    if (f.side != Side::buyer) throw std::invalid_argument("bid_price needs buyer sets");
    Extended e = min_coordinate(f.nodes.front().Z, i);
    switch (e.kind) {
        case Extended::Kind::plus_infinity: return Extended::minus_inf();
        case Extended::Kind::minus_infinity: return Extended::plus_inf();
        default: return {Extended::Kind::finite, -e.value};
    }
}

namespace {

HedgingStrategy extract_strategy(const SetFamily& f, const Model& m, Side side, Eigen::Index i) {
    if (f.side != side || f.american) throw std::invalid_argument("strategy needs game sets of that side");
    const Extended start = min_coordinate(f.nodes.front().Z, i);
    if (!start.finite()) throw std::domain_error("price is not finite");

    HedgingStrategy s{side, i, expand_to_tree(m), {}, {}, {}};
    const Model& tree = s.tree.tree;
    const Eigen::Index d = m.currencies();
    s.portfolio.assign(tree.size(), zeros(d));
    s.stops.assign(tree.size(), false);
    s.stopped_at.assign(tree.size(), std::nullopt);
    s.portfolio[0] = start.value * unit(d, i);

    for (std::size_t v = 0; v < tree.size(); ++v) {
        const std::size_t src = s.tree.origin[v];
        const NodeSets& sets = f.nodes[src];
        const VectorQ y = s.portfolio[v];
        VectorQ next = y;
        if (!s.stopped_at[v]) {
            if (sets.X.contains(y)) {
                s.stops[v] = true;
                s.stopped_at[v] = v;
            } else {
                if (!contains(sets.Z, y) || m.is_terminal(src))
                    throw std::logic_error("strategy left its hedging set at node " + tree.node(v).id);
                const ConvexPolyhedron reachable = reverse_cone(y, m.solvency(src));
                bool found = false;
                for (const auto& piece : sets.W.pieces) {
                    const ConvexPolyhedron c = intersect(piece, reachable);
                    if (c.is_empty()) continue;
                    const auto& vs = c.generators().vertices;
                    next = vs.front();
                    for (const auto& x : vs)
                        if (lex_less(x, next)) next = x;
                    found = true;
                    break;
                }
                if (!found) throw std::logic_error("empty choice set at node " + tree.node(v).id);
            }
        }
        for (std::size_t c : tree.node(v).successors) {
            s.portfolio[c] = next;
            s.stopped_at[c] = s.stopped_at[v];
        }
    }
    return s;
}

}  // namespace

HedgingStrategy seller_strategy(const SetFamily& f, const Model& m, const GamePayoff& g,
                                Eigen::Index i) {
    require_payoff(m, g);
    return extract_strategy(f, m, Side::seller, i);
}

HedgingStrategy buyer_strategy(const SetFamily& f, const Model& m, const GamePayoff& g,
                               Eigen::Index i) {
    require_payoff(m, g);
    return extract_strategy(f, m, Side::buyer, i);
}

VectorQ game_payoff_at(const PayoffTriple& p, int s, int t) {
    if (s > t) return p.Y;
    if (s < t) return p.X;
    return p.Xprime;
}

Settlement simulate(const HedgingStrategy& s, const GamePayoff& g, std::size_t leaf,
                    int counterparty_time) {
    const Model& tree = s.tree.tree;
    if (!tree.is_terminal(leaf)) throw std::invalid_argument("scenario must end at a terminal node");
    const std::vector<std::size_t> path = path_to(tree, leaf);
    Settlement out;
    if (!s.stopped_at[leaf]) {
        out.failure = "strategy never stops on this path";
        return out;
    }
    const int own = tree.node(*s.stopped_at[leaf]).time;
    const int other = std::clamp(counterparty_time, 0, tree.horizon());
    const int u = std::min(own, other);
    out.time = u;
    out.node = path[static_cast<std::size_t>(u)];

    for (int t = 0; t < u; ++t) {
        const std::size_t a = path[static_cast<std::size_t>(t)];
        const std::size_t b = path[static_cast<std::size_t>(t) + 1];
        if (!cone_contains(tree.solvency(a), s.portfolio[a] - s.portfolio[b])) {
            out.failure = "not self-financing at " + tree.node(a).id;
            return out;
        }
    }
    const PayoffTriple& p = g.at(s.tree.origin[out.node]);
    const VectorQ& y = s.portfolio[out.node];
    if (s.side == Side::seller) {
        out.payoff = game_payoff_at(p, own, other);
        out.position = y - out.payoff;
    } else {
        out.payoff = game_payoff_at(p, other, own);
        out.position = y + out.payoff;
    }
    out.ok = cone_contains(tree.solvency(out.node), out.position);
    if (!out.ok) out.failure = "insolvent after settlement at " + tree.node(out.node).id;
    return out;
}

void dump_sets(std::ostream& os, const Model& m, const SetFamily& f) {
    auto piece = [&](const char* name, const ConvexPolyhedron& p, std::size_t k) {
        os << "  " << name << " piece " << k << ":\n";
        if (p.is_empty()) {
            os << "    empty\n";
            return;
        }
        for (const auto& row : format_hrep(p)) os << "    " << row << "\n";
    };
    auto family = [&](const char* name, const PolyhedralUnion& u) {
        if (u.pieces.empty()) {
            os << "  " << name << ": empty\n";
            return;
        }
        for (std::size_t k = 0; k < u.pieces.size(); ++k) piece(name, u.pieces[k], k + 1);
    };
    os << "side " << to_string(f.side) << (f.american ? " american" : " game") << "\n";
    for (std::size_t v = 0; v < m.size(); ++v) {
        os << "node " << m.node(v).id << " t=" << m.node(v).time << "\n";
        piece("Y", f.nodes[v].Y, 1);
        piece("X", f.nodes[v].X, 1);
        if (!m.is_terminal(v)) {
            family("W", f.nodes[v].W);
            family("V", f.nodes[v].V);
        }
        family("Z", f.nodes[v].Z);
    }
}

}  // namespace gamehedge
