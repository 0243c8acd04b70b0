#include "gamehedge/market.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <map>
#include <unordered_map>

namespace gamehedge {

void validate_rates(const MatrixQ& rates) {
    if (rates.rows() != rates.cols() || rates.rows() == 0)
        throw ModelError("rate matrix must be square and nonempty");
    for (Eigen::Index i = 0; i < rates.rows(); ++i) {
        if (rates(i, i) != 1) throw ModelError("diagonal exchange rate must be 1");
        for (Eigen::Index j = 0; j < rates.cols(); ++j)
            if (rates(i, j) <= 0) throw ModelError("exchange rates must be positive");
    }
}

PolyCone solvency_cone(const MatrixQ& rates) {
    validate_rates(rates);
    const Eigen::Index d = rates.rows();
    PolyCone k{d, {}, std::nullopt};
    for (Eigen::Index i = 0; i < d; ++i) k.generators.push_back(unit(d, i));
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            if (i != j) k.generators.push_back(rates(i, j) * unit(d, i) - unit(d, j));
    return reduce_cone(std::move(k));
}

PolyCone polar_cone(const PolyCone& k) { return polar(k); }

bool in_polar(const MatrixQ& rates, const VectorQ& w) {
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        if (w(i) < 0) return false;
        for (Eigen::Index j = 0; j < w.size(); ++j)
            if (rates(i, j) * w(i) < w(j)) return false;
    }
    return true;
}

Model::Model(Eigen::Index currencies, ModelMode mode, std::vector<Node> nodes)
    : d_(currencies), mode_(mode), nodes_(std::move(nodes)) {
    if (nodes_.empty()) throw ModelError("model has no nodes");
    if (nodes_[0].time != 0) throw ModelError("node 0 must be the root at time 0");
    for (auto& n : nodes_) n.predecessors.clear();
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const Node& n = nodes_[i];
        if (n.rates.rows() != d_) throw ModelError("node " + n.id + ": rate matrix has wrong size");
        try {
            validate_rates(n.rates);
        } catch (const ModelError& e) {
            throw ModelError("node " + n.id + ": " + e.what());
        }
        if (i > 0 && n.time == 0) throw ModelError("more than one node at time 0");
        for (std::size_t s : n.successors) {
            if (s >= nodes_.size()) throw ModelError("node " + n.id + ": bad successor");
            if (nodes_[s].time != n.time + 1)
                throw ModelError("node " + n.id + ": successor not at the next time");
            nodes_[s].predecessors.push_back(i);
        }
    }
    int horizon = 0;
    for (const auto& n : nodes_) horizon = std::max(horizon, n.time);
    levels_.assign(static_cast<std::size_t>(horizon) + 1, {});
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const Node& n = nodes_[i];
        if (i > 0 && n.predecessors.empty()) throw ModelError("node " + n.id + " is unreachable");
        if (mode_ == ModelMode::tree && n.predecessors.size() > 1)
            throw ModelError("node " + n.id + " has several predecessors in tree mode");
        if (n.successors.empty() && n.time != horizon)
            throw ModelError("node " + n.id + " ends before the horizon");
        levels_[static_cast<std::size_t>(n.time)].push_back(i);
    }
    solvency_.reserve(nodes_.size());
    polar_.reserve(nodes_.size());
    std::map<std::vector<Rational>, std::size_t> seen;
    for (const auto& n : nodes_) {
        std::vector<Rational> key(n.rates.data(), n.rates.data() + n.rates.size());
        auto it = seen.find(key);
        if (it != seen.end()) {
            solvency_.push_back(solvency_[it->second]);
            polar_.push_back(polar_[it->second]);
            continue;
        }
        seen.emplace(std::move(key), solvency_.size());
        solvency_.push_back(solvency_cone(n.rates));
        polar_.push_back(gamehedge::polar(solvency_.back()));
    }
}

std::optional<std::size_t> Model::find(const std::string& id) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (nodes_[i].id == id) return i;
    return std::nullopt;
}

std::vector<std::pair<Rational, Rational>> korn_muller_factors(const KornMullerParams& p) {
    if (p.steps < 1) throw ModelError("Korn-Muller model needs at least one step");
    if (!(p.sigma1 > 0) || !(p.sigma2 > 0)) throw ModelError("volatilities must be positive");
    if (!(std::fabs(p.rho) <= 1)) throw ModelError("correlation must lie in [-1, 1]");
    if (p.k < 0 || p.k >= 1) throw ModelError("cost parameter must lie in [0, 1)");
    const long double delta = 1.0L / p.steps;
    const long double root = std::sqrt(delta);
    const long double s1 = p.sigma1, s2 = p.sigma2, rho = p.rho;
    const long double c = std::sqrt(1.0L - rho * rho);
    const long double drift1 = -0.5L * s1 * s1 * delta;
    const long double drift2 = -0.5L * s2 * s2 * delta;
    const long double z1[4] = {-1, -1, 1, 1};
    const long double z2[4] = {-(rho + c), -(rho - c), rho - c, rho + c};
    constexpr long double tol = 1e-17L;
    std::vector<std::pair<Rational, Rational>> f;
    for (int m = 0; m < 4; ++m)
        f.emplace_back(approximate(std::exp(drift1 + z1[m] * s1 * root), tol),
                       approximate(std::exp(drift2 + z2[m] * s2 * root), tol));
    return f;
}

Model build_korn_muller(const KornMullerParams& p, bool extra_step) {
    const auto factors = korn_muller_factors(p);
    using Key = std::array<int, 4>;
    std::vector<Node> nodes;
    std::map<Key, std::size_t> previous, current;

    auto make_rates = [&](const Rational& a, const Rational& b) {
        const Rational s[3] = {a, b, Rational(1)};
        MatrixQ r(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r(i, j) = i == j ? Rational(1) : s[j] / s[i] * (1 + p.k);
        return r;
    };
    auto key_id = [](int t, const Key& k) {
        return "t" + std::to_string(t) + ":" + std::to_string(k[0]) + "," + std::to_string(k[1]) +
               "," + std::to_string(k[2]) + "," + std::to_string(k[3]);
    };
    std::vector<std::pair<Rational, Rational>> prices;

    nodes.push_back({key_id(0, {0, 0, 0, 0}), 0, {}, {}, make_rates(p.s1, p.s2)});
    prices.emplace_back(p.s1, p.s2);
    previous[{0, 0, 0, 0}] = 0;
    for (int t = 1; t <= p.steps; ++t) {
        current.clear();
        for (const auto& [key, idx] : previous) {
            for (int m = 0; m < 4; ++m) {
                Key next = key;
                ++next[static_cast<std::size_t>(m)];
                auto it = current.find(next);
                if (it == current.end()) {
                    const Rational a = prices[idx].first * factors[static_cast<std::size_t>(m)].first;
                    const Rational b = prices[idx].second * factors[static_cast<std::size_t>(m)].second;
                    it = current.emplace(next, nodes.size()).first;
                    nodes.push_back({key_id(t, next), t, {}, {}, make_rates(a, b)});
                    prices.emplace_back(a, b);
                }
                nodes[idx].successors.push_back(it->second);
            }
        }
        previous.swap(current);
    }
    if (extra_step) {
        for (const auto& [key, idx] : previous) {
            nodes[idx].successors.push_back(nodes.size());
            nodes.push_back({key_id(p.steps + 1, key), p.steps + 1, {}, {}, nodes[idx].rates});
        }
    }
    return Model(3, ModelMode::lattice, std::move(nodes));
}

Rational json_rational(const nlohmann::json& v) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number()) return parse_rational(v.dump());
    throw ParseError("expected a number or rational string, got " + v.dump());
}

Model model_from_json(const nlohmann::json& doc) {
    try {
        const std::string mode = doc.value("mode", std::string("tree"));
        if (mode == "korn_muller") {
            KornMullerParams p;
            p.steps = doc.at("T").get<int>();
            const auto& s0 = doc.at("S0");
            p.s1 = json_rational(s0.at(0));
            p.s2 = json_rational(s0.at(1));
            p.sigma1 = doc.at("sigma1").get<double>();
            p.sigma2 = doc.at("sigma2").get<double>();
            p.rho = doc.at("rho").get<double>();
            p.k = json_rational(doc.at("k"));
            return build_korn_muller(p);
        }
        if (mode != "tree" && mode != "lattice") throw ParseError("unknown model mode '" + mode + "'");
        const Eigen::Index d = doc.at("currencies").get<Eigen::Index>();
        if (d < 1) throw ParseError("currencies must be positive");

        struct Raw {
            std::string id;
            int time;
            std::vector<std::string> successors;
            MatrixQ rates;
        };
        std::vector<Raw> raw;
        for (const auto& n : doc.at("nodes")) {
            Raw r;
            r.id = n.at("id").get<std::string>();
            r.time = n.at("time").get<int>();
            if (n.contains("successors"))
                for (const auto& s : n.at("successors")) r.successors.push_back(s.get<std::string>());
            if (!n.contains("rates")) throw ModelError("node " + r.id + " has no rates");
            const auto& rows = n.at("rates");
            if (rows.size() != static_cast<std::size_t>(d))
                throw ModelError("node " + r.id + ": rate matrix has wrong size");
            r.rates.resize(d, d);
            for (Eigen::Index i = 0; i < d; ++i) {
                const auto& row = rows.at(static_cast<std::size_t>(i));
                if (row.size() != static_cast<std::size_t>(d))
                    throw ModelError("node " + r.id + ": rate matrix has wrong size");
                for (Eigen::Index j = 0; j < d; ++j)
                    r.rates(i, j) = json_rational(row.at(static_cast<std::size_t>(j)));
            }
            raw.push_back(std::move(r));
        }
        std::stable_sort(raw.begin(), raw.end(),
                         [](const Raw& a, const Raw& b) { return a.time < b.time; });
        std::unordered_map<std::string, std::size_t> index;
        for (std::size_t i = 0; i < raw.size(); ++i)
            if (!index.emplace(raw[i].id, i).second) throw ModelError("duplicate node id " + raw[i].id);
        std::vector<Node> nodes;
        for (auto& r : raw) {
            Node n{r.id, r.time, {}, {}, std::move(r.rates)};
            for (const auto& s : r.successors) {
                auto it = index.find(s);
                if (it == index.end()) throw ModelError("node " + r.id + ": unknown successor " + s);
                n.successors.push_back(it->second);
            }
            nodes.push_back(std::move(n));
        }
        return Model(d, mode == "tree" ? ModelMode::tree : ModelMode::lattice, std::move(nodes));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("model JSON: ") + e.what());
    }
}

nlohmann::json model_to_json(const Model& m) {
    nlohmann::json out;
    out["currencies"] = m.currencies();
    out["mode"] = m.mode() == ModelMode::tree ? "tree" : "lattice";
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : m.nodes()) {
        nlohmann::json j;
        j["id"] = n.id;
        j["time"] = n.time;
        j["successors"] = nlohmann::json::array();
        for (std::size_t s : n.successors) j["successors"].push_back(m.node(s).id);
        nlohmann::json rows = nlohmann::json::array();
        for (Eigen::Index i = 0; i < n.rates.rows(); ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (Eigen::Index k = 0; k < n.rates.cols(); ++k) row.push_back(to_string(n.rates(i, k)));
            rows.push_back(row);
        }
        j["rates"] = rows;
        nodes.push_back(j);
    }
    out["nodes"] = nodes;
    return out;
}

ExpandedTree expand_to_tree(const Model& m) {
    std::vector<Node> nodes;
    std::vector<std::size_t> origin;
    // Breadth-first so that tree nodes stay ordered by time.
    nodes.push_back({m.node(0).id, 0, {}, {}, m.node(0).rates});
    origin.push_back(0);
    for (std::size_t head = 0; head < nodes.size(); ++head) {
        const Node& src = m.node(origin[head]);
        for (std::size_t s : src.successors) {
            const Node& child = m.node(s);
            std::string id = head == 0 ? child.id : nodes[head].id + "/" + child.id;
            nodes[head].successors.push_back(nodes.size());
            nodes.push_back({std::move(id), child.time, {}, {}, child.rates});
            origin.push_back(s);
        }
    }
    return {Model(m.currencies(), ModelMode::tree, std::move(nodes)), std::move(origin)};
}

std::vector<std::size_t> path_to(const Model& m, std::size_t n) {
    std::vector<std::size_t> path{n};
    while (n != m.root()) {
        n = m.node(n).predecessors.front();
        path.push_back(n);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

namespace {

NoArbitrageReport tree_check(const Model& m) {
    const Eigen::Index d = m.currencies();
    const Eigen::Index n = static_cast<Eigen::Index>(m.size()) * d;
    auto block = [&](std::size_t node, const VectorQ& w) {
        VectorQ row = zeros(n);
        row.segment(static_cast<Eigen::Index>(node) * d, d) = w;
        return row;
    };
    LinearProgram lp{zeros(n), {}, {}};
    for (std::size_t v = 0; v < m.size(); ++v) {
        for (const auto& g : m.solvency(v).generators) lp.inequalities.push_back({block(v, g), 0});
        if (m.is_terminal(v)) {
            lp.inequalities.push_back({block(v, VectorQ::Constant(d, Rational(1))), 1});
            continue;
        }
        for (Eigen::Index j = 0; j < d; ++j) {
            VectorQ row = block(v, unit(d, j));
            for (std::size_t s : m.node(v).successors) row -= block(s, unit(d, j));
            lp.equalities.push_back({row, 0});
        }
    }
    LpResult r = lp_solve(lp);
    NoArbitrageReport out;
    out.arbitrage_free = r.status == LpStatus::optimal;
    if (out.arbitrage_free) {
        std::vector<VectorQ> z;
        for (std::size_t v = 0; v < m.size(); ++v)
            z.push_back(r.point.segment(static_cast<Eigen::Index>(v) * d, d));
        out.witness = std::move(z);
    }
    return out;
}

// Possible consistent prices at each lattice node, by backward Minkowski aggregation.
NoArbitrageReport lattice_check(const Model& m) {
    const Eigen::Index d = m.currencies();
    std::vector<ConvexPolyhedron> reach(m.size(), ConvexPolyhedron(d));
    for (int t = m.horizon(); t >= 0; --t) {
        for (std::size_t v : m.level(t)) {
            std::vector<Halfspace> cone;
            for (const auto& g : m.solvency(v).generators) cone.push_back({g, 0});
            ConvexPolyhedron star(d, cone);
            if (m.is_terminal(v)) {
                cone.push_back({VectorQ::Constant(d, Rational(1)), 1});
                reach[v] = canonical(ConvexPolyhedron(d, cone));
                continue;
            }
            std::optional<ConvexPolyhedron> sum;
            for (std::size_t s : m.node(v).successors)
                sum = sum ? minkowski_sum(*sum, reach[s]) : reach[s];
            reach[v] = intersect(*sum, star);
        }
    }
    NoArbitrageReport out;
    out.arbitrage_free = !reach[m.root()].is_empty();
    return out;
}

}  // namespace

NoArbitrageReport check_no_arbitrage(const Model& m) {
    NoArbitrageReport out = m.mode() == ModelMode::tree ? tree_check(m) : lattice_check(m);
    for (std::size_t v = 0; v < m.size(); ++v)
        if (m.polar(v).generators.size() == 1) out.degenerate_nodes.push_back(v);
    return out;
}

}  // namespace gamehedge
