#include "gamehedge/options.hpp"

namespace gamehedge {

std::optional<PayoffViolation> validate_game_payoff(const Model& m, const GamePayoff& g) {
    if (g.nodes.size() != m.size())
        return PayoffViolation{0, "payoff does not cover every node"};
    for (std::size_t v = 0; v < m.size(); ++v) {
        const PayoffTriple& p = g.at(v);
        for (const VectorQ* x : {&p.Y, &p.X, &p.Xprime})
            if (x->size() != m.currencies()) return PayoffViolation{v, "payoff has wrong dimension"};
        if (!cone_contains(m.solvency(v), p.X - p.Xprime)) return PayoffViolation{v, "X - X' not in K"};
        if (!cone_contains(m.solvency(v), p.Xprime - p.Y)) return PayoffViolation{v, "X' - Y not in K"};
    }
    return std::nullopt;
}

GamePayoff basket_put(const Model& m, const BasketPutParams& b) {
    if (b.penalty < 0) throw std::invalid_argument("penalty must be nonnegative");
    if (m.currencies() != 3) throw std::invalid_argument("basket put needs three currencies");
    const VectorQ y = make_vector({-1, -1, b.strike});
    const VectorQ x = make_vector({-1, -1, b.strike + b.penalty});
    GamePayoff g;
    for (std::size_t v = 0; v < m.size(); ++v) {
        if (m.node(v).time == m.horizon())
            g.nodes.push_back({zeros(3), zeros(3), zeros(3)});
        else
            g.nodes.push_back({y, x, x});
    }
    return g;
}

GamePayoff negate_payoff(const GamePayoff& g) {
    GamePayoff out;
    for (const auto& p : g.nodes) out.nodes.push_back({-p.X, -p.Y, -p.Xprime});
    return out;
}

GamePayoff zero_payoff(const Model& m) {
    GamePayoff g;
    const VectorQ z = zeros(m.currencies());
    g.nodes.assign(m.size(), {z, z, z});
    return g;
}

GamePayoff pull_back(const GamePayoff& g, const std::vector<std::size_t>& origin) {
    GamePayoff out;
    for (std::size_t o : origin) out.nodes.push_back(g.at(o));
    return out;
}

namespace {

VectorQ json_vector(const nlohmann::json& v, Eigen::Index d) {
    if (!v.is_array() || v.size() != static_cast<std::size_t>(d))
        throw ParseError("payoff vector has wrong length: " + v.dump());
    VectorQ out(d);
    for (Eigen::Index k = 0; k < d; ++k) out(k) = json_rational(v.at(static_cast<std::size_t>(k)));
    return out;
}

nlohmann::json vector_json(const VectorQ& v) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(to_string(v(k)));
    return out;
}

}  // namespace

GamePayoff payoff_from_json(const Model& m, const nlohmann::json& doc) {
    try {
        const std::string type = doc.at("type").get<std::string>();
        if (type == "basket_put")
            return basket_put(m, {json_rational(doc.at("K")), json_rational(doc.value("p", nlohmann::json(0)))});
        if (type != "explicit") throw ParseError("unknown option type '" + type + "'");
        const auto& table = doc.at("payoffs");
        GamePayoff g;
        for (const auto& n : m.nodes()) {
            if (!table.contains(n.id)) throw ParseError("no payoff for node " + n.id);
            const auto& e = table.at(n.id);
            const Eigen::Index d = m.currencies();
            const VectorQ y = json_vector(e.at("Y"), d);
            const VectorQ x = e.contains("X") ? json_vector(e.at("X"), d) : y;
            const VectorQ xp = e.contains("Xprime") ? json_vector(e.at("Xprime"), d) : y;
            g.nodes.push_back({y, x, xp});
        }
        return g;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("option JSON: ") + e.what());
    }
}

nlohmann::json payoff_to_json(const Model& m, const GamePayoff& g) {
    nlohmann::json table = nlohmann::json::object();
    for (std::size_t v = 0; v < m.size(); ++v)
        table[m.node(v).id] = {{"Y", vector_json(g.at(v).Y)},
                               {"X", vector_json(g.at(v).X)},
                               {"Xprime", vector_json(g.at(v).Xprime)}};
    return {{"type", "explicit"}, {"payoffs", table}};
}

}  // namespace gamehedge
