#include "gamehedge/random_models.hpp"

namespace gamehedge {

namespace {

Rational pick(std::mt19937_64& rng, long lo, long hi, long den) {
    return Rational(std::uniform_int_distribution<long>(lo, hi)(rng), den);
}

// Currency 1 per unit of currency 2 is mid * (1 + a); currency 2 per unit of 1 is (1 + b) / mid.
MatrixQ spread_rates(const Rational& mid, const Rational& a, const Rational& b) {
    MatrixQ r(2, 2);
    r << Rational(1), mid * (1 + a), (1 + b) / mid, Rational(1);
    return r;
}

VectorQ random_solvent(const MatrixQ& rates, std::mt19937_64& rng) {
    VectorQ k = pick(rng, 0, 2, 2) * unit(2, 0) + pick(rng, 0, 2, 2) * unit(2, 1);
    k += pick(rng, 0, 2, 2) * (rates(0, 1) * unit(2, 0) - unit(2, 1));
    k += pick(rng, 0, 2, 2) * (rates(1, 0) * unit(2, 1) - unit(2, 0));
    return k;
}

}  // namespace

Model random_binary_model(std::mt19937_64& rng, int horizon) {
    std::vector<Node> nodes;
    std::vector<Rational> mid;
    nodes.push_back({"root", 0, {}, {}, {}});
    mid.push_back(pick(rng, 2, 12, 4));
    for (std::size_t n = 0; n < nodes.size(); ++n) {
        nodes[n].rates = spread_rates(mid[n], pick(rng, 0, 3, 20), pick(rng, 0, 3, 20));
        if (nodes[n].time == horizon) continue;
        const Rational up = mid[n] * (1 + pick(rng, 1, 5, 10));
        const Rational down = mid[n] * (1 - pick(rng, 1, 5, 10));
        const std::string base = n == 0 ? "" : nodes[n].id;
        for (const auto& [tag, value] : {std::pair{"u", up}, std::pair{"d", down}}) {
            nodes[n].successors.push_back(nodes.size());
            nodes.push_back({base + tag, nodes[n].time + 1, {}, {}, {}});
            mid.push_back(value);
        }
    }
    return Model(2, ModelMode::tree, std::move(nodes));
}

GamePayoff random_game_payoff(const Model& m, std::mt19937_64& rng) {
    GamePayoff g;
    for (const auto& n : m.nodes()) {
        VectorQ y = make_vector({pick(rng, -6, 6, 2), pick(rng, -6, 6, 2)});
        VectorQ xp = y + random_solvent(n.rates, rng);
        VectorQ x = xp + random_solvent(n.rates, rng);
        g.nodes.push_back({y, x, xp});
    }
    return g;
}

}  // namespace gamehedge
