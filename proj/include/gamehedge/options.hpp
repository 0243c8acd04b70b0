#pragma once

#include "gamehedge/market.hpp"

#include <optional>

namespace gamehedge {

/// Payoff on exercise (Y), on cancellation (X) and on simultaneous stop (Xprime).
struct PayoffTriple {
    VectorQ Y, X, Xprime;
};

/// One triple per model node.
struct GamePayoff {
    std::vector<PayoffTriple> nodes;

    const PayoffTriple& at(std::size_t n) const { return nodes[n]; }
};

struct PayoffViolation {
    std::size_t node;
    std::string condition;
};

/// Checks X - X' in K and X' - Y in K at every node.
std::optional<PayoffViolation> validate_game_payoff(const Model& m, const GamePayoff& g);

struct BasketPutParams {
    Rational strike = 100;
    Rational penalty = 5;
};

/// Expects the Korn-Muller lattice with its extra step; the last step pays nothing.
GamePayoff basket_put(const Model& m, const BasketPutParams& b);

/// (Y, X, X') -> (-X, -Y, -X')
GamePayoff negate_payoff(const GamePayoff& g);

GamePayoff zero_payoff(const Model& m);

/// Payoff on an expanded tree, read from the source node of each tree node.
GamePayoff pull_back(const GamePayoff& g, const std::vector<std::size_t>& origin);

GamePayoff payoff_from_json(const Model& m, const nlohmann::json& doc);
nlohmann::json payoff_to_json(const Model& m, const GamePayoff& g);

}  // namespace gamehedge
