#pragma once

#include "gamehedge/options.hpp"

#include <random>

namespace gamehedge {

/// Two-currency binary tree with random rational bid-ask spreads. The mid rate is a
/// martingale under some positive measure, so the model is arbitrage free.
Model random_binary_model(std::mt19937_64& rng, int horizon);

/// Random Y with X' = Y + k1 and X = X' + k2 for random k1, k2 in the solvency cone.
GamePayoff random_game_payoff(const Model& m, std::mt19937_64& rng);

}  // namespace gamehedge
