#pragma once

#include "gamehedge/options.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace gamehedge {

/// Ordinary stopping time on a tree, as the antichain of nodes where it stops.
struct StoppingTime {
    std::vector<std::size_t> nodes;  // ascending
};

enum class StopState { running, stopping, stopped };

/// Per node: before, at or after the stopping node on its path.
std::vector<StopState> stop_states(const Model& m, const StoppingTime& s);
/// True if every root-to-leaf path meets exactly one node of s.
bool is_stopping_time(const Model& m, const StoppingTime& s);
/// Stops at every node of level t.
StoppingTime constant_stopping_time(const Model& m, int t);

constexpr std::size_t default_stopping_time_limit = 100000;

class EnumerationLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// All stopping times of a tree, in a fixed order (stop at the root first).
std::vector<StoppingTime> enumerate_stopping_times(const Model& m,
                                                   std::size_t limit = default_stopping_time_limit);

/// Adapted nonnegative masses, one per node, summing to 1 along every path.
struct RandomisedStoppingTime {
    std::vector<Rational> mass;
};

RandomisedStoppingTime from_stopping_time(const Model& m, const StoppingTime& s);
bool is_randomised_stopping_time(const Model& m, const RandomisedStoppingTime& chi);

/// chi*_t = sum over s >= t of chi_s, i.e. 1 minus the mass at strict ancestors.
std::vector<Rational> chi_star(const Model& m, const RandomisedStoppingTime& chi);
/// Sum over t of chi_t A_t along each path, indexed like m.level(horizon).
std::vector<Rational> value_at(const Model& m, const std::vector<Rational>& a,
                               const RandomisedStoppingTime& chi);
/// chi_t before s, chi*_t at s, 0 after.
RandomisedStoppingTime truncate(const Model& m, const RandomisedStoppingTime& chi,
                                const StoppingTime& s);

/// Probability on terminal nodes (0 elsewhere) and a price process, both indexed by node.
struct ApproxPair {
    std::vector<Rational> probability;
    std::vector<VectorQ> S;
};

/// Reason the pair is not chi-approximate with S^i = 1, if any.
std::optional<std::string> approx_pair_violation(const Model& m, const ApproxPair& pair,
                                                 const RandomisedStoppingTime& chi, Eigen::Index i);
inline bool check_approx_pair(const Model& m, const ApproxPair& pair,
                              const RandomisedStoppingTime& chi, Eigen::Index i) {
    return !approx_pair_violation(m, pair, chi, i);
}

/// Martingale pair normalised in currency i from unnormalised consistent prices
/// (node value = sum of successor values), e.g. a no-arbitrage witness.
ApproxPair martingale_pair(const Model& m, const std::vector<VectorQ>& z, Eigen::Index i);

/// E_P of sum_{t<s} chi_t Y_t.S_t + chi*_{s+1} X_s.S_s + chi_s X'_s.S_s, with s the stop time.
Rational dual_objective(const Model& m, const StoppingTime& s, const RandomisedStoppingTime& chi,
                        const ApproxPair& pair, const GamePayoff& g);

/// Y_t before s, X_s at s < T, X'_T at s = T, 0 after.
VectorQ auxiliary_payoff(const Model& m, const GamePayoff& g, const std::vector<StopState>& st,
                         std::size_t node);

/// Cheapest initial capital z e^i hedging the auxiliary payoff up to s (tree mode).
Extended primal_lp_ask(const Model& m, const GamePayoff& g, const StoppingTime& s, Eigen::Index i);

struct OracleReport {
    std::vector<StoppingTime> stopping_times;
    std::vector<Extended> values;
    std::size_t best = 0;
    Extended value;
};

/// min over all stopping times of primal_lp_ask.
OracleReport ask_oracle(const Model& m, const GamePayoff& g, Eigen::Index i,
                        std::size_t limit = default_stopping_time_limit);
/// Minus the ask oracle of the negated payoff.
OracleReport bid_oracle(const Model& m, const GamePayoff& g, Eigen::Index i,
                        std::size_t limit = default_stopping_time_limit);

/// Inner maxima for sigma = 0 and sigma = 1 of a one-step dual, and their minimum.
struct OneStepDual {
    Rational sigma0, sigma1, value;
};

/// Dual with truncated chi and stopped S (one-step trees).
OneStepDual one_step_dual(const Model& m, const GamePayoff& g, Eigen::Index i);
/// Dual with untruncated chi and unstopped S, of payoff sum_{t<=s} chi_t Y_t.S_t +
/// sum_{t>s} chi_t X_s.S_t (one-step trees).
OneStepDual kifer_va(const Model& m, const GamePayoff& g, Eigen::Index i);

/// Per stopping time LP value, winning stopping time, construction price, match flag.
nlohmann::json verification_report(const Model& m, const OracleReport& oracle,
                                   const Extended& construction);

std::string format_stopping_time(const Model& m, const StoppingTime& s);

}  // namespace gamehedge
