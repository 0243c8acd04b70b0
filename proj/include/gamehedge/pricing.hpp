#pragma once

#include "gamehedge/options.hpp"
#include "gamehedge/polyhedral_union.hpp"

#include <iosfwd>

namespace gamehedge {

enum class Side { seller, buyer };
const char* to_string(Side s);

/// Sets at one node. For the seller: Y = Ya, X = Xa; for the buyer: Yb, Xb.
/// W is empty at terminal nodes.
struct NodeSets {
    ConvexPolyhedron Y, X;
    PolyhedralUnion W, V, Z;
};

struct SetFamily {
    Side side = Side::seller;
    bool american = false;
    std::vector<NodeSets> nodes;  // indexed like the model
};

struct RecursionOptions {
    std::size_t piece_cap = default_piece_cap;
    /// 0 reads GAMEHEDGE_THREADS (default 1).
    unsigned threads = 0;
};

SetFamily seller_sets(const Model& m, const GamePayoff& g, const RecursionOptions& opt = {});
SetFamily buyer_sets(const Model& m, const GamePayoff& g, const RecursionOptions& opt = {});
/// No-cancellation recursion: the seller hedges Y only, the buyer may exercise any time.
SetFamily american_sets(const Model& m, const GamePayoff& g, Side side,
                        const RecursionOptions& opt = {});

/// min {x : x e^i in Za_0}
Extended ask_price(const SetFamily& f, Eigen::Index i);
/// -min {z : z e^i in Zb_0}
Extended bid_price(const SetFamily& f, Eigen::Index i);

/// Portfolio process and own stopping rule on the path-expanded tree.
struct HedgingStrategy {
    Side side = Side::seller;
    Eigen::Index currency = 0;
    ExpandedTree tree;
    std::vector<VectorQ> portfolio;  // y_t at each tree node (time t)
    std::vector<bool> stops;         // own stopping time hits this node
    /// First stopping node on the path to each tree node (none if not yet stopped).
    std::vector<std::optional<std::size_t>> stopped_at;
};

HedgingStrategy seller_strategy(const SetFamily& f, const Model& m, const GamePayoff& g,
                                Eigen::Index i);
HedgingStrategy buyer_strategy(const SetFamily& f, const Model& m, const GamePayoff& g,
                               Eigen::Index i);

struct Settlement {
    bool ok = false;
    std::size_t node = 0;  // tree node where the option settles
    int time = 0;
    VectorQ payoff;        // Q paid by the seller (received by the buyer)
    VectorQ position;      // y - Q (seller) or y + Q (buyer), must lie in K
    std::string failure;
};

/// Follows the tree path to `leaf`; the counterparty stops at `counterparty_time` on it.
Settlement simulate(const HedgingStrategy& s, const GamePayoff& g, std::size_t leaf,
                    int counterparty_time);

/// Q_{st}: Y_t if s > t, X_s if s < t, X'_s if s = t, read at node `settle`.
VectorQ game_payoff_at(const PayoffTriple& p, int s, int t);

void dump_sets(std::ostream& os, const Model& m, const SetFamily& f);

}  // namespace gamehedge
