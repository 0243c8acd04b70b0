#pragma once

#include "gamehedge/polyhedron.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace gamehedge {

enum class ModelMode { tree, lattice };

struct Node {
    std::string id;
    int time = 0;
    std::vector<std::size_t> successors;
    std::vector<std::size_t> predecessors;
    MatrixQ rates;  // rates(i, j): units of currency i bought with one unit of j
};

/// Event tree or recombinant lattice with bid-ask exchange rates at every node.
class Model {
public:
    Model(Eigen::Index currencies, ModelMode mode, std::vector<Node> nodes);

    Eigen::Index currencies() const { return d_; }
    ModelMode mode() const { return mode_; }
    int horizon() const { return static_cast<int>(levels_.size()) - 1; }
    std::size_t size() const { return nodes_.size(); }
    const Node& node(std::size_t n) const { return nodes_[n]; }
    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<std::size_t>& level(int t) const { return levels_[static_cast<std::size_t>(t)]; }
    bool is_terminal(std::size_t n) const { return nodes_[n].successors.empty(); }
    std::size_t root() const { return 0; }
    std::optional<std::size_t> find(const std::string& id) const;

    const PolyCone& solvency(std::size_t n) const { return solvency_[n]; }
    const PolyCone& polar(std::size_t n) const { return polar_[n]; }

private:
    Eigen::Index d_;
    ModelMode mode_;
    std::vector<Node> nodes_;
    std::vector<std::vector<std::size_t>> levels_;
    std::vector<PolyCone> solvency_;
    std::vector<PolyCone> polar_;
};

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Throws ModelError unless rates are positive with a unit diagonal.
void validate_rates(const MatrixQ& rates);

/// Generated by e^i and rates(i, j) e^i - e^j; H-rep attached.
PolyCone solvency_cone(const MatrixQ& rates);
PolyCone polar_cone(const PolyCone& k);
/// w >= 0 and rates(i, j) w_i >= w_j for all i, j.
bool in_polar(const MatrixQ& rates, const VectorQ& w);

struct KornMullerParams {
    int steps = 10;
    Rational s1 = 40, s2 = 50;
    double sigma1 = 0.15, sigma2 = 0.1, rho = 0.5;
    Rational k = 0;
};

/// Three-currency recombinant lattice keyed by outcome counts (n1..n4), plus one extra
/// step at which every time-T node has a single successor with the same rates.
Model build_korn_muller(const KornMullerParams& p, bool extra_step = true);
/// Rational factor pairs used by build_korn_muller, in lattice key order.
std::vector<std::pair<Rational, Rational>> korn_muller_factors(const KornMullerParams& p);

Model model_from_json(const nlohmann::json& doc);
nlohmann::json model_to_json(const Model& m);
/// Exact rational from a JSON string ("p/q", decimal) or number (via its shortest text).
Rational json_rational(const nlohmann::json& v);

/// Tree with one node per lattice path; origin[n] is the source node of tree node n.
struct ExpandedTree {
    Model tree;
    std::vector<std::size_t> origin;
};
ExpandedTree expand_to_tree(const Model& m);
/// Node indices from the root to n (tree mode: unique path).
std::vector<std::size_t> path_to(const Model& m, std::size_t n);

struct NoArbitrageReport {
    bool arbitrage_free = false;
    /// Unnormalised consistent prices, one per node (aggregating over successors).
    std::optional<std::vector<VectorQ>> witness;
    /// Nodes whose polar cone is a single ray (no friction there).
    std::vector<std::size_t> degenerate_nodes;
};

NoArbitrageReport check_no_arbitrage(const Model& m);

}  // namespace gamehedge
