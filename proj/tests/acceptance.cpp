// One PASS/FAIL line per acceptance criterion. Optional arguments select criteria by number.

#include "gamehedge/duality.hpp"
#include "gamehedge/pricing.hpp"
#include "gamehedge/random_models.hpp"

#include "golden.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

using namespace gamehedge;

namespace {

constexpr double table_tolerance = 1e-5;
constexpr std::size_t corpus_size = 100;
constexpr unsigned corpus_seed = 2024;

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Records a failed check without stopping the criterion.
class Checker {
public:
    void expect(bool ok, const std::string& what) {
        if (ok) return;
        if (failures_++ < 5) notes_ << (notes_.tellp() > 0 ? "; " : "") << what;
    }
    bool ok() const { return failures_ == 0; }
    std::string notes() const {
        std::string s = notes_.str();
        if (failures_ > 5) s += "; +" + std::to_string(failures_ - 5) + " more";
        return s;
    }

private:
    std::size_t failures_ = 0;
    std::ostringstream notes_;
};

nlohmann::json data_file(const std::string& name) {
    std::ifstream f(std::string(GAMEHEDGE_DATA_DIR) + "/" + name);
    if (!f) throw std::runtime_error("missing data file " + name);
    return nlohmann::json::parse(f);
}

struct Case {
    Model model;
    GamePayoff payoff;
};

Case load_case(const char* model, const char* option) {
    Model m = model_from_json(data_file(model));
    GamePayoff g = payoff_from_json(m, data_file(option));
    return {std::move(m), std::move(g)};
}

bool same(const Extended& a, const Extended& b) {
    return a.kind == b.kind && (!a.finite() || a.value == b.value);
}

bool equals(const Extended& e, const char* exact) { return e.finite() && e.value == parse_rational(exact); }

PolyhedralUnion halfplane(Rational a, Rational b, Rational c) {
    return PolyhedralUnion::of(canonical(ConvexPolyhedron(2, {{make_vector({a, b}), c}})));
}

Outcome example_prices() {
    Checker c;
    Case ex = load_case("example1_model.json", "example1_option.json");
    SetFamily a = seller_sets(ex.model, ex.payoff), b = buyer_sets(ex.model, ex.payoff);
    for (Eigen::Index i = 0; i < 2; ++i) {
        c.expect(equals(ask_price(a, i), golden::example1_ask[i]), "ask " + std::to_string(i + 1) + " = " + to_string(ask_price(a, i)));
        c.expect(equals(bid_price(b, i), golden::example1_bid[i]), "bid " + std::to_string(i + 1) + " = " + to_string(bid_price(b, i)));
    }
    c.expect(same_set(a.nodes[*ex.model.find("uu")].Z, halfplane(16, 1, 9)), "Za at uu");
    c.expect(same_set(a.nodes[*ex.model.find("d")].Z, halfplane(6, 1, 1)), "Za at d");
    // Zb at the root is {10x + y >= -11/5}. The variant 6x + y >= -11/5 is not K-stable at
    // the root and would give a currency 1 bid of 11/30 instead of 11/50.
    c.expect(same_set(b.nodes[0].Z, halfplane(10, 1, Rational(-11, 5))), "Zb at root");
    c.expect(!in_polar(ex.model.node(0).rates, make_vector({6, 1})), "6x + y variant is K-stable");
    return {c.ok(), c.ok() ? "ask (2/5, 4), bid (11/50, 11/5), Za(uu), Za(d), Zb(root) equal" : c.notes()};
}

Outcome example_strategies() {
    Checker c;
    Case ex = load_case("example1_model.json", "example1_option.json");
    SetFamily a = seller_sets(ex.model, ex.payoff), b = buyer_sets(ex.model, ex.payoff);
    HedgingStrategy s = seller_strategy(a, ex.model, ex.payoff, 1);
    HedgingStrategy w = buyer_strategy(b, ex.model, ex.payoff, 1);
    const Model& t = s.tree.tree;
    const std::size_t u = *t.find("u"), d = *t.find("d"), uu = *t.find("u/uu");
    c.expect(s.portfolio[0] == make_vector({0, 4}), "seller y0");
    c.expect(s.portfolio[u] == make_vector({0, 4}) && s.portfolio[d] == make_vector({0, 4}), "seller y1");
    c.expect(!s.stops[0] && s.stops[u] && s.stops[d], "seller stops at time 1");
    c.expect(w.portfolio[u] == make_vector({Rational(-3, 10), Rational(4, 5)}), "buyer y1");
    c.expect(w.stopped_at[uu] && *w.stopped_at[uu] == uu, "buyer stops at uu at time 2");
    std::size_t runs = 0;
    for (const HedgingStrategy* h : {&s, &w})
        for (std::size_t leaf : t.level(t.horizon()))
            for (int k = 0; k <= t.horizon(); ++k, ++runs) {
                Settlement r = simulate(*h, ex.payoff, leaf, k);
                c.expect(r.ok, std::string(to_string(h->side)) + " at " + t.node(leaf).id + ": " + r.failure);
            }
    return {c.ok(), c.ok() ? std::to_string(runs) + " simulations solvent" : c.notes()};
}

Outcome counterexample() {
    Checker c;
    Case ex = load_case("example2_model.json", "example2_option.json");
    const Extended ask = ask_price(seller_sets(ex.model, ex.payoff), 0);
    OracleReport o = ask_oracle(ex.model, ex.payoff, 0);
    OneStepDual k = kifer_va(ex.model, ex.payoff, 0);
    c.expect(equals(ask, golden::example2_ask), "ask = " + to_string(ask));
    c.expect(o.values.size() == 2, "two stopping times");
    if (o.values.size() == 2) {
        c.expect(equals(o.values[0], "-2"), "primal at sigma=0 is " + to_string(o.values[0]));
        c.expect(equals(o.values[1], "0"), "primal at sigma=1 is " + to_string(o.values[1]));
    }
    c.expect(k.value == parse_rational(golden::example2_kifer), "untruncated dual = " + to_string(k.value));
    const bool flagged = ask.finite() && k.value != ask.value;
    c.expect(flagged, "mismatch not flagged");
    return {c.ok(), c.ok() ? "ask -2, primal (-2, 0), untruncated dual -3, mismatch flagged" : c.notes()};
}

struct CellKey {
    long strike, penalty;
    double k;
    bool american;
    auto operator<=>(const CellKey&) const = default;
};

std::map<CellKey, std::pair<double, double>> cell_cache;

std::pair<double, double> price_cell(const CellKey& key) {
    auto it = cell_cache.find(key);
    if (it != cell_cache.end()) return it->second;
    KornMullerParams p;
    p.k = approximate(key.k, 1e-12L);
    const Model m = build_korn_muller(p);
    const GamePayoff g = basket_put(m, {key.strike, key.penalty});
    SetFamily s = key.american ? american_sets(m, g, Side::seller) : seller_sets(m, g);
    SetFamily b = key.american ? american_sets(m, g, Side::buyer) : buyer_sets(m, g);
    const Extended ask = ask_price(s, 2), bid = bid_price(b, 2);
    const double nan = std::nan("");
    std::pair<double, double> r{bid.finite() ? to_double(bid.value) : nan, ask.finite() ? to_double(ask.value) : nan};
    cell_cache.emplace(key, r);
    return r;
}

template <std::size_t N>
Outcome table_cells(const std::array<golden::Cell, N>& cells, bool by_strike, bool american) {
    Checker c;
    double worst = 0;
    for (const golden::Cell& cell : cells) {
        CellKey key{100, 5, cell.k, american};
        if (by_strike) key.strike = static_cast<long>(cell.row);
        else if (!american) key.penalty = static_cast<long>(cell.row);
        const auto [bid, ask] = price_cell(key);
        const double dev = std::max(std::fabs(bid - cell.bid), std::fabs(ask - cell.ask));
        worst = std::isnan(dev) ? INFINITY : std::max(worst, dev);
        std::ostringstream what;
        what << (american ? "American" : by_strike ? "K=" : "p=") << (american ? "" : std::to_string(long(cell.row)))
             << " k=" << cell.k << " bid " << bid << " ask " << ask;
        c.expect(dev <= table_tolerance, what.str());
    }
    std::ostringstream d;
    d << "max abs deviation " << std::scientific << std::setprecision(2) << worst;
    return {c.ok(), c.ok() ? d.str() : d.str() + "; " + c.notes()};
}

Outcome table1() { return table_cells(golden::table1, true, false); }

Outcome table2() {
    Outcome game = table_cells(golden::table2, false, false);
    Outcome am = table_cells(golden::american, false, true);
    return {game.pass && am.pass, "game rows: " + game.detail + "; American: " + am.detail};
}

struct Sample {
    Model model;
    GamePayoff payoff;
};

const std::vector<Sample>& corpus() {
    static const std::vector<Sample> c = [] {
        std::vector<Sample> out;
        std::mt19937_64 rng(corpus_seed);
        for (std::size_t n = 0; n < corpus_size; ++n) {
            Model m = random_binary_model(rng, 1 + static_cast<int>(n % 3));
            GamePayoff g = random_game_payoff(m, rng);
            out.push_back({std::move(m), std::move(g)});
        }
        return out;
    }();
    return c;
}

Outcome oracle_equivalence() {
    Checker c;
    std::size_t compared = 0;
    for (std::size_t n = 0; n < corpus().size(); ++n) {
        const Sample& s = corpus()[n];
        c.expect(check_no_arbitrage(s.model).arbitrage_free, "model " + std::to_string(n) + " admits arbitrage");
        c.expect(!validate_game_payoff(s.model, s.payoff), "payoff " + std::to_string(n) + " invalid");
        SetFamily a = seller_sets(s.model, s.payoff);
        for (Eigen::Index i = 0; i < 2; ++i, ++compared) {
            const Extended x = ask_price(a, i), y = ask_oracle(s.model, s.payoff, i).value;
            c.expect(same(x, y), "model " + std::to_string(n) + " currency " + std::to_string(i + 1) + ": " +
                                     to_string(x) + " vs " + to_string(y));
        }
    }
    return {c.ok(), c.ok() ? std::to_string(compared) + " exact matches over " + std::to_string(corpus().size()) + " models"
                           : c.notes()};
}

Outcome symmetry() {
    Checker c;
    std::size_t set_checks = 0;
    for (std::size_t n = 0; n < corpus().size(); ++n) {
        const Sample& s = corpus()[n];
        SetFamily b = buyer_sets(s.model, s.payoff);
        SetFamily an = seller_sets(s.model, negate_payoff(s.payoff));
        for (Eigen::Index i = 0; i < 2; ++i) {
            const Extended bid = bid_price(b, i), ask = ask_price(an, i);
            c.expect(bid.finite() && ask.finite() && bid.value == -ask.value,
                     "model " + std::to_string(n) + " currency " + std::to_string(i + 1));
        }
        if (n < 10) {
            for (std::size_t v = 0; v < s.model.size(); ++v)
                c.expect(same_set(b.nodes[v].Z, an.nodes[v].Z), "set mismatch in model " + std::to_string(n));
            ++set_checks;
        }
    }
    return {c.ok(), c.ok() ? "bid = -ask(negated) on " + std::to_string(corpus().size()) + " models, sets equal on " +
                                 std::to_string(set_checks)
                           : c.notes()};
}

Rational draw(std::mt19937_64& rng, long lo, long hi, long den) {
    return Rational(std::uniform_int_distribution<long>(lo, hi)(rng), den);
}

RandomisedStoppingTime random_chi(const Model& m, std::mt19937_64& rng) {
    std::vector<Rational> rest(m.size(), Rational(1));
    RandomisedStoppingTime chi{std::vector<Rational>(m.size(), Rational(0))};
    for (int t = 0; t <= m.horizon(); ++t)
        for (std::size_t n : m.level(t)) {
            if (t > 0) {
                const std::size_t p = m.node(n).predecessors.front();
                rest[n] = rest[p] - chi.mass[p];
            }
            chi.mass[n] = m.is_terminal(n) ? rest[n] : rest[n] * draw(rng, 0, 4, 4);
        }
    return chi;
}

ApproxPair random_pair(const Model& m, Eigen::Index i, std::mt19937_64& rng) {
    ApproxPair p{std::vector<Rational>(m.size(), Rational(0)), {}};
    Rational total = 0;
    for (std::size_t leaf : m.level(m.horizon())) total += p.probability[leaf] = draw(rng, 1, 4, 1);
    for (std::size_t leaf : m.level(m.horizon())) p.probability[leaf] /= total;
    for (std::size_t n = 0; n < m.size(); ++n) {
        VectorQ w = zeros(m.currencies());
        for (const auto& g : m.polar(n).generators) w += draw(rng, 0, 3, 1) * g;
        if (w(i) == 0) w = m.polar(n).generators.front();
        p.S.push_back(w / w(i));
    }
    return p;
}

Outcome invariants() {
    Checker c;
    std::mt19937_64 rng(corpus_seed + 1);
    std::size_t polar_samples = 0, z_points = 0, truncations = 0, dual_samples = 0;

    for (std::size_t n = 0; n < 20; ++n) {
        const Model& m = corpus()[n].model;
        for (std::size_t v = 0; v < m.size(); ++v) {
            const MatrixQ& r = m.node(v).rates;
            for (int k = 0; k < 40; ++k, ++polar_samples) {
                VectorQ w = make_vector({draw(rng, -1, 40, 4), draw(rng, -1, 40, 4)});
                bool direct = true;
                for (Eigen::Index i = 0; i < 2; ++i) {
                    direct = direct && w(i) >= 0;
                    for (Eigen::Index j = 0; j < 2; ++j) direct = direct && r(i, j) * w(i) >= w(j);
                }
                bool by_k = true;
                for (const auto& g : m.solvency(v).generators) by_k = by_k && dot(w, g) >= 0;
                c.expect(in_polar(r, w) == direct && by_k == direct && cone_contains(m.polar(v), w) == direct,
                         "polar disagreement");
            }
        }
    }

    for (std::size_t n = 0; n < 10; ++n) {
        const Sample& s = corpus()[n];
        for (const SetFamily& f : {seller_sets(s.model, s.payoff), buyer_sets(s.model, s.payoff)})
            for (std::size_t v = 0; v < s.model.size(); ++v)
                for (const auto& piece : f.nodes[v].Z.pieces) {
                    const ConvexPolyhedron p = piece.has_vrep() ? piece : hrep_to_vrep(piece);
                    for (const auto& x : p.generators().vertices)
                        for (const auto& g : s.model.solvency(v).generators) {
                            ++z_points;
                            c.expect(contains(f.nodes[v].Z, x + draw(rng, 1, 8, 2) * g), "Z not cone-stable");
                        }
                }
    }

    for (std::size_t n = 0; n < 30; ++n) {
        const Sample& s = corpus()[n];
        const Model& m = s.model;
        const std::vector<Rational> ones(m.size(), Rational(1));
        const auto witness = check_no_arbitrage(m).witness;
        for (const auto& sigma : enumerate_stopping_times(m)) {
            const RandomisedStoppingTime chi = random_chi(m, rng);
            const RandomisedStoppingTime cut = truncate(m, chi, sigma);
            ++truncations;
            bool unit_mass = is_randomised_stopping_time(m, cut);
            for (const Rational& total : value_at(m, ones, cut)) unit_mass = unit_mass && total == 1;
            c.expect(unit_mass, "truncation lost mass");
            if (m.horizon() > 2) continue;
            for (Eigen::Index i = 0; i < 2; ++i) {
                const Extended primal = primal_lp_ask(m, s.payoff, sigma, i);
                for (int k = 0; k < 4; ++k) {
                    const ApproxPair pair = k == 0 && witness ? martingale_pair(m, *witness, i) : random_pair(m, i, rng);
                    if (!check_approx_pair(m, pair, cut, i)) continue;
                    ++dual_samples;
                    c.expect(primal.finite() && dual_objective(m, sigma, chi, pair, s.payoff) <= primal.value,
                             "weak duality violated");
                }
            }
        }
    }
    c.expect(dual_samples >= 100, "too few admissible pairs: " + std::to_string(dual_samples));
    std::ostringstream d;
    d << polar_samples << " polar samples, " << z_points << " Z points, " << truncations << " truncations, "
      << dual_samples << " weak-duality triples";
    return {c.ok(), c.ok() ? d.str() : c.notes()};
}

struct Criterion {
    int number;
    const char* name;
    std::function<Outcome()> run;
    double time_limit;  // seconds; 0 means none
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all{
        {1, "two-step example exactness", example_prices, 1},
        {2, "two-step example strategies", example_strategies, 1},
        {3, "one-step counterexample", counterexample, 1},
        {4, "basket put strike table", table1, 0},
        {5, "basket put penalty table", table2, 0},
        {6, "oracle equivalence", oracle_equivalence, 120},
        {7, "bid/ask symmetry", symmetry, 0},
        {8, "invariant suites", invariants, 0},
    };
    std::set<int> wanted;
    for (int a = 1; a < argc; ++a) wanted.insert(std::atoi(argv[a]));

    int failed = 0;
    for (const Criterion& cr : all) {
        if (!wanted.empty() && !wanted.count(cr.number)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = cr.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (cr.time_limit > 0 && secs >= cr.time_limit) {
            o.pass = false;
            o.detail += "; over the " + std::to_string(static_cast<int>(cr.time_limit)) + " s budget";
        }
        failed += !o.pass;
        std::printf("criterion %d: %s  %s (%s, %.2f s)\n", cr.number, o.pass ? "PASS" : "FAIL", cr.name,
                    o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
