#include "golden.hpp"

#include "gamehedge/duality.hpp"
#include "gamehedge/pricing.hpp"
#include "gamehedge/random_models.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace gh = gamehedge;

namespace {

enum ExitCode { ok = 0, mismatch = 1, parse_error = 2, invalid_input = 3, piece_cap = 4, arbitrage = 5 };

struct Failure {
    int code;
    std::string message;
};

struct Config {
    std::string model_file, korn_muller, option_file, basket_put;
    int currency = 0;  // 1-based; 0 means all
    std::string side;
    bool american = false;
    std::string scenario, dump_sets;
    bool compare = false;
    double tolerance = 1e-5;
    int random = 0;
    std::uint64_t seed = 1;
    std::size_t piece_cap = gh::default_piece_cap;
    bool strict = false, counterexample = false;
    int table = 1;
    std::string format = "table";
    std::vector<double> k_filter;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream in(s);
    for (std::string item; std::getline(in, item, sep);) out.push_back(item);
    return out;
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Failure{parse_error, "cannot open " + path};
    try {
        return nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception& e) {
        throw Failure{parse_error, path + ": " + e.what()};
    }
}

gh::KornMullerParams korn_muller_params(const std::string& text) {
    auto f = split(text, ',');
    if (f.size() != 7) throw Failure{parse_error, "--korn-muller expects T,S1,S2,sigma1,sigma2,rho,k"};
    gh::KornMullerParams p;
    try {
        p.steps = std::stoi(f[0]);
        p.s1 = gh::parse_rational(f[1]);
        p.s2 = gh::parse_rational(f[2]);
        p.sigma1 = std::stod(f[3]);
        p.sigma2 = std::stod(f[4]);
        p.rho = std::stod(f[5]);
        p.k = gh::parse_rational(f[6]);
    } catch (const std::exception& e) {
        throw Failure{parse_error, std::string("--korn-muller: ") + e.what()};
    }
    return p;
}

gh::Model load_model(const Config& c) {
    try {
        if (!c.korn_muller.empty()) return gh::build_korn_muller(korn_muller_params(c.korn_muller));
        if (c.model_file.empty()) throw Failure{parse_error, "no model given (--model or --korn-muller)"};
        return gh::model_from_json(read_json(c.model_file));
    } catch (const gh::ParseError& e) {
        throw Failure{parse_error, e.what()};
    } catch (const gh::ModelError& e) {
        throw Failure{parse_error, e.what()};
    } catch (const nlohmann::json::exception& e) {
        throw Failure{parse_error, e.what()};
    }
}

gh::GamePayoff load_option(const Config& c, const gh::Model& m) {
    gh::GamePayoff g;
    try {
        if (!c.basket_put.empty()) {
            auto f = split(c.basket_put, ',');
            if (f.size() != 2) throw Failure{parse_error, "--basket-put expects K,p"};
            g = gh::basket_put(m, {gh::parse_rational(f[0]), gh::parse_rational(f[1])});
        } else if (!c.option_file.empty()) {
            g = gh::payoff_from_json(m, read_json(c.option_file));
        } else {
            throw Failure{parse_error, "no option given (--option or --basket-put)"};
        }
    } catch (const gh::ParseError& e) {
        throw Failure{parse_error, e.what()};
    } catch (const std::invalid_argument& e) {
        throw Failure{invalid_input, e.what()};
    }
    if (auto v = gh::validate_game_payoff(m, g))
        throw Failure{invalid_input, "payoff invalid at node " + m.node(v->node).id + ": " + v->condition};
    return g;
}

void check_arbitrage(const Config& c, const gh::Model& m) {
    gh::NoArbitrageReport r = gh::check_no_arbitrage(m);
    if (r.arbitrage_free) return;
    std::cerr << "warning: the model admits arbitrage\n";
    if (c.strict) throw Failure{arbitrage, "arbitrage (strict mode)"};
}

std::vector<Eigen::Index> currencies(const Config& c, const gh::Model& m) {
    if (c.currency == 0) {
        std::vector<Eigen::Index> all;
        for (Eigen::Index i = 0; i < m.currencies(); ++i) all.push_back(i);
        return all;
    }
    if (c.currency < 1 || c.currency > m.currencies())
        throw Failure{invalid_input, "--currency out of range"};
    return {c.currency - 1};
}

gh::RecursionOptions recursion(const Config& c) { return {c.piece_cap, 0}; }

std::string decimal(const gh::Extended& e) { return e.finite() ? gh::to_decimal(e.value) : gh::to_string(e); }

double as_double(const gh::Extended& e) {
    if (e.finite()) return gh::to_double(e.value);
    return e.kind == gh::Extended::Kind::plus_infinity ? INFINITY : -INFINITY;
}

void dump(const Config& c, const gh::Model& m, const std::vector<const gh::SetFamily*>& fams) {
    if (c.dump_sets.empty()) return;
    std::ofstream out(c.dump_sets);
    if (!out) throw Failure{parse_error, "cannot write " + c.dump_sets};
    for (const auto* f : fams) gh::dump_sets(out, m, *f);
}

int cmd_price(const Config& c) {
    gh::Model m = load_model(c);
    gh::GamePayoff g = load_option(c, m);
    check_arbitrage(c, m);
    const bool ask = c.side != "buyer", bid = c.side != "seller";
    std::optional<gh::SetFamily> sf, bf;
    if (ask) sf = c.american ? gh::american_sets(m, g, gh::Side::seller, recursion(c)) : gh::seller_sets(m, g, recursion(c));
    if (bid) bf = c.american ? gh::american_sets(m, g, gh::Side::buyer, recursion(c)) : gh::buyer_sets(m, g, recursion(c));
    std::vector<const gh::SetFamily*> fams;
    if (sf) fams.push_back(&*sf);
    if (bf) fams.push_back(&*bf);
    dump(c, m, fams);

    if (c.format == "csv") std::cout << "currency,bid,ask,bid_exact,ask_exact\n";
    for (Eigen::Index i : currencies(c, m)) {
        std::optional<gh::Extended> a, b;
        if (sf) a = gh::ask_price(*sf, i);
        if (bf) b = gh::bid_price(*bf, i);
        auto dec = [](const auto& x) { return x ? decimal(*x) : std::string("-"); };
        auto exact = [](const auto& x) { return x ? gh::to_string(*x) : std::string("-"); };
        if (c.format == "csv") {
            std::cout << i + 1 << ',' << dec(b) << ',' << dec(a) << ',' << exact(b) << ',' << exact(a) << '\n';
        } else {
            std::cout << "currency " << i + 1 << ": bid " << dec(b) << " (" << exact(b) << ")  ask " << dec(a)
                      << " (" << exact(a) << ")\n";
        }
    }
    return ok;
}

std::size_t scenario_leaf(const gh::Model& tree, const gh::ExpandedTree& e, const gh::Model& m,
                          const std::string& scenario) {
    if (auto n = tree.find(scenario)) return *n;
    std::optional<std::size_t> hit;
    for (std::size_t n = 0; n < tree.size(); ++n) {
        if (m.node(e.origin[n]).id != scenario || !tree.is_terminal(n)) continue;
        if (hit) throw Failure{invalid_input, "scenario " + scenario + " has several paths; give the full id"};
        hit = n;
    }
    if (!hit) throw Failure{invalid_input, "unknown scenario " + scenario};
    return *hit;
}

int cmd_hedge(const Config& c) {
    gh::Model m = load_model(c);
    gh::GamePayoff g = load_option(c, m);
    check_arbitrage(c, m);
    const Eigen::Index i = c.currency == 0 ? 0 : currencies(c, m).front();
    const bool buyer = c.side == "buyer";
    gh::SetFamily f = buyer ? gh::buyer_sets(m, g, recursion(c)) : gh::seller_sets(m, g, recursion(c));
    dump(c, m, {&f});
    gh::HedgingStrategy s = buyer ? gh::buyer_strategy(f, m, g, i) : gh::seller_strategy(f, m, g, i);
    const gh::Model& tree = s.tree.tree;

    std::cout << gh::to_string(s.side) << " strategy, currency " << i + 1 << "\n";
    std::cout << std::left << std::setw(16) << "node" << std::setw(4) << "t" << std::setw(28) << "portfolio"
              << "stop\n";
    for (std::size_t n = 0; n < tree.size(); ++n) {
        std::cout << std::setw(16) << tree.node(n).id << std::setw(4) << tree.node(n).time << std::setw(28)
                  << gh::format_vector(s.portfolio[n]) << (s.stops[n] ? "yes" : "") << "\n";
    }
    if (c.scenario.empty()) return ok;

    const std::size_t leaf = scenario_leaf(tree, s.tree, m, c.scenario);
    int code = ok;
    std::cout << "scenario " << tree.node(leaf).id << "\n";
    for (int t = 0; t <= tree.horizon(); ++t) {
        gh::Settlement r = gh::simulate(s, g, leaf, t);
        std::cout << "  counterparty stops at " << t << ": settles at " << tree.node(r.node).id << " (t=" << r.time
                  << "), payoff " << gh::format_vector(r.payoff) << ", position " << gh::format_vector(r.position)
                  << (r.ok ? ", solvent" : ", FAILED: " + r.failure) << "\n";
        if (!r.ok) code = mismatch;
    }
    return code;
}

bool same(const gh::Extended& a, const gh::Extended& b) {
    return a.kind == b.kind && (!a.finite() || a.value == b.value);
}

gh::Extended negated(const gh::Extended& e) {
    if (!e.finite())
        return e.kind == gh::Extended::Kind::plus_infinity ? gh::Extended::minus_inf() : gh::Extended::plus_inf();
    return {gh::Extended::Kind::finite, -e.value};
}

// Construction against the primal oracle for ask and bid, plus the bid/ask symmetry.
bool verify_model(const gh::Model& m, const gh::GamePayoff& g, const std::vector<Eigen::Index>& cur,
                  const gh::RecursionOptions& opt, nlohmann::json* report) {
    const gh::ExpandedTree e = gh::expand_to_tree(m);
    const gh::GamePayoff gt = gh::pull_back(g, e.origin);
    const gh::SetFamily sf = gh::seller_sets(m, g, opt);
    const gh::SetFamily bf = gh::buyer_sets(m, g, opt);
    const gh::SetFamily nf = gh::seller_sets(m, gh::negate_payoff(g), opt);
    bool all = true;
    for (Eigen::Index i : cur) {
        const gh::Extended ask = gh::ask_price(sf, i), bid = gh::bid_price(bf, i);
        const gh::OracleReport ao = gh::ask_oracle(e.tree, gt, i);
        const gh::OracleReport bo = gh::bid_oracle(e.tree, gt, i);
        const bool sym = same(bid, negated(gh::ask_price(nf, i)));
        const bool match = same(ask, ao.value) && same(bid, bo.value) && sym;
        all = all && match;
        if (report) {
            (*report)[std::to_string(i + 1)] = {{"ask", gh::verification_report(e.tree, ao, ask)},
                                                {"bid", gh::verification_report(e.tree, bo, bid)},
                                                {"symmetry", sym}};
        }
    }
    return all;
}

int cmd_verify(const Config& c) {
    if (c.counterexample) {
        gh::Model m = gh::model_from_json(nlohmann::json::parse(golden::example2_model));
        gh::GamePayoff g = gh::payoff_from_json(m, nlohmann::json::parse(golden::example2_option));
        const gh::Extended ask = gh::ask_price(gh::seller_sets(m, g), 0);
        const gh::OracleReport o = gh::ask_oracle(m, g, 0);
        const gh::OneStepDual k = gh::kifer_va(m, g, 0);
        const gh::OneStepDual d = gh::one_step_dual(m, g, 0);
        std::cout << "ask (construction)      " << gh::to_string(ask) << "\n";
        for (std::size_t s = 0; s < o.values.size(); ++s)
            std::cout << "primal LP at sigma = " << gh::format_stopping_time(m, o.stopping_times[s]) << "  "
                      << gh::to_string(o.values[s]) << "\n";
        std::cout << "dual (truncated)        " << gh::to_string(d.value) << " (sigma=0: " << gh::to_string(d.sigma0)
                  << ", sigma=1: " << gh::to_string(d.sigma1) << ")\n";
        std::cout << "V^a (untruncated)       " << gh::to_string(k.value) << " (sigma=0: " << gh::to_string(k.sigma0)
                  << ", sigma=1: " << gh::to_string(k.sigma1) << ")\n";
        if (k.value != ask.value) std::cout << "representations differ\n";
        const bool good = ask.finite() && same(ask, o.value) && d.value == ask.value &&
                          gh::to_string(ask) == golden::example2_ask && gh::to_string(k.value) == golden::example2_kifer;
        std::cout << (good ? "match" : "MISMATCH") << "\n";
        return good ? ok : mismatch;
    }
    if (c.random > 0) {
        std::mt19937_64 rng(c.seed);
        int matches = 0;
        for (int n = 0; n < c.random; ++n) {
            const int horizon = 1 + n % 3;
            gh::Model m = gh::random_binary_model(rng, horizon);
            gh::GamePayoff g = gh::random_game_payoff(m, rng);
            if (verify_model(m, g, {0, 1}, recursion(c), nullptr)) ++matches;
            else std::cout << "mismatch on model " << n << "\n";
        }
        std::cout << matches << "/" << c.random << " exact matches\n";
        return matches == c.random ? ok : mismatch;
    }
    gh::Model m = load_model(c);
    gh::GamePayoff g = load_option(c, m);
    check_arbitrage(c, m);
    nlohmann::json report;
    bool good;
    try {
        good = verify_model(m, g, currencies(c, m), recursion(c), &report);
    } catch (const gh::EnumerationLimit& e) {
        throw Failure{invalid_input, e.what()};
    }
    std::cout << report.dump(2) << "\n" << (good ? "match" : "MISMATCH") << "\n";
    return good ? ok : mismatch;
}

struct TableRow {
    double row, k;
    gh::Extended bid, ask;
};

TableRow price_cell(const Config& c, double row, double k, bool american, int table) {
    gh::KornMullerParams p;
    p.k = gh::approximate(k, 1e-12L);
    const gh::Model m = gh::build_korn_muller(p);
    gh::BasketPutParams b;
    if (table == 1) b.strike = static_cast<long>(row);
    else b.penalty = static_cast<long>(row);
    const gh::GamePayoff g = gh::basket_put(m, b);
    const auto opt = recursion(c);
    gh::SetFamily sf = american ? gh::american_sets(m, g, gh::Side::seller, opt) : gh::seller_sets(m, g, opt);
    gh::SetFamily bf = american ? gh::american_sets(m, g, gh::Side::buyer, opt) : gh::buyer_sets(m, g, opt);
    return {row, k, gh::bid_price(bf, 2), gh::ask_price(sf, 2)};
}

int cmd_tables(const Config& c) {
    if (c.table != 1 && c.table != 2) throw Failure{parse_error, "--table must be 1 or 2"};
    std::vector<golden::Cell> cells;
    if (c.table == 1) cells.assign(golden::table1.begin(), golden::table1.end());
    else cells.assign(golden::table2.begin(), golden::table2.end());
    std::vector<bool> is_american(cells.size(), false);
    if (c.table == 2 && c.american) {
        cells.insert(cells.end(), golden::american.begin(), golden::american.end());
        is_american.resize(cells.size(), true);
    }
    auto wanted = [&](double k) {
        return c.k_filter.empty() || std::find(c.k_filter.begin(), c.k_filter.end(), k) != c.k_filter.end();
    };

    const char* label = c.table == 1 ? "K" : "p";
    std::cout << label << ",k,bid,ask";
    if (c.compare) std::cout << ",ref_bid,ref_ask,deviation";
    std::cout << "\n";
    double worst = 0;
    for (std::size_t n = 0; n < cells.size(); ++n) {
        const golden::Cell& cell = cells[n];
        if (!wanted(cell.k)) continue;
        TableRow r = price_cell(c, cell.row, cell.k, is_american[n], is_american[n] ? 1 : c.table);
        std::ostringstream name;
        if (is_american[n]) name << "American";
        else name << cell.row;
        std::cout << name.str() << ',' << cell.k << ',' << decimal(r.bid) << ',' << decimal(r.ask);
        if (c.compare) {
            const double dev = std::max(std::fabs(as_double(r.bid) - cell.bid), std::fabs(as_double(r.ask) - cell.ask));
            worst = std::max(worst, std::isnan(dev) ? INFINITY : dev);
            std::cout << std::fixed << std::setprecision(6) << ',' << cell.bid << ',' << cell.ask << ','
                      << std::scientific << std::setprecision(2) << dev << std::defaultfloat;
        }
        std::cout << std::endl;
    }
    if (!c.compare) return ok;
    std::cout << "max abs deviation: " << std::scientific << std::setprecision(3) << worst << " (tolerance "
              << c.tolerance << ")\n";
    return worst <= c.tolerance ? ok : mismatch;
}

int cmd_examples(const Config& c) {
    bool good = true;
    gh::Model m1 = gh::model_from_json(nlohmann::json::parse(golden::example1_model));
    gh::GamePayoff g1 = gh::payoff_from_json(m1, nlohmann::json::parse(golden::example1_option));
    gh::SetFamily s1 = gh::seller_sets(m1, g1), b1 = gh::buyer_sets(m1, g1);
    std::cout << "two-step example\n";
    for (Eigen::Index i = 0; i < 2; ++i) {
        const std::string a = gh::to_string(gh::ask_price(s1, i)), b = gh::to_string(gh::bid_price(b1, i));
        std::cout << "  currency " << i + 1 << ": bid " << b << "  ask " << a << "\n";
        good = good && a == golden::example1_ask[i] && b == golden::example1_bid[i];
    }
    gh::Model m2 = gh::model_from_json(nlohmann::json::parse(golden::example2_model));
    gh::GamePayoff g2 = gh::payoff_from_json(m2, nlohmann::json::parse(golden::example2_option));
    const std::string a2 = gh::to_string(gh::ask_price(gh::seller_sets(m2, g2), 0));
    const std::string k2 = gh::to_string(gh::kifer_va(m2, g2, 0).value);
    std::cout << "one-step counterexample\n  currency 1: ask " << a2 << "  V^a " << k2 << "\n";
    good = good && a2 == golden::example2_ask && k2 == golden::example2_kifer;
    if (!c.compare) return ok;
    std::cout << (good ? "match" : "MISMATCH") << "\n";
    return good ? ok : mismatch;
}

void add_input_options(CLI::App* app, Config& c) {
    auto* model = app->add_option("--model", c.model_file, "Model file (JSON)");
    auto* km = app->add_option("--korn-muller", c.korn_muller, "Korn-Muller lattice T,S1,S2,sigma1,sigma2,rho,k");
    model->excludes(km);
    auto* opt = app->add_option("--option", c.option_file, "Option file (JSON)");
    auto* put = app->add_option("--basket-put", c.basket_put, "Game basket put K,p");
    opt->excludes(put);
    app->add_option("--currency", c.currency, "Currency index, 1-based (default: all)");
    app->add_option("--side", c.side, "seller or buyer")->check(CLI::IsMember({"seller", "buyer"}));
    app->add_option("--piece-cap", c.piece_cap, "Maximum pieces per polyhedral union");
    app->add_flag("--strict", c.strict, "Fail when the model admits arbitrage");
    app->add_option("--dump-sets", c.dump_sets, "Write the set recursion to FILE");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pricing and hedging of game options under proportional transaction costs"};
    app.require_subcommand(1);
    Config c;

    auto* price = app.add_subcommand("price", "Bid and ask prices");
    add_input_options(price, c);
    price->add_flag("--american", c.american, "Price the American option (no cancellation)");
    price->add_option("--format", c.format, "table or csv")->check(CLI::IsMember({"table", "csv"}));

    auto* hedge = app.add_subcommand("hedge", "Optimal hedging strategy");
    add_input_options(hedge, c);
    hedge->add_option("--scenario", c.scenario, "Terminal node to simulate against");

    auto* verify = app.add_subcommand("verify", "Check prices against the primal LP oracle");
    add_input_options(verify, c);
    verify->add_flag("--counterexample", c.counterexample, "Two dual representations on the one-step counterexample");
    verify->add_option("--random", c.random, "Number of random binary tree models");
    verify->add_option("--seed", c.seed, "Seed for --random");

    auto* tables = app.add_subcommand("tables", "Basket put price tables for the Korn-Muller model");
    tables->add_option("--table", c.table, "1 (strikes) or 2 (penalties)");
    tables->add_flag("--american", c.american, "Add the American row to table 2");
    tables->add_flag("--compare", c.compare, "Compare with the reference values");
    tables->add_option("--tolerance", c.tolerance, "Allowed absolute deviation for --compare");
    tables->add_option("--k", c.k_filter, "Only these transaction costs (0, 0.005)");
    tables->add_option("--piece-cap", c.piece_cap, "Maximum pieces per polyhedral union");

    auto* examples = app.add_subcommand("examples", "The two small worked examples");
    examples->add_flag("--compare", c.compare, "Compare with the reference values");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : parse_error;
    }

    try {
        if (*price) return cmd_price(c);
        if (*hedge) return cmd_hedge(c);
        if (*verify) return cmd_verify(c);
        if (*tables) return cmd_tables(c);
        if (*examples) return cmd_examples(c);
    } catch (const Failure& f) {
        std::cerr << "error: " << f.message << "\n";
        return f.code;
    } catch (const gh::PieceCapExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return piece_cap;
    } catch (const gh::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return parse_error;
    } catch (const gh::ModelError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return invalid_input;
    }
    return ok;
}
