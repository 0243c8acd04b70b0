#include "support.hpp"

#include "gamehedge/random_models.hpp"

using namespace test;

namespace {

// Stopping times by brute force: every node subset that meets each path exactly once.
std::size_t count_stopping_times(const Model& m) {
    const std::size_t n = m.size();
    REQUIRE(n < 20);
    std::size_t count = 0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        bool ok = true;
        for (std::size_t leaf : m.level(m.horizon())) {
            int hits = 0;
            for (std::size_t v : path_to(m, leaf)) hits += (mask >> v) & 1U;
            ok = ok && hits == 1;
        }
        count += ok;
    }
    return count;
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
            chi.mass[n] = m.is_terminal(n) ? rest[n] : rest[n] * random_rational(rng, 0, 4, 4);
        }
    return chi;
}

VectorQ random_price(const Model& m, std::size_t n, Eigen::Index i, std::mt19937_64& rng) {
    VectorQ w = zeros(m.currencies());
    for (const auto& g : m.polar(n).generators) w += random_rational(rng, 0, 3, 1) * g;
    if (w(i) == 0) w = m.polar(n).generators.front();
    return w / w(i);
}

ApproxPair random_pair(const Model& m, Eigen::Index i, std::mt19937_64& rng) {
    ApproxPair p{std::vector<Rational>(m.size(), Rational(0)), {}};
    Rational total = 0;
    for (std::size_t leaf : m.level(m.horizon())) {
        p.probability[leaf] = random_rational(rng, 1, 4, 1);
        total += p.probability[leaf];
    }
    for (std::size_t leaf : m.level(m.horizon())) p.probability[leaf] /= total;
    for (std::size_t n = 0; n < m.size(); ++n) p.S.push_back(random_price(m, n, i, rng));
    return p;
}

std::size_t stop_on_path(const Model& m, const StoppingTime& s, std::size_t leaf) {
    for (std::size_t v : path_to(m, leaf))
        if (std::find(s.nodes.begin(), s.nodes.end(), v) != s.nodes.end()) return v;
    FAIL("stopping time misses a path");
    return 0;
}

}  // namespace

TEST_CASE("stopping time enumeration matches a brute-force count") {
    Case c = two_step_example();
    Model tree = expand_to_tree(c.model).tree;
    CHECK(enumerate_stopping_times(tree).size() == 5);
    CHECK(count_stopping_times(tree) == 5);
    CHECK(enumerate_stopping_times(one_step_counterexample().model).size() == 2);
    std::mt19937_64 rng(4);
    for (int h = 1; h <= 3; ++h) {
        Model m = random_binary_model(rng, h);
        auto all = enumerate_stopping_times(m);
        CHECK(all.size() == count_stopping_times(m));
        for (const auto& s : all) CHECK(is_stopping_time(m, s));
        CHECK(all.front().nodes == std::vector<std::size_t>{0});
    }
    CHECK_THROWS_AS(enumerate_stopping_times(random_binary_model(rng, 3), 10), EnumerationLimit);
}

TEST_CASE("randomised stopping time arithmetic") {
    Model m = one_step_counterexample().model;
    const std::size_t u = *m.find("u"), d = *m.find("d");
    RandomisedStoppingTime chi{{Rational(1, 4), Rational(3, 4), Rational(3, 4)}};
    REQUIRE(is_randomised_stopping_time(m, chi));
    std::vector<Rational> star = chi_star(m, chi);
    CHECK(star[0] == 1);
    CHECK(star[u] == Rational(3, 4));
    std::vector<Rational> a{2, 4, 8};
    std::vector<Rational> v = value_at(m, a, chi);
    CHECK(v[0] == Rational(1, 2) + 3);
    CHECK(v[1] == Rational(1, 2) + 6);
    RandomisedStoppingTime cut = truncate(m, chi, constant_stopping_time(m, 0));
    CHECK(cut.mass[0] == 1);
    CHECK(cut.mass[u] == 0);
    CHECK(cut.mass[d] == 0);
    RandomisedStoppingTime bad{{Rational(1, 2), Rational(1, 2), Rational(1, 4)}};
    CHECK_FALSE(is_randomised_stopping_time(m, bad));
    CHECK_THROWS(from_stopping_time(m, StoppingTime{{u}}));
}

TEST_CASE("truncation conserves mass") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        Model m = random_binary_model(rng, 1 + trial % 3);
        RandomisedStoppingTime chi = random_chi(m, rng);
        REQUIRE(is_randomised_stopping_time(m, chi));
        const std::vector<Rational> ones(m.size(), Rational(1));
        for (const auto& s : enumerate_stopping_times(m)) {
            RandomisedStoppingTime cut = truncate(m, chi, s);
            CHECK(is_randomised_stopping_time(m, cut));
            for (const Rational& total : value_at(m, ones, cut)) CHECK(total == 1);
            std::vector<StopState> st = stop_states(m, s);
            std::vector<Rational> star = chi_star(m, chi);
            for (std::size_t n = 0; n < m.size(); ++n) {
                if (st[n] == StopState::stopping) CHECK(cut.mass[n] == star[n]);
                if (st[n] == StopState::stopped) CHECK(cut.mass[n] == 0);
            }
        }
    }
}

TEST_CASE("approximate martingale pair conditions on the counterexample") {
    Model m = one_step_counterexample().model;
    const std::size_t u = *m.find("u"), d = *m.find("d");
    RandomisedStoppingTime late = from_stopping_time(m, constant_stopping_time(m, 1));
    ApproxPair p{{0, Rational(1, 4), Rational(3, 4)}, {make_vector({1, 13}), make_vector({1, 12}), make_vector({1, 9})}};
    // Expected root price 9 + 3 P(u) must reach the lowest consistent price 10.
    CHECK_FALSE(check_approx_pair(m, p, late, 0));
    p.probability[u] = Rational(1, 3);
    p.probability[d] = Rational(2, 3);
    CHECK(check_approx_pair(m, p, late, 0));
    p.probability[u] = Rational(1, 2);
    p.probability[d] = Rational(1, 2);
    CHECK(check_approx_pair(m, p, late, 0));
    ApproxPair off = p;
    off.S[0] = make_vector({1, 14});
    CHECK_FALSE(check_approx_pair(m, off, late, 0));
    off = p;
    off.S[0] = make_vector({2, 26});
    CHECK_FALSE(check_approx_pair(m, off, late, 0));
}

TEST_CASE("dual objective on the counterexample") {
    Case c = one_step_counterexample();
    const Model& m = c.model;
    ApproxPair p{{0, Rational(1, 2), Rational(1, 2)}, {make_vector({1, 13}), make_vector({1, 12}), make_vector({1, 9})}};
    const StoppingTime now = constant_stopping_time(m, 0);
    RandomisedStoppingTime chi{{0, 1, 1}};
    REQUIRE(check_approx_pair(m, p, truncate(m, chi, now), 0));
    // X_0 . S_0 = -15 + 13.
    CHECK(dual_objective(m, now, chi, p, c.payoff) == -2);
    RandomisedStoppingTime at_root = from_stopping_time(m, now);
    // X'_0 . S_0 = -20 + 13.
    CHECK(dual_objective(m, now, at_root, p, c.payoff) == -7);
}

TEST_CASE("primal LP per stopping time") {
    Case c = two_step_example();
    ExpandedTree e = expand_to_tree(c.model);
    GamePayoff g = pull_back(c.payoff, e.origin);
    OracleReport r = ask_oracle(e.tree, g, 1);
    std::vector<std::string> got;
    for (const auto& v : r.values) got.push_back(to_string(v));
    CHECK(got == std::vector<std::string>{"5", "4", "4", "9/2", "9/2"});
    CHECK(to_string(r.value) == "4");
    CHECK(to_string(ask_oracle(e.tree, g, 0).value) == "2/5");
    CHECK(to_string(bid_oracle(e.tree, g, 0).value) == "11/50");
    CHECK(to_string(bid_oracle(e.tree, g, 1).value) == "11/5");

    Case x = one_step_counterexample();
    OracleReport o = ask_oracle(x.model, x.payoff, 0);
    CHECK(to_string(o.values[0]) == "-2");
    CHECK(to_string(o.values[1]) == "0");
}

TEST_CASE("one-step duals on the counterexample") {
    Case c = one_step_counterexample();
    OneStepDual k = kifer_va(c.model, c.payoff, 0);
    CHECK(k.sigma0 == -3);
    CHECK(k.sigma1 == 0);
    CHECK(k.value == -3);
    OneStepDual d = one_step_dual(c.model, c.payoff, 0);
    CHECK(d.sigma0 == -2);
    CHECK(d.sigma1 == 0);
    CHECK(d.value == finite(ask_price(seller_sets(c.model, c.payoff), 0)));
}

TEST_CASE("without friction both one-step duals give the ask") {
    MatrixQ r0(2, 2), ru(2, 2), rd(2, 2);
    r0 << 1, 10, Rational(1, 10), 1;
    ru << 1, 12, Rational(1, 12), 1;
    rd << 1, 9, Rational(1, 9), 1;
    Model m(2, ModelMode::tree, {{"root", 0, {1, 2}, {}, r0}, {"u", 1, {}, {}, ru}, {"d", 1, {}, {}, rd}});
    GamePayoff g = payoff_from_json(m, data_file("example2_option.json"));
    const Rational ask = finite(ask_price(seller_sets(m, g), 0));
    CHECK(kifer_va(m, g, 0).value == ask);
    CHECK(one_step_dual(m, g, 0).value == ask);
}

TEST_CASE("auxiliary payoff follows the stopping state") {
    Case c = two_step_example();
    ExpandedTree e = expand_to_tree(c.model);
    GamePayoff g = pull_back(c.payoff, e.origin);
    const Model& t = e.tree;
    const std::size_t u = *t.find("u"), d = *t.find("d"), uu = *t.find("u/uu"), dd = *t.find("d/dd");
    StoppingTime s{{d, uu, *t.find("u/ud")}};
    std::sort(s.nodes.begin(), s.nodes.end());
    REQUIRE(is_stopping_time(t, s));
    std::vector<StopState> st = stop_states(t, s);
    CHECK(auxiliary_payoff(t, g, st, 0) == g.at(0).Y);
    CHECK(auxiliary_payoff(t, g, st, u) == g.at(u).Y);
    CHECK(auxiliary_payoff(t, g, st, d) == g.at(d).X);
    CHECK(auxiliary_payoff(t, g, st, uu) == g.at(uu).Xprime);
    CHECK(is_zero(auxiliary_payoff(t, g, st, dd)));
}

TEST_CASE("weak duality on sampled stopping times, randomised times and pairs") {
    std::mt19937_64 rng(77);
    std::size_t accepted = 0;
    for (int trial = 0; trial < 40; ++trial) {
        Model m = random_binary_model(rng, 1 + trial % 2);
        GamePayoff g = random_game_payoff(m, rng);
        NoArbitrageReport na = check_no_arbitrage(m);
        REQUIRE(na.witness);
        for (Eigen::Index i = 0; i < 2; ++i) {
            const Rational ask = finite(ask_price(seller_sets(m, g), i));
            for (const auto& s : enumerate_stopping_times(m)) {
                const Rational primal = finite(primal_lp_ask(m, g, s, i));
                CHECK(primal >= ask);
                for (int k = 0; k < 6; ++k) {
                    RandomisedStoppingTime chi = random_chi(m, rng);
                    ApproxPair pair = k == 0 ? martingale_pair(m, *na.witness, i) : random_pair(m, i, rng);
                    if (!check_approx_pair(m, pair, truncate(m, chi, s), i)) continue;
                    ++accepted;
                    CHECK(dual_objective(m, s, chi, pair, g) <= primal);
                }
            }
        }
    }
    CHECK(accepted > 100);
}

TEST_CASE("ordinary stopping times reduce the dual objective to the game payoff") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        Model m = random_binary_model(rng, 2);
        GamePayoff g = random_game_payoff(m, rng);
        NoArbitrageReport na = check_no_arbitrage(m);
        ApproxPair pair = martingale_pair(m, *na.witness, 0);
        auto all = enumerate_stopping_times(m);
        for (const auto& s : all)
            for (const auto& tau : all) {
                Rational expected = 0;
                for (std::size_t leaf : m.level(m.horizon())) {
                    const std::size_t a = stop_on_path(m, s, leaf), b = stop_on_path(m, tau, leaf);
                    const int ta = m.node(a).time, tb = m.node(b).time;
                    const std::size_t at = ta <= tb ? a : b;
                    expected += pair.probability[leaf] * dot(game_payoff_at(g.at(at), ta, tb), pair.S[at]);
                }
                CHECK(dual_objective(m, s, from_stopping_time(m, tau), pair, g) == expected);
            }
    }
}

TEST_CASE("martingale pairs from the no-arbitrage witness") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        Model m = random_binary_model(rng, 3);
        NoArbitrageReport na = check_no_arbitrage(m);
        for (Eigen::Index i = 0; i < 2; ++i) {
            ApproxPair p = martingale_pair(m, *na.witness, i);
            for (int k = 0; k < 4; ++k) CHECK(check_approx_pair(m, p, random_chi(m, rng), i));
        }
    }
}
