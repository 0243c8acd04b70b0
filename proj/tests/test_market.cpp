#include "support.hpp"

#include "gamehedge/random_models.hpp"

using namespace test;

namespace {

bool polar_by_inequalities(const MatrixQ& rates, const VectorQ& w) {
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        if (w(i) < 0) return false;
        for (Eigen::Index j = 0; j < w.size(); ++j)
            if (rates(i, j) * w(i) < w(j)) return false;
    }
    return true;
}

// Count of (n1..n4) >= 0 with n1 + n2 + n3 + n4 = t.
std::size_t compositions(int t) {
    std::size_t c = 0;
    for (int a = 0; a <= t; ++a)
        for (int b = 0; a + b <= t; ++b)
            for (int d = 0; a + b + d <= t; ++d) ++c;
    return c;
}

}  // namespace

TEST_CASE("two-step example lattice and its path expansion") {
    Case c = two_step_example();
    CHECK(c.model.mode() == ModelMode::lattice);
    CHECK(c.model.level(0).size() == 1);
    CHECK(c.model.level(1).size() == 2);
    CHECK(c.model.level(2).size() == 3);
    ExpandedTree e = expand_to_tree(c.model);
    CHECK(e.tree.level(2).size() == 4);
    CHECK(e.tree.find("u/ud"));
    CHECK(e.origin[*e.tree.find("d/ud")] == *c.model.find("ud"));
}

TEST_CASE("solvency cone generators") {
    Case c = two_step_example();
    CHECK(c.model.solvency(0).generators.size() == 4);
    Model km = build_korn_muller({2, 40, 50, 0.15, 0.1, 0.5, Rational(1, 200)});
    const std::size_t d = 3;
    CHECK(km.solvency(0).generators.size() == d + d * (d - 1));
}

TEST_CASE("polar cone characterisations agree on random samples") {
    std::size_t inside = 0, outside = 0;
    std::mt19937_64 rng(17);
    Model km = build_korn_muller({1, 40, 50, 0.15, 0.1, 0.5, Rational(1, 100)});
    Case ex = two_step_example();
    for (const Model* m : {&km, &ex.model}) {
        for (std::size_t n = 0; n < m->size(); ++n) {
            const MatrixQ& r = m->node(n).rates;
            const Eigen::Index d = m->currencies();
            for (int s = 0; s < 60; ++s) {
                VectorQ w(d);
                for (Eigen::Index k = 0; k < d; ++k) w(k) = random_rational(rng, -2, 60, 4);
                // Most uniform draws miss the thin Korn-Muller polar cones, so also sample inside and near them.
                if (s % 3 > 0) {
                    w = zeros(d);
                    for (const auto& g : m->polar(n).generators) w += random_rational(rng, 0, 3, 1) * g;
                    if (s % 3 == 2) w(0) += random_rational(rng, -1, 1, 100);
                }
                bool by_generators = true;
                for (const auto& k : m->solvency(n).generators) by_generators = by_generators && dot(w, k) >= 0;
                const bool expected = polar_by_inequalities(r, w);
                ++(expected ? inside : outside);
                CHECK(in_polar(r, w) == expected);
                CHECK(by_generators == expected);
                CHECK(cone_contains(m->polar(n), w) == expected);
            }
        }
    }
    CHECK(inside > 100);
    CHECK(outside > 100);
}

TEST_CASE("lattice node counts") {
    Model km = build_korn_muller({5, 40, 50, 0.15, 0.1, 0.5, 0});
    for (int t = 0; t <= 5; ++t) CHECK(km.level(t).size() == compositions(t));
    CHECK(km.level(6).size() == km.level(5).size());
    CHECK(km.horizon() == 6);
}

TEST_CASE("recombination: node prices equal path products of the factors") {
    KornMullerParams p{6, 40, 50, 0.15, 0.1, 0.5, 0};
    Model km = build_korn_muller(p, false);
    auto f = korn_muller_factors(p);
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 30; ++trial) {
        Rational s1 = p.s1, s2 = p.s2;
        int n[4] = {0, 0, 0, 0};
        for (int t = 0; t < p.steps; ++t) {
            const int m = std::uniform_int_distribution<int>(0, 3)(rng);
            s1 *= f[static_cast<std::size_t>(m)].first;
            s2 *= f[static_cast<std::size_t>(m)].second;
            ++n[m];
        }
        const std::string id = "t6:" + std::to_string(n[0]) + "," + std::to_string(n[1]) + "," +
                               std::to_string(n[2]) + "," + std::to_string(n[3]);
        auto node = km.find(id);
        REQUIRE(node);
        // With k = 0, rates(3, j) is the price of asset j in the third currency.
        CHECK(km.node(*node).rates(2, 0) == s1);
        CHECK(km.node(*node).rates(2, 1) == s2);
    }
}

TEST_CASE("factors are accurate to at least 15 digits") {
    KornMullerParams p;
    auto f = korn_muller_factors(p);
    const long double c = std::sqrt(1.0L - 0.25L);
    const long double z2[4] = {-(0.5L + c), -(0.5L - c), 0.5L - c, 0.5L + c};
    const long double z1[4] = {-1, -1, 1, 1};
    const long double h = std::sqrt(0.1L);
    for (int m = 0; m < 4; ++m) {
        const long double e1 = std::exp(-0.5L * 0.15L * 0.15L * 0.1L + z1[m] * 0.15L * h);
        const long double e2 = std::exp(-0.5L * 0.1L * 0.1L * 0.1L + z2[m] * 0.1L * h);
        CHECK(std::fabs(f[static_cast<std::size_t>(m)].first.convert_to<long double>() - e1) <= 1e-15L * e1);
        CHECK(std::fabs(f[static_cast<std::size_t>(m)].second.convert_to<long double>() - e2) <= 1e-15L * e2);
    }
}

TEST_CASE("no-arbitrage checks") {
    CHECK(check_no_arbitrage(two_step_example().model).arbitrage_free);
    CHECK(check_no_arbitrage(one_step_counterexample().model).arbitrage_free);
    CHECK(check_no_arbitrage(build_korn_muller({3, 40, 50, 0.15, 0.1, 0.5, 0})).arbitrage_free);
    std::mt19937_64 rng(9);
    for (int k = 0; k < 10; ++k) {
        Model m = random_binary_model(rng, 2);
        NoArbitrageReport r = check_no_arbitrage(m);
        REQUIRE(r.arbitrage_free);
        // The witness lies in the polar cones and aggregates over successors.
        for (std::size_t n = 0; n < m.size(); ++n) {
            CHECK(in_polar(m.node(n).rates, (*r.witness)[n]));
            if (m.is_terminal(n)) continue;
            VectorQ sum = zeros(2);
            for (std::size_t s : m.node(n).successors) sum += (*r.witness)[s];
            CHECK(sum == (*r.witness)[n]);
        }
    }
    // Currency 2 costs 1 today and is worth at least 2 tomorrow in every state.
    MatrixQ flat(2, 2), dear(2, 2);
    flat << 1, 1, 1, 1;
    dear << 1, 2, Rational(1, 2), 1;
    Model arb(2, ModelMode::tree,
              {{"root", 0, {1, 2}, {}, flat}, {"u", 1, {}, {}, dear}, {"d", 1, {}, {}, dear}});
    CHECK_FALSE(check_no_arbitrage(arb).arbitrage_free);
}

TEST_CASE("frictionless nodes are flagged degenerate") {
    MatrixQ flat(2, 2);
    flat << 1, 2, Rational(1, 2), 1;
    Model m(2, ModelMode::tree, {{"root", 0, {}, {}, flat}});
    NoArbitrageReport r = check_no_arbitrage(m);
    CHECK(r.degenerate_nodes == std::vector<std::size_t>{0});
}

TEST_CASE("model validation") {
    MatrixQ bad(2, 2);
    bad << 1, -1, 1, 1;
    CHECK_THROWS_AS(validate_rates(bad), ModelError);
    MatrixQ ok(2, 2);
    ok << 1, 2, 1, 1;
    CHECK_THROWS_AS(Model(2, ModelMode::tree, {{"root", 0, {1}, {}, ok}, {"a", 2, {}, {}, ok}}), ModelError);
    CHECK_THROWS_AS(model_from_json(nlohmann::json::parse(R"({"currencies": 2, "nodes": [
        {"id": "root", "time": 0, "successors": ["x"], "rates": [["1", "2"], ["1", "1"]]}]})")),
                    ModelError);
}

TEST_CASE("model JSON round trip is exact") {
    Case c = two_step_example();
    Model again = model_from_json(model_to_json(c.model));
    REQUIRE(again.size() == c.model.size());
    for (std::size_t n = 0; n < again.size(); ++n) {
        CHECK(again.node(n).id == c.model.node(n).id);
        CHECK(again.node(n).rates == c.model.node(n).rates);
    }
    GamePayoff g = payoff_from_json(again, payoff_to_json(c.model, c.payoff));
    CHECK(finite(ask_price(seller_sets(again, g), 1)) == finite(ask_price(seller_sets(c.model, c.payoff), 1)));

    Model km = build_korn_muller({3, 40, 50, 0.15, 0.1, 0.5, Rational(1, 200)});
    Model km2 = model_from_json(model_to_json(km));
    for (std::size_t n = 0; n < km.size(); ++n) CHECK(km2.node(n).rates == km.node(n).rates);
}
