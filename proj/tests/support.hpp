#pragma once

#include "gamehedge/duality.hpp"
#include "gamehedge/pricing.hpp"

#include <doctest.h>

#include <fstream>
#include <optional>
#include <random>
#include <string>

namespace test {

using namespace gamehedge;

inline nlohmann::json data_file(const std::string& name) {
    std::ifstream f(std::string(GAMEHEDGE_DATA_DIR) + "/" + name);
    REQUIRE(f.good());
    return nlohmann::json::parse(f);
}

struct Case {
    Model model;
    GamePayoff payoff;
};

inline Case two_step_example() {
    Model m = model_from_json(data_file("example1_model.json"));
    GamePayoff g = payoff_from_json(m, data_file("example1_option.json"));
    return {std::move(m), std::move(g)};
}

inline Case one_step_counterexample() {
    Model m = model_from_json(data_file("example2_model.json"));
    GamePayoff g = payoff_from_json(m, data_file("example2_option.json"));
    return {std::move(m), std::move(g)};
}

inline Rational q(const char* s) { return parse_rational(s); }

inline Rational finite(const Extended& e) {
    REQUIRE(e.finite());
    return e.value;
}

inline ConvexPolyhedron halfspace_set(Eigen::Index d, std::vector<Halfspace> h) {
    return ConvexPolyhedron(d, std::move(h));
}

// Solves A x = b exactly; nullopt when A is singular.
inline std::optional<VectorQ> solve(MatrixQ a, VectorQ b) {
    const Eigen::Index n = a.rows();
    for (Eigen::Index c = 0; c < n; ++c) {
        Eigen::Index p = c;
        while (p < n && a(p, c) == 0) ++p;
        if (p == n) return std::nullopt;
        a.row(c).swap(a.row(p));
        std::swap(b(c), b(p));
        for (Eigen::Index r = 0; r < n; ++r) {
            if (r == c || a(r, c) == 0) continue;
            const Rational f = a(r, c) / a(c, c);
            a.row(r) -= f * a.row(c);
            b(r) -= f * b(c);
        }
    }
    for (Eigen::Index r = 0; r < n; ++r) b(r) /= a(r, r);
    return b;
}

// Vertices of {x : a.x >= b} by trying every d-subset of tight rows.
inline std::vector<VectorQ> brute_force_vertices(Eigen::Index d, const std::vector<Halfspace>& h) {
    std::vector<VectorQ> out;
    std::vector<std::size_t> pick(static_cast<std::size_t>(d));
    auto record = [&] {
        MatrixQ a(d, d);
        VectorQ b(d);
        for (Eigen::Index r = 0; r < d; ++r) {
            a.row(r) = h[pick[static_cast<std::size_t>(r)]].normal.transpose();
            b(r) = h[pick[static_cast<std::size_t>(r)]].offset;
        }
        auto x = solve(a, b);
        if (!x) return;
        for (const auto& row : h)
            if (!row.contains(*x)) return;
        for (const auto& v : out)
            if (v == *x) return;
        out.push_back(*x);
    };
    auto rec = [&](auto&& self, std::size_t start, std::size_t depth) -> void {
        if (depth == pick.size()) {
            record();
            return;
        }
        for (std::size_t k = start; k < h.size(); ++k) {
            pick[depth] = k;
            self(self, k + 1, depth + 1);
        }
    };
    rec(rec, 0, 0);
    return out;
}

inline bool same_points(std::vector<VectorQ> a, std::vector<VectorQ> b) {
    auto less = [](const VectorQ& x, const VectorQ& y) { return lex_less(x, y); };
    std::sort(a.begin(), a.end(), less);
    std::sort(b.begin(), b.end(), less);
    return a == b;
}

inline Rational random_rational(std::mt19937_64& rng, long lo, long hi, long den) {
    return Rational(std::uniform_int_distribution<long>(lo, hi)(rng), den);
}

}  // namespace test
