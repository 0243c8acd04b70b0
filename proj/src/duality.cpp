#include "gamehedge/duality.hpp"

#include "gamehedge/lp.hpp"

#include <algorithm>
#include <stdexcept>

namespace gamehedge {

namespace {

void require_tree(const Model& m, const char* op) {
    if (m.mode() != ModelMode::tree) throw ModelError(std::string(op) + ": tree model required");
}

std::size_t parent(const Model& m, std::size_t n) { return m.node(n).predecessors.front(); }

bool polar_member(const Model& m, std::size_t n, const VectorQ& w) {
    return in_polar(m.node(n).rates, w) && !is_zero(w);
}

bool less(const Extended& a, const Extended& b) {
    using K = Extended::Kind;
    if (a.kind == b.kind) return a.kind == K::finite && a.value < b.value;
    return a.kind == K::minus_infinity || b.kind == K::plus_infinity;
}

Extended negated(const Extended& e) {
    using K = Extended::Kind;
    if (e.kind == K::plus_infinity) return Extended::minus_inf();
    if (e.kind == K::minus_infinity) return Extended::plus_inf();
    return {K::finite, -e.value};
}

bool same(const Extended& a, const Extended& b) {
    return a.kind == b.kind && (!a.finite() || a.value == b.value);
}

}  // namespace

std::vector<StopState> stop_states(const Model& m, const StoppingTime& s) {
    require_tree(m, "stop_states");
    std::vector<StopState> st(m.size(), StopState::running);
    for (std::size_t n : s.nodes) st[n] = StopState::stopping;
    for (int t = 1; t <= m.horizon(); ++t)
        for (std::size_t n : m.level(t))
            if (st[n] == StopState::running && st[parent(m, n)] != StopState::running)
                st[n] = StopState::stopped;
    return st;
}

bool is_stopping_time(const Model& m, const StoppingTime& s) {
    require_tree(m, "is_stopping_time");
    std::vector<int> hits(m.size(), 0);
    for (std::size_t n : s.nodes) {
        if (n >= m.size()) return false;
        hits[n] += 1;
    }
    // Hits on the path down to each node; exactly one at every leaf.
    std::vector<int> seen(m.size(), 0);
    for (int t = 0; t <= m.horizon(); ++t) {
        for (std::size_t n : m.level(t)) {
            seen[n] = hits[n] + (t > 0 ? seen[parent(m, n)] : 0);
            if (seen[n] > 1) return false;
            if (m.is_terminal(n) && seen[n] != 1) return false;
        }
    }
    return true;
}

StoppingTime constant_stopping_time(const Model& m, int t) {
    require_tree(m, "constant_stopping_time");
    StoppingTime s{m.level(t)};
    std::sort(s.nodes.begin(), s.nodes.end());
    return s;
}

std::vector<StoppingTime> enumerate_stopping_times(const Model& m, std::size_t limit) {
    require_tree(m, "enumerate_stopping_times");
    // count(n) = 1 + product of children's counts, saturated above the limit.
    std::vector<std::size_t> count(m.size(), 1);
    for (int t = m.horizon(); t >= 0; --t) {
        for (std::size_t n : m.level(t)) {
            if (m.is_terminal(n)) continue;
            std::size_t prod = 1;
            for (std::size_t c : m.node(n).successors) prod = std::min(prod * count[c], limit + 1);
            count[n] = std::min(prod + 1, limit + 1);
        }
    }
    if (count[m.root()] > limit)
        throw EnumerationLimit("enumerate_stopping_times: more than " + std::to_string(limit) +
                               " stopping times");

    std::vector<std::vector<std::vector<std::size_t>>> options(m.size());
    for (int t = m.horizon(); t >= 0; --t) {
        for (std::size_t n : m.level(t)) {
            auto& out = options[n];
            out.push_back({n});
            if (m.is_terminal(n)) continue;
            std::vector<std::vector<std::size_t>> acc{{}};
            for (std::size_t c : m.node(n).successors) {
                std::vector<std::vector<std::size_t>> next;
                for (const auto& prefix : acc) {
                    for (const auto& tail : options[c]) {
                        auto joined = prefix;
                        joined.insert(joined.end(), tail.begin(), tail.end());
                        next.push_back(std::move(joined));
                    }
                }
                acc = std::move(next);
            }
            for (auto& a : acc) out.push_back(std::move(a));
            for (std::size_t c : m.node(n).successors) options[c].clear();
        }
    }
    std::vector<StoppingTime> all;
    for (auto& nodes : options[m.root()]) {
        std::sort(nodes.begin(), nodes.end());
        all.push_back({std::move(nodes)});
    }
    return all;
}

RandomisedStoppingTime from_stopping_time(const Model& m, const StoppingTime& s) {
    if (!is_stopping_time(m, s)) throw std::invalid_argument("from_stopping_time: not a stopping time");
    RandomisedStoppingTime chi{std::vector<Rational>(m.size(), Rational(0))};
    for (std::size_t n : s.nodes) chi.mass[n] = 1;
    return chi;
}

std::vector<Rational> chi_star(const Model& m, const RandomisedStoppingTime& chi) {
    require_tree(m, "chi_star");
    // before[n]: mass at strict ancestors of n
    std::vector<Rational> before(m.size(), Rational(0)), star(m.size());
    for (int t = 0; t <= m.horizon(); ++t) {
        for (std::size_t n : m.level(t)) {
            if (t > 0) {
                std::size_t p = parent(m, n);
                before[n] = before[p] + chi.mass[p];
            }
            star[n] = 1 - before[n];
        }
    }
    return star;
}

bool is_randomised_stopping_time(const Model& m, const RandomisedStoppingTime& chi) {
    if (chi.mass.size() != m.size()) return false;
    for (const auto& x : chi.mass)
        if (x < 0) return false;
    std::vector<Rational> star = chi_star(m, chi);
    for (std::size_t n : m.level(m.horizon()))
        if (star[n] != chi.mass[n]) return false;
    return true;
}

std::vector<Rational> value_at(const Model& m, const std::vector<Rational>& a,
                               const RandomisedStoppingTime& chi) {
    require_tree(m, "value_at");
    std::vector<Rational> acc(m.size(), Rational(0));
    for (int t = 0; t <= m.horizon(); ++t)
        for (std::size_t n : m.level(t))
            acc[n] = (t > 0 ? acc[parent(m, n)] : Rational(0)) + chi.mass[n] * a[n];
    std::vector<Rational> out;
    for (std::size_t n : m.level(m.horizon())) out.push_back(acc[n]);
    return out;
}

RandomisedStoppingTime truncate(const Model& m, const RandomisedStoppingTime& chi,
                                const StoppingTime& s) {
    std::vector<StopState> st = stop_states(m, s);
    std::vector<Rational> star = chi_star(m, chi);
    RandomisedStoppingTime out{std::vector<Rational>(m.size(), Rational(0))};
    for (std::size_t n = 0; n < m.size(); ++n) {
        if (st[n] == StopState::running) out.mass[n] = chi.mass[n];
        if (st[n] == StopState::stopping) out.mass[n] = star[n];
    }
    return out;
}

std::optional<std::string> approx_pair_violation(const Model& m, const ApproxPair& pair,
                                                 const RandomisedStoppingTime& chi, Eigen::Index i) {
    require_tree(m, "check_approx_pair");
    if (pair.probability.size() != m.size() || pair.S.size() != m.size())
        return "pair size does not match the model";
    Rational total = 0;
    for (std::size_t n = 0; n < m.size(); ++n) {
        const Rational& p = pair.probability[n];
        if (p < 0) return "negative probability at " + m.node(n).id;
        if (p != 0 && !m.is_terminal(n)) return "probability on non-terminal node " + m.node(n).id;
        total += p;
    }
    if (total != 1) return "probabilities sum to " + to_string(total);
    for (std::size_t n = 0; n < m.size(); ++n) {
        if (pair.S[n].size() != m.currencies()) return "S has wrong dimension at " + m.node(n).id;
        if (pair.S[n](i) != 1) return "S^i != 1 at " + m.node(n).id;
        if (!polar_member(m, n, pair.S[n])) return "S not in K* \\ {0} at " + m.node(n).id;
    }
    // reach[n] = P(n); tail[n] = sum over strict descendants v of P(v) chi_v S_v.
    std::vector<Rational> reach(m.size(), Rational(0));
    std::vector<VectorQ> tail(m.size(), zeros(m.currencies()));
    for (int t = m.horizon(); t >= 0; --t) {
        for (std::size_t n : m.level(t)) {
            if (m.is_terminal(n)) {
                reach[n] = pair.probability[n];
                continue;
            }
            for (std::size_t c : m.node(n).successors) {
                reach[n] += reach[c];
                tail[n] += tail[c] + (reach[c] * chi.mass[c]) * pair.S[c];
            }
            // Conditional expectation up to the positive factor 1 / P(n); vacuous on null nodes.
            if (reach[n] > 0 && !in_polar(m.node(n).rates, tail[n]))
                return "conditional expectation not in K* at " + m.node(n).id;
        }
    }
    return std::nullopt;
}

ApproxPair martingale_pair(const Model& m, const std::vector<VectorQ>& z, Eigen::Index i) {
    require_tree(m, "martingale_pair");
    ApproxPair pair{std::vector<Rational>(m.size(), Rational(0)), std::vector<VectorQ>(m.size())};
    const Rational root = z[m.root()](i);
    if (root <= 0) throw std::invalid_argument("martingale_pair: root price must be positive");
    for (std::size_t n = 0; n < m.size(); ++n) {
        if (z[n](i) > 0) {
            pair.S[n] = z[n] / z[n](i);
        } else {
            const VectorQ& g = m.polar(n).generators.front();
            pair.S[n] = g / g(i);
        }
        if (m.is_terminal(n)) pair.probability[n] = z[n](i) / root;
    }
    return pair;
}

Rational dual_objective(const Model& m, const StoppingTime& s, const RandomisedStoppingTime& chi,
                        const ApproxPair& pair, const GamePayoff& g) {
    std::vector<StopState> st = stop_states(m, s);
    Rational total = 0;
    for (std::size_t leaf : m.level(m.horizon())) {
        if (pair.probability[leaf] == 0) continue;
        Rational value = 0, spent = 0;
        for (std::size_t n : path_to(m, leaf)) {
            const PayoffTriple& p = g.at(n);
            const VectorQ& S = pair.S[n];
            if (st[n] == StopState::running) {
                value += chi.mass[n] * dot(p.Y, S);
                spent += chi.mass[n];
            } else if (st[n] == StopState::stopping) {
                const Rational later = 1 - spent - chi.mass[n];
                value += later * dot(p.X, S) + chi.mass[n] * dot(p.Xprime, S);
                break;
            }
        }
        total += pair.probability[leaf] * value;
    }
    return total;
}

VectorQ auxiliary_payoff(const Model& m, const GamePayoff& g, const std::vector<StopState>& st,
                         std::size_t node) {
    switch (st[node]) {
        case StopState::running: return g.at(node).Y;
        case StopState::stopping:
            return m.node(node).time < m.horizon() ? g.at(node).X : g.at(node).Xprime;
        case StopState::stopped: break;
    }
    return zeros(m.currencies());
}

Extended primal_lp_ask(const Model& m, const GamePayoff& g, const StoppingTime& s, Eigen::Index i) {
    require_tree(m, "primal_lp_ask");
    const Eigen::Index d = m.currencies();
    std::vector<StopState> st = stop_states(m, s);
    // Column 0 is z; each running node n gets d columns for the portfolio it passes on.
    std::vector<Eigen::Index> column(m.size(), -1);
    Eigen::Index cols = 1;
    for (std::size_t n = 0; n < m.size(); ++n) {
        if (st[n] != StopState::running) continue;
        column[n] = cols;
        cols += d;
    }
    // Coefficients of k . (portfolio held on arrival at n).
    auto arrival = [&](std::size_t n, const VectorQ& k) {
        VectorQ row = zeros(cols);
        if (n == m.root()) row(0) = k(i);
        else row.segment(column[parent(m, n)], d) = k;
        return row;
    };
    LinearProgram lp{unit(cols, 0), {}, {}};
    for (std::size_t n = 0; n < m.size(); ++n) {
        if (st[n] == StopState::stopped) continue;
        const VectorQ h = auxiliary_payoff(m, g, st, n);
        for (const VectorQ& k : m.polar(n).generators) {
            lp.inequalities.push_back({arrival(n, k), dot(k, h)});
            if (st[n] == StopState::running) {
                VectorQ row = arrival(n, k);
                row.segment(column[n], d) -= k;
                lp.inequalities.push_back({std::move(row), 0});
            }
        }
    }
    LpResult r = lp_solve(lp);
    if (r.status == LpStatus::unbounded) return Extended::minus_inf();
    if (r.status == LpStatus::infeasible) throw std::logic_error("primal_lp_ask: infeasible LP");
    return {Extended::Kind::finite, r.value};
}

OracleReport ask_oracle(const Model& m, const GamePayoff& g, Eigen::Index i, std::size_t limit) {
    OracleReport rep;
    rep.stopping_times = enumerate_stopping_times(m, limit);
    for (std::size_t k = 0; k < rep.stopping_times.size(); ++k) {
        rep.values.push_back(primal_lp_ask(m, g, rep.stopping_times[k], i));
        if (k == 0 || less(rep.values[k], rep.values[rep.best])) rep.best = k;
    }
    rep.value = rep.values[rep.best];
    return rep;
}

OracleReport bid_oracle(const Model& m, const GamePayoff& g, Eigen::Index i, std::size_t limit) {
    OracleReport rep = ask_oracle(m, negate_payoff(g), i, limit);
    for (auto& v : rep.values) v = negated(v);
    rep.value = negated(rep.value);
    return rep;
}

namespace {

// Max of w0.S0 + sum_c w_c.M_c over S0 in K*_root with S0^i = 1, M_c in K*_c with
// sum_c M_c^i = 1 (M_c = P(c) S_c), and optionally sum_c M_c in K*_root.
Rational one_step_max(const Model& m, Eigen::Index i, const VectorQ& w0,
                      const std::vector<VectorQ>& w, bool mean_in_root_polar) {
    const Eigen::Index d = m.currencies();
    const auto& kids = m.node(m.root()).successors;
    const Eigen::Index cols = d * static_cast<Eigen::Index>(1 + kids.size());
    auto at = [&](std::size_t block, const VectorQ& v) {
        VectorQ row = zeros(cols);
        row.segment(static_cast<Eigen::Index>(block) * d, d) = v;
        return row;
    };
    LinearProgram lp{zeros(cols), {}, {}};
    lp.objective -= at(0, w0);
    for (std::size_t c = 0; c < kids.size(); ++c) lp.objective -= at(c + 1, w[c]);
    lp.equalities.push_back({at(0, unit(d, i)), 1});
    VectorQ mass = zeros(cols);
    for (std::size_t c = 0; c < kids.size(); ++c) mass += at(c + 1, unit(d, i));
    lp.equalities.push_back({mass, 1});
    for (const auto& k : m.solvency(m.root()).generators) {
        lp.inequalities.push_back({at(0, k), 0});
        if (!mean_in_root_polar) continue;
        VectorQ row = zeros(cols);
        for (std::size_t c = 0; c < kids.size(); ++c) row += at(c + 1, k);
        lp.inequalities.push_back({std::move(row), 0});
    }
    for (std::size_t c = 0; c < kids.size(); ++c)
        for (const auto& k : m.solvency(kids[c]).generators) lp.inequalities.push_back({at(c + 1, k), 0});
    LpResult r = lp_solve(lp);
    if (r.status != LpStatus::optimal)
        throw std::logic_error(std::string("one-step dual: LP ") + to_string(r.status));
    return -r.value;
}

void require_one_step(const Model& m, const char* op) {
    if (m.horizon() != 1) throw ModelError(std::string(op) + ": one-step model required");
}

std::vector<VectorQ> child_payoffs(const Model& m, const GamePayoff& g, VectorQ PayoffTriple::*f) {
    std::vector<VectorQ> out;
    for (std::size_t c : m.node(m.root()).successors) out.push_back(g.at(c).*f);
    return out;
}

}  // namespace

// Objectives are affine in chi_0 once the pair is fixed, and the pair constraints only
// change between chi_0 = 1 and chi_0 < 1, so each inner maximum is attained at chi_0 in {0, 1}.
OneStepDual one_step_dual(const Model& m, const GamePayoff& g, Eigen::Index i) {
    require_one_step(m, "one_step_dual");
    const PayoffTriple& r = g.at(m.root());
    const std::vector<VectorQ> none(m.node(m.root()).successors.size(), zeros(m.currencies()));
    OneStepDual out;
    // sigma = 0: chi ^ 0 puts all mass at the root.
    out.sigma0 = std::max(one_step_max(m, i, r.Xprime, none, false), one_step_max(m, i, r.X, none, false));
    out.sigma1 = std::max(one_step_max(m, i, r.Y, none, false),
                          one_step_max(m, i, zeros(m.currencies()), child_payoffs(m, g, &PayoffTriple::Xprime), true));
    out.value = std::min(out.sigma0, out.sigma1);
    return out;
}

OneStepDual kifer_va(const Model& m, const GamePayoff& g, Eigen::Index i) {
    require_one_step(m, "kifer_va");
    const PayoffTriple& r = g.at(m.root());
    const std::vector<VectorQ> none(m.node(m.root()).successors.size(), zeros(m.currencies()));
    const std::vector<VectorQ> cancel(none.size(), r.X);
    OneStepDual out;
    const Rational stop_now = one_step_max(m, i, r.Y, none, false);
    out.sigma0 = std::max(stop_now, one_step_max(m, i, zeros(m.currencies()), cancel, true));
    out.sigma1 = std::max(stop_now,
                          one_step_max(m, i, zeros(m.currencies()), child_payoffs(m, g, &PayoffTriple::Y), true));
    out.value = std::min(out.sigma0, out.sigma1);
    return out;
}

std::string format_stopping_time(const Model& m, const StoppingTime& s) {
    std::string out = "{";
    for (std::size_t k = 0; k < s.nodes.size(); ++k) {
        if (k) out += ", ";
        out += m.node(s.nodes[k]).id;
    }
    return out + "}";
}

nlohmann::json verification_report(const Model& m, const OracleReport& oracle,
                                   const Extended& construction) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t k = 0; k < oracle.stopping_times.size(); ++k)
        rows.push_back({{"stopping_time", format_stopping_time(m, oracle.stopping_times[k])},
                        {"lp_value", to_string(oracle.values[k])}});
    return {{"per_stopping_time", rows},
            {"winning", format_stopping_time(m, oracle.stopping_times[oracle.best])},
            {"oracle", to_string(oracle.value)},
            {"construction", to_string(construction)},
            {"match", same(oracle.value, construction)}};
}

}  // namespace gamehedge
