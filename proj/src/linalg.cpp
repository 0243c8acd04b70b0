#include "gamehedge/linalg.hpp"

namespace gamehedge {

bool lex_less(const VectorQ& a, const VectorQ& b) {
    for (Eigen::Index k = 0; k < a.size(); ++k) {
        if (a(k) < b(k)) return true;
        if (b(k) < a(k)) return false;
    }
    return false;
}

void make_primitive(VectorZ& v) {
    // Seed with the smallest entry: later gcds then stay cheap.
    Eigen::Index seed = -1;
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        if (v(k) == 0) continue;
        if (seed < 0 || mpz_cmpabs(v(k).backend().data(), v(seed).backend().data()) < 0) seed = k;
    }
    if (seed < 0) return;
    Integer g = abs(v(seed));
    mpz_ptr gp = g.backend().data();
    for (Eigen::Index k = 0; k < v.size() && mpz_cmp_ui(gp, 1) != 0; ++k)
        if (k != seed && v(k) != 0) mpz_gcd(gp, gp, v(k).backend().data());
    if (mpz_cmp_ui(gp, 1) == 0) return;
    for (Eigen::Index k = 0; k < v.size(); ++k)
        mpz_divexact(v(k).backend().data(), v(k).backend().data(), gp);
}

Integer dot(const VectorZ& a, const VectorZ& b) {
    Integer s = 0;
    mpz_ptr sp = s.backend().data();
    for (Eigen::Index k = 0; k < a.size(); ++k)
        mpz_addmul(sp, a(k).backend().data(), b(k).backend().data());
    return s;
}

VectorZ combine(const Integer& a, const VectorZ& x, const Integer& b, const VectorZ& y) {
    Integer g = gcd(a, b);
    Integer ar = a, br = b;
    if (g > 1) {
        mpz_divexact(ar.backend().data(), ar.backend().data(), g.backend().data());
        mpz_divexact(br.backend().data(), br.backend().data(), g.backend().data());
    }
    VectorZ out(x.size());
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        mpz_ptr o = out(k).backend().data();
        mpz_mul(o, ar.backend().data(), x(k).backend().data());
        mpz_addmul(o, br.backend().data(), y(k).backend().data());
    }
    make_primitive(out);
    return out;
}

VectorZ primitive(const VectorQ& v) {
    Integer l = 1;
    for (Eigen::Index k = 0; k < v.size(); ++k) l = lcm(l, denominator(v(k)));
    VectorZ out(v.size());
    for (Eigen::Index k = 0; k < v.size(); ++k)
        out(k) = numerator(v(k)) * (l / denominator(v(k)));
    make_primitive(out);
    return out;
}

VectorQ to_rational(const VectorZ& v) {
    VectorQ out(v.size());
    for (Eigen::Index k = 0; k < v.size(); ++k) out(k) = Rational(v(k));
    return out;
}

std::string format_vector(const VectorQ& v) {
    std::string s = "(";
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        if (k) s += ", ";
        s += to_string(v(k));
    }
    return s + ")";
}

VectorQ make_vector(std::initializer_list<Rational> entries) {
    VectorQ v(static_cast<Eigen::Index>(entries.size()));
    Eigen::Index k = 0;
    for (const auto& e : entries) v(k++) = e;
    return v;
}

VectorQ parse_vector(const std::vector<std::string>& entries) {
    VectorQ v(static_cast<Eigen::Index>(entries.size()));
    for (std::size_t k = 0; k < entries.size(); ++k)
        v(static_cast<Eigen::Index>(k)) = parse_rational(entries[k]);
    return v;
}

}  // namespace gamehedge
