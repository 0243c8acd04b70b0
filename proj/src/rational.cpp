#include "gamehedge/rational.hpp"

#include <cctype>
#include <cmath>

namespace gamehedge {

namespace {

Integer parse_integer(std::string_view digits, std::string_view whole) {
    if (digits.empty()) throw ParseError("empty number in '" + std::string(whole) + "'");
    for (char c : digits) {
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw ParseError("invalid number '" + std::string(whole) + "'");
    }
    return Integer(std::string(digits));
}

Integer pow10(long e) {
    Integer r = 1;
    for (long i = 0; i < e; ++i) r *= 10;
    return r;
}

Rational parse_decimal(std::string_view s, std::string_view whole) {
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view exp_text = s.substr(e + 1);
        bool exp_negative = false;
        if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
            exp_negative = exp_text.front() == '-';
            exp_text.remove_prefix(1);
        }
        Integer mag = parse_integer(exp_text, whole);
        if (mag > 4096) throw ParseError("exponent out of range in '" + std::string(whole) + "'");
        exponent = mag.convert_to<long>() * (exp_negative ? -1 : 1);
        s = s.substr(0, e);
    }
    std::string digits;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view int_part = s.substr(0, dot);
        std::string_view frac_part = s.substr(dot + 1);
        if (int_part.empty() && frac_part.empty())
            throw ParseError("invalid number '" + std::string(whole) + "'");
        digits = std::string(int_part) + std::string(frac_part);
        exponent -= static_cast<long>(frac_part.size());
    } else {
        digits = std::string(s);
    }
    Integer mantissa = parse_integer(digits, whole);
    Rational q(mantissa);
    if (exponent > 0) q *= Rational(pow10(exponent));
    if (exponent < 0) q /= Rational(pow10(-exponent));
    return negative ? Rational(-q) : q;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.empty()) throw ParseError("empty rational");
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        Rational num = parse_decimal(s.substr(0, slash), text);
        Rational den = parse_decimal(s.substr(slash + 1), text);
        if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
        return num / den;
    }
    return parse_decimal(s, text);
}

std::string to_string(const Rational& q) {
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

std::string to_decimal(const Rational& q, int places) {
    Integer scale = pow10(places);
    Rational scaled = q * Rational(scale);
    Integer num = numerator(scaled);
    Integer den = denominator(scaled);
    bool negative = num < 0;
    if (negative) num = -num;
    Integer whole = num / den;
    Integer rem = num - whole * den;
    Integer twice = rem * 2;
    if (twice > den || (twice == den && (whole % 2) == 1)) whole += 1;

    std::string digits = whole.str();
    if (static_cast<int>(digits.size()) <= places)
        digits = std::string(places + 1 - digits.size(), '0') + digits;
    std::string out = negative && whole != 0 ? "-" : "";
    out += digits.substr(0, digits.size() - places);
    if (places > 0) out += "." + digits.substr(digits.size() - places);
    return out;
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

Rational from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite value");
    return Rational(x);
}

Rational approximate(long double x, long double rel_tol) {
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite value");
    const long double target = std::fabs(x);
    const long double tol = rel_tol * target;
    // Convergents h/k of the continued fraction of |x|.
    Integer h_prev = 1, h = static_cast<long long>(std::floor(target));
    Integer k_prev = 0, k = 1;
    long double frac = target - std::floor(target);
    for (int iter = 0; iter < 64; ++iter) {
        long double approx = h.convert_to<long double>() / k.convert_to<long double>();
        if (std::fabs(approx - target) <= tol || frac == 0) break;
        long double inv = 1.0L / frac;
        long double a = std::floor(inv);
        frac = inv - a;
        Integer ai = static_cast<long long>(a);
        Integer h_next = ai * h + h_prev;
        Integer k_next = ai * k + k_prev;
        h_prev = h;
        k_prev = k;
        h = h_next;
        k = k_next;
    }
    Rational r(h, k);
    return x < 0 ? Rational(-r) : r;
}

}  // namespace gamehedge
