#include "lfkit/rational.hpp"

#include "lfkit/error.hpp"

#include <cmath>

namespace lfkit {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
    }
    return true;
}

Integer parse_integer(std::string_view s) {
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s)) throw ParseError("not an integer: '" + std::string(s) + "'");
    Integer value{std::string(s)};
    return negative ? Integer(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (text.empty()) throw ParseError("empty rational literal");

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        Integer num = parse_integer(text.substr(0, slash));
        Integer den = parse_integer(text.substr(slash + 1));
        if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
        return Rational(num, den);
    }
    if (auto dot_pos = text.find('.'); dot_pos != std::string_view::npos) {
        std::string_view int_part = text.substr(0, dot_pos);
        std::string_view frac_part = text.substr(dot_pos + 1);
        bool negative = !int_part.empty() && int_part.front() == '-';
        if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) {
            int_part.remove_prefix(1);
        }
        if (int_part.empty()) int_part = "0";
        if (!all_digits(int_part) || (!frac_part.empty() && !all_digits(frac_part))) {
            throw ParseError("not a decimal: '" + std::string(text) + "'");
        }
        Integer scale = 1;
        for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
        Integer whole{std::string(int_part)};
        Integer frac = frac_part.empty() ? Integer(0) : Integer(std::string(frac_part));
        Rational value(Integer(whole * scale + frac), scale);
        return negative ? Rational(-value) : value;
    }
    return Rational(parse_integer(text));
}

std::string to_string(const Rational& value) {
    Integer num = boost::multiprecision::numerator(value);
    Integer den = boost::multiprecision::denominator(value);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

Rational rationalize(double value, const Integer& max_denominator) {
    if (!std::isfinite(value)) throw ParseError("cannot rationalize a non-finite value");
    if (max_denominator < 1) throw ParseError("denominator bound must be positive");

    // Exact value of the double, then best approximation from its continued fraction.
    Rational exact(value);
    if (boost::multiprecision::denominator(exact) <= max_denominator) return exact;

    Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    Rational rest = exact;
    for (;;) {
        Integer a = boost::multiprecision::numerator(rest) / boost::multiprecision::denominator(rest);
        if (rest < 0 && Rational(a) != rest) a -= 1;  // floor for negatives
        Integer p2 = a * p1 + p0;
        Integer q2 = a * q1 + q0;
        if (q2 > max_denominator) {
            // Largest semiconvergent that still respects the bound.
            Integer k = (max_denominator - q0) / q1;
            Rational semi(Integer(k * p1 + p0), Integer(k * q1 + q0));
            Rational conv(p1, q1);
            using boost::multiprecision::abs;
            return abs(semi - exact) < abs(conv - exact) ? semi : conv;
        }
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        Rational frac = rest - Rational(a);
        if (frac == 0) return Rational(p1, q1);
        rest = 1 / frac;
    }
}

RationalVector primitive_integer(const RationalVector& v) {
    Integer lcm_den = 1;
    for (const auto& x : v) {
        if (x != 0) lcm_den = boost::multiprecision::lcm(lcm_den, Integer(boost::multiprecision::denominator(x)));
    }
    Integer g = 0;
    for (const auto& x : v) {
        if (x == 0) continue;
        Integer scaled = boost::multiprecision::numerator(x) * (lcm_den / boost::multiprecision::denominator(x));
        g = boost::multiprecision::gcd(g, Integer(abs(scaled)));
    }
    if (g == 0) return v;
    RationalVector out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(x * Rational(lcm_den) / Rational(g));
    return out;
}

Rational dot(const RationalVector& a, const RationalVector& b) {
    Rational sum = 0;
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] != 0 && b[i] != 0) sum += a[i] * b[i];
    }
    return sum;
}

}  // namespace lfkit
