#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ccroll {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1)
{
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    BigInt n(num), d(den);
    if (d < 0) {
        n = -n;
        d = -d;
    }
    return Rational(n, d);
}

inline Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

inline int sign(const Rational& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

namespace detail {

inline BigInt parse_integer(std::string_view s, std::string_view whole)
{
    if (s.empty()) throw std::invalid_argument("malformed number: '" + std::string(whole) + "'");
    BigInt value = 0;
    for (char ch : s) {
        if (ch < '0' || ch > '9')
            throw std::invalid_argument("malformed number: '" + std::string(whole) + "'");
        value = value * 10 + (ch - '0');
    }
    return value;
}

} // namespace detail

/// Parses `p/q`, a decimal such as `-0.125`, or a plain integer. The result is exact.
inline Rational parse_rational(std::string_view text)
{
    std::string_view s = text;
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }

    Rational value;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        BigInt num = detail::parse_integer(s.substr(0, slash), text);
        BigInt den = detail::parse_integer(s.substr(slash + 1), text);
        if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        value = Rational(num, den);
    } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view int_part = s.substr(0, dot);
        std::string_view frac_part = s.substr(dot + 1);
        if (int_part.empty() && frac_part.empty())
            throw std::invalid_argument("malformed number: '" + std::string(text) + "'");
        BigInt ip = int_part.empty() ? BigInt(0) : detail::parse_integer(int_part, text);
        BigInt fp = frac_part.empty() ? BigInt(0) : detail::parse_integer(frac_part, text);
        BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac_part.size()));
        value = Rational(ip * scale + fp, scale);
    } else {
        value = Rational(detail::parse_integer(s, text));
    }
    return negative ? Rational(-value) : value;
}

/// Canonical text form: `p` for integers, `p/q` (lowest terms, q > 0) otherwise.
inline std::string format_rational(const Rational& r)
{
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

} // namespace ccroll
