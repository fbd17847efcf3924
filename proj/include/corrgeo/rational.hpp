#ifndef CORRGEO_RATIONAL_HPP
#define CORRGEO_RATIONAL_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

#include "corrgeo/error.hpp"

namespace corrgeo {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
using RVector = std::vector<Rational>;

inline Integer numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

inline bool is_zero(const Rational& q) { return q.sign() == 0; }

/// "p/q" form, always with an explicit denominator ("3/1", "0/1").
inline std::string to_fraction_string(const Rational& q)
{
    return numerator_of(q).str() + "/" + denominator_of(q).str();
}

/// Shortest exact form: "3", "-1/2".
inline std::string to_compact_string(const Rational& q)
{
    if (denominator_of(q) == 1) return numerator_of(q).str();
    return to_fraction_string(q);
}

namespace detail {

// Integer's string constructor reads a leading 0 as octal, so strip it first.
inline Integer decimal_integer(std::string_view digits, bool negative)
{
    const auto first = digits.find_first_not_of('0');
    const Integer value(first == std::string_view::npos ? std::string("0") : std::string(digits.substr(first)));
    return negative ? Integer(-value) : value;
}

inline Integer parse_integer(std::string_view text, std::string_view whole)
{
    std::string_view digits = text;
    if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
    if (digits.empty()) fail(ErrorKind::ParseError, "bad number '" + std::string(whole) + "'");
    for (char c : digits) {
        if (c < '0' || c > '9') fail(ErrorKind::ParseError, "bad number '" + std::string(whole) + "'");
    }
    return decimal_integer(digits, !text.empty() && text.front() == '-');
}

inline Integer pow10(long exponent)
{
    Integer r = 1;
    for (long i = 0; i < exponent; ++i) r *= 10;
    return r;
}

} // namespace detail

/// Parses "p", "p/q", or a decimal literal such as "-0.5" or "1.25e-3", exactly.
inline Rational parse_rational(std::string_view text)
{
    auto trim = [](std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
        return s;
    };
    const std::string_view whole = trim(text);
    if (whole.empty()) fail(ErrorKind::ParseError, "empty number");

    if (auto slash = whole.find('/'); slash != std::string_view::npos) {
        Integer num = detail::parse_integer(trim(whole.substr(0, slash)), whole);
        Integer den = detail::parse_integer(trim(whole.substr(slash + 1)), whole);
        if (den == 0) fail(ErrorKind::ParseError, "zero denominator in '" + std::string(whole) + "'");
        return Rational(num, den);
    }

    std::string_view mantissa = whole;
    long exponent = 0;
    if (auto e = whole.find_first_of("eE"); e != std::string_view::npos) {
        mantissa = whole.substr(0, e);
        std::string exp_text(whole.substr(e + 1));
        Integer exp_value = detail::parse_integer(exp_text, whole);
        if (abs(exp_value) > 4000) fail(ErrorKind::ParseError, "exponent out of range in '" + std::string(whole) + "'");
        exponent = exp_value.convert_to<long>();
    }
    bool negative = false;
    if (!mantissa.empty() && (mantissa.front() == '-' || mantissa.front() == '+')) {
        negative = mantissa.front() == '-';
        mantissa.remove_prefix(1);
    }
    std::string digits;
    long fraction_digits = 0;
    bool seen_point = false;
    for (char c : mantissa) {
        if (c == '.' && !seen_point) {
            seen_point = true;
        } else if (c >= '0' && c <= '9') {
            digits.push_back(c);
            if (seen_point) ++fraction_digits;
        } else {
            fail(ErrorKind::ParseError, "bad number '" + std::string(whole) + "'");
        }
    }
    if (digits.empty()) fail(ErrorKind::ParseError, "bad number '" + std::string(whole) + "'");
    Rational value{detail::decimal_integer(digits, false)};
    long scale = exponent - fraction_digits;
    if (scale > 0) value *= Rational(detail::pow10(scale));
    if (scale < 0) value /= Rational(detail::pow10(-scale));
    return negative ? Rational(-value) : value;
}

/// Exact binary value of a finite double.
inline Rational rational_from_double(double x)
{
    if (!std::isfinite(x)) fail(ErrorKind::ParseError, "non-finite value");
    return Rational(x);
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline Rational dot(const RVector& a, const RVector& b)
{
    Rational sum = 0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
    return sum;
}

/// Scales a nonzero vector by a positive factor so its entries become coprime
/// integers. The sign pattern (and hence the orientation of any inequality it
/// encodes) is preserved.
inline RVector to_primitive_integers(const RVector& v)
{
    Integer lcm_den = 1;
    for (const auto& q : v) lcm_den = boost::multiprecision::lcm(lcm_den, denominator_of(q));
    std::vector<Integer> ints;
    ints.reserve(v.size());
    Integer g = 0;
    for (const auto& q : v) {
        Integer n = numerator_of(q) * (lcm_den / denominator_of(q));
        g = boost::multiprecision::gcd(g, abs(n));
        ints.push_back(std::move(n));
    }
    RVector out;
    out.reserve(v.size());
    for (auto& n : ints) out.emplace_back(g == 0 ? n : Integer(n / g));
    return out;
}

} // namespace corrgeo

#endif
