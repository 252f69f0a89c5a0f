#include "sandnet/rational.hpp"

#include "sandnet/error.hpp"

#include <cctype>
#include <cmath>
#include <string>

namespace sandnet {

namespace {

BigInt parse_digits(std::string_view digits, std::string_view original) {
    BigInt value = 0;
    for (char c : digits) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            throw ValidationError("not a number: '" + std::string(original) + "'");
        }
        value = value * 10 + (c - '0');
    }
    return value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    const std::string_view original = text;
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) throw ValidationError("empty number");

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        Rational num = parse_rational(text.substr(0, slash));
        Rational den = parse_rational(text.substr(slash + 1));
        if (den == 0) throw ValidationError("zero denominator in '" + std::string(original) + "'");
        return num / den;
    }

    bool negative = false;
    if (text.front() == '-' || text.front() == '+') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    const auto dot = text.find('.');
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (whole.empty() && frac.empty()) throw ValidationError("not a number: '" + std::string(original) + "'");

    BigInt num = parse_digits(whole, original);
    BigInt den = 1;
    for (char c : frac) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            throw ValidationError("not a number: '" + std::string(original) + "'");
        }
        num = num * 10 + (c - '0');
        den *= 10;
    }
    Rational r(num, den);
    return negative ? Rational(-r) : r;
}

Rational rational_from_double(double value) {
    if (!std::isfinite(value)) throw ValidationError("non-finite value has no rational form");
    int exponent = 0;
    double mantissa = std::frexp(value, &exponent);
    // 53 significant bits: value = m * 2^(exponent - 53) with integral m.
    auto m = static_cast<long long>(std::ldexp(mantissa, 53));
    exponent -= 53;
    BigInt num = m;
    BigInt den = 1;
    if (exponent > 0) {
        num <<= exponent;
    } else {
        den <<= -exponent;
    }
    return Rational(num, den);
}

double to_double(const Rational& value) {
    return value.convert_to<double>();
}

BigInt floor(const Rational& value) {
    BigInt num = boost::multiprecision::numerator(value);
    const BigInt den = boost::multiprecision::denominator(value);
    BigInt q = num / den;  // truncates toward zero
    if (num < 0 && q * den != num) q -= 1;
    return q;
}

std::string format_rational(const Rational& value) {
    const BigInt num = boost::multiprecision::numerator(value);
    BigInt den = boost::multiprecision::denominator(value);
    if (den == 1) return num.str();

    BigInt rest = den;
    int twos = 0;
    int fives = 0;
    while (rest % 2 == 0) { rest /= 2; ++twos; }
    while (rest % 5 == 0) { rest /= 5; ++fives; }
    if (rest != 1) return num.str() + "/" + den.str();

    const int places = std::max(twos, fives);
    BigInt scale = 1;
    for (int i = 0; i < places; ++i) scale *= 10;
    BigInt scaled = num * (scale / den);
    const bool negative = scaled < 0;
    if (negative) scaled = -scaled;
    std::string digits = scaled.str();
    if (digits.size() <= static_cast<std::size_t>(places)) {
        digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
    }
    digits.insert(digits.size() - static_cast<std::size_t>(places), ".");
    return negative ? "-" + digits : digits;
}

}  // namespace sandnet
