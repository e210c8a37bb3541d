#include "causalforge/rational.hpp"

#include <sstream>

#include "causalforge/errors.hpp"

namespace causalforge {

Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(text));
        BigInt num(text.substr(0, slash));
        BigInt den(text.substr(slash + 1));
        if (den == 0) throw InputError("rational with zero denominator: " + text);
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        throw InputError("not a rational: " + text);
    }
}

std::string rational_str(const Rational& q) {
    std::ostringstream out;
    out << numerator(q);
    if (denominator(q) != 1) out << "/" << denominator(q);
    return out.str();
}

std::optional<BigInt> exact_isqrt(const BigInt& n) {
    if (n < 0) return std::nullopt;
    BigInt root = boost::multiprecision::sqrt(n);
    if (root * root == n) return root;
    return std::nullopt;
}

BigInt floor_div(const BigInt& num, const BigInt& den) {
    BigInt q = num / den;
    if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
    return q;
}

BigInt rational_floor(const Rational& q) { return floor_div(numerator(q), denominator(q)); }

} // namespace causalforge
