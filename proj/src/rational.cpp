#include "vlab/rational.hpp"

#include <algorithm>

#include "vlab/errors.hpp"

namespace vlab {

namespace {

Int128 abs128(Int128 v) { return v < 0 ? -v : v; }

Int128 gcd128(Int128 a, Int128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        const Int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Int128 checked_mul(Int128 a, Int128 b) {
    Int128 out;
    if (__builtin_mul_overflow(a, b, &out)) throw RationalOverflow("128-bit multiply overflow");
    return out;
}

Int128 checked_add(Int128 a, Int128 b) {
    Int128 out;
    if (__builtin_add_overflow(a, b, &out)) throw RationalOverflow("128-bit add overflow");
    return out;
}

}  // namespace

ExactRational::ExactRational(Int128 numerator, Int128 denominator) {
    if (denominator == 0) throw InvalidArgument("rational with zero denominator");
    if (denominator < 0) {
        numerator = -numerator;
        denominator = -denominator;
    }
    const Int128 g = gcd128(numerator, denominator);
    num_ = g == 0 ? 0 : numerator / g;
    den_ = g == 0 ? 1 : denominator / g;
}

double ExactRational::to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string ExactRational::to_string() const {
    if (den_ == 1) return int128_to_string(num_);
    return int128_to_string(num_) + "/" + int128_to_string(den_);
}

ExactRational operator+(const ExactRational& a, const ExactRational& b) {
    const Int128 g = gcd128(a.den_, b.den_);
    const Int128 da = a.den_ / g;
    const Int128 db = b.den_ / g;
    return {checked_add(checked_mul(a.num_, db), checked_mul(b.num_, da)),
            checked_mul(a.den_, db)};
}

ExactRational operator-(const ExactRational& a, const ExactRational& b) {
    return a + ExactRational(-b.num_, b.den_);
}

ExactRational operator*(const ExactRational& a, const ExactRational& b) {
    // Cross-reduce first to keep intermediates small.
    const Int128 g1 = std::max<Int128>(gcd128(a.num_, b.den_), 1);
    const Int128 g2 = std::max<Int128>(gcd128(b.num_, a.den_), 1);
    return {checked_mul(a.num_ / g1, b.num_ / g2), checked_mul(a.den_ / g2, b.den_ / g1)};
}

ExactRational operator/(const ExactRational& a, const ExactRational& b) {
    if (b.num_ == 0) throw InvalidArgument("rational division by zero");
    return a * ExactRational(b.den_, b.num_);
}

std::string int128_to_string(Int128 value) {
    if (value == 0) return "0";
    const bool negative = value < 0;
    // Work in the negative range so the most negative value is representable.
    std::string digits;
    Int128 v = negative ? value : -value;
    while (v != 0) {
        digits.push_back(static_cast<char>('0' - static_cast<int>(v % 10)));
        v /= 10;
    }
    if (negative) digits.push_back('-');
    std::reverse(digits.begin(), digits.end());
    return digits;
}

}  // namespace vlab
