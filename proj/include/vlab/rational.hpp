#pragma once

#include <cstdint>
#include <string>

namespace vlab {

using Int128 = __int128;

// Exact rational on 128-bit integers, always in lowest terms with a
// positive denominator. Any overflow throws RationalOverflow.
class ExactRational {
public:
    ExactRational() = default;
    ExactRational(std::int64_t value) : num_(value) {}  // NOLINT(implicit)
    ExactRational(Int128 numerator, Int128 denominator);

    [[nodiscard]] Int128 numerator() const { return num_; }
    [[nodiscard]] Int128 denominator() const { return den_; }
    [[nodiscard]] double to_double() const;
    [[nodiscard]] std::string to_string() const;

    friend ExactRational operator+(const ExactRational& a, const ExactRational& b);
    friend ExactRational operator-(const ExactRational& a, const ExactRational& b);
    friend ExactRational operator*(const ExactRational& a, const ExactRational& b);
    friend ExactRational operator/(const ExactRational& a, const ExactRational& b);
    ExactRational& operator+=(const ExactRational& other) { return *this = *this + other; }

    friend bool operator==(const ExactRational& a, const ExactRational& b) = default;

private:
    Int128 num_ = 0;
    Int128 den_ = 1;
};

std::string int128_to_string(Int128 value);

}  // namespace vlab
