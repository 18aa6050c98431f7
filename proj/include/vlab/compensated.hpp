#pragma once

#include <span>

namespace vlab {

// Neumaier's variant of Kahan summation. The running compensation is
// folded in only when the value is read, so adding terms in a fixed order
// always produces the same bits.
class CompensatedSum {
public:
    CompensatedSum() = default;
    explicit CompensatedSum(double initial) : sum_(initial) {}

    CompensatedSum& operator+=(double term) {
        const double t = sum_ + term;
        if ((sum_ >= 0 ? sum_ : -sum_) >= (term >= 0 ? term : -term)) {
            comp_ += (sum_ - t) + term;
        } else {
            comp_ += (term - t) + sum_;
        }
        sum_ = t;
        return *this;
    }

    CompensatedSum& operator-=(double term) { return *this += -term; }

    [[nodiscard]] double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> values) {
    CompensatedSum acc;
    for (double v : values) acc += v;
    return acc.value();
}

}  // namespace vlab
