#include "vlab/constants.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

#include "vlab/arith.hpp"
#include "vlab/compensated.hpp"
#include "vlab/errors.hpp"

namespace vlab {

namespace {

constexpr std::int64_t kMinCutoff = 10;

// The prime list for the most recently requested cutoff. Products for many
// N share one cutoff, so this avoids re-sieving on every call.
std::shared_ptr<const std::vector<std::uint32_t>> primes_cached(std::int64_t cutoff) {
    static std::mutex mutex;
    static std::int64_t cached_cutoff = -1;
    static std::shared_ptr<const std::vector<std::uint32_t>> cached;
    std::lock_guard lock(mutex);
    if (cached_cutoff != cutoff) {
        cached = std::make_shared<const std::vector<std::uint32_t>>(primes_up_to(cutoff));
        cached_cutoff = cutoff;
    }
    return cached;
}

void require_cutoff(std::int64_t cutoff) {
    if (cutoff < kMinCutoff) {
        throw InvalidArgument("prime_cutoff must be >= " + std::to_string(kMinCutoff) + ", got " +
                              std::to_string(cutoff));
    }
}

double product_factor(ProductKind kind, double p) {
    switch (kind) {
        case ProductKind::PM1: return 1.0 - 1.0 / (p * (p - 1.0));
        case ProductKind::SQ: return 1.0 - 1.0 / ((p - 1.0) * (p - 1.0));
        case ProductKind::ZETA: return 1.0 - 1.0 / (p * p);
    }
    return 1.0;
}

// Every factor has the form 1 − a_p with 0 <= a_p <= 1/(p−1)², so the omitted
// tail lies in [1 − Σ_{m >= P} 1/m², 1] ⊂ [1 − 1/(P−1), 1].
double product_relative_tail(std::int64_t cutoff) {
    return 1.0 / static_cast<double>(cutoff - 1);
}

}  // namespace

double euler_gamma() {
    // Brent–McMillan: γ = U/V with U = Σ A_k, V = Σ B_k, truncation error
    // about π·e^{−4n}.
    constexpr double n = 12.0;
    double a = -std::log(n);
    double b = 1.0;
    CompensatedSum u(a);
    CompensatedSum v(b);
    for (int k = 1; k < 80; ++k) {
        const double kk = k;
        b *= n * n / (kk * kk);
        a = (a * n * n / kk + b) / kk;
        u += a;
        v += b;
    }
    return u.value() / v.value();
}

double euler_gamma_harmonic(std::int64_t terms) {
    if (terms < 10) throw InvalidArgument("euler_gamma_harmonic: need at least 10 terms");
    CompensatedSum h;
    for (std::int64_t k = terms; k >= 1; --k) h += 1.0 / static_cast<double>(k);
    const double K = static_cast<double>(terms);
    const double K2 = K * K;
    h -= std::log(K);
    h -= 1.0 / (2.0 * K);
    h += 1.0 / (12.0 * K2);
    h -= 1.0 / (120.0 * K2 * K2);
    h += 1.0 / (252.0 * K2 * K2 * K2);
    return h.value();
}

TruncatedValue logp_sum(std::int64_t prime_cutoff) {
    require_cutoff(prime_cutoff);
    const auto primes = primes_cached(prime_cutoff);
    CompensatedSum acc;
    for (std::uint32_t p : *primes) {
        const double dp = p;
        acc += std::log(dp) / (dp * (dp - 1.0));
    }
    // log t / (t(t−1)) decreases for t >= 2; bounding the prime tail by the
    // integral over all t > P gives (log P + 1)/(P − 1).
    const double P = static_cast<double>(prime_cutoff);
    return {acc.value(), (std::log(P) + 1.0) / (P - 1.0)};
}

double zeta2_inv() {
    return 6.0 / (std::numbers::pi * std::numbers::pi);
}

double zeta2_inv_series(std::int64_t terms) {
    if (terms < 10) throw InvalidArgument("zeta2_inv_series: need at least 10 terms");
    CompensatedSum s;
    for (std::int64_t n = terms; n >= 1; --n) {
        const double dn = static_cast<double>(n);
        s += 1.0 / (dn * dn);
    }
    // Σ_{n > K} n⁻² = 1/K − 1/(2K²) + 1/(6K³) − 1/(30K⁵) + ...
    const double K = static_cast<double>(terms);
    s += 1.0 / K;
    s -= 1.0 / (2.0 * K * K);
    s += 1.0 / (6.0 * K * K * K);
    s -= 1.0 / (30.0 * K * K * K * K * K);
    return 1.0 / s.value();
}

std::string_view to_string(ProductKind kind) {
    switch (kind) {
        case ProductKind::PM1: return "P_PM1";
        case ProductKind::SQ: return "P_SQ";
        case ProductKind::ZETA: return "P_ZETA";
    }
    return "?";
}

RestrictedProduct restricted_product(ProductKind kind, std::int64_t N, std::int64_t prime_cutoff) {
    require_cutoff(prime_cutoff);
    if (N < 1) throw InvalidArgument("restricted_product: N must be >= 1");
    const auto excluded = trial_prime_factors(N);
    if (!excluded.empty() && excluded.back() > prime_cutoff) {
        throw InvalidArgument("restricted_product: prime_cutoff " + std::to_string(prime_cutoff) +
                              " is below the largest prime factor of N (" +
                              std::to_string(excluded.back()) + ")");
    }
    const auto primes = primes_cached(prime_cutoff);
    double value = 1.0;
    std::size_t next_excluded = 0;
    for (std::uint32_t p : *primes) {
        if (next_excluded < excluded.size() && excluded[next_excluded] == p) {
            ++next_excluded;
            continue;
        }
        value *= product_factor(kind, static_cast<double>(p));
    }
    RestrictedProduct out;
    out.kind = kind;
    out.N = N;
    out.value = value;
    out.prime_cutoff = prime_cutoff;
    out.tail_bound = std::abs(value) * product_relative_tail(prime_cutoff);
    return out;
}

ConstantSet constant_set(std::int64_t prime_cutoff) {
    const TruncatedValue lp = logp_sum(prime_cutoff);
    const RestrictedProduct artin = restricted_product(ProductKind::PM1, 1, prime_cutoff);
    const RestrictedProduct zeta = restricted_product(ProductKind::ZETA, 1, prime_cutoff);

    ConstantSet cs;
    cs.gamma = euler_gamma();
    cs.logp_sum = lp.value;
    cs.c0 = 1.0 + cs.gamma + cs.logp_sum;
    // Both are exact operations on c0 in binary floating point, so the
    // relations c2 = c0 − 1 and c1 = 2c0 − 1 hold bit for bit.
    cs.c2 = cs.c0 - 1.0;
    cs.c1 = 2.0 * cs.c0 - 1.0;
    cs.zeta2_inv = zeta2_inv();
    cs.artin = artin.value;
    cs.zeta_product = zeta.value;
    cs.prime_cutoff = prime_cutoff;
    cs.tail_bound = std::max({lp.tail_bound, artin.tail_bound, zeta.tail_bound});
    return cs;
}

TValue t_of_n(std::int64_t N, std::int64_t prime_cutoff) {
    const RestrictedProduct pm1 = restricted_product(ProductKind::PM1, N, prime_cutoff);
    const double ratio = zeta2_inv() / pm1.value;
    TValue out;
    out.N = N;
    out.value = 2.0 - ratio;
    // The ζ product is taken in closed form; the other carries relative error at most 1/(P−1).
    out.error_bound = ratio * product_relative_tail(prime_cutoff);
    out.at_least_one = out.value >= 1.0;
    return out;
}

}  // namespace vlab
