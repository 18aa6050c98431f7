#pragma once

#include <cstdint>
#include <string_view>

namespace vlab {

inline constexpr std::int64_t kDefaultPrimeCutoff = 10'000'000;

/// Euler–Mascheroni constant by the Brent–McMillan Bessel-function series.
double euler_gamma();
/// Euler–Mascheroni constant from the harmonic sum with Euler–Maclaurin correction.
double euler_gamma_harmonic(std::int64_t terms = 100'000);

struct TruncatedValue {
    double value = 0.0;
    double tail_bound = 0.0;  // rigorous bound on |true value − value|
};

/// Σ_{p <= cutoff} log p / (p(p−1)) with a bound on the omitted tail.
TruncatedValue logp_sum(std::int64_t prime_cutoff);

/// 6/π².
double zeta2_inv();
/// 1 / (Σ_{n <= terms} n⁻² + Euler–Maclaurin tail); independent check of zeta2_inv.
double zeta2_inv_series(std::int64_t terms = 1'000'000);

enum class ProductKind {
    PM1,   // Π (1 − 1/(p(p−1)))
    SQ,    // Π (1 − 1/(p−1)²)
    ZETA,  // Π (1 − 1/p²)
};

std::string_view to_string(ProductKind kind);

struct RestrictedProduct {
    ProductKind kind = ProductKind::PM1;
    std::int64_t N = 1;  // primes dividing N are left out
    double value = 0.0;
    std::int64_t prime_cutoff = 0;
    double tail_bound = 0.0;  // bound on |true value − value|
};

RestrictedProduct restricted_product(ProductKind kind, std::int64_t N,
                                     std::int64_t prime_cutoff = kDefaultPrimeCutoff);

struct ConstantSet {
    double gamma = 0.0;
    double logp_sum = 0.0;
    double c0 = 0.0;  // 1 + γ + logp_sum
    double c1 = 0.0;  // 1 + 2γ + 2·logp_sum
    double c2 = 0.0;  // γ + logp_sum
    double zeta2_inv = 0.0;
    double artin = 0.0;         // Π_p (1 − 1/(p(p−1)))
    double zeta_product = 0.0;  // Π_p (1 − 1/p²)
    std::int64_t prime_cutoff = 0;
    double tail_bound = 0.0;
};

ConstantSet constant_set(std::int64_t prime_cutoff = kDefaultPrimeCutoff);

struct TValue {
    std::int64_t N = 1;
    double value = 0.0;
    double error_bound = 0.0;
    /// Whether value >= 1; the claimed lower bound fails for odd N.
    bool at_least_one = false;
};

/// t(N) = 2 − Π_{p∤N}(1 − 1/(p(p−1)))⁻¹ · Π_p(1 − 1/p²).
TValue t_of_n(std::int64_t N, std::int64_t prime_cutoff = kDefaultPrimeCutoff);

}  // namespace vlab
