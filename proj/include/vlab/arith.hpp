#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace vlab {

// Smallest-prime-factor table over [0, limit]; entries 0 and 1 are 0.
class FactorSieve {
public:
    explicit FactorSieve(std::int64_t limit);

    [[nodiscard]] std::int64_t limit() const { return limit_; }
    [[nodiscard]] std::uint32_t spf(std::int64_t n) const;
    [[nodiscard]] bool is_prime(std::int64_t n) const;
    [[nodiscard]] std::span<const std::uint32_t> primes() const { return primes_; }

    /// Distinct prime factors of n in ascending order (n <= limit).
    [[nodiscard]] std::vector<std::int64_t> prime_factors(std::int64_t n) const;

    /// Möbius function of n (n <= limit), evaluated by factoring.
    [[nodiscard]] int mobius(std::int64_t n) const;

    [[nodiscard]] std::int64_t totient(std::int64_t n) const;

private:
    std::int64_t limit_;
    std::vector<std::uint32_t> spf_;
    std::vector<std::uint32_t> primes_;
};

FactorSieve build_sieve(std::int64_t limit);

// Λ, ϑ-weight, μ and φ over [0, limit]. Index 0 holds zeros.
struct ArithTables {
    std::int64_t limit = 0;
    std::vector<double> lambda;  // log p on prime powers p^k
    std::vector<double> theta;   // log p on primes only
    std::vector<std::int8_t> mu;
    std::vector<std::int64_t> phi;
};

ArithTables build_tables(const FactorSieve& sieve);

/// Sum of log p over primes p <= x with p ≡ b (mod d). b == d is read as 0.
double theta_progression(std::int64_t x, std::int64_t d, std::int64_t b,
                         const ArithTables& tables);

/// Sum of Λ(n) over n <= x with n ≡ b (mod d).
double psi_progression(std::int64_t x, std::int64_t d, std::int64_t b,
                       const ArithTables& tables);

/// Divisors of n in ascending order.
std::vector<std::int64_t> divisors(std::int64_t n, const FactorSieve& sieve);

std::int64_t divisor_count(std::int64_t n, const FactorSieve& sieve);

/// gcd with the convention gcd(0, r) = r.
std::int64_t gcd(std::int64_t a, std::int64_t b);

bool is_squarefree(std::int64_t n, const FactorSieve& sieve);

/// Canonical residue in [0, d) for b in [0, d]; throws for other inputs.
std::int64_t canonical_residue(std::int64_t b, std::int64_t d);

/// Primes up to limit by a plain odd-only Eratosthenes sieve. Lighter than
/// FactorSieve when only the primes themselves are needed.
std::vector<std::uint32_t> primes_up_to(std::int64_t limit);

/// Distinct prime factors of an arbitrary positive n by trial division.
std::vector<std::int64_t> trial_prime_factors(std::int64_t n);

}  // namespace vlab
