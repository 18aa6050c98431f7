#include "vlab/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "vlab/compensated.hpp"
#include "vlab/errors.hpp"

namespace vlab {

namespace {

void require_in_table(std::int64_t n, std::int64_t limit, const char* what) {
    if (n > limit) {
        throw OutOfRange(std::string(what) + " = " + std::to_string(n) +
                         " exceeds table limit " + std::to_string(limit));
    }
}

void require_modulus(std::int64_t d) {
    if (d < 1) throw InvalidArgument("modulus must be >= 1, got " + std::to_string(d));
}

template <typename Weight>
double progression_sum(std::int64_t x, std::int64_t d, std::int64_t b,
                       const std::vector<Weight>& weights, std::int64_t limit) {
    require_modulus(d);
    require_in_table(x, limit, "x");
    const std::int64_t r = canonical_residue(b, d);
    CompensatedSum acc;
    for (std::int64_t n = (r == 0 ? d : r); n <= x; n += d) acc += weights[n];
    return acc.value();
}

}  // namespace

FactorSieve::FactorSieve(std::int64_t limit) : limit_(limit) {
    if (limit < 2) throw InvalidArgument("sieve limit must be >= 2");
    spf_.assign(static_cast<std::size_t>(limit) + 1, 0);
    // Linear sieve: every composite is struck exactly once, by its smallest prime.
    for (std::int64_t i = 2; i <= limit; ++i) {
        if (spf_[i] == 0) {
            spf_[i] = static_cast<std::uint32_t>(i);
            primes_.push_back(static_cast<std::uint32_t>(i));
        }
        const std::uint32_t si = spf_[i];
        for (std::uint32_t p : primes_) {
            if (p > si || static_cast<std::int64_t>(p) * i > limit) break;
            spf_[static_cast<std::size_t>(p) * i] = p;
        }
    }
}

std::uint32_t FactorSieve::spf(std::int64_t n) const {
    require_in_table(n, limit_, "n");
    return spf_[n];
}

bool FactorSieve::is_prime(std::int64_t n) const {
    return n >= 2 && spf(n) == n;
}

std::vector<std::int64_t> FactorSieve::prime_factors(std::int64_t n) const {
    require_in_table(n, limit_, "n");
    std::vector<std::int64_t> out;
    while (n > 1) {
        const std::int64_t p = spf_[n];
        out.push_back(p);
        while (n % p == 0) n /= p;
    }
    return out;
}

int FactorSieve::mobius(std::int64_t n) const {
    require_in_table(n, limit_, "n");
    int sign = 1;
    while (n > 1) {
        const std::int64_t p = spf_[n];
        n /= p;
        if (n % p == 0) return 0;
        sign = -sign;
    }
    return sign;
}

std::int64_t FactorSieve::totient(std::int64_t n) const {
    require_in_table(n, limit_, "n");
    std::int64_t result = n;
    for (std::int64_t p : prime_factors(n)) result = result / p * (p - 1);
    return result;
}

FactorSieve build_sieve(std::int64_t limit) {
    return FactorSieve(limit);
}

ArithTables build_tables(const FactorSieve& sieve) {
    const std::int64_t limit = sieve.limit();
    const auto size = static_cast<std::size_t>(limit) + 1;
    ArithTables t;
    t.limit = limit;
    t.lambda.assign(size, 0.0);
    t.theta.assign(size, 0.0);
    t.mu.assign(size, 0);
    t.phi.assign(size, 0);
    t.mu[1] = 1;
    t.phi[1] = 1;
    for (std::int64_t n = 2; n <= limit; ++n) {
        const std::int64_t p = sieve.spf(n);
        const std::int64_t m = n / p;
        if (m % p == 0) {
            t.mu[n] = 0;
            t.phi[n] = t.phi[m] * p;
            // n = p^k exactly when m is itself a power of p.
            if (t.lambda[m] != 0.0 && sieve.spf(m) == p) t.lambda[n] = t.lambda[m];
        } else {
            t.mu[n] = static_cast<std::int8_t>(-t.mu[m]);
            t.phi[n] = t.phi[m] * (p - 1);
            if (m == 1) {
                t.lambda[n] = std::log(static_cast<double>(p));
                t.theta[n] = t.lambda[n];
            }
        }
    }
    return t;
}

double theta_progression(std::int64_t x, std::int64_t d, std::int64_t b,
                         const ArithTables& tables) {
    return progression_sum(x, d, b, tables.theta, tables.limit);
}

double psi_progression(std::int64_t x, std::int64_t d, std::int64_t b,
                       const ArithTables& tables) {
    return progression_sum(x, d, b, tables.lambda, tables.limit);
}

std::vector<std::int64_t> divisors(std::int64_t n, const FactorSieve& sieve) {
    if (n < 1) throw InvalidArgument("divisors: n must be positive");
    require_in_table(n, sieve.limit(), "n");
    std::vector<std::int64_t> out{1};
    std::int64_t rest = n;
    while (rest > 1) {
        const std::int64_t p = sieve.spf(rest);
        int k = 0;
        while (rest % p == 0) {
            rest /= p;
            ++k;
        }
        const std::size_t base = out.size();
        std::int64_t pk = 1;
        for (int e = 1; e <= k; ++e) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::int64_t divisor_count(std::int64_t n, const FactorSieve& sieve) {
    return static_cast<std::int64_t>(divisors(n, sieve).size());
}

std::int64_t gcd(std::int64_t a, std::int64_t b) {
    return std::gcd(a, b);
}

bool is_squarefree(std::int64_t n, const FactorSieve& sieve) {
    if (n < 1) return false;
    return n == 1 || sieve.mobius(n) != 0;
}

std::int64_t canonical_residue(std::int64_t b, std::int64_t d) {
    require_modulus(d);
    if (b < 0 || b > d) {
        throw InvalidArgument("residue " + std::to_string(b) + " outside [0, " +
                              std::to_string(d) + "]");
    }
    return b == d ? 0 : b;
}

std::vector<std::uint32_t> primes_up_to(std::int64_t limit) {
    std::vector<std::uint32_t> out;
    if (limit < 2) return out;
    out.push_back(2);
    // composite[i] marks the odd number 2i + 1.
    const std::size_t half = static_cast<std::size_t>((limit - 1) / 2) + 1;
    std::vector<char> composite(half, 0);
    for (std::size_t i = 1; i < half; ++i) {
        if (composite[i]) continue;
        const std::uint64_t p = 2 * i + 1;
        out.push_back(static_cast<std::uint32_t>(p));
        for (std::uint64_t j = (p * p - 1) / 2; j < half; j += p) composite[j] = 1;
    }
    return out;
}

std::vector<std::int64_t> trial_prime_factors(std::int64_t n) {
    if (n < 1) throw InvalidArgument("trial_prime_factors: n must be positive");
    std::vector<std::int64_t> out;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        out.push_back(p);
        while (n % p == 0) n /= p;
    }
    if (n > 1) out.push_back(n);
    return out;
}

}  // namespace vlab
