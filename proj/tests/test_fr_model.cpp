#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "vlab/arith.hpp"
#include "vlab/errors.hpp"
#include "vlab/fr_model.hpp"
#include "vlab/rational.hpp"

using namespace vlab;

namespace {

const FactorSieve& sieve() {
    static const FactorSieve s = build_sieve(20'000);
    return s;
}

const ArithTables& tables() {
    static const ArithTables t = build_tables(sieve());
    return t;
}

// Σ_{r <= R, r ∤ v} μ(r)/φ(r) Σ_{n <= x, n ≡ N (mod v)} C_r(n), with C_r
// from the exponential sum.
double rho_star_oracle(std::int64_t x, std::int64_t v, std::int64_t N, double R) {
    const ArithTables& t = tables();
    double total = 0.0;
    for (std::int64_t r = 1; r <= static_cast<std::int64_t>(R); ++r) {
        if (t.mu[r] == 0 || v % r == 0) continue;
        double inner = 0.0;
        for (std::int64_t n = 1; n <= x; ++n) {
            if (n % v == N % v) inner += ramanujan_sum_oracle(r, n).real();
        }
        total += t.mu[r] * inner / static_cast<double>(t.phi[r]);
    }
    return total;
}

}  // namespace

TEST_CASE("Ramanujan sums at listed points") {
    CHECK(ramanujan_sum(1, 17, sieve()) == 1);
    CHECK(ramanujan_sum(3, 1, sieve()) == -1);
    CHECK(ramanujan_sum(4, 2, sieve()) == -2);
    CHECK(ramanujan_sum(6, 0, sieve()) == 2);
    // (7, 12) = 1, so C_12(7) = μ(12) = 0.
    CHECK(ramanujan_sum(12, 7, sieve()) == 0);
    CHECK(ramanujan_sum(12, 7, tables()) == 0);
    CHECK_THROWS_AS(ramanujan_sum(0, 3, sieve()), InvalidArgument);
}

TEST_CASE("exponential-sum oracle") {
    const auto a = ramanujan_sum_oracle(2, 5);
    CHECK(a.real() == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(std::abs(a.imag()) < 1e-12);
    const auto b = ramanujan_sum_oracle(5, 5);
    CHECK(b.real() == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(std::abs(b.imag()) < 1e-12);
    const auto c = ramanujan_sum_oracle(12, 7);
    CHECK(std::abs(c.real() - double(ramanujan_sum(12, 7, sieve()))) < 1e-9);
    CHECK(std::abs(c.imag()) < 1e-9);
}

TEST_CASE("C_r(0) equals phi(r)") {
    for (std::int64_t r = 1; r <= 500; ++r) CHECK(ramanujan_sum(r, 0, sieve()) == tables().phi[r]);
}

TEST_CASE("C_r is even and periodic in n") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::int64_t> rd(1, 300), nd(0, 3000);
    for (int i = 0; i < 500; ++i) {
        const std::int64_t r = rd(rng), n = nd(rng);
        const std::int64_t c = ramanujan_sum(r, n, sieve());
        CHECK(c == ramanujan_sum(r, n + r, sieve()));
        CHECK(c == ramanujan_sum(r, gcd(n, r), sieve()));
    }
}

TEST_CASE("F_R at listed points") {
    const FRConfig r1(1.0, tables()), r2(2.0, tables()), r3(3.0, tables());
    CHECK(fr_value(17, r1) == 1.0);
    CHECK(fr_value(5, r2) == doctest::Approx(2.0));
    CHECK(fr_value(4, r2) == doctest::Approx(0.0));
    CHECK(fr_value(5, r3) == doctest::Approx(2.5));
    CHECK(fr_value_naive(17, r1) == 1.0);
    CHECK(fr_value_naive(5, r2) == doctest::Approx(2.0));
    CHECK(fr_value_naive(4, r2) == doctest::Approx(0.0));
    CHECK(fr_value_naive(5, r3) == doctest::Approx(2.5));
}

TEST_CASE("F_R below 2 is exactly one") {
    const FRConfig cfg(1.9, tables());
    for (std::int64_t n = 1; n <= 1000; ++n) CHECK(fr_value(n, cfg) == 1.0);
}

TEST_CASE("F_2 alternates") {
    const FRConfig cfg(2.0, tables());
    for (std::int64_t n = 1; n <= 200; ++n) {
        CHECK(fr_value(n, cfg) == doctest::Approx(n % 2 ? 2.0 : 0.0));
    }
}

TEST_CASE("fast and literal F_R agree on a small range") {
    for (double R : {5.0, 17.5, 60.0}) {
        const FRConfig cfg(R, tables());
        const FrTable table = build_fr_table(5000, cfg);
        for (std::int64_t n = 1; n <= 5000; ++n) {
            const double naive = fr_value_naive(n, cfg);
            CHECK(std::abs(fr_value(n, cfg) - naive) <= 1e-9 * std::max(1.0, std::abs(naive)));
            CHECK(table[n] == fr_value(n, cfg));
        }
    }
}

TEST_CASE("FRConfig validation") {
    CHECK_THROWS_AS(FRConfig(0.5, tables()), InvalidArgument);
    CHECK_THROWS_AS(FRConfig(1e9, tables()), OutOfRange);
    const FRConfig cfg(10.0, tables());
    CHECK(cfg.r_max() == 10);
    CHECK(std::vector<std::int64_t>(cfg.support().begin(), cfg.support().end()) ==
          std::vector<std::int64_t>{1, 2, 3, 5, 6, 7, 10});
}

TEST_CASE("Delta at listed points") {
    CHECK(delta_value(4, FRConfig(2.0, tables())) == doctest::Approx(std::log(2.0)));
    CHECK(delta_value(6, FRConfig(1.0, tables())) == -1.0);
    CHECK(delta_value(3, FRConfig(2.0, tables())) == doctest::Approx(std::log(3.0) - 2.0));
}

TEST_CASE("rho at listed points") {
    CHECK(rho(10, 1, 0, FRConfig(1.0, tables())) == doctest::Approx(10.0));
    CHECK(rho(10, 2, 1, FRConfig(2.0, tables())) == doctest::Approx(10.0));
    CHECK(rho(10, 2, 0, FRConfig(2.0, tables())) == doctest::Approx(0.0));
}

TEST_CASE("rho buckets partition the F_R partial sum") {
    const FRConfig cfg(25.0, tables());
    const std::int64_t x = 10'000;
    const double full = rho(x, 1, 0, cfg);
    for (std::int64_t d : {2, 6, 35, 210}) {
        double sum = 0.0;
        for (std::int64_t b = 0; b < d; ++b) sum += rho(x, d, b, cfg);
        CHECK(sum == doctest::Approx(full).epsilon(1e-10));
    }
}

TEST_CASE("rho_star at listed points") {
    CHECK(rho_star(100, 1, 0, FRConfig(1.0, tables())) == 0.0);
    const double a = rho_star(100, 2, 1, FRConfig(3.0, tables()));
    CHECK(std::isfinite(a));
    CHECK(std::abs(a) <= 30.0);
    CHECK(a == doctest::Approx(rho_star_oracle(100, 2, 1, 3.0)).epsilon(1e-9));
    const double b = rho_star(1000, 6, 5, FRConfig(20.0, tables()));
    CHECK(std::abs(b) <= 200.0);
    CHECK(b == doctest::Approx(rho_star_oracle(1000, 6, 5, 20.0)).epsilon(1e-9));
    CHECK_THROWS_AS(rho_star(100, 4, 1, FRConfig(3.0, tables())), InvalidArgument);
}

TEST_CASE("rho_star stays O(R) as x grows") {
    for (double R : {10.0, 30.0}) {
        const FRConfig cfg(R, tables());
        for (std::int64_t x : {1000, 5000, 20'000}) {
            for (std::int64_t v : {2, 3, 6, 30}) {
                CHECK(std::abs(rho_star(x, v, 1, cfg)) <= 10.0 * R);
            }
        }
    }
}

TEST_CASE("Mobius-Ramanujan identity at listed points") {
    const CrIdentity a = mobius_cr_identity(6, 5, sieve());
    CHECK(a.lhs == ExactRational(3));
    CHECK(a.rhs == ExactRational(3));
    const CrIdentity b = mobius_cr_identity(6, 3, sieve());
    CHECK(b.lhs == ExactRational(0));
    CHECK(b.rhs == ExactRational(0));
    const CrIdentity c = mobius_cr_identity(1, 0, sieve());
    CHECK(c.lhs == ExactRational(1));
    CHECK_THROWS_AS(mobius_cr_identity(12, 1, sieve()), InvalidArgument);
}

TEST_CASE("mu^2/phi partial sums") {
    CHECK(mu2_over_phi_sum(1.0, tables()) == 1.0);
    CHECK(mu2_over_phi_sum(3.0, tables()) == doctest::Approx(2.5));
    // r = 1, 2, 3, 5, 6, 7, 10
    const double r10 = 1.0 + 1.0 + 0.5 + 0.25 + 0.5 + 1.0 / 6.0 + 0.25;
    CHECK(mu2_over_phi_sum(10.0, tables()) == doctest::Approx(r10).epsilon(1e-14));
    CHECK(r10 == doctest::Approx(3.6666666666666667).epsilon(1e-14));
}

TEST_CASE("delta indicator") {
    CHECK(delta_indicator(0, 1) == 1);
    CHECK(delta_indicator(3, 6) == 0);
    CHECK(delta_indicator(5, 6) == 1);
    CHECK(delta_indicator(0, 6) == 0);
}

TEST_CASE("exact rationals") {
    const ExactRational half(1, 2), third(1, 3);
    CHECK(half + third == ExactRational(5, 6));
    CHECK(half - third == ExactRational(1, 6));
    CHECK(half * third == ExactRational(1, 6));
    CHECK(half / third == ExactRational(3, 2));
    CHECK(ExactRational(4, -8) == ExactRational(-1, 2));
    CHECK(ExactRational(-6, 4).to_string() == "-3/2");
    CHECK_THROWS(ExactRational(1, 0));
    const Int128 big = static_cast<Int128>(1) << 120;
    CHECK_THROWS_AS(ExactRational(big, 1) * ExactRational(big, 1), RationalOverflow);
}

TEST_CASE("fr table csv") {
    std::ostringstream out;
    write_fr_table_csv(out, 3, FRConfig(2.0, tables()));
    std::istringstream in(out.str());
    std::string header, row1;
    std::getline(in, header);
    std::getline(in, row1);
    CHECK(header == "n,lambda,fr,delta");
    CHECK(row1 == "1,0,2,-2");
}
