#include "vlab/fr_model.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "vlab/compensated.hpp"
#include "vlab/errors.hpp"
#include "vlab/format.hpp"

namespace vlab {

namespace {

void require_n(std::int64_t n, const ArithTables& tables) {
    if (n < 1) throw InvalidArgument("n must be positive, got " + std::to_string(n));
    if (n > tables.limit) {
        throw OutOfRange("n = " + std::to_string(n) + " exceeds table limit " +
                         std::to_string(tables.limit));
    }
}

void require_x(std::int64_t x, const ArithTables& tables) {
    if (x > tables.limit) {
        throw OutOfRange("x = " + std::to_string(x) + " exceeds table limit " +
                         std::to_string(tables.limit));
    }
}

bool squarefree(std::int64_t v, const ArithTables& tables) {
    if (v < 1) return false;
    if (v <= tables.limit) return tables.mu[v] != 0;
    std::int64_t rest = v;
    for (std::int64_t p : trial_prime_factors(v)) {
        rest /= p;
        if (rest % p == 0) return false;
    }
    return true;
}

template <typename Mobius>
std::int64_t ramanujan_divisor_form(std::int64_t r, std::int64_t n, Mobius&& mobius) {
    if (r < 1) throw InvalidArgument("ramanujan_sum: r must be >= 1");
    if (n < 0) throw InvalidArgument("ramanujan_sum: n must be >= 0");
    const std::int64_t g = gcd(n, r);
    std::int64_t total = 0;
    for (std::int64_t d = 1; d * d <= g; ++d) {
        if (g % d != 0) continue;
        total += d * mobius(r / d);
        const std::int64_t e = g / d;
        if (e != d) total += e * mobius(r / e);
    }
    return total;
}

}  // namespace

FRConfig::FRConfig(double R, const ArithTables& tables) : R_(R), tables_(&tables) {
    if (!(R >= 1.0)) throw InvalidArgument("R must be >= 1");
    r_max_ = static_cast<std::int64_t>(std::floor(R));
    if (r_max_ > tables.limit) {
        throw OutOfRange("floor(R) = " + std::to_string(r_max_) + " exceeds table limit " +
                         std::to_string(tables.limit));
    }
    for (std::int64_t d = 1; d <= r_max_; ++d) {
        if (tables.mu[d] == 0) continue;
        CompensatedSum inner;
        for (std::int64_t h = 1; h <= r_max_ / d; ++h) {
            if (tables.mu[h] != 0 && gcd(h, d) == 1) inner += 1.0 / static_cast<double>(tables.phi[h]);
        }
        support_.push_back(d);
        weights_.push_back(static_cast<double>(d * tables.mu[d]) /
                           static_cast<double>(tables.phi[d]) * inner.value());
    }
}

FrTable build_fr_table(std::int64_t x, const FRConfig& cfg) {
    require_x(x, cfg.tables());
    FrTable table;
    table.R = cfg.R();
    table.x = x;
    table.values.assign(static_cast<std::size_t>(x) + 1, 0.0);
    const auto support = cfg.support();
    const auto weights = cfg.weights();
    // Ascending d, matching the summation order of fr_value.
    for (std::size_t i = 0; i < support.size(); ++i) {
        const std::int64_t d = support[i];
        const double w = weights[i];
        for (std::int64_t m = d; m <= x; m += d) table.values[m] += w;
    }
    return table;
}

std::int64_t ramanujan_sum(std::int64_t r, std::int64_t n, const FactorSieve& sieve) {
    if (r > sieve.limit()) throw OutOfRange("ramanujan_sum: r exceeds sieve limit");
    return ramanujan_divisor_form(r, n, [&](std::int64_t m) { return sieve.mobius(m); });
}

std::int64_t ramanujan_sum(std::int64_t r, std::int64_t n, const ArithTables& tables) {
    if (r > tables.limit) throw OutOfRange("ramanujan_sum: r exceeds table limit");
    return ramanujan_divisor_form(r, n, [&](std::int64_t m) { return tables.mu[m]; });
}

std::complex<double> ramanujan_sum_oracle(std::int64_t r, std::int64_t n) {
    if (r < 1) throw InvalidArgument("ramanujan_sum_oracle: r must be >= 1");
    const std::int64_t nr = ((n % r) + r) % r;
    double re = 0.0;
    double im = 0.0;
    for (std::int64_t b = 1; b <= r; ++b) {
        if (gcd(b, r) != 1) continue;
        const double angle =
            2.0 * std::numbers::pi * static_cast<double>((b * nr) % r) / static_cast<double>(r);
        re += std::cos(angle);
        im += std::sin(angle);
    }
    return {re, im};
}

double fr_value(std::int64_t n, const FRConfig& cfg) {
    require_n(n, cfg.tables());
    const auto support = cfg.support();
    const auto weights = cfg.weights();
    double total = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (n % support[i] == 0) total += weights[i];
    }
    return total;
}

double fr_value_naive(std::int64_t n, const FRConfig& cfg) {
    const ArithTables& t = cfg.tables();
    require_n(n, t);
    CompensatedSum total;
    for (std::int64_t r = 1; r <= cfg.r_max(); ++r) {
        if (t.mu[r] == 0) continue;
        const auto c = ramanujan_sum(r, n, t);
        if (c == 0) continue;
        total += static_cast<double>(t.mu[r] * c) / static_cast<double>(t.phi[r]);
    }
    return total.value();
}

double delta_value(std::int64_t n, const FRConfig& cfg) {
    require_n(n, cfg.tables());
    return cfg.tables().lambda[n] - fr_value(n, cfg);
}

double rho(std::int64_t x, std::int64_t d, std::int64_t b, const FRConfig& cfg) {
    require_x(x, cfg.tables());
    const std::int64_t r = canonical_residue(b, d);
    CompensatedSum acc;
    for (std::int64_t n = (r == 0 ? d : r); n <= x; n += d) acc += fr_value(n, cfg);
    return acc.value();
}

double rho_star(std::int64_t x, std::int64_t v, std::int64_t N, const FRConfig& cfg) {
    const ArithTables& t = cfg.tables();
    require_x(x, t);
    if (!squarefree(v, t)) throw InvalidArgument("rho_star: v must be squarefree");
    if (N < 0) throw InvalidArgument("rho_star: N must be >= 0");
    const std::int64_t residue = N % v;

    // C_r(n) depends only on n mod r, so tabulate one period per r.
    struct Term {
        std::int64_t r;
        double coeff;
        std::vector<std::int64_t> period;
    };
    std::vector<Term> terms;
    for (std::int64_t r : cfg.support()) {
        if (v % r == 0) continue;
        Term term{r, static_cast<double>(t.mu[r]) / static_cast<double>(t.phi[r]), {}};
        term.period.resize(static_cast<std::size_t>(r));
        for (std::int64_t m = 0; m < r; ++m) term.period[m] = ramanujan_sum(r, m, t);
        terms.push_back(std::move(term));
    }

    CompensatedSum total;
    for (const Term& term : terms) {
        std::int64_t count_sum = 0;
        for (std::int64_t n = (residue == 0 ? v : residue); n <= x; n += v) {
            count_sum += term.period[n % term.r];
        }
        total += term.coeff * static_cast<double>(count_sum);
    }
    return total.value();
}

CrIdentity mobius_cr_identity(std::int64_t v, std::int64_t N, const FactorSieve& sieve) {
    if (v < 1 || v > sieve.limit()) throw InvalidArgument("mobius_cr_identity: v out of range");
    if (!is_squarefree(v, sieve)) throw InvalidArgument("mobius_cr_identity: v must be squarefree");
    if (N < 0) throw InvalidArgument("mobius_cr_identity: N must be >= 0");

    CrIdentity out;
    for (std::int64_t r : divisors(v, sieve)) {
        const std::int64_t c = ramanujan_sum(r, N, sieve);
        if (c == 0) continue;
        out.lhs += ExactRational(static_cast<Int128>(sieve.mobius(r)) * c, sieve.totient(r));
    }
    out.rhs = ExactRational(v, sieve.totient(v)) * ExactRational(delta_indicator(N, v));
    if (!(out.lhs == out.rhs)) {
        throw std::logic_error("Möbius/Ramanujan identity violated at v=" + std::to_string(v) +
                               ", N=" + std::to_string(N) + ": " + out.lhs.to_string() +
                               " != " + out.rhs.to_string());
    }
    return out;
}

double mu2_over_phi_sum(double R, const ArithTables& tables) {
    const auto r_max = static_cast<std::int64_t>(std::floor(R));
    if (r_max > tables.limit) throw OutOfRange("mu2_over_phi_sum: R exceeds table limit");
    CompensatedSum acc;
    for (std::int64_t r = 1; r <= r_max; ++r) {
        if (tables.mu[r] != 0) acc += 1.0 / static_cast<double>(tables.phi[r]);
    }
    return acc.value();
}

int delta_indicator(std::int64_t N, std::int64_t v) {
    if (N > 0) return gcd(N, v) == 1 ? 1 : 0;
    return (N == 0 && v == 1) ? 1 : 0;
}

void write_fr_table_csv(std::ostream& out, std::int64_t x, const FRConfig& cfg) {
    const FrTable table = build_fr_table(x, cfg);
    const ArithTables& t = cfg.tables();
    out << "n,lambda,fr,delta\n";
    for (std::int64_t n = 1; n <= x; ++n) {
        out << n << ',' << format_real(t.lambda[n]) << ',' << format_real(table[n]) << ','
            << format_real(t.lambda[n] - table[n]) << '\n';
    }
}

}  // namespace vlab
