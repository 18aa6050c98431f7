#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "vlab/arith.hpp"
#include "vlab/rational.hpp"

namespace vlab {

// Truncation level R of Vaughan's approximant together with the tables it
// reads. F_R(n) is a sum over squarefree d <= R, d | n, of a weight w_d;
// the weights are computed once here.
class FRConfig {
public:
    FRConfig(double R, const ArithTables& tables);

    [[nodiscard]] double R() const { return R_; }
    [[nodiscard]] std::int64_t r_max() const { return r_max_; }
    [[nodiscard]] const ArithTables& tables() const { return *tables_; }

    /// Squarefree d <= R in ascending order.
    [[nodiscard]] std::span<const std::int64_t> support() const { return support_; }
    /// w_d = d·μ(d)/φ(d) · Σ_{h <= R/d, (h,d)=1} μ²(h)/φ(h), aligned with support().
    [[nodiscard]] std::span<const double> weights() const { return weights_; }

private:
    double R_;
    std::int64_t r_max_;
    const ArithTables* tables_;
    std::vector<std::int64_t> support_;
    std::vector<double> weights_;
};

// F_R(n) for every n in [0, x]; entry 0 is unused and left at 0.
struct FrTable {
    double R = 1.0;
    std::int64_t x = 0;
    std::vector<double> values;

    [[nodiscard]] double operator[](std::int64_t n) const { return values[n]; }
};

FrTable build_fr_table(std::int64_t x, const FRConfig& cfg);

/// C_r(n) = Σ_{d | (n,r)} d·μ(r/d), with gcd(0, r) = r.
std::int64_t ramanujan_sum(std::int64_t r, std::int64_t n, const FactorSieve& sieve);
std::int64_t ramanujan_sum(std::int64_t r, std::int64_t n, const ArithTables& tables);

/// Σ over 1 <= b <= r with (b,r) = 1 of e(bn/r), summed literally.
std::complex<double> ramanujan_sum_oracle(std::int64_t r, std::int64_t n);

double fr_value(std::int64_t n, const FRConfig& cfg);

/// Literal Σ_{r <= R} μ(r)/φ(r)·C_r(n); independent of the divisor weights.
double fr_value_naive(std::int64_t n, const FRConfig& cfg);

/// Δ(n) = Λ(n) − F_R(n).
double delta_value(std::int64_t n, const FRConfig& cfg);

/// ρ(x,d,b) = Σ_{n <= x, n ≡ b (mod d)} F_R(n).
double rho(std::int64_t x, std::int64_t d, std::int64_t b, const FRConfig& cfg);

/// Σ_{r <= R, r ∤ v} μ(r)/φ(r) Σ_{n <= x, n ≡ N (mod v)} C_r(n).
/// Requires squarefree v; N >= 0 is reduced mod v.
double rho_star(std::int64_t x, std::int64_t v, std::int64_t N, const FRConfig& cfg);

struct CrIdentity {
    ExactRational lhs;  // Σ_{r|v} μ(r)C_r(N)/φ(r)
    ExactRational rhs;  // v/φ(v) · δ(N,v)
};

/// Evaluates both sides exactly; throws std::logic_error if they differ.
CrIdentity mobius_cr_identity(std::int64_t v, std::int64_t N, const FactorSieve& sieve);

/// Σ_{r <= R} μ²(r)/φ(r).
double mu2_over_phi_sum(double R, const ArithTables& tables);

/// 1 if N > 0 and (N,v) = 1, or N = 0 and v = 1; otherwise 0.
int delta_indicator(std::int64_t N, std::int64_t v);

/// CSV with header n,lambda,fr,delta for 1 <= n <= x.
void write_fr_table_csv(std::ostream& out, std::int64_t x, const FRConfig& cfg);

}  // namespace vlab
