#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "vlab/arith.hpp"
#include "vlab/constants.hpp"
#include "vlab/fr_model.hpp"

namespace vlab {

enum class Restriction {
    All,           // every b mod d, approximant ρ
    Coprime,       // (b, d) = 1, approximant ρ
    ShiftCoprime,  // (N − b, d) = 1, approximant ρ
    Bdh,           // (b, d) = 1, approximant x/φ(d)
};

struct RestrictionMode {
    Restriction kind = Restriction::All;
    std::int64_t N = 0;  // only read for ShiftCoprime

    static RestrictionMode all() { return {Restriction::All, 0}; }
    static RestrictionMode coprime() { return {Restriction::Coprime, 0}; }
    static RestrictionMode shift_coprime(std::int64_t N) { return {Restriction::ShiftCoprime, N}; }
    static RestrictionMode bdh() { return {Restriction::Bdh, 0}; }

    friend bool operator==(const RestrictionMode&, const RestrictionMode&) = default;
};

enum class Weight { Theta, Psi };

std::string_view to_string(Restriction kind);
std::string_view to_string(Weight weight);
Restriction parse_restriction(std::string_view text);
Weight parse_weight(std::string_view text);

struct NamedValue {
    std::string name;
    double value = 0.0;
};

// Main-term prediction. `terms` lists every summand separately; the two
// blocks group them the way the displayed formulas do, and total is their sum.
struct Prediction {
    std::vector<NamedValue> terms;
    double log_block = 0.0;
    double constant_block = 0.0;
    double total = 0.0;
    std::vector<NamedValue> parameters;  // derived inputs such as t(N)
    std::string error_budget;
};

struct VarianceRun {
    std::int64_t x = 0;
    std::int64_t Q = 0;
    std::int64_t Q_low = 0;  // moduli d with Q_low < d <= Q
    double R = 1.0;
    RestrictionMode restriction;
    Weight weight = Weight::Theta;
    double empirical = 0.0;
    Prediction prediction;
    double predicted_main = 0.0;
    double relative_deviation = 0.0;      // against prediction.total
    double relative_deviation_log = 0.0;  // against the log block alone
    double wall_time_ms = 0.0;
};

struct ProgressionAccumulator {
    std::int64_t d = 1;
    std::vector<double> theta_buckets;  // Σ weight over n ≡ b (mod d), n <= x
    std::vector<double> rho_buckets;    // Σ F_R over the same classes
};

/// One pass over n <= x, bucketing the chosen weight and F_R(n) by n mod d.
ProgressionAccumulator accumulate_modulus(std::int64_t d, std::int64_t x,
                                          const ArithTables& tables, const FrTable& fr,
                                          Weight weight);

/// Σ_{n <= x, n ≡ N (mod v)} Δ²(n) for squarefree v and R <= x^{1/3}.
double delta_sq_progression(std::int64_t x, std::int64_t v, std::int64_t N, const FRConfig& cfg);
double delta_sq_progression(std::int64_t x, std::int64_t v, std::int64_t N, const FRConfig& cfg,
                            const FrTable& fr);

Prediction theorem3_prediction(std::int64_t x, std::int64_t v, std::int64_t N, double R,
                               const ConstantSet& cs);

// The variance predictions are linear in the number of moduli; with a band
// Q_low < d <= Q they are evaluated for Q − Q_low moduli.
Prediction vaughan_prediction(std::int64_t x, std::int64_t Q, double R, const ConstantSet& cs,
                              std::int64_t Q_low = 0);
Prediction theorem5_prediction(std::int64_t x, std::int64_t Q, double R, const ConstantSet& cs,
                               std::int64_t Q_low = 0);
Prediction theorem4_prediction(std::int64_t x, std::int64_t Q, std::int64_t N, double R,
                               const ConstantSet& cs, std::int64_t Q_low = 0);
/// Leading Qx·log Q term of the classical variance; the constant C is not modelled.
Prediction bdh_prediction(std::int64_t x, std::int64_t Q);

/// Main terms shared by the restricted-variance predictions, evaluated for
/// `moduli` moduli. pm1 and sq are the N-restricted products.
Prediction restricted_main_terms(std::int64_t x, std::int64_t moduli, double R, double pm1,
                                 double sq, const ConstantSet& cs);

// Precomputed inputs for variance runs at one (x, R): the F_R table and the
// per-n differences weight(n) − F_R(n). Immutable once built.
class VarianceLab {
public:
    VarianceLab(std::int64_t x, const FRConfig& cfg);

    [[nodiscard]] std::int64_t x() const { return x_; }
    [[nodiscard]] double R() const { return R_; }
    [[nodiscard]] const ArithTables& tables() const { return *tables_; }
    [[nodiscard]] const FrTable& fr() const { return fr_; }

    /// Σ over moduli Q_low < d <= Q of the per-modulus sums of squares.
    /// The value does not depend on `threads` (0 = hardware concurrency).
    [[nodiscard]] double empirical(std::int64_t Q, RestrictionMode restriction, Weight weight,
                                   std::int64_t Q_low = 0, int threads = 0) const;

    /// Per-modulus contributions for d = Q_low + 1 .. Q, in ascending d.
    [[nodiscard]] std::vector<double> per_modulus(std::int64_t Q, RestrictionMode restriction,
                                                  Weight weight, std::int64_t Q_low = 0,
                                                  int threads = 0) const;

private:
    std::int64_t x_;
    double R_;
    const ArithTables* tables_;
    FrTable fr_;
    std::vector<double> theta_diff_;
    std::vector<double> psi_diff_;
};

struct VarianceOptions {
    std::int64_t Q_low = 0;
    int threads = 0;
};

/// Empirical variance with the matching prediction: All ↦ vaughan,
/// Coprime ↦ theorem5, ShiftCoprime ↦ theorem4, Bdh ↦ bdh.
VarianceRun variance_sum(const VarianceLab& lab, std::int64_t Q, RestrictionMode restriction,
                         Weight weight, const ConstantSet& cs, VarianceOptions options = {});

/// Classical variance Σ_{d <= Q} Σ_{(b,d)=1} (ϑ(x,d,b) − x/φ(d))², with a fitted C.
VarianceRun bdh_variance(std::int64_t x, std::int64_t Q, const ArithTables& tables,
                         int threads = 0);

}  // namespace vlab
