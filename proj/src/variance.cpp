#include "vlab/variance.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <span>
#include <sstream>
#include <thread>

#include "vlab/compensated.hpp"
#include "vlab/errors.hpp"
#include "vlab/format.hpp"

namespace vlab {

namespace {

std::int64_t totient_any(std::int64_t n) {
    std::int64_t result = n;
    for (std::int64_t p : trial_prime_factors(n)) result = result / p * (p - 1);
    return result;
}

bool squarefree_any(std::int64_t n) {
    if (n < 1) return false;
    for (std::int64_t p : trial_prime_factors(n)) {
        n /= p;
        if (n % p == 0) return false;
    }
    return true;
}

std::int64_t divisor_count_any(std::int64_t n) {
    std::int64_t count = 0;
    for (std::int64_t d = 1; d * d <= n; ++d) {
        if (n % d == 0) count += (d * d == n) ? 1 : 2;
    }
    return count;
}

void check_delta_sq_args(std::int64_t x, std::int64_t v, std::int64_t N, const FRConfig& cfg) {
    if (x < 1) throw InvalidArgument("x must be positive");
    if (x > cfg.tables().limit) throw OutOfRange("x exceeds table limit");
    if (!squarefree_any(v)) throw InvalidArgument("v must be squarefree, got " + std::to_string(v));
    if (N < 0) throw InvalidArgument("N must be >= 0");
    if (cfg.R() > std::cbrt(static_cast<double>(x)) * (1.0 + 1e-12)) {
        throw InvalidArgument("hypothesis R <= x^(1/3) violated: R = " + format_real(cfg.R()) +
                              ", x^(1/3) = " + format_real(std::cbrt(static_cast<double>(x))));
    }
}

void check_band(std::int64_t x, std::int64_t Q, std::int64_t Q_low) {
    if (Q < 1) throw InvalidArgument("Q must be >= 1");
    if (Q > x) throw InvalidArgument("Q = " + std::to_string(Q) + " exceeds x = " + std::to_string(x));
    if (Q_low < 0 || Q_low >= Q) {
        throw InvalidArgument("Q_low must satisfy 0 <= Q_low < Q, got " + std::to_string(Q_low));
    }
}

std::string variance_error_budget(std::int64_t x, std::int64_t Q, double R) {
    const double dx = static_cast<double>(x);
    const double L = std::log(dx);
    const double first = static_cast<double>(Q) * dx / std::sqrt(R);
    const double second = dx * dx * L * L / R;
    return "O(Q x R^(-1/2) + x^2 (log x)^2 R^(-1)) with Q x R^(-1/2) = " + format_real(first) +
           ", x^2 (log x)^2 / R = " + format_real(second);
}

// Which residues b mod d enter the b-sum. Uses trial division on d, which
// is cheap next to the O(x) bucket pass.
void build_mask(std::int64_t d, RestrictionMode restriction, std::vector<char>& mask) {
    mask.assign(static_cast<std::size_t>(d), 1);
    if (restriction.kind == Restriction::All) return;
    const std::int64_t shift =
        restriction.kind == Restriction::ShiftCoprime ? restriction.N : 0;
    for (std::int64_t p : trial_prime_factors(d)) {
        // Excluded: b ≡ shift (mod p).
        for (std::int64_t b = ((shift % p) + p) % p; b < d; b += p) mask[b] = 0;
    }
}

struct Scratch {
    std::vector<double> sum;
    std::vector<double> comp;
    std::vector<char> mask;
};

// Σ_{b allowed} (Σ_{n <= x, n ≡ b (d)} diff[n] − approx)², diff indexed 0..x.
double modulus_contribution(std::int64_t d, std::span<const double> diff,
                            RestrictionMode restriction, double approx, Scratch& s) {
    const std::int64_t x = static_cast<std::int64_t>(diff.size()) - 1;
    s.sum.assign(static_cast<std::size_t>(d), 0.0);
    s.comp.assign(static_cast<std::size_t>(d), 0.0);
    double* sum = s.sum.data();
    double* comp = s.comp.data();
    // Row-wise pass: block [start, start + d) maps onto buckets 0..d−1. Each
    // bucket is an independent Kahan sum, so the inner loop vectorizes.
    for (std::int64_t start = 0; start <= x; start += d) {
        const std::int64_t len = std::min(d, x - start + 1);
        const double* row = diff.data() + start;
        for (std::int64_t j = 0; j < len; ++j) {
            const double y = row[j] - comp[j];
            const double t = sum[j] + y;
            comp[j] = (t - sum[j]) - y;
            sum[j] = t;
        }
    }
    build_mask(d, restriction, s.mask);
    CompensatedSum total;
    for (std::int64_t b = 0; b < d; ++b) {
        if (!s.mask[b]) continue;
        const double e = (sum[b] - comp[b]) - approx;
        total += e * e;
    }
    return total.value();
}

int resolve_threads(int threads) {
    if (threads > 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Contributions for d = Q_low + 1 .. Q. Workers claim moduli dynamically but
// each result lands in its own slot, so the output is thread-count independent.
std::vector<double> contributions(std::span<const double> diff, std::int64_t Q,
                                  std::int64_t Q_low, RestrictionMode restriction,
                                  const ArithTables& tables, int threads) {
    const std::int64_t count = Q - Q_low;
    const double x = static_cast<double>(diff.size() - 1);
    std::vector<double> out(static_cast<std::size_t>(count), 0.0);
    std::atomic<std::int64_t> next{0};
    constexpr std::int64_t kChunk = 8;
    auto worker = [&] {
        Scratch scratch;
        for (;;) {
            const std::int64_t begin = next.fetch_add(kChunk);
            if (begin >= count) break;
            const std::int64_t end = std::min(count, begin + kChunk);
            for (std::int64_t i = begin; i < end; ++i) {
                const std::int64_t d = Q_low + 1 + i;
                const double approx = restriction.kind == Restriction::Bdh
                                          ? x / static_cast<double>(tables.phi[d])
                                          : 0.0;
                out[i] = modulus_contribution(d, diff, restriction, approx, scratch);
            }
        }
    };
    const int n = std::min<std::int64_t>(resolve_threads(threads), count);
    std::vector<std::jthread> pool;
    for (int t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    return out;
}

double ordered_total(const std::vector<double>& parts) {
    CompensatedSum acc;
    for (double v : parts) acc += v;
    return acc.value();
}

void finish_run(VarianceRun& run) {
    run.predicted_main = run.prediction.total;
    run.relative_deviation = run.prediction.total != 0.0
                                 ? (run.empirical - run.prediction.total) / run.prediction.total
                                 : 0.0;
    run.relative_deviation_log =
        run.prediction.log_block != 0.0
            ? (run.empirical - run.prediction.log_block) / run.prediction.log_block
            : 0.0;
}

}  // namespace

std::string_view to_string(Restriction kind) {
    switch (kind) {
        case Restriction::All: return "all";
        case Restriction::Coprime: return "coprime";
        case Restriction::ShiftCoprime: return "shift_coprime";
        case Restriction::Bdh: return "bdh";
    }
    return "?";
}

std::string_view to_string(Weight weight) {
    return weight == Weight::Theta ? "theta" : "psi";
}

Restriction parse_restriction(std::string_view text) {
    for (Restriction r : {Restriction::All, Restriction::Coprime, Restriction::ShiftCoprime,
                          Restriction::Bdh}) {
        if (text == to_string(r)) return r;
    }
    throw InvalidArgument("unknown restriction mode '" + std::string(text) + "'");
}

Weight parse_weight(std::string_view text) {
    if (text == "theta") return Weight::Theta;
    if (text == "psi") return Weight::Psi;
    throw InvalidArgument("unknown weight '" + std::string(text) + "'");
}

ProgressionAccumulator accumulate_modulus(std::int64_t d, std::int64_t x,
                                          const ArithTables& tables, const FrTable& fr,
                                          Weight weight) {
    if (d < 1) throw InvalidArgument("modulus must be >= 1");
    if (x > fr.x || x > tables.limit) throw OutOfRange("x exceeds the F_R table");
    const std::vector<double>& w = weight == Weight::Theta ? tables.theta : tables.lambda;
    std::vector<CompensatedSum> theta(static_cast<std::size_t>(d));
    std::vector<CompensatedSum> rho(static_cast<std::size_t>(d));
    std::int64_t b = 1 % d;
    for (std::int64_t n = 1; n <= x; ++n) {
        theta[b] += w[n];
        rho[b] += fr[n];
        if (++b == d) b = 0;
    }
    ProgressionAccumulator acc;
    acc.d = d;
    acc.theta_buckets.reserve(theta.size());
    acc.rho_buckets.reserve(rho.size());
    for (std::int64_t i = 0; i < d; ++i) {
        acc.theta_buckets.push_back(theta[i].value());
        acc.rho_buckets.push_back(rho[i].value());
    }
    return acc;
}

double delta_sq_progression(std::int64_t x, std::int64_t v, std::int64_t N, const FRConfig& cfg) {
    check_delta_sq_args(x, v, N, cfg);
    const ArithTables& t = cfg.tables();
    const std::int64_t r = N % v;
    CompensatedSum acc;
    for (std::int64_t n = (r == 0 ? v : r); n <= x; n += v) {
        const double delta = t.lambda[n] - fr_value(n, cfg);
        acc += delta * delta;
    }
    return acc.value();
}

double delta_sq_progression(std::int64_t x, std::int64_t v, std::int64_t N, const FRConfig& cfg,
                            const FrTable& fr) {
    check_delta_sq_args(x, v, N, cfg);
    if (x > fr.x) throw OutOfRange("x exceeds the F_R table");
    const ArithTables& t = cfg.tables();
    const std::int64_t r = N % v;
    CompensatedSum acc;
    for (std::int64_t n = (r == 0 ? v : r); n <= x; n += v) {
        const double delta = t.lambda[n] - fr[n];
        acc += delta * delta;
    }
    return acc.value();
}

Prediction theorem3_prediction(std::int64_t x, std::int64_t v, std::int64_t N, double R,
                               const ConstantSet& cs) {
    if (x < 1 || v < 1 || N < 0 || R < 1.0) {
        throw InvalidArgument("theorem3_prediction: need x >= 1, v >= 1, N >= 0, R >= 1");
    }
    const double dx = static_cast<double>(x);
    const double dv = static_cast<double>(v);
    const double phi = static_cast<double>(totient_any(v));
    const double delta = delta_indicator(N, v);
    const double logR = std::log(R);

    Prediction p;
    p.terms = {
        {"delta_x_over_phi_log_term", delta * dx / phi * (std::log(dx) - 2.0 * logR - cs.c1)},
        {"x_over_v_log_r_term", dx / dv * (logR + cs.c2)},
        {"delta_x_v_over_phi_sq_term", delta * dx * dv / (phi * phi)},
        {"minus_x_over_phi_term", -dx / phi},
    };
    p.log_block = p.terms[0].value + p.terms[1].value;
    p.constant_block = p.terms[2].value + p.terms[3].value;
    p.total = p.log_block + p.constant_block;
    p.parameters = {{"delta", delta}, {"phi_v", phi}};

    const double tau = static_cast<double>(divisor_count_any(v));
    std::int64_t big_divisors = 0;
    for (std::int64_t r = 1; r <= v; ++r) {
        if (v % r == 0 && static_cast<double>(r) > R) ++big_divisors;
    }
    const double sqrtR = std::sqrt(R);
    std::ostringstream budget;
    budget << "O(x exp(-c L^(1/2)) + x tau(v)/(v R^(1/2)) + x/(phi(v) R^(1/2)) + R^2 log R"
              " + tau(v) R + x (log v + tau(v))/v * #{r | v : r > R}) with"
           << " x tau(v)/(v R^(1/2)) = " << format_real(dx * tau / (dv * sqrtR))
           << ", x/(phi(v) R^(1/2)) = " << format_real(dx / (phi * sqrtR))
           << ", R^2 log R = " << format_real(R * R * logR)
           << ", tau(v) R = " << format_real(tau * R)
           << ", divisor term = "
           << format_real(dx * (std::log(dv) + tau) / dv * static_cast<double>(big_divisors))
           << "; c unspecified";
    p.error_budget = budget.str();
    return p;
}

Prediction vaughan_prediction(std::int64_t x, std::int64_t Q, double R, const ConstantSet& cs,
                              std::int64_t Q_low) {
    check_band(x, Q, Q_low);
    const double dx = static_cast<double>(x);
    const double qx = static_cast<double>(Q - Q_low) * dx;
    Prediction p;
    p.terms = {{"qx_log_x_over_r", qx * std::log(dx / R)}, {"minus_c0_qx", -cs.c0 * qx}};
    p.log_block = p.terms[0].value;
    p.constant_block = p.terms[1].value;
    p.total = p.log_block + p.constant_block;
    p.parameters = {{"moduli", static_cast<double>(Q - Q_low)}, {"c0", cs.c0}};
    p.error_budget = variance_error_budget(x, Q, R);
    return p;
}

Prediction restricted_main_terms(std::int64_t x, std::int64_t moduli, double R, double pm1,
                                 double sq, const ConstantSet& cs) {
    const double dx = static_cast<double>(x);
    const double qx = static_cast<double>(moduli) * dx;
    const double t = 2.0 - cs.zeta2_inv / pm1;
    Prediction p;
    p.terms = {
        {"log_block", qx * pm1 * (std::log(dx) - t * std::log(R))},
        {"minus_pm1_c1", -qx * pm1 * cs.c1},
        {"sq_product", qx * sq},
        {"zeta_c2", qx * cs.zeta2_inv * cs.c2},
        {"minus_artin", -qx * cs.artin},
    };
    p.log_block = p.terms[0].value;
    p.constant_block = p.terms[1].value + p.terms[2].value + p.terms[3].value + p.terms[4].value;
    p.total = p.log_block + p.constant_block;
    p.parameters = {{"moduli", static_cast<double>(moduli)},
                    {"pm1", pm1},
                    {"sq", sq},
                    {"t", t},
                    {"log_r_coefficient", -pm1 * t}};
    return p;
}

Prediction theorem5_prediction(std::int64_t x, std::int64_t Q, double R, const ConstantSet& cs,
                               std::int64_t Q_low) {
    check_band(x, Q, Q_low);
    Prediction p = restricted_main_terms(x, Q - Q_low, R, 1.0, 1.0, cs);
    p.error_budget = variance_error_budget(x, Q, R);
    return p;
}

Prediction theorem4_prediction(std::int64_t x, std::int64_t Q, std::int64_t N, double R,
                               const ConstantSet& cs, std::int64_t Q_low) {
    check_band(x, Q, Q_low);
    if (N < 1) throw InvalidArgument("theorem4_prediction: N must be >= 1");
    const double pm1 = restricted_product(ProductKind::PM1, N, cs.prime_cutoff).value;
    const double sq = restricted_product(ProductKind::SQ, N, cs.prime_cutoff).value;
    Prediction p = restricted_main_terms(x, Q - Q_low, R, pm1, sq, cs);
    p.parameters.push_back({"N", static_cast<double>(N)});
    p.error_budget = variance_error_budget(x, Q, R);
    return p;
}

Prediction bdh_prediction(std::int64_t x, std::int64_t Q) {
    check_band(x, Q, 0);
    const double qx = static_cast<double>(Q) * static_cast<double>(x);
    Prediction p;
    p.terms = {{"qx_log_q", qx * std::log(static_cast<double>(Q))}};
    p.log_block = p.terms[0].value;
    p.constant_block = 0.0;
    p.total = p.log_block;
    const double dx = static_cast<double>(x);
    const double dq = static_cast<double>(Q);
    p.error_budget = "C Q x + O(Q^(3/2) x^(1/2) + x^2 (log x)^(-A)) with C unmodelled, Q^(3/2) x^(1/2) = " +
                     format_real(dq * std::sqrt(dq) * std::sqrt(dx));
    return p;
}

VarianceLab::VarianceLab(std::int64_t x, const FRConfig& cfg)
    : x_(x), R_(cfg.R()), tables_(&cfg.tables()), fr_(build_fr_table(x, cfg)) {
    theta_diff_.resize(static_cast<std::size_t>(x) + 1);
    psi_diff_.resize(static_cast<std::size_t>(x) + 1);
    for (std::int64_t n = 0; n <= x; ++n) {
        theta_diff_[n] = tables_->theta[n] - fr_[n];
        psi_diff_[n] = tables_->lambda[n] - fr_[n];
    }
}

std::vector<double> VarianceLab::per_modulus(std::int64_t Q, RestrictionMode restriction,
                                             Weight weight, std::int64_t Q_low,
                                             int threads) const {
    check_band(x_, Q, Q_low);
    if (restriction.kind == Restriction::ShiftCoprime && restriction.N < 1) {
        throw InvalidArgument("shift_coprime restriction needs N >= 1");
    }
    std::span<const double> diff;
    if (restriction.kind == Restriction::Bdh) {
        const auto& w = weight == Weight::Theta ? tables_->theta : tables_->lambda;
        diff = std::span<const double>(w.data(), static_cast<std::size_t>(x_) + 1);
    } else {
        diff = weight == Weight::Theta ? theta_diff_ : psi_diff_;
    }
    return contributions(diff, Q, Q_low, restriction, *tables_, threads);
}

double VarianceLab::empirical(std::int64_t Q, RestrictionMode restriction, Weight weight,
                              std::int64_t Q_low, int threads) const {
    return ordered_total(per_modulus(Q, restriction, weight, Q_low, threads));
}

namespace {

// C in empirical = Qx log Q + CQx.
void add_fitted_c(VarianceRun& run) {
    const double qx = static_cast<double>(run.Q) * static_cast<double>(run.x);
    run.prediction.parameters.push_back({"fitted_C", (run.empirical - run.prediction.log_block) / qx});
}

}  // namespace

VarianceRun variance_sum(const VarianceLab& lab, std::int64_t Q, RestrictionMode restriction,
                         Weight weight, const ConstantSet& cs, VarianceOptions options) {
    const auto start = std::chrono::steady_clock::now();
    VarianceRun run;
    run.x = lab.x();
    run.Q = Q;
    run.Q_low = options.Q_low;
    run.R = lab.R();
    run.restriction = restriction;
    run.weight = weight;
    run.empirical = lab.empirical(Q, restriction, weight, options.Q_low, options.threads);
    switch (restriction.kind) {
        case Restriction::All:
            run.prediction = vaughan_prediction(run.x, Q, run.R, cs, options.Q_low);
            break;
        case Restriction::Coprime:
            run.prediction = theorem5_prediction(run.x, Q, run.R, cs, options.Q_low);
            break;
        case Restriction::ShiftCoprime:
            run.prediction = theorem4_prediction(run.x, Q, restriction.N, run.R, cs, options.Q_low);
            break;
        case Restriction::Bdh:
            run.prediction = bdh_prediction(run.x, Q);
            add_fitted_c(run);
            break;
    }
    finish_run(run);
    run.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return run;
}

VarianceRun bdh_variance(std::int64_t x, std::int64_t Q, const ArithTables& tables, int threads) {
    check_band(x, Q, 0);
    if (x > tables.limit) throw OutOfRange("x exceeds table limit");
    const auto start = std::chrono::steady_clock::now();
    VarianceRun run;
    run.x = x;
    run.Q = Q;
    run.R = 1.0;
    run.restriction = RestrictionMode::bdh();
    run.weight = Weight::Theta;
    const std::span<const double> diff(tables.theta.data(), static_cast<std::size_t>(x) + 1);
    run.empirical = ordered_total(contributions(diff, Q, 0, run.restriction, tables, threads));
    run.prediction = bdh_prediction(x, Q);
    add_fitted_c(run);
    finish_run(run);
    run.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return run;
}

}  // namespace vlab
