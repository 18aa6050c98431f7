// Acceptance runner. Each criterion prints one PASS/FAIL line; sub-checks
// print indented detail lines above it. Exit status is nonzero if any
// selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vlab/arith.hpp"
#include "vlab/constants.hpp"
#include "vlab/fr_model.hpp"
#include "vlab/rational.hpp"
#include "vlab/records.hpp"
#include "vlab/report.hpp"
#include "vlab/runner.hpp"
#include "vlab/variance.hpp"

using namespace vlab;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Collects sub-check outcomes for one criterion.
class Checks {
public:
    void expect(bool ok, const std::string& what) {
        std::printf("    %s %s\n", ok ? "ok  " : "FAIL", what.c_str());
        all_ &= ok;
    }
    [[nodiscard]] bool passed() const { return all_; }

private:
    bool all_ = true;
};

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

struct Shared {
    FactorSieve sieve;
    ArithTables tables;
    explicit Shared(std::int64_t limit) : sieve(build_sieve(limit)), tables(build_tables(sieve)) {}
};

const Shared& shared() {
    static const Shared s(1'000'000);
    return s;
}

// ---------------------------------------------------------------------------

bool c1_identity() {
    Checks c;
    const auto start = Clock::now();
    const FactorSieve& sieve = shared().sieve;
    std::int64_t cases = 0, mismatches = 0;
    for (std::int64_t v = 1; v <= 1000; ++v) {
        if (!is_squarefree(v, sieve)) continue;
        for (std::int64_t N = 0; N <= v; ++N) {
            try {
                const CrIdentity id = mobius_cr_identity(v, N, sieve);
                const ExactRational expected =
                    ExactRational(v * delta_indicator(N, v), sieve.totient(v));
                if (!(id.lhs == id.rhs && id.rhs == expected)) ++mismatches;
            } catch (const std::exception&) {
                ++mismatches;
            }
            ++cases;
        }
    }
    const double t = seconds_since(start);
    c.expect(mismatches == 0, fmt("%lld (v,N) pairs, %lld mismatches", (long long)cases,
                                  (long long)mismatches));
    c.expect(t < 10.0, fmt("runtime %.2f s < 10 s", t));
    return c.passed();
}

bool c2_ramanujan() {
    Checks c;
    const FactorSieve& sieve = shared().sieve;
    double worst = 0.0;
    for (std::int64_t r = 1; r <= 200; ++r) {
        for (std::int64_t n = 0; n <= 2 * r; ++n) {
            const auto z = ramanujan_sum_oracle(r, n);
            const double diff = std::abs(z - std::complex<double>(double(ramanujan_sum(r, n, sieve)), 0.0));
            worst = std::max(worst, diff);
        }
    }
    c.expect(worst <= 1e-8, fmt("max |divisor form - exponential sum| = %.3g <= 1e-8", worst));

    std::mt19937_64 rng(20240531);
    std::uniform_int_distribution<std::int64_t> md(1, 400), nd(0, 100'000);
    int pairs = 0, failures = 0;
    while (pairs < 100) {
        const std::int64_t a = md(rng), b = md(rng);
        if (gcd(a, b) != 1) continue;
        const std::int64_t n = nd(rng);
        if (ramanujan_sum(a * b, n, sieve) != ramanujan_sum(a, n, sieve) * ramanujan_sum(b, n, sieve)) {
            ++failures;
        }
        ++pairs;
    }
    c.expect(failures == 0, fmt("multiplicativity exact on %d random coprime pairs", pairs));
    return c.passed();
}

bool c3_fr_dual() {
    Checks c;
    const auto start = Clock::now();
    const ArithTables& tables = shared().tables;
    for (double R : {1.0, 2.0, 10.0, 50.0, 200.0}) {
        const FRConfig cfg(R, tables);
        const FrTable table = build_fr_table(100'000, cfg);
        double worst = 0.0;
        for (std::int64_t n = 1; n <= 100'000; ++n) {
            const double naive = fr_value_naive(n, cfg);
            const double fast = fr_value(n, cfg);
            const double scale = std::max(1.0, std::abs(naive));
            worst = std::max({worst, std::abs(fast - naive) / scale,
                              std::abs(table[n] - naive) / scale});
        }
        c.expect(worst <= 1e-9, fmt("R=%g: max relative difference %.3g <= 1e-9", R, worst));
    }
    const double t = seconds_since(start);
    c.expect(t < 60.0, fmt("runtime %.2f s < 60 s", t));
    return c.passed();
}

bool c4_mu2_asymptotic() {
    Checks c;
    const ArithTables& tables = shared().tables;
    const double gamma = euler_gamma();
    const double lp = logp_sum(kDefaultPrimeCutoff).value;
    for (double R : {1e2, 1e3, 1e4, 1e5, 1e6}) {
        const double diff = std::abs(mu2_over_phi_sum(R, tables) - (std::log(R) + gamma + lp));
        const double bound = 3.0 / std::sqrt(R);
        c.expect(diff <= bound, fmt("R=%.0e: |difference| = %.3g <= %.3g", R, diff, bound));
    }
    return c.passed();
}

bool c5_constants() {
    Checks c;
    const ConstantSet hi = constant_set(10'000'000);
    const ConstantSet lo = constant_set(1'000'000);
    const double sq_hi = restricted_product(ProductKind::SQ, 2, 10'000'000).value;
    const double sq_lo = restricted_product(ProductKind::SQ, 2, 1'000'000).value;
    const double sq4 = restricted_product(ProductKind::SQ, 4, 10'000'000).value;

    c.expect(std::abs(hi.c0 - 2.350372) <= 1e-5,
             fmt("c0 = %.9f, target 2.350372 +- 1e-5", hi.c0));
    c.expect(std::abs(hi.zeta2_inv - 0.6079271) <= 1e-6,
             fmt("zeta^-1(2) = %.9f, target 0.6079271 +- 1e-6", hi.zeta2_inv));
    c.expect(std::abs(hi.artin - 0.3739558) <= 1e-6,
             fmt("P_PM1(1) = %.9f, target 0.3739558 +- 1e-6", hi.artin));
    c.expect(std::abs(sq_hi - 0.6601618) <= 1e-6 && std::abs(sq4 - 0.6601618) <= 1e-6,
             fmt("P_SQ(2) = %.9f, P_SQ(4) = %.9f, target 0.6601618 +- 1e-6", sq_hi, sq4));

    c.expect(std::abs(hi.c0 - lo.c0) <= 1e-6, fmt("c0 cutoff 1e6 -> 1e7 moves %.3g", hi.c0 - lo.c0));
    c.expect(std::abs(hi.zeta2_inv - lo.zeta2_inv) <= 1e-6, "zeta^-1(2) independent of cutoff");
    c.expect(std::abs(hi.artin - lo.artin) <= 1e-6,
             fmt("P_PM1(1) cutoff 1e6 -> 1e7 moves %.3g", hi.artin - lo.artin));
    c.expect(std::abs(sq_hi - sq_lo) <= 1e-6, fmt("P_SQ(2) cutoff 1e6 -> 1e7 moves %.3g", sq_hi - sq_lo));

    // Second evaluation paths.
    const double g2 = euler_gamma_harmonic(1'000'000);
    c.expect(std::abs(hi.gamma - g2) <= 1e-12,
             fmt("gamma: Brent-McMillan vs harmonic sum differ by %.3g", hi.gamma - g2));
    c.expect(std::abs(hi.zeta2_inv - zeta2_inv_series()) <= 1e-12, "zeta^-1(2): 6/pi^2 vs series");
    c.expect(std::abs(hi.zeta2_inv - hi.zeta_product) <= 1e-6,
             fmt("zeta^-1(2): closed form vs Euler product differ by %.3g",
                 hi.zeta2_inv - hi.zeta_product));
    return c.passed();
}

bool c6_theorem3() {
    Checks c;
    const auto start = Clock::now();
    const std::int64_t x = 1'000'000;
    const double R = 50.0;
    const FRConfig cfg(R, shared().tables);
    const FrTable fr = build_fr_table(x, cfg);
    const ConstantSet cs = constant_set();
    const double logx = std::log(double(x));
    for (std::int64_t v : {1, 2, 3, 5, 6, 7, 10}) {
        std::vector<std::int64_t> ns{1, v + 1};
        ns.push_back(v == 1 ? 0 : shared().sieve.spf(v));
        for (std::int64_t N : ns) {
            const double emp = delta_sq_progression(x, v, N, cfg, fr);
            const Prediction p = theorem3_prediction(x, v, N, R, cs);
            const double dev = std::abs(emp - p.total) / (double(x) * logx / double(v));
            c.expect(dev <= 0.10, fmt("v=%lld N=%lld delta=%d: empirical %.6g, predicted %.6g, "
                                      "normalized deviation %.4f <= 0.10",
                                      (long long)v, (long long)N, delta_indicator(N, v), emp,
                                      p.total, dev));
        }
    }
    const double t = seconds_since(start);
    c.expect(t < 120.0, fmt("runtime %.2f s < 120 s", t));
    return c.passed();
}

bool c7_theorem1() {
    Checks c;
    const auto start = Clock::now();
    const std::int64_t x = 100'000, Q = 10'000;
    const double R = 30.0;
    const std::int64_t Q_low = static_cast<std::int64_t>(double(x) / R);
    const VarianceLab lab(x, FRConfig(R, shared().tables));
    const ConstantSet cs = constant_set();
    const VarianceOptions opts{Q_low, 0};
    const VarianceRun all = variance_sum(lab, Q, RestrictionMode::all(), Weight::Theta, cs, opts);
    const VarianceRun cop = variance_sum(lab, Q, RestrictionMode::coprime(), Weight::Theta, cs, opts);
    const double ratio = all.empirical / all.prediction.total;
    c.expect(ratio >= 0.85 && ratio <= 1.15,
             fmt("band (%lld, %lld]: empirical %.6g / prediction %.6g = %.4f in [0.85, 1.15]",
                 (long long)Q_low, (long long)Q, all.empirical, all.prediction.total, ratio));
    const double gap = (all.empirical - cop.empirical) / all.empirical;
    c.expect(cop.empirical < all.empirical && gap > 0.01,
             fmt("reduced classes %.6g below all classes by %.2f%% (> 1%%)", cop.empirical,
                 100.0 * gap));
    c.expect(2.0 - cs.zeta2_inv > 1.0,
             fmt("reduced-class log R coefficient %.6f exceeds 1", 2.0 - cs.zeta2_inv));
    const double t = seconds_since(start);
    c.expect(t < 600.0, fmt("runtime %.2f s < 600 s", t));
    return c.passed();
}

bool c8_t_table() {
    Checks c;
    const TValue t1 = t_of_n(1), t2 = t_of_n(2), t6 = t_of_n(6);
    c.expect(std::abs(t2.value - 1.1872) <= 1e-3, fmt("t(2) = %.6f, target 1.1872 +- 1e-3", t2.value));
    c.expect(std::abs(t6.value - 1.3226) <= 1e-3, fmt("t(6) = %.6f, target 1.3226 +- 1e-3", t6.value));
    c.expect(std::abs(t1.value - 0.3743) <= 1e-3, fmt("t(1) = %.6f, target 0.3743 +- 1e-3", t1.value));

    const fs::path dir = fs::temp_directory_path() / "vlab_acceptance_c8";
    fs::remove_all(dir);
    ExperimentConfig cfg;
    cfg.command = Command::Constants;
    cfg.N = {1, 2, 6};
    cfg.output_dir = dir.string();
    const std::string text = report({run(cfg).manifest_path});
    const bool flagged = text.find("t(1) = 0.374") != std::string::npos &&
                         text.find("BELOW 1") != std::string::npos && !t1.at_least_one;
    c.expect(flagged, "report flags t(1) < 1 against the claimed lower bound");
    return c.passed();
}

bool c9_determinism() {
    Checks c;
    const std::int64_t x = 100'000, Q = 10'000;
    const double R = 30.0;
    const VarianceLab lab(x, FRConfig(R, shared().tables));
    double reference = 0.0;
    bool bits_equal = true;
    for (int threads : {1, 4, 8}) {
        const double e = lab.empirical(Q, RestrictionMode::all(), Weight::Theta, 0, threads);
        if (threads == 1) reference = e;
        bits_equal &= std::memcmp(&e, &reference, sizeof e) == 0;
        std::printf("    .... threads=%d empirical=%.17g\n", threads, e);
    }
    c.expect(bits_equal, "empirical bit-identical at 1, 4 and 8 threads");

    std::vector<std::string> files;
    for (int threads : {1, 4, 8}) {
        const fs::path dir = fs::temp_directory_path() / ("vlab_acceptance_c9_" + std::to_string(threads));
        fs::remove_all(dir);
        ExperimentConfig cfg;
        cfg.command = Command::Vaughan;
        cfg.x = x;
        cfg.Q = Q;
        cfg.R = R;
        cfg.threads = threads;
        cfg.timing = false;
        cfg.output_dir = dir.string();
        run(cfg);
        std::ifstream in(dir / "vaughan.csv", std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        files.push_back(s.str());
    }
    c.expect(files[0] == files[1] && files[1] == files[2] && !files[0].empty(),
             "CSV bytes identical at 1, 4 and 8 threads (wall time written as 0)");
    return c.passed();
}

bool c10_properties() {
    Checks c;
    const ArithTables& tables = shared().tables;
    {
        const std::int64_t x = 100'000;
        const double R = 30.0;
        const VarianceLab lab(x, FRConfig(R, tables));
        const double theta_full = theta_progression(x, 1, 0, tables);
        double rho_full = 0.0;
        for (std::int64_t n = 1; n <= x; ++n) rho_full += lab.fr()[n];
        const double target = theta_full - rho_full;
        double worst = 0.0;
        for (std::int64_t d : {1, 2, 3, 10, 97, 210, 1000, 4096, 9999, 30'030}) {
            const ProgressionAccumulator acc = accumulate_modulus(d, x, tables, lab.fr(), Weight::Theta);
            double s = 0.0;
            for (std::int64_t b = 0; b < d; ++b) s += acc.theta_buckets[b] - acc.rho_buckets[b];
            worst = std::max(worst, std::abs(s - target) / std::max(theta_full, rho_full));
        }
        c.expect(worst <= 1e-6, fmt("partition identity: worst relative error %.3g <= 1e-6", worst));

        const std::int64_t Q = 3000;
        const auto all = lab.per_modulus(Q, RestrictionMode::all(), Weight::Theta);
        const auto cop = lab.per_modulus(Q, RestrictionMode::coprime(), Weight::Theta);
        const auto shift = lab.per_modulus(Q, RestrictionMode::shift_coprime(2), Weight::Theta);
        std::int64_t violations = 0;
        for (std::size_t i = 0; i < all.size(); ++i) {
            violations += !(all[i] >= cop[i] && all[i] >= shift[i] && cop[i] >= 0.0 && shift[i] >= 0.0);
        }
        c.expect(violations == 0,
                 fmt("mode nesting per modulus over d <= %lld: %lld violations", (long long)Q,
                     (long long)violations));

        bool monotone = true;
        double previous = -1.0;
        for (std::int64_t q : {1, 10, 100, 500, 1000, 2000, 3000}) {
            const double e = lab.empirical(q, RestrictionMode::all(), Weight::Theta);
            monotone &= e >= previous;
            previous = e;
        }
        c.expect(monotone, "empirical non-decreasing in Q");
    }
    {
        const std::int64_t x = 1'000'000, Q_low = 20'000, Q = 20'256;
        const VarianceLab lab(x, FRConfig(50.0, tables));
        const double th = lab.empirical(Q, RestrictionMode::all(), Weight::Theta, Q_low);
        const double ps = lab.empirical(Q, RestrictionMode::all(), Weight::Psi, Q_low);
        const double rel = std::abs(ps - th) / th;
        c.expect(rel <= 0.05, fmt("psi vs theta at x=1e6, R=50, d in (%lld, %lld]: %.4f%% <= 5%%",
                                  (long long)Q_low, (long long)Q, 100.0 * rel));
    }
    return c.passed();
}

struct Criterion {
    int id;
    const char* title;
    std::function<bool()> body;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vlab acceptance criteria"};
    int only = 0;
    app.add_option("--criterion", only, "run a single criterion (1-10)")->check(CLI::Range(1, 10));
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria = {
        {1, "Mobius-Ramanujan identity, squarefree v <= 1000, 0 <= N <= v", c1_identity},
        {2, "Ramanujan sums: divisor form vs exponential sum, multiplicativity", c2_ramanujan},
        {3, "F_R fast vs literal, n <= 1e5, R in {1,2,10,50,200}", c3_fr_dual},
        {4, "mu^2/phi partial sums vs log R + gamma + logp_sum", c4_mu2_asymptotic},
        {5, "constants and prime products", c5_constants},
        {6, "squared discrepancy in progressions at x=1e6, R=50", c6_theorem3},
        {7, "all-class variance band at x=1e5, Q=1e4, R=30; reduced-class gap", c7_theorem1},
        {8, "t(N) table and the t(1) < 1 flag", c8_t_table},
        {9, "determinism across thread counts", c9_determinism},
        {10, "property suite", c10_properties},
    };

    int failed = 0;
    for (const Criterion& cr : criteria) {
        if (only != 0 && cr.id != only) continue;
        std::printf("criterion %d: %s\n", cr.id, cr.title);
        std::fflush(stdout);
        const auto start = Clock::now();
        bool ok = false;
        try {
            ok = cr.body();
        } catch (const std::exception& e) {
            std::printf("    FAIL exception: %s\n", e.what());
        }
        std::printf("%s criterion %d (%.2f s)\n", ok ? "PASS" : "FAIL", cr.id, seconds_since(start));
        std::fflush(stdout);
        failed += !ok;
    }
    return failed == 0 ? 0 : 1;
}
