#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vlab/constants.hpp"
#include "vlab/variance.hpp"

namespace vlab {

enum class Command { Constants, FrTable, Theorem3, Vaughan, Theorem5, Theorem4, Bdh, Suite };
enum class OutputFormat { Csv, Json };

std::string_view to_string(Command command);
std::string_view to_string(OutputFormat format);
Command parse_command(std::string_view text);
OutputFormat parse_format(std::string_view text);

inline constexpr std::int64_t kSieveCeiling = 100'000'000;
inline constexpr const char* kOutputDirEnv = "VLAB_OUTPUT_DIR";

// One experiment. Q may be given directly or as B with Q = ⌊x (log x)^{−B}⌋;
// R directly or as G with R = (log x)^G.
struct ExperimentConfig {
    Command command = Command::Constants;
    std::int64_t x = 100'000;
    std::optional<std::int64_t> Q;
    std::optional<double> B;
    std::optional<double> R;
    std::optional<double> G;
    std::optional<std::int64_t> Q_low;
    bool band = false;  // Q_low = ⌊x/R⌋
    std::vector<std::int64_t> N;
    std::vector<std::int64_t> v;
    std::int64_t prime_cutoff = kDefaultPrimeCutoff;
    std::string output_dir;
    OutputFormat format = OutputFormat::Csv;
    int threads = 0;
    Weight weight = Weight::Theta;
    bool timing = true;  // false writes wall_time_ms as 0 for byte-stable output

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Flat `key = value` text, one line per set field, in a fixed key order.
std::string print_config(const ExperimentConfig& config);

/// Parses `key = value` lines; '#' starts a comment. Unknown keys are usage errors.
ExperimentConfig parse_config(std::string_view text);

/// Applies a single key/value pair (shared by the file parser and CLI flags).
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

ExperimentConfig load_config_file(const std::string& path);

/// Throws UsageError naming the violated condition.
void validate(const ExperimentConfig& config);

std::int64_t resolved_Q(const ExperimentConfig& config);
double resolved_R(const ExperimentConfig& config);
std::int64_t resolved_Q_low(const ExperimentConfig& config);
std::string resolved_output_dir(const ExperimentConfig& config);

}  // namespace vlab
