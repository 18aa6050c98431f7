#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "vlab/constants.hpp"
#include "vlab/variance.hpp"

namespace vlab {

using Json = nlohmann::ordered_json;

// RFC 4180: fields containing a comma, quote or line break are quoted and
// embedded quotes doubled.
std::string csv_escape(std::string_view field);
std::string csv_line(const std::vector<std::string>& fields);
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

// ---- variance runs -------------------------------------------------------

const std::vector<std::string>& variance_csv_columns();
std::vector<std::string> variance_csv_row(const VarianceRun& run, bool timing = true);
Json to_json(const VarianceRun& run, bool timing = true);
Json to_json(const Prediction& prediction);

// ---- theorem 3 rows ------------------------------------------------------

struct DeltaSqRow {
    std::int64_t x = 0;
    double R = 1.0;
    std::int64_t v = 1;
    std::int64_t N = 0;
    int delta = 0;
    double empirical = 0.0;
    Prediction prediction;
    double normalized_deviation = 0.0;  // (empirical − total) / (x log x / v)
    double relative_deviation = 0.0;
    double wall_time_ms = 0.0;
};

DeltaSqRow make_delta_sq_row(std::int64_t x, double R, std::int64_t v, std::int64_t N,
                             double empirical, Prediction prediction, double wall_time_ms);

const std::vector<std::string>& delta_sq_csv_columns();
std::vector<std::string> delta_sq_csv_row(const DeltaSqRow& row, bool timing = true);
Json to_json(const DeltaSqRow& row, bool timing = true);

// ---- constants table -----------------------------------------------------

struct ConstantRow {
    std::string name;
    double value = 0.0;
    double tail_bound = 0.0;
    std::int64_t cutoff = 0;
};

/// γ, logp_sum, c0, c1, c2, ζ⁻¹(2), the unrestricted products, P_SQ(2), and
/// t(N) for each requested N.
std::vector<ConstantRow> constants_table(std::int64_t prime_cutoff,
                                         const std::vector<std::int64_t>& t_arguments);

const std::vector<std::string>& constants_csv_columns();
std::vector<std::string> constants_csv_row(const ConstantRow& row);
Json to_json(const ConstantRow& row);

}  // namespace vlab
