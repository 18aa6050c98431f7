#include "vlab/records.hpp"

#include <cmath>

#include "vlab/errors.hpp"
#include "vlab/format.hpp"

namespace vlab {

namespace {

Json real(double v) { return round_to_output(v); }

std::string mode_text(const RestrictionMode& mode) { return std::string(to_string(mode.kind)); }

}  // namespace

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string csv_line(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(fields[i]);
    }
    out += '\n';
    return out;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        any = true;
        if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            row.push_back(std::move(field));
            field.clear();
            rows.push_back(std::move(row));
            row.clear();
            any = false;
        } else {
            field += c;
        }
    }
    if (quoted) throw IoError("unterminated quoted CSV field");
    if (any || !field.empty() || !row.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

const std::vector<std::string>& variance_csv_columns() {
    static const std::vector<std::string> columns = {
        "x",           "Q",       "Q_low",     "R",
        "mode",        "N",       "weight",    "empirical",
        "predicted_total", "predicted_log_block", "predicted_constant_block",
        "relative_deviation", "relative_deviation_log", "wall_time_ms"};
    return columns;
}

std::vector<std::string> variance_csv_row(const VarianceRun& run, bool timing) {
    return {std::to_string(run.x),
            std::to_string(run.Q),
            std::to_string(run.Q_low),
            format_real(run.R),
            mode_text(run.restriction),
            std::to_string(run.restriction.N),
            std::string(to_string(run.weight)),
            format_real(run.empirical),
            format_real(run.prediction.total),
            format_real(run.prediction.log_block),
            format_real(run.prediction.constant_block),
            format_real(run.relative_deviation),
            format_real(run.relative_deviation_log),
            format_real(timing ? run.wall_time_ms : 0.0)};
}

Json to_json(const Prediction& p) {
    Json terms = Json::object();
    for (const auto& t : p.terms) terms[t.name] = real(t.value);
    Json params = Json::object();
    for (const auto& t : p.parameters) params[t.name] = real(t.value);
    return Json{{"total", real(p.total)},
                {"log_block", real(p.log_block)},
                {"constant_block", real(p.constant_block)},
                {"terms", terms},
                {"parameters", params},
                {"error_budget", p.error_budget}};
}

Json to_json(const VarianceRun& run, bool timing) {
    return Json{{"x", run.x},
                {"Q", run.Q},
                {"Q_low", run.Q_low},
                {"R", real(run.R)},
                {"mode", mode_text(run.restriction)},
                {"N", run.restriction.N},
                {"weight", std::string(to_string(run.weight))},
                {"empirical", real(run.empirical)},
                {"predicted_main", real(run.predicted_main)},
                {"prediction", to_json(run.prediction)},
                {"relative_deviation", real(run.relative_deviation)},
                {"relative_deviation_log", real(run.relative_deviation_log)},
                {"wall_time_ms", real(timing ? run.wall_time_ms : 0.0)}};
}

DeltaSqRow make_delta_sq_row(std::int64_t x, double R, std::int64_t v, std::int64_t N,
                             double empirical, Prediction prediction, double wall_time_ms) {
    DeltaSqRow row;
    row.x = x;
    row.R = R;
    row.v = v;
    row.N = N;
    row.delta = delta_indicator(N, v);
    row.empirical = empirical;
    row.prediction = std::move(prediction);
    const double scale = static_cast<double>(x) * std::log(static_cast<double>(x)) /
                         static_cast<double>(v);
    row.normalized_deviation = (empirical - row.prediction.total) / scale;
    row.relative_deviation = row.prediction.total != 0.0
                                 ? (empirical - row.prediction.total) / row.prediction.total
                                 : 0.0;
    row.wall_time_ms = wall_time_ms;
    return row;
}

const std::vector<std::string>& delta_sq_csv_columns() {
    static const std::vector<std::string> columns = {
        "x", "R", "v", "N", "delta", "empirical", "predicted_total",
        "term_delta_x_over_phi_log", "term_x_over_v_log_r", "term_delta_x_v_over_phi_sq",
        "term_minus_x_over_phi", "normalized_deviation", "relative_deviation", "wall_time_ms"};
    return columns;
}

std::vector<std::string> delta_sq_csv_row(const DeltaSqRow& row, bool timing) {
    std::vector<std::string> out = {std::to_string(row.x), format_real(row.R),
                                    std::to_string(row.v), std::to_string(row.N),
                                    std::to_string(row.delta), format_real(row.empirical),
                                    format_real(row.prediction.total)};
    for (const auto& t : row.prediction.terms) out.push_back(format_real(t.value));
    out.push_back(format_real(row.normalized_deviation));
    out.push_back(format_real(row.relative_deviation));
    out.push_back(format_real(timing ? row.wall_time_ms : 0.0));
    return out;
}

Json to_json(const DeltaSqRow& row, bool timing) {
    return Json{{"x", row.x},
                {"R", real(row.R)},
                {"v", row.v},
                {"N", row.N},
                {"delta", row.delta},
                {"empirical", real(row.empirical)},
                {"prediction", to_json(row.prediction)},
                {"normalized_deviation", real(row.normalized_deviation)},
                {"relative_deviation", real(row.relative_deviation)},
                {"wall_time_ms", real(timing ? row.wall_time_ms : 0.0)}};
}

std::vector<ConstantRow> constants_table(std::int64_t prime_cutoff,
                                         const std::vector<std::int64_t>& t_arguments) {
    const ConstantSet cs = constant_set(prime_cutoff);
    const TruncatedValue lp = logp_sum(prime_cutoff);
    const RestrictedProduct pm1 = restricted_product(ProductKind::PM1, 1, prime_cutoff);
    const RestrictedProduct zeta = restricted_product(ProductKind::ZETA, 1, prime_cutoff);
    const RestrictedProduct sq = restricted_product(ProductKind::SQ, 2, prime_cutoff);
    std::vector<ConstantRow> rows = {
        {"gamma", cs.gamma, 0.0, prime_cutoff},
        {"logp_sum", cs.logp_sum, lp.tail_bound, prime_cutoff},
        {"c0", cs.c0, lp.tail_bound, prime_cutoff},
        {"c1", cs.c1, 2.0 * lp.tail_bound, prime_cutoff},
        {"c2", cs.c2, lp.tail_bound, prime_cutoff},
        {"zeta2_inv", cs.zeta2_inv, 0.0, prime_cutoff},
        {"P_PM1(1)", pm1.value, pm1.tail_bound, prime_cutoff},
        {"P_ZETA(1)", zeta.value, zeta.tail_bound, prime_cutoff},
        {"P_SQ(2)", sq.value, sq.tail_bound, prime_cutoff},
    };
    for (std::int64_t N : t_arguments) {
        const TValue t = t_of_n(N, prime_cutoff);
        rows.push_back({"t(" + std::to_string(N) + ")", t.value, t.error_bound, prime_cutoff});
    }
    return rows;
}

const std::vector<std::string>& constants_csv_columns() {
    static const std::vector<std::string> columns = {"name", "value", "tail_bound", "cutoff"};
    return columns;
}

std::vector<std::string> constants_csv_row(const ConstantRow& row) {
    return {row.name, format_real(row.value), format_real(row.tail_bound),
            std::to_string(row.cutoff)};
}

Json to_json(const ConstantRow& row) {
    return Json{{"name", row.name},
                {"value", real(row.value)},
                {"tail_bound", real(row.tail_bound)},
                {"cutoff", row.cutoff}};
}

}  // namespace vlab
