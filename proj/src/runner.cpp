#include "vlab/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "vlab/errors.hpp"
#include "vlab/format.hpp"

namespace vlab {

namespace fs = std::filesystem;

namespace {

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

template <typename T>
std::string vector_checksum(const std::vector<T>& values) {
    return fnv1a_hex(values.data(), values.size() * sizeof(T));
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

// Collects rows for one result file and writes it as CSV or a JSON array.
class ResultFile {
public:
    ResultFile(std::string name, std::vector<std::string> columns, OutputFormat format)
        : name_(std::move(name)), columns_(std::move(columns)), format_(format) {}

    void add(const std::vector<std::string>& csv_row, Json json_row) {
        csv_rows_.push_back(csv_row);
        json_rows_.push_back(std::move(json_row));
    }

    std::string write(const fs::path& dir) const {
        const std::string file = name_ + (format_ == OutputFormat::Csv ? ".csv" : ".json");
        std::ofstream out(dir / file, std::ios::binary);
        if (!out) throw IoError("cannot write result file: " + (dir / file).string());
        if (format_ == OutputFormat::Csv) {
            out << csv_line(columns_);
            for (const auto& row : csv_rows_) out << csv_line(row);
        } else {
            out << json_rows_.dump(2) << '\n';
        }
        if (!out) throw IoError("write failed: " + (dir / file).string());
        return file;
    }

private:
    std::string name_;
    std::vector<std::string> columns_;
    OutputFormat format_;
    std::vector<std::vector<std::string>> csv_rows_;
    Json json_rows_ = Json::array();
};

struct Workspace {
    FactorSieve sieve;
    ArithTables tables;

    explicit Workspace(std::int64_t limit) : sieve(build_sieve(limit)), tables(build_tables(sieve)) {}
};

class Runner {
public:
    Runner(const ExperimentConfig& config, RunManifest& manifest, fs::path dir)
        : c_(config), m_(manifest), dir_(std::move(dir)) {}

    void constants(std::vector<std::int64_t> t_arguments) {
        ResultFile file("constants", constants_csv_columns(), c_.format);
        for (const auto& row : constants_table(c_.prime_cutoff, t_arguments)) {
            file.add(constants_csv_row(row), to_json(row));
        }
        finish(file);
        record_t_values(t_arguments);
    }

    void fr_table() {
        const Workspace& w = workspace();
        const FRConfig cfg(resolved_R(c_), w.tables);
        const FrTable fr = build_fr_table(c_.x, cfg);
        ResultFile file("fr-table", {"n", "lambda", "fr", "delta"}, c_.format);
        for (std::int64_t n = 1; n <= c_.x; ++n) {
            const double lambda = w.tables.lambda[n];
            file.add({std::to_string(n), format_real(lambda), format_real(fr[n]),
                      format_real(lambda - fr[n])},
                     Json{{"n", n},
                          {"lambda", round_to_output(lambda)},
                          {"fr", round_to_output(fr[n])},
                          {"delta", round_to_output(lambda - fr[n])}});
        }
        m_.checksums["fr"] = vector_checksum(fr.values);
        finish(file);
    }

    void theorem3() {
        const Workspace& w = workspace();
        const double R = resolved_R(c_);
        const FRConfig cfg(R, w.tables);
        const FrTable fr = build_fr_table(c_.x, cfg);
        m_.checksums["fr"] = vector_checksum(fr.values);
        const ConstantSet cs = constants_for_run();
        const std::vector<std::int64_t> vs = c_.v.empty() ? std::vector<std::int64_t>{1} : c_.v;
        const std::vector<std::int64_t> ns = c_.N.empty() ? std::vector<std::int64_t>{1} : c_.N;
        ResultFile file("theorem3", delta_sq_csv_columns(), c_.format);
        for (std::int64_t v : vs) {
            for (std::int64_t N : ns) {
                const auto start = std::chrono::steady_clock::now();
                const double empirical = delta_sq_progression(c_.x, v, N, cfg, fr);
                const DeltaSqRow row = make_delta_sq_row(
                    c_.x, R, v, N, empirical, theorem3_prediction(c_.x, v, N, R, cs), elapsed_ms(start));
                file.add(delta_sq_csv_row(row, c_.timing), to_json(row, c_.timing));
            }
        }
        finish(file);
    }

    void variance(Command command, std::vector<std::int64_t> shifts = {}) {
        const Workspace& w = workspace();
        const FRConfig cfg(resolved_R(c_), w.tables);
        const VarianceLab lab(c_.x, cfg);
        m_.checksums["fr"] = vector_checksum(lab.fr().values);
        const ConstantSet cs = constants_for_run();
        const VarianceOptions options{resolved_Q_low(c_), c_.threads};
        const std::int64_t Q = resolved_Q(c_);

        std::vector<RestrictionMode> modes;
        if (command == Command::Vaughan) modes.push_back(RestrictionMode::all());
        if (command == Command::Theorem5) modes.push_back(RestrictionMode::coprime());
        if (command == Command::Theorem4) {
            if (shifts.empty()) shifts = c_.N;
            for (std::int64_t N : shifts) modes.push_back(RestrictionMode::shift_coprime(N));
            record_t_values(shifts);
        }
        ResultFile file(std::string(to_string(command)), variance_csv_columns(), c_.format);
        for (const RestrictionMode& mode : modes) {
            const VarianceRun r = variance_sum(lab, Q, mode, c_.weight, cs, options);
            file.add(variance_csv_row(r, c_.timing), to_json(r, c_.timing));
        }
        finish(file);
    }

    void bdh() {
        const Workspace& w = workspace();
        const VarianceRun r = bdh_variance(c_.x, resolved_Q(c_), w.tables, c_.threads);
        ResultFile file("bdh", variance_csv_columns(), c_.format);
        file.add(variance_csv_row(r, c_.timing), to_json(r, c_.timing));
        finish(file);
    }

private:
    const Workspace& workspace() {
        if (!workspace_) {
            workspace_ = std::make_unique<Workspace>(c_.x);
            m_.checksums["lambda"] = vector_checksum(workspace_->tables.lambda);
            m_.checksums["mu"] = vector_checksum(workspace_->tables.mu);
            m_.checksums["phi"] = vector_checksum(workspace_->tables.phi);
        }
        return *workspace_;
    }

    ConstantSet constants_for_run() {
        if (!constants_) constants_ = std::make_unique<ConstantSet>(constant_set(c_.prime_cutoff));
        return *constants_;
    }

    void record_t_values(const std::vector<std::int64_t>& ns) {
        for (std::int64_t N : ns) {
            if (N < 1) continue;
            const TValue t = t_of_n(N, c_.prime_cutoff);
            m_.derived["t"][std::to_string(N)] =
                Json{{"value", round_to_output(t.value)},
                     {"error_bound", round_to_output(t.error_bound)},
                     {"at_least_one", t.at_least_one}};
        }
    }

    void finish(const ResultFile& file) { m_.result_files.push_back(file.write(dir_)); }

    const ExperimentConfig& c_;
    RunManifest& m_;
    fs::path dir_;
    std::unique_ptr<Workspace> workspace_;
    std::unique_ptr<ConstantSet> constants_;
};

Json config_json(const ExperimentConfig& c) {
    Json j = Json::object();
    j["command"] = std::string(to_string(c.command));
    j["x"] = c.x;
    if (c.Q) j["Q"] = *c.Q;
    if (c.B) j["B"] = *c.B;
    if (c.R) j["R"] = *c.R;
    if (c.G) j["G"] = *c.G;
    if (c.Q_low) j["Q_low"] = *c.Q_low;
    j["band"] = c.band;
    j["N"] = c.N;
    j["v"] = c.v;
    j["prime_cutoff"] = c.prime_cutoff;
    j["output_dir"] = c.output_dir;
    j["format"] = std::string(to_string(c.format));
    j["threads"] = c.threads;
    j["weight"] = std::string(to_string(c.weight));
    j["timing"] = c.timing;
    return j;
}

ExperimentConfig config_from_json(const Json& j) {
    ExperimentConfig c;
    c.command = parse_command(j.at("command").get<std::string>());
    c.x = j.at("x").get<std::int64_t>();
    if (j.contains("Q")) c.Q = j["Q"].get<std::int64_t>();
    if (j.contains("B")) c.B = j["B"].get<double>();
    if (j.contains("R")) c.R = j["R"].get<double>();
    if (j.contains("G")) c.G = j["G"].get<double>();
    if (j.contains("Q_low")) c.Q_low = j["Q_low"].get<std::int64_t>();
    c.band = j.value("band", false);
    c.N = j.value("N", std::vector<std::int64_t>{});
    c.v = j.value("v", std::vector<std::int64_t>{});
    c.prime_cutoff = j.value("prime_cutoff", kDefaultPrimeCutoff);
    c.output_dir = j.value("output_dir", std::string{});
    c.format = parse_format(j.value("format", std::string("csv")));
    c.threads = j.value("threads", 0);
    c.weight = parse_weight(j.value("weight", std::string("theta")));
    c.timing = j.value("timing", true);
    return c;
}

}  // namespace

std::string fnv1a_hex(const void* data, std::size_t size) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
        h ^= bytes[i];
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Json to_json(const RunManifest& m) {
    Json checksums = Json::object();
    for (const auto& [k, v] : m.checksums) checksums[k] = v;
    return Json{{"tool", "vlab"},
                {"tool_version", m.tool_version},
                {"timestamp", m.timestamp},
                {"config", config_json(m.config)},
                {"derived", m.derived},
                {"checksums", checksums},
                {"result_files", m.result_files}};
}

RunManifest manifest_from_json(const Json& j) {
    RunManifest m;
    m.config = config_from_json(j.at("config"));
    m.derived = j.value("derived", Json::object());
    m.tool_version = j.value("tool_version", std::string{});
    m.timestamp = j.value("timestamp", std::string{});
    const Json checksums = j.value("checksums", Json::object());
    for (const auto& [k, v] : checksums.items()) {
        m.checksums[k] = v.get<std::string>();
    }
    m.result_files = j.value("result_files", std::vector<std::string>{});
    return m;
}

RunManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest: " + path);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw IoError("malformed manifest " + path + ": " + e.what());
    }
    RunManifest m = manifest_from_json(j);
    m.manifest_path = path;
    return m;
}

RunManifest run(const ExperimentConfig& config) {
    validate(config);
    const fs::path dir = resolved_output_dir(config);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());

    RunManifest m;
    m.config = config;
    m.timestamp = utc_timestamp();
    m.derived["x"] = config.x;
    if (config.command != Command::Constants) {
        if (config.command != Command::Bdh) m.derived["R"] = round_to_output(resolved_R(config));
    }
    const bool uses_q = config.Q || config.B;
    if (uses_q) {
        m.derived["Q"] = resolved_Q(config);
        if (config.command != Command::Bdh) m.derived["Q_low"] = resolved_Q_low(config);
    }

    Runner runner(config, m, dir);
    switch (config.command) {
        case Command::Constants: runner.constants(config.N); break;
        case Command::FrTable: runner.fr_table(); break;
        case Command::Theorem3: runner.theorem3(); break;
        case Command::Vaughan:
        case Command::Theorem5:
        case Command::Theorem4: runner.variance(config.command); break;
        case Command::Bdh: runner.bdh(); break;
        case Command::Suite: {
            std::vector<std::int64_t> t_arguments = config.N;
            if (t_arguments.empty()) t_arguments = {1, 2, 6};
            runner.constants(t_arguments);
            runner.theorem3();
            runner.variance(Command::Vaughan);
            runner.variance(Command::Theorem5);
            runner.variance(Command::Theorem4, t_arguments);
            runner.bdh();
            break;
        }
    }

    const fs::path manifest_file = dir / (std::string(to_string(config.command)) + ".manifest.json");
    std::ofstream out(manifest_file);
    if (!out) throw IoError("cannot write manifest: " + manifest_file.string());
    out << to_json(m).dump(2) << '\n';
    m.manifest_path = manifest_file.string();
    return m;
}

}  // namespace vlab
