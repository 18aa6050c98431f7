#include "vlab/report.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "vlab/constants.hpp"
#include "vlab/errors.hpp"
#include "vlab/format.hpp"
#include "vlab/records.hpp"
#include "vlab/runner.hpp"

namespace vlab {

namespace fs = std::filesystem;

namespace {

using Row = std::map<std::string, std::string>;

struct LoadedFile {
    std::string command;
    std::string name;
    std::vector<Row> rows;
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("missing result file: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string scalar_text(const Json& value) {
    if (value.is_string()) return value.get<std::string>();
    if (value.is_number_float()) return format_real(value.get<double>());
    return value.dump();
}

std::vector<Row> load_rows(const fs::path& path) {
    const std::string text = read_file(path);
    std::vector<Row> rows;
    if (path.extension() == ".json") {
        Json j;
        try {
            j = Json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw IoError("malformed result file " + path.string() + ": " + e.what());
        }
        for (const auto& item : j) {
            Row row;
            for (const auto& [k, v] : item.items()) {
                if (v.is_object()) {
                    if (k == "prediction" && v.contains("total")) {
                        row["predicted_total"] = scalar_text(v["total"]);
                    }
                    continue;
                }
                row[k] = scalar_text(v);
            }
            rows.push_back(std::move(row));
        }
        return rows;
    }
    const auto table = parse_csv(text);
    if (table.empty()) return rows;
    const auto& header = table.front();
    for (std::size_t i = 1; i < table.size(); ++i) {
        Row row;
        for (std::size_t c = 0; c < header.size() && c < table[i].size(); ++c) {
            row[header[c]] = table[i][c];
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string get(const Row& row, const std::string& key) {
    const auto it = row.find(key);
    return it == row.end() ? std::string("-") : it->second;
}

double number(const Row& row, const std::string& key) {
    const auto it = row.find(key);
    if (it == row.end()) return 0.0;
    return std::strtod(it->second.c_str(), nullptr);
}

std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

void table(std::ostringstream& out, const std::vector<std::string>& header,
           const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) widths[c] = header[c].size();
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < r.size() && c < widths.size(); ++c) {
            widths[c] = std::max(widths[c], r[c].size());
        }
    }
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            out << (c ? "  " : "") << pad(cells[c], widths[c]);
        }
        out << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
}

bool is_variance_file(const std::string& name) {
    return name == "vaughan" || name == "theorem5" || name == "theorem4" || name == "bdh";
}

}  // namespace

std::string report(const std::vector<std::string>& manifest_paths) {
    if (manifest_paths.empty()) throw UsageError("report needs at least one manifest");
    std::vector<RunManifest> manifests;
    std::vector<LoadedFile> files;
    for (const std::string& path : manifest_paths) {
        RunManifest m = load_manifest(path);
        const fs::path dir = fs::path(path).parent_path();
        for (const std::string& file : m.result_files) {
            const fs::path full = dir / file;
            files.push_back({std::string(to_string(m.config.command)),
                             fs::path(file).stem().string(), load_rows(full)});
        }
        manifests.push_back(std::move(m));
    }

    std::ostringstream out;
    out << "vlab comparison report\n======================\n\n";
    out << "Manifests:\n";
    for (const auto& m : manifests) {
        out << "  " << m.manifest_path << "  command=" << to_string(m.config.command)
            << "  derived=" << m.derived.dump() << '\n';
    }

    std::vector<std::vector<std::string>> variance_rows;
    std::vector<std::vector<std::string>> delta_rows;
    std::vector<std::vector<std::string>> constant_rows;
    struct Ratio {
        double x;
        double ratio;
        std::string label;
    };
    std::vector<Ratio> vaughan_trend;
    std::map<std::string, double> all_by_key;
    std::map<std::string, double> coprime_by_key;
    std::map<std::string, double> t_values;

    for (const auto& f : files) {
        for (const Row& row : f.rows) {
            if (is_variance_file(f.name)) {
                const double emp = number(row, "empirical");
                const double pred = number(row, "predicted_total");
                const std::string ratio = pred != 0.0 ? format_real(emp / pred) : "-";
                variance_rows.push_back({f.name, get(row, "x"), get(row, "Q"), get(row, "Q_low"),
                                         get(row, "R"), get(row, "mode"), get(row, "N"),
                                         get(row, "empirical"), get(row, "predicted_total"),
                                         get(row, "relative_deviation"), ratio});
                const std::string key = get(row, "x") + "/" + get(row, "Q") + "/" +
                                        get(row, "Q_low") + "/" + get(row, "R") + "/" +
                                        get(row, "weight");
                if (f.name == "vaughan") {
                    all_by_key[key] = emp;
                    if (pred != 0.0) vaughan_trend.push_back({number(row, "x"), emp / pred, key});
                }
                if (f.name == "theorem5") coprime_by_key[key] = emp;
            } else if (f.name == "theorem3") {
                delta_rows.push_back({get(row, "x"), get(row, "R"), get(row, "v"), get(row, "N"),
                                      get(row, "delta"), get(row, "empirical"),
                                      get(row, "predicted_total"), get(row, "normalized_deviation")});
            } else if (f.name == "constants") {
                constant_rows.push_back({get(row, "name"), get(row, "value"),
                                         get(row, "tail_bound"), get(row, "cutoff")});
                const std::string name = get(row, "name");
                if (name.rfind("t(", 0) == 0) {
                    t_values[name.substr(2, name.size() - 3)] = number(row, "value");
                }
            }
        }
    }
    for (const auto& m : manifests) {
        if (!m.derived.contains("t")) continue;
        for (const auto& [n, entry] : m.derived["t"].items()) {
            t_values[n] = entry.at("value").get<double>();
        }
    }

    if (!constant_rows.empty()) {
        out << "\nConstants\n---------\n";
        table(out, {"name", "value", "tail_bound", "cutoff"}, constant_rows);
    }
    if (!delta_rows.empty()) {
        out << "\nSquared discrepancy in progressions\n-----------------------------------\n";
        table(out, {"x", "R", "v", "N", "delta", "empirical", "predicted", "dev/(x log x/v)"},
              delta_rows);
    }
    if (!variance_rows.empty()) {
        out << "\nVariance runs\n-------------\n";
        table(out, {"run", "x", "Q", "Q_low", "R", "mode", "N", "empirical", "predicted",
                    "rel_dev", "emp/pred"},
              variance_rows);
    }

    out << "\nSummary\n-------\n";
    const double z = zeta2_inv();
    out << "(a) Coefficient of log R in the main term: all residue classes 1, reduced classes "
           "2 - zeta^-1(2) = "
        << format_real(2.0 - z) << ".\n";
    for (const auto& [key, all] : all_by_key) {
        const auto it = coprime_by_key.find(key);
        if (it == coprime_by_key.end() || all == 0.0) continue;
        out << "    x/Q/Q_low/R/weight = " << key << ": reduced-class empirical / all-class empirical = "
            << format_real(it->second / all) << '\n';
    }
    if (!vaughan_trend.empty()) {
        std::sort(vaughan_trend.begin(), vaughan_trend.end(),
                  [](const Ratio& a, const Ratio& b) { return a.x < b.x; });
        out << "    all-class empirical / predicted by x:";
        for (const auto& r : vaughan_trend) out << "  x=" << format_real(r.x) << ": " << format_real(r.ratio);
        out << '\n';
    }
    if (t_values.empty()) {
        out << "(b) No t(N) values in these runs.\n";
    } else {
        out << "(b) t(N) values (claimed lower bound t(N) >= 1):\n";
        std::vector<std::pair<std::int64_t, double>> sorted;
        for (const auto& [n, value] : t_values) sorted.emplace_back(std::stoll(n), value);
        std::sort(sorted.begin(), sorted.end());
        for (const auto& [n, value] : sorted) {
            out << "    t(" << n << ") = " << format_real(value)
                << (value >= 1.0 ? "  ok" : "  BELOW 1: contradicts the claimed bound") << '\n';
        }
    }
    return out.str();
}

}  // namespace vlab
