#include "vlab/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "vlab/errors.hpp"

namespace vlab {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::int64_t parse_int(std::string_view key, std::string_view text) {
    const std::string s = trim(text);
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec == std::errc() && ptr == s.data() + s.size()) return value;
    // Accept forms such as 1e6 when they denote an exact integer.
    char* end = nullptr;
    const double d = std::strtod(s.c_str(), &end);
    if (!s.empty() && end == s.c_str() + s.size() && std::isfinite(d) && d == std::floor(d) &&
        std::abs(d) < 9.0e15) {
        return static_cast<std::int64_t>(d);
    }
    throw UsageError("setting '" + std::string(key) + "' expects an integer, got '" + s + "'");
}

double parse_real(std::string_view key, std::string_view text) {
    const std::string s = trim(text);
    char* end = nullptr;
    const double d = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(d)) {
        throw UsageError("setting '" + std::string(key) + "' expects a real number, got '" + s + "'");
    }
    return d;
}

bool parse_bool(std::string_view key, std::string_view text) {
    const std::string s = trim(text);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw UsageError("setting '" + std::string(key) + "' expects true/false, got '" + s + "'");
}

std::vector<std::int64_t> parse_list(std::string_view key, std::string_view text) {
    std::vector<std::int64_t> out;
    const std::string s = trim(text);
    if (s.empty()) return out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const std::size_t comma = s.find(',', pos);
        const std::size_t end = comma == std::string::npos ? s.size() : comma;
        out.push_back(parse_int(key, std::string_view(s).substr(pos, end - pos)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::string real_text(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string list_text(const std::vector<std::int64_t>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(values[i]);
    }
    return out;
}

bool needs_q(Command c) {
    return c == Command::Vaughan || c == Command::Theorem5 || c == Command::Theorem4 ||
           c == Command::Bdh || c == Command::Suite;
}

bool needs_r(Command c) {
    return c != Command::Constants && c != Command::Bdh;
}

}  // namespace

std::string_view to_string(Command command) {
    switch (command) {
        case Command::Constants: return "constants";
        case Command::FrTable: return "fr-table";
        case Command::Theorem3: return "theorem3";
        case Command::Vaughan: return "vaughan";
        case Command::Theorem5: return "theorem5";
        case Command::Theorem4: return "theorem4";
        case Command::Bdh: return "bdh";
        case Command::Suite: return "suite";
    }
    return "?";
}

std::string_view to_string(OutputFormat format) {
    return format == OutputFormat::Csv ? "csv" : "json";
}

Command parse_command(std::string_view text) {
    for (Command c : {Command::Constants, Command::FrTable, Command::Theorem3, Command::Vaughan,
                      Command::Theorem5, Command::Theorem4, Command::Bdh, Command::Suite}) {
        if (text == to_string(c)) return c;
    }
    throw UsageError("unknown command '" + std::string(text) + "'");
}

OutputFormat parse_format(std::string_view text) {
    if (text == "csv") return OutputFormat::Csv;
    if (text == "json") return OutputFormat::Json;
    throw UsageError("unknown format '" + std::string(text) + "' (expected csv or json)");
}

void apply_setting(ExperimentConfig& c, std::string_view key, std::string_view value) {
    const std::string v = trim(value);
    if (key == "command") c.command = parse_command(v);
    else if (key == "x") c.x = parse_int(key, v);
    else if (key == "Q") c.Q = parse_int(key, v);
    else if (key == "B") c.B = parse_real(key, v);
    else if (key == "R") c.R = parse_real(key, v);
    else if (key == "G") c.G = parse_real(key, v);
    else if (key == "Q_low") c.Q_low = parse_int(key, v);
    else if (key == "band") c.band = parse_bool(key, v);
    else if (key == "N") c.N = parse_list(key, v);
    else if (key == "v") c.v = parse_list(key, v);
    else if (key == "prime_cutoff") c.prime_cutoff = parse_int(key, v);
    else if (key == "output_dir") c.output_dir = v;
    else if (key == "format") c.format = parse_format(v);
    else if (key == "threads") c.threads = static_cast<int>(parse_int(key, v));
    else if (key == "weight") {
        try {
            c.weight = parse_weight(v);
        } catch (const InvalidArgument& e) {
            throw UsageError(e.what());
        }
    } else if (key == "timing") c.timing = parse_bool(key, v);
    else throw UsageError("unknown setting '" + std::string(key) + "'");
}

std::string print_config(const ExperimentConfig& c) {
    std::ostringstream out;
    out << "command = " << to_string(c.command) << '\n';
    out << "x = " << c.x << '\n';
    if (c.Q) out << "Q = " << *c.Q << '\n';
    if (c.B) out << "B = " << real_text(*c.B) << '\n';
    if (c.R) out << "R = " << real_text(*c.R) << '\n';
    if (c.G) out << "G = " << real_text(*c.G) << '\n';
    if (c.Q_low) out << "Q_low = " << *c.Q_low << '\n';
    out << "band = " << (c.band ? "true" : "false") << '\n';
    if (!c.N.empty()) out << "N = " << list_text(c.N) << '\n';
    if (!c.v.empty()) out << "v = " << list_text(c.v) << '\n';
    out << "prime_cutoff = " << c.prime_cutoff << '\n';
    if (!c.output_dir.empty()) out << "output_dir = " << c.output_dir << '\n';
    out << "format = " << to_string(c.format) << '\n';
    out << "threads = " << c.threads << '\n';
    out << "weight = " << to_string(c.weight) << '\n';
    out << "timing = " << (c.timing ? "true" : "false") << '\n';
    return out.str();
}

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig c;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw UsageError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        apply_setting(c, trim(line.substr(0, eq)), line.substr(eq + 1));
    }
    return c;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

void validate(const ExperimentConfig& c) {
    if (c.x < 2) throw UsageError("x must be >= 2");
    if (c.x > kSieveCeiling) {
        throw UsageError("x = " + std::to_string(c.x) + " exceeds the sieve ceiling " +
                         std::to_string(kSieveCeiling));
    }
    if (c.prime_cutoff < 10) throw UsageError("prime_cutoff must be >= 10");
    if (c.prime_cutoff > 2'000'000'000) throw UsageError("prime_cutoff must be <= 2e9");
    if (c.threads < 0) throw UsageError("threads must be >= 0");
    if (needs_q(c.command) && c.Q.has_value() == c.B.has_value()) {
        throw UsageError("exactly one of Q or B must be set for " + std::string(to_string(c.command)));
    }
    if (needs_r(c.command) && c.R.has_value() == c.G.has_value()) {
        throw UsageError("exactly one of R or G must be set for " + std::string(to_string(c.command)));
    }
    if (c.Q_low && c.band) throw UsageError("Q_low and band are mutually exclusive");
    if (needs_q(c.command)) {
        const std::int64_t Q = resolved_Q(c);
        if (Q < 1) throw UsageError("Q must be >= 1 (resolved Q = " + std::to_string(Q) + ")");
        if (Q > c.x) throw UsageError("hypothesis Q <= x violated (Q = " + std::to_string(Q) + ")");
        if (c.command != Command::Bdh) {
            const std::int64_t low = resolved_Q_low(c);
            if (low < 0 || low >= Q) {
                throw UsageError("band requires 0 <= Q_low < Q (Q_low = " + std::to_string(low) +
                                 ", Q = " + std::to_string(Q) + ")");
            }
        }
    }
    if (needs_r(c.command)) {
        const double R = resolved_R(c);
        if (!(R >= 1.0)) throw UsageError("R must be >= 1");
        if (R > static_cast<double>(c.x)) throw UsageError("R must not exceed x");
        if ((c.command == Command::Theorem3 || c.command == Command::Suite) &&
            R > std::cbrt(static_cast<double>(c.x)) * (1.0 + 1e-12)) {
            throw UsageError("hypothesis R <= x^(1/3) violated for theorem3 (R = " +
                             std::to_string(R) + ")");
        }
    }
    if (c.command == Command::Theorem4) {
        if (c.N.empty()) throw UsageError("theorem4 needs at least one N");
    }
    for (std::int64_t n : c.N) {
        if (n < 0) throw UsageError("N must be >= 0");
        if (c.command == Command::Theorem4 && n < 1) throw UsageError("theorem4 requires N >= 1");
    }
    for (std::int64_t v : c.v) {
        if (v < 1 || v > c.x) throw UsageError("each v must satisfy 1 <= v <= x");
    }
}

std::int64_t resolved_Q(const ExperimentConfig& c) {
    if (c.Q) return *c.Q;
    if (c.B) {
        const double x = static_cast<double>(c.x);
        return static_cast<std::int64_t>(std::floor(x * std::pow(std::log(x), -*c.B)));
    }
    throw UsageError("neither Q nor B is set");
}

double resolved_R(const ExperimentConfig& c) {
    if (c.R) return *c.R;
    if (c.G) return std::pow(std::log(static_cast<double>(c.x)), *c.G);
    throw UsageError("neither R nor G is set");
}

std::int64_t resolved_Q_low(const ExperimentConfig& c) {
    if (c.Q_low) return *c.Q_low;
    if (c.band) return static_cast<std::int64_t>(std::floor(static_cast<double>(c.x) / resolved_R(c)));
    return 0;
}

std::string resolved_output_dir(const ExperimentConfig& c) {
    if (!c.output_dir.empty()) return c.output_dir;
    if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
    return "vlab-out";
}

}  // namespace vlab
