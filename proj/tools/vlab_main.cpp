// vlab: command-line front end for the F_R / variance experiments.
//
//   vlab constants --cutoff 10000000
//   vlab theorem3 --x 1000000 --v 1,2,3,5,6 --N 1 --R 50
//   vlab vaughan --x 100000 --Q 10000 --R 30 --band
//   vlab run --config experiment.cfg
//   vlab report out/vaughan.manifest.json out/theorem5.manifest.json
//
// Exit status is 0 only when every requested run completed; failures print
// a JSON error object on stderr.

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vlab/config.hpp"
#include "vlab/errors.hpp"
#include "vlab/records.hpp"
#include "vlab/report.hpp"
#include "vlab/runner.hpp"

namespace {

struct FlagSpec {
    const char* flag;
    const char* key;
    const char* help;
};

constexpr FlagSpec kValueFlags[] = {
    {"--x", "x", "upper limit x of the prime sums"},
    {"--Q", "Q", "largest modulus Q"},
    {"--B", "B", "set Q = floor(x (log x)^-B) instead of --Q"},
    {"--R", "R", "truncation level R of F_R"},
    {"--G", "G", "set R = (log x)^G instead of --R"},
    {"--Q-low", "Q_low", "only moduli Q_low < d <= Q"},
    {"--N", "N", "comma-separated residues / shifts N"},
    {"--v", "v", "comma-separated squarefree moduli v"},
    {"--cutoff", "prime_cutoff", "prime cutoff for Euler products"},
    {"--out", "output_dir", "output directory (default $VLAB_OUTPUT_DIR or ./vlab-out)"},
    {"--format", "format", "csv or json"},
    {"--threads", "threads", "worker threads, 0 = all cores"},
    {"--weight", "weight", "theta or psi"},
};

struct Subcommand {
    CLI::App* app = nullptr;
    std::string config_file;
    std::map<std::string, std::string> values;
    bool band = false;
    bool no_timing = false;
    bool print_config = false;
};

void add_experiment_options(Subcommand& sub) {
    for (const auto& spec : kValueFlags) sub.app->add_option(spec.flag, sub.values[spec.key], spec.help);
    sub.app->add_option("--config", sub.config_file, "flat key = value config file; flags override it");
    sub.app->add_flag("--band", sub.band, "use Q_low = floor(x/R)");
    sub.app->add_flag("--no-timing", sub.no_timing, "write wall_time_ms as 0");
    sub.app->add_flag("--print-config", sub.print_config, "print the resolved config and exit");
}

vlab::ExperimentConfig resolve(const Subcommand& sub, const std::string& command) {
    vlab::ExperimentConfig config;
    if (!sub.config_file.empty()) config = vlab::load_config_file(sub.config_file);
    if (command != "run") config.command = vlab::parse_command(command);
    for (const auto& spec : kValueFlags) {
        if (sub.app->count(spec.flag) > 0) vlab::apply_setting(config, spec.key, sub.values.at(spec.key));
    }
    if (sub.band) config.band = true;
    if (sub.no_timing) config.timing = false;
    return config;
}

int fail(const std::string& kind, const std::string& message, int code) {
    vlab::Json error{{"error", {{"kind", kind}, {"message", message}}}};
    std::cerr << error.dump() << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vlab: Vaughan's approximation and restricted variance experiments"};
    app.require_subcommand(1);

    const std::vector<std::string> commands = {"constants", "fr-table", "theorem3", "vaughan",
                                               "theorem5",  "theorem4", "bdh",      "suite",
                                               "run"};
    std::map<std::string, Subcommand> subs;
    for (const std::string& name : commands) {
        Subcommand& sub = subs[name];
        sub.app = app.add_subcommand(name, name == "run" ? "run the command named in --config"
                                                         : "run the " + name + " experiment");
        add_experiment_options(sub);
    }

    std::vector<std::string> manifests;
    std::string report_out;
    CLI::App* report_cmd = app.add_subcommand("report", "merge manifests into a comparison report");
    report_cmd->add_option("manifests", manifests, "manifest JSON files")->required();
    report_cmd->add_option("--out", report_out, "write the report to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("usage", e.what(), 2);
    }

    try {
        if (report_cmd->parsed()) {
            const std::string text = vlab::report(manifests);
            if (report_out.empty()) {
                std::cout << text;
            } else {
                std::ofstream out(report_out);
                if (!out) throw vlab::IoError("cannot write report: " + report_out);
                out << text;
            }
            return 0;
        }
        for (const auto& [name, sub] : subs) {
            if (!sub.app->parsed()) continue;
            if (name == "run" && sub.config_file.empty()) {
                throw vlab::UsageError("run needs --config");
            }
            const vlab::ExperimentConfig config = resolve(sub, name);
            if (sub.print_config) {
                std::cout << vlab::print_config(config);
                return 0;
            }
            const vlab::RunManifest manifest = vlab::run(config);
            std::cout << "manifest: " << manifest.manifest_path << '\n';
            for (const auto& file : manifest.result_files) std::cout << "result: " << file << '\n';
        }
        return 0;
    } catch (const vlab::UsageError& e) {
        return fail("usage", e.what(), 2);
    } catch (const vlab::InvalidArgument& e) {
        return fail("invalid_argument", e.what(), 2);
    } catch (const vlab::OutOfRange& e) {
        return fail("out_of_range", e.what(), 2);
    } catch (const vlab::IoError& e) {
        return fail("io", e.what(), 1);
    } catch (const std::exception& e) {
        return fail("internal", e.what(), 1);
    }
}
