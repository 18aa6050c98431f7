#pragma once

#include <map>
#include <string>
#include <vector>

#include "vlab/config.hpp"
#include "vlab/records.hpp"

namespace vlab {

inline constexpr const char* kToolVersion = "0.3.0";

struct RunManifest {
    ExperimentConfig config;
    Json derived = Json::object();
    std::string tool_version = kToolVersion;
    std::string timestamp;
    std::map<std::string, std::string> checksums;  // table name -> FNV-1a 64 hex
    std::vector<std::string> result_files;         // relative to the manifest directory
    std::string manifest_path;
};

Json to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const Json& json);
RunManifest load_manifest(const std::string& path);

/// Runs one experiment, writes its result files and manifest under the
/// output directory, and returns the manifest.
RunManifest run(const ExperimentConfig& config);

/// 64-bit FNV-1a over raw bytes.
std::string fnv1a_hex(const void* data, std::size_t size);

}  // namespace vlab
