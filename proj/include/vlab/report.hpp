#pragma once

#include <string>
#include <vector>

namespace vlab {

/// Merges the result files of the given manifests into a plain-text
/// comparison: a table of runs with their deviations, the log R coefficient
/// of the reduced-class variance against the all-class one, the empirical
/// over predicted trend, and the computed t(N) values flagged against 1.
std::string report(const std::vector<std::string>& manifest_paths);

}  // namespace vlab
