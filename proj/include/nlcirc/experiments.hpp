#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace nlcirc::experiments {

using json = nlohmann::ordered_json;

/// Parses a config file. Throws std::invalid_argument on unreadable files or
/// malformed JSON.
json load_config(const std::filesystem::path& path);

/// Applies one `--set key=value` override. The key is a dotted path through
/// objects (numeric segments index arrays); the value is parsed as JSON when
/// possible and kept as a string otherwise. Missing intermediate objects are
/// created.
void apply_override(json& config, const std::string& key, const std::string& value);

struct RunResult {
    int exit_code = 0;                  // 0 ok; 2 when outputs exist but a solver flag is raised
    json summary;                       // contents of summary.json
    std::vector<std::string> headline;  // one printable line per headline scalar
    std::vector<std::string> files;     // paths written, relative to out_dir
};

/// Runs one experiment config into out_dir: writes the kind's CSV outputs plus
/// summary.json. Validation problems throw std::invalid_argument; solver
/// failures throw SimulationError. A lamp run that fails to converge still
/// writes its outputs and returns exit_code 2.
RunResult run_experiment(const json& config, const std::filesystem::path& out_dir);

/// Runs the experiment once per value with `key` overridden, writing each
/// run's outputs under out_dir/row_<k>/ and a sweep.csv table
/// (`<key>,status,<headline scalars>`) at out_dir. exit_code 0 when at least
/// one row succeeded, else 2.
RunResult run_sweep(const json& config, const std::filesystem::path& out_dir,
                    const std::string& key, const std::vector<std::string>& values);

} // namespace nlcirc::experiments
