#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "noregret/config.hpp"

namespace noregret {

nlohmann::json ip_report_to_json(const IpReport& report);

struct RunArtifacts {
    std::vector<std::string> files;  // names relative to the output directory
};

// Executes the configured experiment and writes its artifacts: trace CSVs and
// a resolved-config snapshot always, summary JSON under the "json" format,
// plot dumps under "plotdata". Deterministic: the same resolved config yields
// byte-identical files.
RunArtifacts run_experiment(const ExperimentConfig& config,
                            const std::filesystem::path& out_dir);

// Re-executes the experiment described by a resolved-config snapshot and
// byte-compares the regenerated trace against `trace_file`. The first
// mismatching line is reported to `diagnostics`.
bool replay_verify(const std::filesystem::path& trace_file,
                   const std::filesystem::path& resolved_config, std::ostream& diagnostics);

}  // namespace noregret
