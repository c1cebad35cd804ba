#pragma once

// A run is described entirely by a JSON config:
//   {"command": ..., "out": ..., "threads": ..., "params": {...}}
// which is also what gets written to <out>/manifest.json.

#include "cloud/report.hpp"

namespace cloudnoise {

using cloud::Json;

void run_analyze(const Json& params, const std::filesystem::path& out);
void run_fit(const Json& params, const std::filesystem::path& out);
void run_gen_noise(const Json& params, const std::filesystem::path& out);
void run_noising(const Json& params, const std::filesystem::path& out);
void run_distance(const Json& params, const std::filesystem::path& out);
void run_clean(const Json& params, const std::filesystem::path& out);

/// Writes the manifest, then dispatches on config["command"].
void run(const Json& config);

}  // namespace cloudnoise
