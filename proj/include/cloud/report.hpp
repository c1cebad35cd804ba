#pragma once

// JSON and CSV renderings of analysis results.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "cloud/dataset.hpp"
#include "cloud/distance.hpp"
#include "cloud/stats.hpp"

namespace cloud {

using Json = nlohmann::ordered_json;

/// {N, count, delta, A, slope, intercept, r2, n_points, cross_halfwidth}
Json stats_report(int side, std::size_t count, const PowerLawFit& fit, int cross_halfwidth);

/// {total, kept, rejected, reasons: [{index, cause}]}
Json to_json(const CleaningReport& report);

struct DistanceEntry {
  std::string from;
  std::string to;
  DistanceEstimate estimate;
};

/// {reference_delta, N, entries: [{from, to, mean, stderr, n_pairs, pairing}]}
Json distance_report(double reference_delta, int side, std::span<const DistanceEntry> entries);

void write_json(const std::filesystem::path& path, const Json& value);
Json read_json(const std::filesystem::path& path);

/// Header "log_k,log_gamma,masked"; masked is 0/1. Values use 17 significant digits.
void write_profile_csv(const std::filesystem::path& path, std::span<const ProfilePoint> profile);
std::vector<ProfilePoint> read_profile_csv(const std::filesystem::path& path);

}  // namespace cloud
