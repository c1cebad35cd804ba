#include "cloud/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace cloud {

Json stats_report(int side, std::size_t count, const PowerLawFit& fit, int cross_halfwidth) {
  Json j;
  j["N"] = side;
  j["count"] = count;
  j["delta"] = fit.delta;
  j["A"] = fit.amplitude;
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["r2"] = fit.r2;
  j["n_points"] = fit.n_points;
  j["cross_halfwidth"] = cross_halfwidth;
  return j;
}

Json to_json(const CleaningReport& report) {
  Json reasons = Json::array();
  for (const auto& r : report.reasons) reasons.push_back({{"index", r.index}, {"cause", to_string(r.cause)}});
  return {{"total", report.total}, {"kept", report.kept}, {"rejected", report.rejected}, {"reasons", reasons}};
}

Json distance_report(double reference_delta, int side, std::span<const DistanceEntry> entries) {
  Json list = Json::array();
  for (const auto& e : entries) {
    list.push_back({{"from", e.from},
                    {"to", e.to},
                    {"mean", e.estimate.mean},
                    {"stderr", e.estimate.std_error},
                    {"n_pairs", e.estimate.n_pairs},
                    {"pairing", e.estimate.pairing}});
  }
  return {{"reference_delta", reference_delta}, {"N", side}, {"entries", list}};
}

void write_json(const std::filesystem::path& path, const Json& value) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << value.dump(2) << '\n';
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_profile_csv(const std::filesystem::path& path, std::span<const ProfilePoint> profile) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "log_k,log_gamma,masked\n";
  char line[96];
  for (const auto& p : profile) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%d\n", p.log_k, p.log_gamma, p.masked ? 1 : 0);
    out << line;
  }
}

std::vector<ProfilePoint> read_profile_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  if (line.rfind("log_k,log_gamma,masked", 0) != 0) {
    throw FormatError(path.string() + ": missing log_k,log_gamma,masked header");
  }
  std::vector<ProfilePoint> out;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    ProfilePoint p;
    int masked = 0;
    std::istringstream fields(line);
    std::string a, b, c;
    if (!std::getline(fields, a, ',') || !std::getline(fields, b, ',') || !std::getline(fields, c)) {
      throw FormatError(path.string() + ": malformed row " + std::to_string(row));
    }
    try {
      p.log_k = std::stod(a);
      p.log_gamma = std::stod(b);
      masked = std::stoi(c);
    } catch (const std::exception&) {
      throw FormatError(path.string() + ": malformed row " + std::to_string(row));
    }
    p.masked = masked != 0;
    out.push_back(p);
  }
  return out;
}

}  // namespace cloud
