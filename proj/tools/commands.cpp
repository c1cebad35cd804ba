#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "cloud/dataset.hpp"
#include "cloud/diffusion.hpp"
#include "cloud/distance.hpp"
#include "cloud/error.hpp"
#include "cloud/image_io.hpp"
#include "cloud/noise.hpp"
#include "cloud/parallel.hpp"
#include "cloud/rng.hpp"
#include "cloud/spectral.hpp"
#include "cloud/stats.hpp"

namespace cloudnoise {

namespace fs = std::filesystem;
using namespace cloud;

namespace {

std::string numbered(const std::string& stem, std::size_t n, const char* ext) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04zu", n);
  return stem + buf + ext;
}

std::vector<fs::path> list_raw(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".cld") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

// A directory of PNGs, a directory of raw grids, or an STL10 binary file.
ImageSet load_dataset(const Json& params) {
  const fs::path input = params.at("input").get<std::string>();
  std::string format = params.at("format").get<std::string>();
  const std::size_t limit = params.at("limit").get<std::size_t>();
  if (!fs::exists(input)) throw IoError("no such file or directory: " + input.string());
  if (format == "auto") {
    if (fs::is_regular_file(input)) {
      format = "stl10";
    } else if (!list_raw(input).empty()) {
      format = "raw";
    } else {
      format = "png";
    }
  }
  ImageSet set;
  if (format == "stl10") {
    set = load_stl10(input, limit > 0 ? std::optional<std::size_t>(limit) : std::nullopt);
  } else if (format == "png") {
    set = load_png_dir(input);
  } else if (format == "raw") {
    std::vector<Grid> grids;
    for (const auto& f : list_raw(input)) grids.push_back(read_raw_grid(f));
    if (grids.empty()) throw InputError("no .cld files in " + input.string());
    set = make_image_set(std::move(grids), input.string());
  } else {
    throw InputError("unknown dataset format '" + format + "'");
  }
  if (limit > 0 && set.images.size() > limit) set.images.resize(limit);
  return set;
}

// PNG of values mapped affinely from [lo, hi]; returns the mapping for sidecars.
Json render(const fs::path& path, const Grid& values, double lo, double hi) {
  write_png_gray(path, values, lo, hi);
  return Json{{"file", path.filename().string()}, {"lo", lo}, {"hi", hi}};
}

Json render_full_range(const fs::path& path, const Grid& values) {
  return render(path, values, values.minCoeff(), values.maxCoeff());
}

// log of a nonnegative map; non-positive entries take the smallest positive log.
Grid safe_log(const Grid& values) {
  double floor = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values(i) > 0.0) floor = std::min(floor, values(i));
  }
  if (!std::isfinite(floor)) floor = 1.0;
  return values.unaryExpr([floor](double v) { return std::log(std::max(v, floor)); });
}

Json fit_json(const PowerLawFit& fit) {
  return Json{{"delta", fit.delta},         {"A", fit.amplitude}, {"slope", fit.slope},
              {"intercept", fit.intercept}, {"r2", fit.r2},       {"n_points", fit.n_points}};
}

Schedule make_schedule(const Json& s) {
  const std::string kind = s.at("kind").get<std::string>();
  const int steps = s.at("steps").get<int>();
  if (kind == "linear-beta") {
    return make_linear_beta_schedule(steps, s.at("beta_start").get<double>(), s.at("beta_end").get<double>());
  }
  if (kind == "cosine") return make_cosine_schedule(steps, s.at("offset").get<double>());
  throw InputError("unknown schedule kind '" + kind + "'");
}

}  // namespace

void run_analyze(const Json& params, const fs::path& out) {
  ImageSet set = load_dataset(params);
  const int hw = params.at("cross_halfwidth").get<int>();
  Json report;
  if (params.at("clean").get<bool>()) {
    LetterboxOptions opts{params.at("band").get<int>(), params.at("tol").get<double>()};
    CleanResult cleaned = clean_letterbox(set, opts);
    report["cleaning"] = to_json(cleaned.report);
    set = std::move(cleaned.set);
  }
  Grid mean_map;
  Grid std_map;
  ImageSet data;
  if (params.at("normalize").get<bool>()) {
    NormalizedSet ns = normalize(set);
    mean_map = ns.mean_map;
    std_map = ns.std_map;
    data = std::move(ns.set);
  } else {
    const Moments m = pixelwise_moments(set.view());
    mean_map = m.mean;
    std_map = m.std;
    data = std::move(set);
  }
  const SpectralCovarianceDiag diag = spectral_covariance_diag(data.view(), hw);
  const auto profile = radial_profile(diag);
  const PowerLawFit fit = fit_power_law(profile);

  Json stats = stats_report(data.side(), data.size(), fit, hw);
  stats["normalized"] = data.normalized;
  for (auto& [key, value] : report.items()) stats[key] = value;
  write_json(out / "stats.json", stats);
  write_profile_csv(out / "radial.csv", profile);
  write_raw_grid(out / "mean.cld", mean_map);
  write_raw_grid(out / "std.cld", std_map);
  write_raw_grid(out / "gamma_diag.cld", diag.values);
  Json maps;
  maps["mean"] = render_full_range(out / "mean.png", mean_map);
  maps["std"] = render_full_range(out / "std.png", std_map);
  maps["gamma_diag"] = render_full_range(out / "gamma_diag.png", safe_log(diag.values));
  maps["gamma_diag"]["transform"] = "log";
  write_json(out / "maps.json", maps);
}

void run_fit(const Json& params, const fs::path& out) {
  const auto profile = read_profile_csv(params.at("input").get<std::string>());
  write_json(out / "fit.json", fit_json(fit_power_law(profile)));
}

void run_gen_noise(const Json& params, const fs::path& out) {
  NoiseSpec spec;
  spec.delta = params.at("delta").get<double>();
  spec.side = params.at("n").get<int>();
  spec.oversample = params.at("oversample").get<int>();
  spec.target_std = params.at("target_std").get<double>();
  spec.seed = params.at("seed").get<std::uint64_t>();
  const std::size_t count = params.at("count").get<std::size_t>();
  const bool periodic = params.at("periodic").get<bool>();
  if (count == 0) throw InputError("count must be at least 1");
  const auto samples = periodic ? periodic_noise_batch(spec, count) : cloud_noise_batch(spec, count);

  const double lo = -3.0 * spec.target_std;
  const double hi = 3.0 * spec.target_std;
  for (std::size_t n = 0; n < samples.size(); ++n) {
    write_raw_grid(out / numbered("noise_", n, ".cld"), samples[n]);
    write_png_gray(out / numbered("noise_", n, ".png"), samples[n], lo, hi);
  }
  Json summary{{"count", count}, {"N", spec.side}, {"pooled_std", pooled_std(samples)},
               {"png_mapping", {{"lo", lo}, {"hi", hi}}}};
  if (count >= 2) {
    try {
      summary["fit"] = fit_json(fit_ensemble(samples));
    } catch (const FitError& e) {
      summary["fit"] = nullptr;
      summary["fit_error"] = e.what();
    }
  }
  write_json(out / "noise.json", summary);
}

void run_noising(const Json& params, const fs::path& out) {
  const Grid image = read_png_luma(params.at("image").get<std::string>());
  const int side = static_cast<int>(image.rows());
  const double mean = image.mean();
  const double sd = std::sqrt((image.array() - mean).square().mean());
  if (!(sd > 0.0)) throw NumericError("image has zero variance");
  const Grid x0 = (image.array() - mean).matrix() / sd;

  const Schedule schedule = make_schedule(params.at("schedule"));
  const auto snapshots = params.at("snapshots").get<std::vector<int>>();
  if (snapshots.empty()) throw InputError("no snapshot timesteps given");
  for (int t : snapshots) {
    if (t < 0 || t > schedule.steps()) {
      throw InputError("snapshot timestep " + std::to_string(t) + " outside [0, " +
                       std::to_string(schedule.steps()) + "]");
    }
  }
  const std::uint64_t seed = params.at("seed").get<std::uint64_t>();
  const int hw = params.at("cross_halfwidth").get<int>();
  const NoiseSource sources[] = {NoiseSource::white(),
                                 NoiseSource::cloud(params.at("delta").get<double>(),
                                                    params.at("oversample").get<int>())};
  const char* names[] = {"white", "cloud"};
  const Mask mask = central_cross_mask(side, hw);

  // Panel rows: white real, white |F|, cloud real, cloud |F|; one column per snapshot.
  constexpr int kGap = 2;
  const int cols = static_cast<int>(snapshots.size());
  Grid panel = Grid::Ones(4 * side + 3 * kGap, cols * side + (cols - 1) * kGap);

  std::ofstream csv(out / "profiles.csv");
  if (!csv) throw IoError("cannot write " + (out / "profiles.csv").string());
  csv << "noise,t,theta,log_k,log_gamma,masked\n";
  char line[256];
  Json entries = Json::array();
  for (int s = 0; s < 2; ++s) {
    for (int c = 0; c < cols; ++c) {
      const int t = snapshots[c];
      const Grid x = t == 0 ? x0 : jump(x0, t, schedule, sources[s], seed, static_cast<std::uint64_t>(t)).x_t;
      const double theta = schedule.theta(t);
      const std::string stem = numbered(std::string(names[s]) + "_t", static_cast<std::size_t>(t), "");
      write_raw_grid(out / (stem + ".cld"), x);
      const Grid real = (x * sd).array() + mean;
      write_png_gray(out / (stem + "_real.png"), real, 0.0, 1.0);
      const Grid power = periodogram(x);
      const Grid logf = power.array().log1p();
      write_png_gray(out / (stem + "_fourier.png"), logf, logf.minCoeff(), logf.maxCoeff());

      const int top = 2 * s * (side + kGap);
      const int left = c * (side + kGap);
      panel.block(top, left, side, side) = real.cwiseMax(0.0).cwiseMin(1.0);
      const double range = std::max(logf.maxCoeff() - logf.minCoeff(), 1e-300);
      panel.block(top + side + kGap, left, side, side) = (logf.array() - logf.minCoeff()) / range;

      const auto profile = radial_profile(power, mask);
      for (const auto& p : profile) {
        std::snprintf(line, sizeof line, "%s,%d,%.17g,%.17g,%.17g,%d\n", names[s], t, theta, p.log_k,
                      p.log_gamma, p.masked ? 1 : 0);
        csv << line;
      }
      const PowerLawFit fit = fit_power_law(profile);
      entries.push_back(Json{{"noise", names[s]},
                             {"t", t},
                             {"theta", theta},
                             {"alpha_bar", schedule.alpha_bar(t)},
                             {"delta", fit.delta},
                             {"A", fit.amplitude},
                             {"r2", fit.r2}});
    }
  }
  write_png_gray(out / "trajectory.png", panel, 0.0, 1.0);
  write_json(out / "noising.json", Json{{"N", side},
                                        {"steps", schedule.steps()},
                                        {"schedule", to_string(schedule.kind)},
                                        {"image_mean", mean},
                                        {"image_std", sd},
                                        {"snapshots", entries}});
}

void run_distance(const Json& params, const fs::path& out) {
  const std::size_t samples = params.at("samples").get<std::size_t>();
  if (samples < 2) throw InputError("distance needs at least 2 noise samples, got " + std::to_string(samples));
  const ImageSet set = load_dataset(params);
  if (set.size() < 2) throw InputError("distance needs at least 2 images, got " + std::to_string(set.size()));
  const NormalizedSet ns = normalize(set);
  const int side = ns.set.side();
  const double delta = params.at("delta").get<double>();
  const std::uint64_t seed = params.at("seed").get<std::uint64_t>();
  const std::size_t pairs = params.at("pairs").get<std::size_t>();

  NoiseSpec spec;
  spec.delta = delta;
  spec.side = side;
  spec.oversample = params.at("oversample").get<int>();
  spec.seed = derive_seed(seed, 1);
  const auto images = to_real_spectra(ns.set.view());
  const auto white = to_real_spectra(white_noise_batch(side, derive_seed(seed, 0), samples));
  const auto cloud = to_real_spectra(cloud_noise_batch(spec, samples));
  const ReferenceMetric metric = make_reference_metric(side, delta);

  std::vector<DistanceEntry> entries;
  auto between = [&](const char* a_name, const auto& a, const char* b_name, const auto& b) {
    entries.push_back({a_name, b_name, maha_between_distributions(a, b, metric, pairs, seed)});
  };
  auto center = [&](const char* name, const auto& a) {
    entries.push_back({name, "center", maha_distribution_to_center(a, metric)});
  };
  between("white", white, "images", images);
  between("cloud", cloud, "images", images);
  center("white", white);
  center("cloud", cloud);
  center("images", images);
  between("white", white, "white", white);
  between("cloud", cloud, "cloud", cloud);
  between("images", images, "images", images);

  Json report = distance_report(delta, side, entries);
  report["images"] = set.size();
  report["samples"] = samples;
  report["cloud_closer_than_white"] = entries[1].estimate.mean < entries[0].estimate.mean;
  write_json(out / "distances.json", report);
}

void run_clean(const Json& params, const fs::path& out) {
  const fs::path input = params.at("input").get<std::string>();
  const auto files = list_pngs(input);
  const ImageSet set = load_png_dir(input);
  const LetterboxOptions opts{params.at("band").get<int>(), params.at("tol").get<double>()};
  const CleanResult result = clean_letterbox(set, opts);
  std::error_code ec;
  if (fs::equivalent(input, out, ec)) throw InputError("clean output directory must differ from the input");
  for (std::size_t i : result.kept_indices) {
    fs::copy_file(files[i], out / files[i].filename(), fs::copy_options::overwrite_existing);
  }
  Json report = to_json(result.report);
  Json names = Json::array();
  for (const auto& r : result.report.reasons) names.push_back(files[r.index].filename().string());
  report["rejected_files"] = names;
  write_json(out / "clean_report.json", report);
}

void run(const Json& config) {
  const std::string command = config.at("command").get<std::string>();
  const fs::path out = config.at("out").get<std::string>();
  const Json& params = config.at("params");
  set_max_threads(config.value("threads", 0u));
  fs::create_directories(out);
  write_json(out / "manifest.json", config);
  if (command == "analyze") return run_analyze(params, out);
  if (command == "fit") return run_fit(params, out);
  if (command == "gen-noise") return run_gen_noise(params, out);
  if (command == "noising") return run_noising(params, out);
  if (command == "distance") return run_distance(params, out);
  if (command == "clean") return run_clean(params, out);
  throw InputError("unknown command '" + command + "'");
}

}  // namespace cloudnoise
