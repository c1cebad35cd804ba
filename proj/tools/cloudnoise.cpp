// cloudnoise: command-line front end. Each subcommand resolves its flags
// into a JSON config, which is written to <out>/manifest.json and can be
// replayed with --manifest.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cloud/error.hpp"
#include "commands.hpp"

using cloudnoise::Json;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

int fail(const char* kind, const std::string& message, int code) {
  std::cerr << Json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << '\n';
  return code;
}

std::string default_out() {
  const char* env = std::getenv("CLOUDNOISE_OUT");
  return env != nullptr && *env != '\0' ? env : "cloudnoise_out";
}

struct DatasetFlags {
  std::string input;
  std::string format = "auto";
  std::size_t limit = 0;

  void add(CLI::App* cmd) {
    cmd->add_option("input", input, "Directory of .cld grids or PNGs (raw grids win), or STL10 binary")->required();
    cmd->add_option("--format", format, "Dataset format")
        ->check(CLI::IsMember({"auto", "png", "raw", "stl10"}))
        ->capture_default_str();
    cmd->add_option("--limit", limit, "Use at most this many images (0 = all)")->capture_default_str();
  }
  Json json() const { return Json{{"input", input}, {"format", format}, {"limit", limit}}; }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scale-invariant image statistics, cloud noise and diffusion diagnostics"};
  app.fallthrough();
  app.require_subcommand(0, 1);

  std::string out = default_out();
  unsigned threads = 0;
  std::string manifest;
  auto* out_opt = app.add_option("-o,--out", out, "Output directory (default $CLOUDNOISE_OUT or ./cloudnoise_out)");
  auto* threads_opt = app.add_option("--threads", threads, "Worker thread cap (0 = hardware)")->capture_default_str();
  app.add_option("--manifest", manifest, "Re-run the configuration stored in a manifest.json")
      ->check(CLI::ExistingFile);

  Json params;

  // analyze
  DatasetFlags analyze_data;
  int analyze_hw = 1;
  bool analyze_normalize = true;
  bool analyze_clean = false;
  int analyze_band = 4;
  double analyze_tol = 0.01;
  auto* analyze = app.add_subcommand("analyze", "Pixel statistics, Fourier covariance and power-law fit of a dataset");
  analyze_data.add(analyze);
  analyze->add_option("--cross-halfwidth", analyze_hw, "Half-width of the masked central cross")->capture_default_str();
  analyze->add_flag("!--no-normalize", analyze_normalize, "Skip pixel-wise standardization");
  analyze->add_flag("--clean", analyze_clean, "Drop letterboxed images first");
  analyze->add_option("--band", analyze_band, "Letterbox band width")->capture_default_str();
  analyze->add_option("--tol", analyze_tol, "Letterbox uniformity tolerance")->capture_default_str();
  analyze->callback([&] {
    params = analyze_data.json();
    params["cross_halfwidth"] = analyze_hw;
    params["normalize"] = analyze_normalize;
    params["clean"] = analyze_clean;
    params["band"] = analyze_band;
    params["tol"] = analyze_tol;
  });

  // fit
  std::string fit_input;
  auto* fit = app.add_subcommand("fit", "Power-law fit of a radial profile CSV");
  fit->add_option("input", fit_input, "CSV with log_k,log_gamma,masked columns")->required();
  fit->callback([&] { params = Json{{"input", fit_input}}; });

  // gen-noise
  double gen_delta = 1.5;
  int gen_n = 64;
  int gen_oversample = 3;
  std::size_t gen_count = 1;
  double gen_std = 1.0;
  std::uint64_t gen_seed = 0;
  bool gen_periodic = false;
  auto* gen = app.add_subcommand("gen-noise", "Sample scale-invariant noise");
  gen->add_option("--delta", gen_delta, "Scaling parameter")->capture_default_str();
  gen->add_option("--n", gen_n, "Side length")->capture_default_str();
  gen->add_option("--oversample", gen_oversample, "Oversampling factor before cropping")->capture_default_str();
  gen->add_option("--count", gen_count, "Number of samples")->capture_default_str();
  gen->add_option("--target-std", gen_std, "Ensemble standard deviation")->capture_default_str();
  gen->add_option("--seed", gen_seed, "RNG seed")->capture_default_str();
  gen->add_flag("--periodic", gen_periodic, "Skip the crop (toroidal boundaries)");
  gen->callback([&] {
    params = Json{{"delta", gen_delta}, {"n", gen_n},         {"oversample", gen_oversample}, {"count", gen_count},
                  {"target_std", gen_std}, {"seed", gen_seed}, {"periodic", gen_periodic}};
  });

  // noising
  std::string noising_image;
  std::string sched_kind = "linear-beta";
  int sched_steps = 1000;
  double beta_start = 1e-4;
  double beta_end = 0.02;
  double cos_offset = 0.008;
  std::vector<int> snapshots{0, 100, 300, 500, 700, 1000};
  double noising_delta = 1.5;
  int noising_oversample = 3;
  std::uint64_t noising_seed = 0;
  int noising_hw = 1;
  auto* noising = app.add_subcommand("noising", "Render a forward-diffusion trajectory under white and cloud noise");
  noising->add_option("image", noising_image, "Input PNG")->required()->check(CLI::ExistingFile);
  noising->add_option("--schedule", sched_kind, "Schedule kind")
      ->check(CLI::IsMember({"linear-beta", "cosine"}))
      ->capture_default_str();
  noising->add_option("--steps", sched_steps, "Number of diffusion steps T")->capture_default_str();
  noising->add_option("--beta-start", beta_start, "First beta of the linear schedule")->capture_default_str();
  noising->add_option("--beta-end", beta_end, "Last beta of the linear schedule")->capture_default_str();
  noising->add_option("--offset", cos_offset, "Offset of the cosine schedule")->capture_default_str();
  noising->add_option("--snapshots", snapshots, "Timesteps to render")->delimiter(',')->capture_default_str();
  noising->add_option("--delta", noising_delta, "Cloud noise scaling parameter")->capture_default_str();
  noising->add_option("--oversample", noising_oversample, "Cloud noise oversampling")->capture_default_str();
  noising->add_option("--seed", noising_seed, "RNG seed")->capture_default_str();
  noising->add_option("--cross-halfwidth", noising_hw, "Mask half-width for the profile fits")->capture_default_str();
  noising->callback([&] {
    params = Json{{"image", noising_image},
                  {"schedule",
                   {{"kind", sched_kind},
                    {"steps", sched_steps},
                    {"beta_start", beta_start},
                    {"beta_end", beta_end},
                    {"offset", cos_offset}}},
                  {"snapshots", snapshots},
                  {"delta", noising_delta},
                  {"oversample", noising_oversample},
                  {"seed", noising_seed},
                  {"cross_halfwidth", noising_hw}};
  });

  // distance
  DatasetFlags distance_data;
  double distance_delta = 1.5;
  std::size_t distance_samples = 256;
  std::size_t distance_pairs = 10000;
  int distance_oversample = 3;
  std::uint64_t distance_seed = 0;
  auto* distance = app.add_subcommand("distance", "Mahalanobis distances between images, white and cloud noise");
  distance_data.add(distance);
  distance->add_option("--delta", distance_delta, "Reference (and cloud noise) scaling parameter")->capture_default_str();
  distance->add_option("--samples", distance_samples, "Noise samples per ensemble")->capture_default_str();
  distance->add_option("--pairs", distance_pairs, "Random pairs per distribution distance")->capture_default_str();
  distance->add_option("--oversample", distance_oversample, "Cloud noise oversampling")->capture_default_str();
  distance->add_option("--seed", distance_seed, "RNG seed")->capture_default_str();
  distance->callback([&] {
    params = distance_data.json();
    params["delta"] = distance_delta;
    params["samples"] = distance_samples;
    params["pairs"] = distance_pairs;
    params["oversample"] = distance_oversample;
    params["seed"] = distance_seed;
  });

  // clean
  std::string clean_input;
  int clean_band = 4;
  double clean_tol = 0.01;
  auto* clean = app.add_subcommand("clean", "Copy images without letterbox bars");
  clean->add_option("input", clean_input, "PNG directory")->required();
  clean->add_option("--band", clean_band, "Letterbox band width")->capture_default_str();
  clean->add_option("--tol", clean_tol, "Uniformity tolerance")->capture_default_str();
  clean->callback([&] { params = Json{{"input", clean_input}, {"band", clean_band}, {"tol", clean_tol}}; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    Json config;
    if (!manifest.empty()) {
      if (!app.get_subcommands().empty()) throw cloud::InputError("--manifest cannot be combined with a subcommand");
      config = cloud::read_json(manifest);
      if (out_opt->count() > 0) config["out"] = out;
      if (threads_opt->count() > 0) config["threads"] = threads;
    } else {
      if (app.get_subcommands().empty()) {
        std::cout << app.help();
        return kExitInput;
      }
      config = Json{{"command", app.get_subcommands().front()->get_name()},
                    {"out", out},
                    {"threads", threads},
                    {"params", params}};
    }
    cloudnoise::run(config);
  } catch (const cloud::NumericError& e) {
    return fail("numeric", e.what(), kExitNumeric);
  } catch (const cloud::InputError& e) {
    return fail("input", e.what(), kExitInput);
  } catch (const Json::exception& e) {
    return fail("input", std::string("bad manifest: ") + e.what(), kExitInput);
  } catch (const std::filesystem::filesystem_error& e) {
    return fail("input", e.what(), kExitInput);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 1);
  }
  return 0;
}
