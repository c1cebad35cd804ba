#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cloud/image_io.hpp"
#include "cloud/noise.hpp"
#include "cloud/report.hpp"

using namespace cloud;
namespace fs = std::filesystem;

namespace {

const fs::path& scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("cloudnoise_cli_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

struct Run {
  int code = -1;
  std::string err;
};

Run cli(const std::string& args) {
  const fs::path err = scratch() / "stderr.txt";
  const std::string cmd = std::string(CLOUDNOISE_BIN) + " " + args + " > /dev/null 2> " + err.string();
  const int status = std::system(cmd.c_str());
  std::ifstream in(err);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string path(const std::string& name) { return (scratch() / name).string(); }

std::string bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes cloud-noise PNGs mapped from [-3, 3], optionally with a black top bar.
void write_png_set(const fs::path& dir, std::size_t count, std::size_t letterboxed, std::uint64_t seed) {
  fs::create_directories(dir);
  NoiseSpec spec;
  spec.side = 32;
  spec.seed = seed;
  const auto grids = cloud_noise_batch(spec, count);
  for (std::size_t n = 0; n < count; ++n) {
    Grid g = grids[n];
    if (n < letterboxed) g.topRows(6).setConstant(-3.0);
    write_png_gray(dir / ("img" + std::to_string(n) + ".png"), g, -3.0, 3.0);
  }
}

}  // namespace

TEST_CASE("gen-noise with delta 0 fits flat") {
  REQUIRE(cli("gen-noise --delta 0 --n 32 --count 256 --seed 1 --out " + path("white")).code == 0);
  const Json summary = read_json(path("white") + "/noise.json");
  CHECK(std::abs(summary["fit"]["delta"].get<double>()) < 0.05);
  CHECK(fs::exists(path("white") + "/noise_0255.cld"));
  CHECK(fs::exists(path("white") + "/noise_0255.png"));
}

TEST_CASE("gen-noise then analyze recovers delta") {
  REQUIRE(cli("gen-noise --delta 1.5 --n 96 --count 256 --seed 2 --out " + path("cloud96")).code == 0);
  REQUIRE(cli("analyze " + path("cloud96") + " --out " + path("analyze96")).code == 0);
  const Json stats = read_json(path("analyze96") + "/stats.json");
  CHECK(stats["N"] == 96);
  CHECK(stats["count"] == 256);
  CHECK(std::abs(stats["delta"].get<double>() - 1.5) < 0.05);
  for (const char* f : {"radial.csv", "mean.png", "std.png", "gamma_diag.png", "maps.json", "manifest.json"}) {
    CHECK(fs::exists(path("analyze96") + "/" + f));
  }

  SUBCASE("fit reproduces the analyze fit from the CSV") {
    REQUIRE(cli("fit " + path("analyze96") + "/radial.csv --out " + path("fit96")).code == 0);
    const Json fit = read_json(path("fit96") + "/fit.json");
    CHECK(fit["delta"].get<double>() == doctest::Approx(stats["delta"].get<double>()).epsilon(1e-12));
  }
}

TEST_CASE("reruns and manifest replays are byte-identical") {
  const std::string args = "gen-noise --delta 1.5 --n 24 --count 3 --seed 7";
  REQUIRE(cli(args + " --out " + path("det1")).code == 0);
  REQUIRE(cli(args + " --threads 1 --out " + path("det2")).code == 0);
  REQUIRE(cli("--manifest " + path("det1") + "/manifest.json --out " + path("det3")).code == 0);
  for (int n = 0; n < 3; ++n) {
    const std::string f = "/noise_000" + std::to_string(n) + ".cld";
    CHECK(bytes(path("det1") + f) == bytes(path("det2") + f));
    CHECK(bytes(path("det1") + f) == bytes(path("det3") + f));
  }
  const Json manifest = read_json(path("det1") + "/manifest.json");
  CHECK(manifest["command"] == "gen-noise");
  CHECK(manifest["params"]["oversample"] == 3);
  CHECK(manifest["params"]["target_std"] == 1.0);
}

TEST_CASE("identical images give a numeric error") {
  const fs::path dir = scratch() / "same";
  fs::create_directories(dir);
  const Grid g = white_noise(16, 3);
  for (int n = 0; n < 3; ++n) write_png_gray(dir / (std::to_string(n) + ".png"), g, -3.0, 3.0);
  const Run r = cli("analyze " + dir.string() + " --out " + path("same_out"));
  CHECK(r.code == 3);
  const Json err = Json::parse(r.err);
  CHECK(err["error"] == "numeric");
  CHECK(err["exit_code"] == 3);
}

TEST_CASE("input errors exit with 2") {
  CHECK(cli("analyze " + path("does_not_exist") + " --out " + path("x")).code == 2);
  CHECK(cli("gen-noise --oversample 2 --out " + path("x")).code == 2);
  CHECK(cli("no-such-command").code == 2);
  CHECK(cli("gen-noise --bogus").code == 2);
  CHECK(cli("").code == 2);
}

TEST_CASE("noising trajectory") {
  NoiseSpec spec;
  spec.side = 96;  // one periodogram; smaller images make the fit too noisy for 0.1
  spec.seed = 4;
  const fs::path image = scratch() / "cloud_image.png";
  write_png_gray(image, cloud_noise(spec), -3.0, 3.0);
  REQUIRE(cli("noising " + image.string() + " --snapshots 0,500,1000 --out " + path("noising")).code == 0);
  const fs::path out = path("noising");
  CHECK(read_png_luma(out / "white_t0000_real.png") == read_png_luma(image));
  CHECK(bytes(out / "cloud_t0000.cld") == bytes(out / "white_t0000.cld"));
  for (const char* f : {"trajectory.png", "profiles.csv", "cloud_t1000_fourier.png", "white_t0500_real.png"}) {
    CHECK(fs::exists(out / f));
  }
  const Json report = read_json(out / "noising.json");
  double clean = 0.0;
  for (const auto& s : report["snapshots"]) {
    if (s["t"] == 0) clean = s["delta"].get<double>();
  }
  for (const auto& s : report["snapshots"]) {
    if (s["t"] != 1000) continue;
    if (s["noise"] == "white") CHECK(std::abs(s["delta"].get<double>()) < 0.1);
    if (s["noise"] == "cloud") CHECK(std::abs(s["delta"].get<double>() - clean) < 0.1);
  }
  CHECK(cli("noising " + image.string() + " --snapshots 1001 --out " + path("noising_bad")).code == 2);
}

TEST_CASE("distance reports the ordering") {
  REQUIRE(cli("gen-noise --delta 1.5 --n 32 --count 256 --seed 5 --out " + path("dist_images")).code == 0);
  REQUIRE(cli("distance " + path("dist_images") + " --out " + path("dist")).code == 0);
  const Json report = read_json(path("dist") + "/distances.json");
  CHECK(report["cloud_closer_than_white"] == true);
  CHECK(report["reference_delta"] == 1.5);
  bool saw_self = false;
  for (const auto& e : report["entries"]) {
    if (e["from"] == "white" && e["to"] == "white") {
      saw_self = true;
      CHECK(e["mean"].get<double>() > 0.0);
    }
  }
  CHECK(saw_self);
  CHECK(report["entries"].size() == 8);
  CHECK(cli("distance " + path("dist_images") + " --samples 1 --out " + path("dist_bad")).code == 2);
}

TEST_CASE("clean drops letterboxed images") {
  const fs::path in = scratch() / "clean_in";
  write_png_set(in, 10, 3, 6);
  REQUIRE(cli("clean " + in.string() + " --out " + path("clean1")).code == 0);
  const Json report = read_json(path("clean1") + "/clean_report.json");
  CHECK(report["kept"] == 7);
  CHECK(report["rejected"] == 3);
  CHECK(!fs::exists(path("clean1") + "/img0.png"));
  CHECK(fs::exists(path("clean1") + "/img9.png"));

  REQUIRE(cli("clean " + path("clean1") + " --out " + path("clean2")).code == 0);
  CHECK(read_json(path("clean2") + "/clean_report.json")["rejected"] == 0);

  fs::create_directories(scratch() / "empty");
  CHECK(cli("clean " + path("empty") + " --out " + path("clean3")).code == 2);
}

TEST_CASE("output directory defaults to the environment") {
  const fs::path target = scratch() / "from_env";
  ::setenv("CLOUDNOISE_OUT", target.c_str(), 1);
  const Run r = cli("gen-noise --n 8 --count 1");
  ::unsetenv("CLOUDNOISE_OUT");
  CHECK(r.code == 0);
  CHECK(fs::exists(target / "noise_0000.cld"));
  CHECK(read_json(target / "manifest.json")["out"] == target.string());
}
