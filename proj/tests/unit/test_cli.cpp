#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("aatomo_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    std::ofstream(d / "small.cfg") << "n_boundary = 256\nn_angles = 128\nn_mode = 32\nm_seq = 16\nm_max = 3\n"
                                      "k_h = 16\npitch = 0.03125\nradon_samples = 1025\ng0_nodes = 16\n"
                                      "tol_g0 = 1\nattenuation = none\n";
    std::ofstream(d / "att.cfg") << "n_boundary = 128\nn_angles = 64\nn_mode = 16\nm_seq = 8\nm_max = 4\n"
                                    "k_h = 12\npitch = 0.0625\nradon_samples = 513\ng0_nodes = 16\n"
                                    "tol_g0 = 1\n";
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string(AATOMO_CLI_PATH) + " " + args + " > " + (workdir() / "log.txt").string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string cfg(const char* name) { return "--config " + (workdir() / name).string(); }
std::string out(const char* name) { return "--out " + (workdir() / name).string(); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run("") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("check-range") == 2);
  CHECK(run(cfg("small.cfg") + " --debug-flip-perp simulate " + out("o")) == 2);
  CHECK(run(cfg("small.cfg") + " check-range " + (workdir() / "missing.csv").string()) == 2);
  CHECK(run("--config /nonexistent.cfg print-config") == 2);
  CHECK(run(cfg("small.cfg") + " --scenario nonsense simulate " + out("o")) == 2);
}

TEST_CASE("print-config echoes overrides") {
  CHECK(run(cfg("small.cfg") + " --seed 77 print-config") == 0);
  const std::string log = slurp(workdir() / "log.txt");
  CHECK(log.find("seed = 77") != std::string::npos);
  CHECK(log.find("n_boundary = 256") != std::string::npos);
}

TEST_CASE("simulate then check and reconstruct") {
  CHECK(run(cfg("small.cfg") + " --scenario zero simulate " + out("zero")) == 0);
  CHECK(fs::exists(workdir() / "zero" / "sinogram.csv"));
  CHECK(fs::exists(workdir() / "zero" / "truth_F.csv"));
  CHECK(run(cfg("small.cfg") + " check-range " + (workdir() / "zero" / "sinogram.csv").string() + " " + out("zero")) == 0);

  CHECK(run(cfg("small.cfg") + " --scenario bump_pair simulate " + out("bp")) == 0);
  const std::string sino = (workdir() / "bp" / "sinogram.csv").string();
  CHECK(run(cfg("small.cfg") + " check-range " + sino + " " + out("bp")) == 0);
  CHECK(run(cfg("small.cfg") + " --scenario bump_pair reconstruct " + sino + " " + out("bp")) == 0);
  CHECK(fs::exists(workdir() / "bp" / "F_rec.csv"));
  CHECK(slurp(workdir() / "bp" / "metrics.txt").find("curl_defect") != std::string::npos);
}

TEST_CASE("inconsistent data fail the gate with 1") {
  CHECK(run(cfg("small.cfg") + " --scenario xray simulate " + out("xr")) == 0);
  const std::string sino = (workdir() / "xr" / "sinogram.csv").string();
  CHECK(run(cfg("small.cfg") + " check-range " + sino + " " + out("xr")) == 1);
  CHECK(run(cfg("small.cfg") + " reconstruct " + sino + " " + out("xr")) == 1);
}

TEST_CASE("validate-h and confuse") {
  CHECK(run(cfg("small.cfg") + " validate-h " + out("h")) == 0);
  CHECK(fs::exists(workdir() / "h" / "h_metrics.txt"));
  CHECK(run(cfg("att.cfg") + " confuse " + out("c")) == 0);
  CHECK(run(cfg("att.cfg") + " --debug-flip-perp validate-h " + out("hf")) == 1);
}
