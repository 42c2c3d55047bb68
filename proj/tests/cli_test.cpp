// Integration tests driving the pedrisk binary; the path arrives through the
// PEDRISK_CLI environment variable set by ctest.

#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

std::string cli_path() {
  const char* env = std::getenv("PEDRISK_CLI");
  REQUIRE_MESSAGE(env != nullptr, "PEDRISK_CLI must point at the binary");
  return env;
}

RunResult run(const std::string& args) {
  std::string cmd = cli_path() + " " + args + " 2>&1";
  std::array<char, 4096> buffer{};
  RunResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fgets(buffer.data(), buffer.size(), pipe) != nullptr) {
    result.output += buffer.data();
  }
  int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("help exits cleanly, unknown commands exit 2") {
  CHECK(run("--help").exit_code == 0);
  CHECK(run("no-such-command").exit_code == 2);
  CHECK(run("generate --no-such-flag x").exit_code == 2);
  CHECK(run("").exit_code == 2);  // a subcommand is required
}

TEST_CASE("generate is byte-deterministic and writes a manifest") {
  auto dir = fresh_dir("pedrisk_cli_gen");
  std::string a = (dir / "a").string();
  std::string b = (dir / "b").string();
  auto flags = std::string(" --seed 7 --set encounters_per_config=2");
  CHECK(run("generate --out-dir " + a + flags).exit_code == 0);
  CHECK(run("generate --out-dir " + b + flags).exit_code == 0);

  CHECK(slurp(dir / "a" / "trajectories.csv") == slurp(dir / "b" / "trajectories.csv"));
  CHECK(slurp(dir / "a" / "summary.txt") == slurp(dir / "b" / "summary.txt"));
  CHECK(!slurp(dir / "a" / "manifest").empty());

  auto manifest = slurp(dir / "a" / "manifest");
  CHECK(manifest.find("command = generate") != std::string::npos);
  CHECK(manifest.find("seed = 7") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("features + cluster + select-k round trip on a generated set") {
  auto dir = fresh_dir("pedrisk_cli_pipeline");
  std::string d = dir.string();
  REQUIRE(run("generate --out-dir " + d + "/data --seed 3 --set encounters_per_config=2")
              .exit_code == 0);
  REQUIRE(run("features --in " + d + "/data/trajectories.csv --out " + d +
              "/features.csv --smoothed-out " + d + "/smoothed.csv")
              .exit_code == 0);

  auto features = slurp(dir / "features.csv");
  CHECK(features.rfind("traj_id,frame,px,py,vx,vy,ttc", 0) == 0);

  REQUIRE(run("cluster --in " + d + "/features.csv --out " + d +
              "/clusters.csv --model-out " + d + "/cluster.json --seed 3")
              .exit_code == 0);
  auto clusters = slurp(dir / "clusters.csv");
  CHECK(clusters.rfind("traj_id,frame,cluster,risk", 0) == 0);

  auto select = run("select-k --in " + d + "/features.csv --out " + d +
                    "/ktable.csv --k-min 2 --k-max 8 --seed 3");
  REQUIRE(select.exit_code == 0);
  auto table = slurp(dir / "ktable.csv");
  int lines = 0;
  for (char ch : table) lines += ch == '\n' ? 1 : 0;
  CHECK(lines == 8);  // header + 7 rows for K in [2, 8]
  fs::remove_all(dir);
}

TEST_CASE("malformed input exits with the data error code and a line number") {
  auto dir = fresh_dir("pedrisk_cli_bad");
  {
    std::ofstream out(dir / "bad.csv");
    out << "traj_id,frame,x_m,y_m\n";
    out << "a,0,1.0,2.0\n";
    out << "a,1,not_a_number,2.0\n";
  }
  auto res = run("features --in " + (dir / "bad.csv").string() + " --out " +
                 (dir / "out.csv").string());
  CHECK(res.exit_code == 3);
  CHECK(res.output.find(":3:") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("commands never mutate their input files") {
  auto dir = fresh_dir("pedrisk_cli_immutable");
  std::string d = dir.string();
  REQUIRE(run("generate --out-dir " + d + "/data --seed 11 --set encounters_per_config=2")
              .exit_code == 0);
  auto before = slurp(dir / "data" / "trajectories.csv");
  REQUIRE(run("features --in " + d + "/data/trajectories.csv --out " + d +
              "/features.csv")
              .exit_code == 0);
  auto features_before = slurp(dir / "features.csv");
  REQUIRE(run("cluster --in " + d + "/features.csv --out " + d + "/clusters.csv")
              .exit_code == 0);
  CHECK(slurp(dir / "data" / "trajectories.csv") == before);
  CHECK(slurp(dir / "features.csv") == features_before);
  fs::remove_all(dir);
}

TEST_CASE("cluster without the semantic rule needs a label map") {
  auto dir = fresh_dir("pedrisk_cli_labelmap");
  std::string d = dir.string();
  REQUIRE(run("generate --out-dir " + d + "/data --seed 2 --set encounters_per_config=2")
              .exit_code == 0);
  REQUIRE(run("features --in " + d + "/data/trajectories.csv --out " + d +
              "/features.csv")
              .exit_code == 0);

  auto res = run("cluster --in " + d + "/features.csv --out " + d +
                 "/clusters.csv --k 3");
  CHECK(res.exit_code == 3);
  CHECK(res.output.find("label-map") != std::string::npos);

  auto mapped = run("cluster --in " + d + "/features.csv --out " + d +
                    "/clusters.csv --k 3 --label-map "
                    "0=Dangerous,1=Alert,2=JointlySafe");
  CHECK(mapped.exit_code == 0);
  fs::remove_all(dir);
}

TEST_CASE("unknown config keys are rejected with the data error code") {
  auto dir = fresh_dir("pedrisk_cli_cfg");
  {
    std::ofstream out(dir / "bad.cfg");
    out << "mystery_knob = 1\n";
  }
  auto res = run("generate --out-dir " + (dir / "out").string() + " --config " +
                 (dir / "bad.cfg").string());
  CHECK(res.exit_code == 3);
  CHECK(res.output.find("mystery_knob") != std::string::npos);
  fs::remove_all(dir);
}
