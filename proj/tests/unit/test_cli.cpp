#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::current_path() / "cli_work";

int shell(const std::string& line) {
  fs::create_directories(kWork);
  const std::string cmd = "cd '" + kWork.string() + "' && " + line + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

int run(const std::string& args) { return shell("'" SMALLDEV_CLI_PATH "' " + args); }

std::string slurp(const std::string& name) {
  std::ifstream in(kWork / name, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("smallball schema", "[cli]") {
  REQUIRE(run("smallball --spectrum discrete --nu 1 --K 8 --norm l2 --r 0.5,1,2 --n 2000 --seed 7 --out sb.csv") == 0);
  const auto csv = slurp("sb.csv");
  CHECK(csv.rfind("r,norm,n,hits,p_hat,ci_low,ci_high,phi_hat,phi_lo,phi_hi,grid,seed\n", 0) == 0);
  CHECK(count_lines(csv) == 4);
  CHECK(fs::exists(kWork / "sb.csv.manifest.json"));
}

TEST_CASE("results do not depend on the thread count", "[cli]") {
  REQUIRE(run("smallball --spectrum continuous --nu 2 --r 1,2 --n 3000 --seed 3 --threads 1 --out t1.csv") == 0);
  REQUIRE(run("smallball --spectrum continuous --nu 2 --r 1,2 --n 3000 --seed 3 --threads 4 --out t4.csv") == 0);
  CHECK(slurp("t1.csv") == slurp("t4.csv"));
}

TEST_CASE("manifest replay reproduces the output", "[cli]") {
  REQUIRE(run("simulate --spectrum discrete --nu 1.5 --grid 33 --paths 3 --out sim.csv") == 0);
  REQUIRE(run("replay sim.csv.manifest.json --out sim2.csv --threads 2") == 0);
  CHECK(slurp("sim.csv") == slurp("sim2.csv"));
  REQUIRE(run("tsirelson --r 1e-10,1e-20 --format json --out ts.json") == 0);
  REQUIRE(run("replay ts.json.manifest.json --out ts2.json") == 0);
  CHECK(slurp("ts.json") == slurp("ts2.json"));
}

TEST_CASE("the environment seed is pinned in the manifest", "[cli]") {
  REQUIRE(shell("SMALLDEV_SEED=41 '" SMALLDEV_CLI_PATH "' simulate --grid 9 --out env.csv") == 0);
  REQUIRE(run("replay env.csv.manifest.json --out env2.csv") == 0);
  CHECK(slurp("env.csv") == slurp("env2.csv"));
  CHECK(slurp("env.csv.manifest.json").find("\"seed\": 41") != std::string::npos);
}

TEST_CASE("config file entries are overridden by flags", "[cli]") {
  {
    std::ofstream cfg(kWork / "run.cfg");
    cfg << "# tsirelson settings\nnu = 2\nr = 1e-5,1e-6\nvariant=gaussian-factor\n";
  }
  REQUIRE(run("tsirelson --config run.cfg --r 1e-7 --out cfg.csv") == 0);
  const auto csv = slurp("cfg.csv");
  CHECK(count_lines(csv) == 2);
  CHECK(csv.find("2,discrete,paper-2pi,gaussian-factor,1e-07") != std::string::npos);
  {
    std::ofstream cfg(kWork / "bad.cfg");
    cfg << "colour=blue\n";
  }
  CHECK(run("tsirelson --config bad.cfg --r 1e-7 --out bad.csv") == 2);
}

TEST_CASE("exit codes", "[cli]") {
  CHECK(run("smallball --r 1 --bogus 3") == 2);
  CHECK(run("nosuchcommand") == 2);
  CHECK(run("smallball --r 0 --n 1000 --out neg.csv") == 2);
  CHECK(fs::exists(kWork / "neg.csv.manifest.json"));
  CHECK(run("entropy --eps 1e-6 --out cap.csv") == 1);
  CHECK(slurp("cap.csv.manifest.json").find("\"status\": \"error\"") != std::string::npos);
  CHECK(run("--help > /dev/null") == 0);
}

TEST_CASE("json output", "[cli]") {
  REQUIRE(run("l2-exact --K 0 --r 1 --format json --out l2.json") == 0);
  const auto j = slurp("l2.json");
  CHECK(j.find("\"p\": 0.682689492") != std::string::npos);
}
