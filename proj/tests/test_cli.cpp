#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "pickloop/io.hpp"

using namespace pickloop;
namespace fs = std::filesystem;

namespace {

std::string cli_path() {
  const char* path = std::getenv("PICKLOOP_CLI");
  REQUIRE_MESSAGE(path != nullptr, "PICKLOOP_CLI must point at the binary");
  return path;
}

int run(const std::string& args) {
  const std::string command = cli_path() + " " + args + " >/dev/null 2>&1";
  const int raw = std::system(command.c_str());
  REQUIRE(WIFEXITED(raw));
  return WEXITSTATUS(raw);
}

fs::path fresh_dir(const char* name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), (path.string() + " missing"));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct Workspace {
  fs::path dir;

  explicit Workspace(const char* name) : dir(fresh_dir(name)) {
    REQUIRE(run("generate --n 12 --seed 3 --stations 2 --out " +
                dir.string()) == 0);
  }

  std::string instance() const { return (dir / "instance.json").string(); }
  std::string layout() const { return (dir / "layout.json").string(); }
};

}  // namespace

TEST_CASE("generate writes a valid deterministic bundle") {
  const fs::path dir1 = fresh_dir("pickloop_cli_gen1");
  const fs::path dir2 = fresh_dir("pickloop_cli_gen2");
  const std::string args = "generate --n 25 --seed 9 --stations 2 --out ";
  REQUIRE(run(args + dir1.string()) == 0);
  REQUIRE(run(args + dir2.string()) == 0);

  const Instance instance = read_instance((dir1 / "instance.json").string());
  CHECK(instance.skus.size() == 25);
  CHECK(validate_instance(instance).empty());
  const Layout layout = read_layout((dir1 / "layout.json").string());
  CHECK(layout.n_stations == 2);
  CHECK(validate_layout(layout).empty());
  CHECK(fs::exists(dir1 / "calibration.csv"));

  CHECK(slurp(dir1 / "instance.json") == slurp(dir2 / "instance.json"));
  CHECK(slurp(dir1 / "layout.json") == slurp(dir2 / "layout.json"));
}

TEST_CASE("generate accepts n = 0") {
  const fs::path dir = fresh_dir("pickloop_cli_gen0");
  REQUIRE(run("generate --n 0 --out " + dir.string()) == 0);
  CHECK(read_instance((dir / "instance.json").string()).skus.empty());
}

TEST_CASE("solve produces an auditable solution file") {
  Workspace ws("pickloop_cli_solve");
  const fs::path out = ws.dir / "solution.json";
  REQUIRE(run("solve --instance " + ws.instance() + " --layout " +
              ws.layout() + " --solver heuristic --delta 1.0 --time-limit 5"
              " --out " + out.string()) == 0);

  SolutionMeta meta;
  const Solution solution = read_solution(out.string(), &meta);
  CHECK(meta.mode == "integrated");
  CHECK(meta.solver == "heuristic");
  CHECK(solution.objective > 0.0);
  CHECK(!solution.placements.empty());
}

TEST_CASE("solve in export mode writes an MPS file") {
  Workspace ws("pickloop_cli_mps");
  const fs::path out = ws.dir / "model.mps";
  REQUIRE(run("solve --instance " + ws.instance() + " --layout " +
              ws.layout() + " --solver export --out " + out.string()) == 0);
  const std::string mps = slurp(out);
  CHECK(mps.find("NAME") != std::string::npos);
  CHECK(mps.find("ENDATA") != std::string::npos);
}

TEST_CASE("evaluate writes the report CSVs") {
  Workspace ws("pickloop_cli_eval");
  const fs::path solution = ws.dir / "solution.json";
  REQUIRE(run("solve --instance " + ws.instance() + " --layout " +
              ws.layout() + " --solver heuristic --delta 1.0 --time-limit 5"
              " --out " + solution.string()) == 0);

  const fs::path report = ws.dir / "report";
  REQUIRE(run("evaluate --instance " + ws.instance() + " --layout " +
              ws.layout() + " --solution " + solution.string() +
              " --delta 1.0 --out " + report.string()) == 0);
  CHECK(slurp(report / "objective.csv").find("violations,0") !=
        std::string::npos);
  CHECK(fs::exists(report / "deviation.csv"));
  CHECK(fs::exists(report / "distance_overall.csv"));
  CHECK(fs::exists(report / "distance_by_day.csv"));
}

TEST_CASE("usage errors exit with code 1") {
  CHECK(run("solve") == 1);                       // missing required options
  CHECK(run("generate --no-such-flag") == 1);
  CHECK(run("solve --instance x.json --mode bogus") == 1);
}

TEST_CASE("missing input files exit with code 3") {
  CHECK(run("solve --instance /nonexistent/instance.json") == 3);
  CHECK(run("evaluate --instance /nonexistent/instance.json"
            " --solution /nonexistent/solution.json") == 3);
}
