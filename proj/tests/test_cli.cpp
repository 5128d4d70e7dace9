#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args, const fs::path& dir) {
  const std::string cmd = std::string("\"") + PARADIAG_CLI_PATH + "\" " + args +
                          " > \"" + (dir / "stdout.txt").string() + "\" 2> \"" +
                          (dir / "stderr.txt").string() + "\"";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -2;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const char* tag) {
  const fs::path d =
      fs::temp_directory_path() / (std::string("paradiag_cli_") + tag);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("oracle-check runs, emits an RFC-4180 CSV, and is deterministic") {
  const fs::path dir = fresh_dir("oracle");
  const std::string args =
      "run --experiment oracle-check --n 3 --ell 6 --out \"" + dir.string() + "\"";
  CHECK(run_cli(args, dir) == 0);

  const fs::path csv = dir / "oracle-check.csv";
  REQUIRE(fs::exists(csv));
  REQUIRE(fs::exists(dir / "oracle-check_summary.txt"));
  const std::string first = slurp(csv);
  CHECK(first.rfind("s,n_bar,ell,dev_vs_sequential,dev_vs_dense,pint_loops\r\n",
                    0) == 0);
  CHECK(first.find('\r') != std::string::npos);
  // 4 data rows: heat s=1..3 plus the synthetic SPD instance
  size_t lines = 0;
  for (char c : first)
    if (c == '\n') ++lines;
  CHECK(lines == 5);

  CHECK(run_cli(args, dir) == 0);
  CHECK(slurp(csv) == first);  // byte-identical rerun
}

TEST_CASE("flags override config file values") {
  const fs::path dir = fresh_dir("override");
  {
    std::ofstream cfg(dir / "cfg.json");
    cfg << R"({"experiment":"table1","ell":4,"n":10})";
  }
  const std::string args = "run --config \"" + (dir / "cfg.json").string() +
                           "\" --ell 8 --out \"" + dir.string() + "\"";
  CHECK(run_cli(args, dir) == 0);
  const std::string csv = slurp(dir / "table1.csv");
  CHECK(csv.find("100,8,") != std::string::npos);  // n_bar=100 from config, ell=8 from flag
  CHECK(csv.find("100,4,") == std::string::npos);
}

TEST_CASE("config validation failures exit with code 2") {
  const fs::path dir = fresh_dir("badcfg");
  {
    std::ofstream cfg(dir / "unknown.json");
    cfg << R"({"experiment":"table1","bogus":1})";
  }
  CHECK(run_cli("run --config \"" + (dir / "unknown.json").string() + "\"", dir) == 2);
  CHECK(slurp(dir / "stderr.txt").find("bogus") != std::string::npos);

  {
    std::ofstream cfg(dir / "syntax.json");
    cfg << "{not json";
  }
  CHECK(run_cli("run --config \"" + (dir / "syntax.json").string() + "\"", dir) == 2);

  {
    std::ofstream cfg(dir / "type.json");
    cfg << R"({"experiment":"table1","ell":"many"})";
  }
  CHECK(run_cli("run --config \"" + (dir / "type.json").string() + "\"", dir) == 2);

  CHECK(run_cli("run --experiment nonsense", dir) == 2);
  CHECK(run_cli("run --experiment table1 --ell 0", dir) == 2);
  CHECK(run_cli("run", dir) == 2);  // no experiment selected
}

TEST_CASE("missing subcommand is a usage error") {
  const fs::path dir = fresh_dir("usage");
  CHECK(run_cli("", dir) != 0);
}

TEST_CASE("alpha sweep on a desk-size instance orders residuals by alpha") {
  const fs::path dir = fresh_dir("alpha");
  const std::string args =
      "run --experiment alpha-sweep --n 6 --ell 8 --nu 0.05 --out \"" +
      dir.string() + "\"";
  CHECK(run_cli(args, dir) == 0);
  const std::string csv = slurp(dir / "alpha-sweep.csv");

  // parse res_u1 (4th column) per data row; must decrease as alpha shrinks
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);  // header
  CHECK(line.rfind("alpha,u1_norm,u2_norm,res_u1,res_full,err_vs_oracle,pint_loops",
                   0) == 0);
  double prev = 1e300;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::istringstream ls(line);
    std::string f;
    double res_u1 = 0.0;
    for (int c = 0; std::getline(ls, f, ','); ++c)
      if (c == 3) res_u1 = std::stod(f);
    CHECK(res_u1 < prev);
    prev = res_u1;
    ++rows;
  }
  CHECK(rows == 8);
}

TEST_CASE("compare experiment emits the pinned schema") {
  const fs::path dir = fresh_dir("compare");
  const std::string args =
      "run --experiment compare --n 6 --ell 6 --nu 0.05 --workers 2 --out \"" +
      dir.string() + "\"";
  CHECK(run_cli(args, dir) == 0);
  const std::string csv = slurp(dir / "compare.csv");
  CHECK(csv.rfind("run_id,method,n_bar,ell,nu,alpha,pint_loops,rel_residual,"
                  "inner_iters,wall_note\r\n",
                  0) == 0);
  CHECK(csv.find("paradiag_alpha") != std::string::npos);
  CHECK(csv.find("paradiag_2loop") != std::string::npos);
  CHECK(csv.find("paradiag_1loop") != std::string::npos);
  CHECK(csv.find("gmres") != std::string::npos);
}
