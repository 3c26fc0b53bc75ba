#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

fs::path tmp_dir() {
  static const fs::path dir = [] {
    const fs::path d(NSG_TEST_TMP);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run_cli(const std::string& args, const std::string& tag = "out") {
  const fs::path out = tmp_dir() / (tag + ".stdout"), err = tmp_dir() / (tag + ".stderr");
  const std::string cmd = std::string("\"") + NSG_CLI_PATH + "\" " + args + " >\"" + out.string() + "\" 2>\"" +
                          err.string() + "\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path p = tmp_dir() / name;
  std::ofstream(p) << text;
  return p;
}

fs::path sample_series(std::size_t n) {
  std::ostringstream s;
  s << "time,value\n";
  for (std::size_t i = 1; i <= n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n);
    s << 1800 + i << "," << (t - 0.5) * (t - 0.5) + 0.1 * ((i * 7919) % 13 - 6.0) / 6.0 << "\n";
  }
  return write_file("series_" + std::to_string(n) + ".csv", s.str());
}

}  // namespace

TEST_CASE("command line usage errors", "[cli]") {
  CHECK(run_cli("") == 2);
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("run") == 2);
  CHECK(run_cli("analyze --help") == 0);
  CHECK(run_cli("analyze --input x.csv") == 2);
}

TEST_CASE("run writes results and honours the seed override", "[cli]") {
  const auto cfg = write_file("qq.cfg",
                              "experiment = qq_theoretical\nn = 40\nreps = 120\nseed = 3\noutput = qq\n");
  const auto out = tmp_dir() / "run_out";
  REQUIRE(run_cli("run --config \"" + cfg.string() + "\" --out \"" + out.string() + "\"", "run") == 0);
  CHECK(fs::exists(out / "qq.csv"));
  std::ifstream m1(out / "qq.manifest.json");
  CHECK(nlohmann::json::parse(m1)["seed"].get<int>() == 3);
  const std::string first = slurp(out / "qq.csv");

  REQUIRE(run_cli("run --config \"" + cfg.string() + "\" --out \"" + out.string() + "\" --seed 11 --threads 2",
                  "run_seed") == 0);
  std::ifstream m2(out / "qq.manifest.json");
  const auto manifest = nlohmann::json::parse(m2);
  CHECK(manifest["seed"].get<int>() == 11);
  CHECK(manifest["config"]["seed"].get<std::string>() == "11");
  CHECK(slurp(out / "qq.csv") != first);
  CHECK(slurp(tmp_dir() / "run_seed.stdout").find("qq.csv") != std::string::npos);
}

TEST_CASE("run reports configuration errors with exit code 2", "[cli]") {
  const auto bad = write_file("bad.cfg", "experiment = qq_theoretical\ncolour = blue\n");
  CHECK(run_cli("run --config \"" + bad.string() + "\"", "bad") == 2);
  CHECK(slurp(tmp_dir() / "bad.stderr").find("bad.cfg:2") != std::string::npos);
  CHECK(run_cli("run --config \"" + (tmp_dir() / "missing.cfg").string() + "\"") == 2);
  const auto cfg = write_file("ok.cfg", "experiment = qq_theoretical\nn = 40\nreps = 120\n");
  CHECK(run_cli("run --config \"" + cfg.string() + "\" --threads 0") == 2);
}

TEST_CASE("analyze", "[cli]") {
  const auto series = sample_series(120);
  const auto report = tmp_dir() / "report.json";
  const std::string base = "analyze --input \"" + series.string() + "\" --m 5 --h 0.15 --alpha 0.05 --bootstrap 200";
  REQUIRE(run_cli(base + " --periods 60,30 --report \"" + report.string() + "\"", "analyze") == 0);
  std::ifstream f(report);
  const auto r = nlohmann::json::parse(f);
  CHECK(r.contains("changepoint"));
  CHECK(r["band"]["t"].size() == 120);
  CHECK(r["harmonic"]["frequencies"].size() == 2);

  REQUIRE(run_cli(base, "analyze_stdout") == 0);
  // Without periods the report is the same apart from the harmonic block.
  auto with_periods = nlohmann::json::parse(slurp(report));
  with_periods.erase("harmonic");
  CHECK(nlohmann::json::parse(slurp(tmp_dir() / "analyze_stdout.stdout")) == with_periods);
}

TEST_CASE("analyze reports data errors with exit code 3", "[cli]") {
  const auto bad = write_file("bad.csv", "time,value\n1,2\n2,oops\n");
  CHECK(run_cli("analyze --input \"" + bad.string() + "\" --m 5 --h 0.15 --alpha 0.05 --bootstrap 200", "badcsv") == 3);
  CHECK(slurp(tmp_dir() / "badcsv.stderr").find("bad.csv:3") != std::string::npos);
  CHECK(run_cli("analyze --input \"" + (tmp_dir() / "none.csv").string() +
                "\" --m 5 --h 0.15 --alpha 0.05 --bootstrap 200") == 3);
  const auto short_series = sample_series(30);
  CHECK(run_cli("analyze --input \"" + short_series.string() + "\" --m 3 --h 0.2 --alpha 0.05 --bootstrap 200") == 3);
}
