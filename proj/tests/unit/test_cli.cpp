#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "verify.hpp"

namespace fs = std::filesystem;
using namespace fairdiv::cli;

namespace {

fs::path scratch(const std::string& name) {
  const char* base = std::getenv("FAIRDIV_TEST_TMP");
  fs::path dir = (base && *base) ? fs::path(base) : fs::temp_directory_path() / "fairdiv_cli_test";
  dir /= name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// `policy_extra` lands in [policy]; `extra` is appended as further sections.
std::string small_config(const std::string& kind, std::size_t T = 200, const std::string& extra = "",
                         const std::string& policy_extra = "", const std::string& instance_extra = "") {
  std::ostringstream os;
  os << "[instance]\nn = 2\nm = 2\nT = " << T
     << "\na = 0.2\nb = 0.8\nmu_star = 0.8, 0.2, 0.2, 0.8\nnoise_sigma = 0.1\nseed = 3\n" << instance_extra
     << "[policy]\nkind = " << kind << "\n" << policy_extra
     << "[constraints]\nkind = proportionality\n" << extra;
  return os.str();
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const auto p = dir / "config.ini";
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

void use_output(const fs::path& dir) { ::setenv(kOutputDirEnv, dir.c_str(), 1); }

}  // namespace

TEST_CASE("config parsing") {
  const auto c = parse_config(small_config("etc", 500, "[grid]\ncap = 64\nspacing = 0.05\n"));
  CHECK(c.spec.T == 500);
  CHECK(c.spec.mu_star(1, 1) == 0.8);
  CHECK(c.policy.kind == fairdiv::PolicyKind::kEtc);
  CHECK(c.policy.grid_cap == 64);
  CHECK(c.policy.grid_spacing == 0.05);
  const auto echo = config_echo(c);
  CHECK(echo["instance"]["T"] == 500);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config(small_config("ucb_fair", 200, "", "", "sigma = 0.1\n")), ConfigError);
  CHECK_THROWS_AS(parse_config("[instance]\nn = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(small_config("greedy")), ConfigError);
  CHECK_THROWS_AS(parse_config(small_config("uar", 0)), ConfigError);
  try {
    parse_config(small_config("uar", 200, "", "rate = 2\n"));
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("unknown key 'rate' in section [policy]") != std::string::npos);
  }
}

TEST_CASE("run writes artifacts and is byte-for-byte reproducible") {
  const auto dir = scratch("run");
  const auto cfg = write_config(dir, small_config("ucb_fair", 300, "", "warmup_scale = 0.1\n"));
  std::ostringstream err;
  use_output(dir / "a");
  REQUIRE(cmd_run(cfg, err) == kOk);
  use_output(dir / "b");
  REQUIRE(cmd_run(cfg, err) == kOk);
  const auto a = slurp(dir / "a" / "run.csv");
  CHECK(a == slurp(dir / "b" / "run.csv"));
  const auto rows = lines(a);
  REQUIRE(rows.size() == 301);
  CHECK(rows[0] == kRunCsvHeader);

  const auto summary = nlohmann::json::parse(slurp(dir / "a" / "summary.json"));
  CHECK(summary["artifact_version"] == kArtifactVersion);
  CHECK_FALSE(fs::exists(dir / "a" / "allocations.csv"));
}

TEST_CASE("the oracle run has zero cumulative regret") {
  const auto dir = scratch("oracle");
  const auto cfg = write_config(dir, small_config("oracle", 100, "[output]\nrecord_full_allocations = true\n"));
  use_output(dir / "out");
  std::ostringstream err;
  REQUIRE(cmd_run(cfg, err) == kOk);
  const auto rows = lines(slurp(dir / "out" / "run.csv"));
  REQUIRE(rows.size() == 101);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    std::vector<std::string> cols;
    std::istringstream in(rows[r]);
    for (std::string c; std::getline(in, c, ',');) cols.push_back(c);
    REQUIRE(cols.size() == 8);
    CHECK(std::abs(std::stod(cols[5])) <= 1e-9);
  }
  CHECK(fs::exists(dir / "out" / "allocations.csv"));
}

TEST_CASE("run exit codes") {
  const auto dir = scratch("codes");
  use_output(dir / "out");
  std::ostringstream err;
  CHECK(cmd_run(write_config(dir, small_config("uar", 200, "", "", "sigma = 1\n")), err) == kConfigError);
  CHECK(cmd_run(dir / "missing.ini", err) == kConfigError);
  auto bad = small_config("uar");
  bad.replace(bad.find("0.8, 0.2, 0.2, 0.8"), 18, "0.9, 0.2, 0.2, 0.8");
  CHECK(cmd_run(write_config(dir, bad), err) == kConfigError);
}

TEST_CASE("sweep writes per-seed rows and medians") {
  const auto dir = scratch("sweep");
  const auto cfg = write_config(dir, small_config("uar", 100));
  use_output(dir / "out");
  std::ostringstream err;
  REQUIRE(cmd_sweep(SweepArgs{cfg, "T", {"100", "200"}, 3, 1}, err) == kOk);
  const auto rows = lines(slurp(dir / "out" / "sweep.csv"));
  REQUIRE(rows.size() == 1 + 2 * (3 + 1));
  CHECK(rows[0].rfind("param,value,seed,row,final_regret", 0) == 0);
  CHECK(rows[4].find(",median,") != std::string::npos);
  CHECK(rows[8].find(",median,") != std::string::npos);
  // Uniform allocation loses 0.6 per round regardless of seed.
  const auto median_regret = std::stod(rows[4].substr(rows[4].find(",median,") + 8));
  CHECK(median_regret == doctest::Approx(60.0));

  CHECK(cmd_sweep(SweepArgs{cfg, "T", {}, 1, 1}, err) == kConfigError);
  CHECK(cmd_sweep(SweepArgs{cfg, "horizon", {"5"}, 1, 1}, err) == kConfigError);
}

TEST_CASE("verify suites") {
  CHECK(suite_names().size() == 4);
  std::ostringstream out, err;
  CHECK(cmd_verify("lowerbound", out, err) == kOk);
  const auto report = nlohmann::json::parse(out.str());
  CHECK(report["passed"] == true);
  std::ostringstream out2;
  CHECK(cmd_verify("nonsense", out2, err) == kConfigError);
}

TEST_CASE("lower-bound statistic for the uniform policy") {
  const auto dir = scratch("lowerbound");
  std::ostringstream out, err;
  LowerboundArgs args;
  args.T = 300;
  args.policy = "uar";
  args.out = dir / "lb.csv";
  REQUIRE(cmd_lowerbound(args, out, err) == kOk);
  const auto rows = lines(slurp(dir / "lb.csv"));
  REQUIRE(rows.size() >= 2);
  CHECK(rows[0] == "instance,seed,statistic,final_regret");
  CHECK(rows[1].rfind("mu1,", 0) == 0);
  std::istringstream in(rows[1]);
  std::vector<std::string> cols;
  for (std::string c; std::getline(in, c, ',');) cols.push_back(c);
  REQUIRE(cols.size() == 4);
  CHECK(std::stod(cols[2]) == doctest::Approx(300.0));

  args.policy = "greedy";
  CHECK(cmd_lowerbound(args, out, err) == kConfigError);
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5, 600.0}) CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(600.0) == "600");
}
