#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "phasemod/cli.hpp"

using namespace phasemod::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("phasemod_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') cell += '"', ++i;
      else if (c == '"') quoted = false;
      else cell += c;
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(cell), cell.clear();
    } else if (c == '\n') {
      row.push_back(cell), cell.clear();
      rows.push_back(row), row.clear();
    } else {
      cell += c;
    }
  }
  return rows;
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(0.001) == "0.001");
  CHECK(format_number(1e-4) == "1e-04");
  CHECK(format_number(-2.5e-7) == "-2.5e-07");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(1234567.0) == "1234567");
}

TEST_CASE("catalog lists every experiment and each id resolves") {
  const auto& entries = list_experiments();
  bool found = false;
  for (const auto& e : entries) {
    if (e.id == "necessity:p4") {
      found = true;
      CHECK(e.anchor == "$\\lambda^{(d/p_4)+(d/p_1)-d}$");
    }
    const auto colon = e.id.find(':');
    REQUIRE(colon != std::string::npos);
    const nlohmann::json doc{{"experiment", e.id.substr(0, colon)}, {"case", e.id.substr(colon + 1)}};
    RunOptions options;
    options.check_only = true;
    const RunResult r = run_config_text(doc.dump(), options);
    INFO(e.id << ": " << r.message);
    CHECK(r.exit_code == kExitPass);
    CHECK_FALSE(r.resolved_config.empty());
  }
  CHECK(found);
  CHECK(entries.size() >= 20);
}

TEST_CASE("region experiment writes the vertex table") {
  RunOptions options;
  options.out_dir = scratch_dir("region");
  const RunResult r = run_config_text(
      R"({"experiment": "region", "case": "p", "exponents": {"p1": 2, "p2": 2}})", options);
  REQUIRE(r.exit_code == kExitPass);
  const auto rows = read_csv(slurp(r.report));
  REQUIRE(rows.size() == 5);
  CHECK(rows[0][0] == "vertex");
  const std::vector<std::pair<std::string, std::string>> expected{{"1/2", "1/2"}, {"1", "1/2"}, {"1", "1"}, {"0", "1"}};
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(rows[i + 1][1] == expected[i].first);
    CHECK(rows[i + 1][2] == expected[i].second);
  }
  const auto& header = rows[0];
  for (const char* column : {"case", "version", "config", "grid", "window", "seed"}) {
    CHECK(std::find(header.begin(), header.end(), column) != header.end());
  }
  const auto config = nlohmann::json::parse(rows[1][7]);
  CHECK(config["experiment"] == "region");
  CHECK(rows[1][6] == std::string(library_version()));
}

TEST_CASE("configuration errors exit with the usage code") {
  const char* bad[] = {
      R"({"experiment": "region", "case": "p", "grid": {"N": 33}})",
      R"({"experiment": "region", "case": "p", "colour": 1})",
      R"({"experiment": "region", "case": "p", "exponents": {"q7": 2}})",
      R"({"experiment": "region", "case": "p", "exponents": {"p1": "0.5"}})",
      R"({"experiment": "region", "case": "nope"})",
      R"({"experiment": "teleport", "case": "p"})",
      R"({"case": "p"})",
      R"({"experiment": "sweep", "case": "gaussian_decay", "family": {"lambdas": [1, 4, 2]}})",
      R"({"experiment": "region", "case": "p", "output": {"format": "xml"}})",
      R"({"experiment": "region", "case": "p",)",
  };
  for (const char* text : bad) {
    const RunResult r = run_config_text(text);
    INFO(text);
    CHECK(r.exit_code == kExitUsage);
    CHECK_FALSE(r.message.empty());
  }
}

TEST_CASE("verification failures exit with the failure code and name the invariant") {
  RunOptions options;
  options.out_dir = scratch_dir("failure");
  const RunResult r = run_config_text(
      R"({"experiment": "verify", "case": "stft_factorization", "grid": {"N": 8, "L": 4}, "tolerance": 1e-300})",
      options);
  CHECK(r.exit_code == kExitFailure);
  CHECK(r.message.find("max relative error") != std::string::npos);
  CHECK(fs::exists(r.report));
}

TEST_CASE("reports are byte-identical across runs") {
  const std::string text =
      R"({"experiment": "apply", "case": "duality", "grid": {"N": 16, "L": 4}, "family": {"count": 3, "seed": 9}})";
  RunOptions a, b;
  a.out_dir = scratch_dir("det_a");
  b.out_dir = scratch_dir("det_b");
  b.threads = 1;
  const RunResult ra = run_config_text(text, a);
  const RunResult rb = run_config_text(text, b);
  REQUIRE(ra.exit_code == kExitPass);
  REQUIRE(rb.exit_code == kExitPass);
  CHECK(slurp(ra.report) == slurp(rb.report));
  a.format = "json";
  const RunResult rj = run_config_text(text, a);
  REQUIRE(rj.exit_code == kExitPass);
  CHECK(rj.report.extension() == ".json");
  const auto doc = nlohmann::json::parse(slurp(rj.report));
  CHECK(doc["version"] == std::string(library_version()));
  CHECK(doc["config"]["family"]["seed"] == 9);
  CHECK(doc["rows"].size() == 3);
  CHECK(doc["pass"] == true);
}

TEST_CASE("command line entry point") {
  std::ostringstream out, err;
  CHECK(run_main({"list"}, out, err) == kExitPass);
  CHECK(out.str().find("necessity:p4\t") != std::string::npos);
  std::ostringstream o2, e2;
  CHECK(run_main({}, o2, e2) == kExitUsage);
  std::ostringstream o3, e3;
  CHECK(run_main({"--help"}, o3, e3) == kExitPass);
  std::ostringstream o4, e4;
  CHECK(run_main({"run", "/nonexistent/config.json"}, o4, e4) == kExitUsage);
  std::ostringstream o5, e5;
  CHECK(run_main({"run", "x.json", "--format", "xml"}, o5, e5) == kExitUsage);

  const char* examples = std::getenv("PHASEMOD_EXAMPLES");
  if (examples != nullptr) {
    const fs::path dir = scratch_dir("main");
    std::ostringstream o6, e6;
    const int code = run_main({"run", (fs::path(examples) / "region_p.json").string(), "--out", dir.string()}, o6, e6);
    CHECK(code == kExitPass);
    CHECK(fs::exists(dir / "region_p.csv"));
    std::ostringstream o7, e7;
    CHECK(run_main({"run", (fs::path(examples) / "region_q.json").string(), "--check"}, o7, e7) == kExitPass);
    CHECK(nlohmann::json::parse(o7.str())["case"] == "q");
  }
}
