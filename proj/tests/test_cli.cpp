// Process-level tests for the command line tool. The binary path comes in
// through PATHEXP_CLI_PATH; fixtures are generated into a temp directory.
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

#include "pathexp/classify.hpp"
#include "pathexp/io.hpp"
#include "pathexp/pipeline.hpp"
#include "pathexp/simulate.hpp"

using namespace pathexp;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "pathexp_cli_tests";
  fs::create_directories(dir);
  return dir;
}

RunResult run_cli(const std::string& args) {
  const fs::path dir = work_dir();
  const fs::path out = dir / "stdout.txt";
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = std::string(PATHEXP_CLI_PATH) + " " + args + " > " +
                          out.string() + " 2> " + err.string();
  const int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(rc);
  r.out = read_text_file(out.string());
  r.err = read_text_file(err.string());
  return r;
}

// A mild explosive path plus a correlated sibling, written as a CSV fixture.
fs::path write_fixture() {
  const fs::path path = work_dir() / "fixture.csv";
  DgpSpec mild{DgpKind::Ar1, 1.04, 0.10, 64, 50, 1.0};
  const RawSeries a = gen_ar1(mild, 1.04, 303);
  const RawSeries b = gen_ar1(mild, 1.04, 304);
  std::ofstream os(path);
  os << "year,coast_a,coast_b\n";
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    os << 1960 + i << "," << a.values[i] << "," << b.values[i] << "\n";
  }
  return path;
}

}  // namespace

TEST_CASE("analyze reports a gate-passing episode on the fixture") {
  const fs::path fixture = write_fixture();
  const RunResult r = run_cli("analyze " + fixture.string() +
                              " --gate strict --calibrate-T 64 --seed 7");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("series,start_period") == 0);
  CHECK(r.out.find(",pass,") != std::string::npos);

  // Cross-check the CLI verdicts against the library pipeline and the gate
  // arithmetic on the reported NC/NCP/LGS columns.
  DgpSpec calib{DgpKind::Ar1, 1.04, 0.10, 64, 50, 1.0};
  const ThresholdVector thr = calibrate(calib, 64, 500, 7);
  PipelineConfig cfg;
  const auto series = read_csv(fixture.string());
  int expected_rows = 0;
  int expected_passes = 0;
  for (const auto& s : series) {
    for (const auto& e : analyze_series(normalize(s), cfg, thr)) {
      ++expected_rows;
      const auto& d = e.diag;
      const bool hand_gate = d.layer3.nc_mean >= 0.001024 - 1e-12 &&
                             d.layer3.nc_positivity >= 0.60 - 1e-12 &&
                             d.layer4.lgs >= 0.70 - 1e-12;
      CHECK(e.gate.passed == hand_gate);
      if (hand_gate) ++expected_passes;
    }
  }
  CHECK(expected_passes >= 1);
  int got_rows = 0, got_passes = 0;
  std::size_t pos = r.out.find('\n');
  while (pos != std::string::npos && pos + 1 < r.out.size()) {
    const std::size_t next = r.out.find('\n', pos + 1);
    const std::string line = r.out.substr(pos + 1, next - pos - 1);
    if (!line.empty()) {
      ++got_rows;
      if (line.find(",pass,") != std::string::npos) ++got_passes;
    }
    pos = next;
  }
  CHECK(got_rows == expected_rows);
  CHECK(got_passes == expected_passes);
}

TEST_CASE("analyze json output carries the schema version") {
  const fs::path fixture = write_fixture();
  const RunResult r =
      run_cli("analyze " + fixture.string() +
              " --calibrate-T 64 --seed 7 --format json");
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema_version"] == 1);
  CHECK(j["episodes"].is_array());
}

TEST_CASE("analyze requires exactly one threshold source") {
  const fs::path fixture = write_fixture();
  const RunResult none = run_cli("analyze " + fixture.string());
  CHECK(none.exit_code == 1);
  const auto j = nlohmann::json::parse(none.err);
  CHECK(j["error"] == "BadConfig");

  const fs::path thr = work_dir() / "thr.txt";
  REQUIRE(run_cli("calibrate --calibrate-T 64 --seed 7 -o " + thr.string())
              .exit_code == 0);
  const RunResult both =
      run_cli("analyze " + fixture.string() + " --thresholds " + thr.string() +
              " --calibrate-T 64");
  CHECK(both.exit_code == 1);
}

TEST_CASE("calibrate then analyze round-trips through a threshold file") {
  const fs::path fixture = write_fixture();
  const fs::path thr = work_dir() / "thr_roundtrip.txt";
  REQUIRE(run_cli("calibrate --calibrate-T 64 --seed 7 -o " + thr.string())
              .exit_code == 0);
  const ThresholdVector from_file = read_thresholds(thr.string());
  DgpSpec calib{DgpKind::Ar1, 1.04, 0.10, 64, 50, 1.0};
  const ThresholdVector direct = calibrate(calib, 64, 500, 7);
  for (std::size_t i = 0; i < direct.values.size(); ++i) {
    CHECK(from_file.values[i] == direct.values[i]);
  }

  const RunResult a = run_cli("analyze " + fixture.string() +
                              " --thresholds " + thr.string());
  const RunResult b = run_cli("analyze " + fixture.string() +
                              " --calibrate-T 64 --seed 7");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("malformed csv surfaces a machine-readable error record") {
  const fs::path bad = work_dir() / "bad.csv";
  std::ofstream(bad) << "year,a\n2000,1\n2001,\n2002,3\n";
  const RunResult r =
      run_cli("analyze " + bad.string() + " --calibrate-T 64 --seed 7");
  CHECK(r.exit_code == 1);
  const auto j = nlohmann::json::parse(r.err);
  CHECK(j["error"] == "InteriorGap");
  CHECK(j["message"].get<std::string>().find("series 'a'") !=
        std::string::npos);
}

TEST_CASE("co-analyze of a series with itself finds full overlap") {
  const fs::path fixture = write_fixture();
  const RunResult r =
      run_cli("co-analyze " + fixture.string() +
              " coast_a coast_a --calibrate-T 64 --seed 7 --format json");
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  if (!j["episodes_1"].empty()) {
    CHECK(j["jaccard"].get<double>() == doctest::Approx(1.0));
    const std::string cls = j["classification"].get<std::string>();
    CHECK((cls == "Borderline" || cls == "CoExplosive"));
  }
}

TEST_CASE("the empirical gate admits episodes the strict gate refuses") {
  const fs::path fixture = write_fixture();
  const RunResult strict = run_cli("analyze " + fixture.string() +
                                   " --gate strict --calibrate-T 64 --seed 7");
  const RunResult emp = run_cli("analyze " + fixture.string() +
                                " --gate empirical --calibrate-T 64 --seed 7");
  REQUIRE(strict.exit_code == 0);
  REQUIRE(emp.exit_code == 0);
  auto count_passes = [](const std::string& out) {
    int n = 0;
    std::size_t pos = 0;
    while ((pos = out.find(",pass,", pos)) != std::string::npos) {
      ++n;
      pos += 6;
    }
    return n;
  };
  CHECK(count_passes(emp.out) >= count_passes(strict.out));
}

TEST_CASE("co-analyze names the missing series in its error record") {
  const fs::path fixture = write_fixture();
  const RunResult r = run_cli("co-analyze " + fixture.string() +
                              " coast_a nosuch --calibrate-T 64 --seed 7");
  CHECK(r.exit_code == 1);
  const auto j = nlohmann::json::parse(r.err);
  CHECK(j["error"] == "BadConfig");
  CHECK(j["message"].get<std::string>().find("nosuch") != std::string::npos);
}

TEST_CASE("simulate is byte-identical across reruns") {
  const fs::path out1 = work_dir() / "sim1";
  const fs::path out2 = work_dir() / "sim2";
  REQUIRE(run_cli("simulate -n 40 --seed 11 -o " + out1.string()).exit_code ==
          0);
  REQUIRE(run_cli("simulate -n 40 --seed 11 -o " + out2.string()).exit_code ==
          0);
  CHECK(read_text_file(out1.string() + ".regimes.csv") ==
        read_text_file(out2.string() + ".regimes.csv"));
  CHECK(read_text_file(out1.string() + ".scenarios.csv") ==
        read_text_file(out2.string() + ".scenarios.csv"));
}

TEST_CASE("plot data lands next to the report") {
  const fs::path fixture = write_fixture();
  const fs::path out = work_dir() / "report.csv";
  const RunResult r =
      run_cli("analyze " + fixture.string() +
              " --calibrate-T 64 --seed 7 --plot-data -o " + out.string());
  CHECK(r.exit_code == 0);
  const std::string plot = read_text_file(out.string() + ".plot.csv");
  CHECK(plot.rfind("series,window,", 0) == 0);
}
