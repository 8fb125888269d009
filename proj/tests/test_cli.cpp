#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "wigdyn/cli_app.hpp"

namespace fs = std::filesystem;
using wigdyn::cli::run;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("wigdyn_cli_" + std::to_string(::getpid()) + "_" +
                                        std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

TEST_CASE("wigner: default cat has negative cells on the x=0 column") {
  TempDir tmp;
  const std::string out = tmp.file("w.csv");
  const int code = run({"wigner", "--grid-n", "65", "--grid-window", "8", "--out", out});
  CHECK(code == 0);
  REQUIRE(fs::exists(out));
  const auto rows = parse_csv(slurp(out));
  REQUIRE(rows.size() == 1 + 65 * 65);
  CHECK(rows[0] == std::vector<std::string>{"x", "p", "w"});
  double min_on_axis = 1e300;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (std::stod(rows[r][0]) == 0.0) min_on_axis = std::min(min_on_axis, std::stod(rows[r][2]));
  }
  CHECK(min_on_axis < 0.0);
  // sidecar carries the grid spec and convention tag
  REQUIRE(fs::exists(out + ".json"));
  const auto side = nlohmann::json::parse(slurp(out + ".json"));
  CHECK(side["grid"]["nx"] == 65);
  CHECK(side["convention_tag"] == "paper");
  CHECK(side["state"]["kind"] == "cat");
}

TEST_CASE("wigner: undisplaced cat is a nonnegative Gaussian grid") {
  TempDir tmp;
  const std::string out = tmp.file("w0.csv");
  CHECK(run({"wigner", "--x0", "0", "--p0", "0", "--grid-n", "33", "--grid-window", "6",
             "--out", out}) == 0);
  const auto rows = parse_csv(slurp(out));
  for (std::size_t r = 1; r < rows.size(); ++r) CHECK(std::stod(rows[r][2]) >= 0.0);
}

TEST_CASE("wigner: malformed grid bounds exit nonzero with no output") {
  TempDir tmp;
  const std::string out = tmp.file("never.csv");
  CHECK(run({"wigner", "--grid-window", "-3", "--out", out}) == 2);
  CHECK(!fs::exists(out));
  CHECK(run({"wigner", "--grid-n", "4", "--out", out}) == 2);
  CHECK(!fs::exists(out));
}

TEST_CASE("pi2: numeric column tracks the closed form and records the convention") {
  TempDir tmp;
  const std::string out = tmp.file("pi2.csv");
  CHECK(run({"pi2", "--t-min", "0", "--t-max", "1", "--t-count", "3", "--grid-n", "257",
             "--out", out}) == 0);
  const auto rows = parse_csv(slurp(out));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == std::vector<std::string>{"t", "pi2_numeric_paper", "pi2_analytic"});
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const double numeric = std::stod(rows[r][1]);
    const double analytic = std::stod(rows[r][2]);
    CHECK(numeric == doctest::Approx(analytic).epsilon(1e-6));
  }
  const auto side = nlohmann::json::parse(slurp(out + ".json"));
  CHECK(side["negativity_window"].get<double>() == doctest::Approx(0.5773502691896257));
}

TEST_CASE("pi2: as-printed numeric column is twice the closed form") {
  TempDir tmp;
  const std::string out = tmp.file("pi2x2.csv");
  CHECK(run({"pi2", "--convention", "as-printed", "--t-count", "1", "--t-max", "0",
             "--grid-n", "257", "--out", out}) == 0);
  const auto rows = parse_csv(slurp(out));
  REQUIRE(rows.size() == 2);  // single-row time grid
  CHECK(rows[0][1] == "pi2_numeric_as-printed");
  CHECK(std::stod(rows[1][1]) == doctest::Approx(2.0 * std::stod(rows[1][2])).epsilon(1e-6));
}

TEST_CASE("pi2: no negativity window below the threshold displacement") {
  TempDir tmp;
  const std::string out = tmp.file("pi2small.csv");
  CHECK(run({"pi2", "--x0", "0.5", "--t-count", "2", "--t-max", "1", "--grid-n", "257",
             "--out", out}) == 0);
  const auto side = nlohmann::json::parse(slurp(out + ".json"));
  CHECK(side["negativity_window"].is_null());
  const auto rows = parse_csv(slurp(out));
  for (std::size_t r = 1; r < rows.size(); ++r) CHECK(std::stod(rows[r][1]) > 0.0);
}

TEST_CASE("pi2: nonzero p0 drops the analytic column") {
  TempDir tmp;
  const std::string out = tmp.file("pi2p0.csv");
  CHECK(run({"pi2", "--p0", "0.3", "--t-count", "2", "--t-max", "1", "--grid-n", "257",
             "--out", out}) == 0);
  const auto rows = parse_csv(slurp(out));
  CHECK(rows[0] == std::vector<std::string>{"t", "pi2_numeric_paper"});
}

TEST_CASE("absdev: violation flags track the negativity window") {
  TempDir tmp;
  const std::string out = tmp.file("a.csv");
  CHECK(run({"absdev", "--t-min", "0", "--t-max", "1", "--t-count", "5", "--grid-n", "257",
             "--grid-window", "12", "--out", out}) == 0);
  const auto rows = parse_csv(slurp(out));
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == std::vector<std::string>{"t", "absdev", "d1", "d2", "violation_flag"});
  CHECK(rows[1][4] == "1");  // t = 0: curvature bound violated
  CHECK(rows[5][4] == "0");  // t = 1 > 1/sqrt(3)
  CHECK(std::stod(rows[1][3]) == doctest::Approx(-0.15270951417716433).epsilon(1e-6));
}

TEST_CASE("absdev: coherent states never violate the bound") {
  TempDir tmp;
  const std::string out = tmp.file("acoh.csv");
  CHECK(run({"absdev", "--state", "coherent", "--x0", "1", "--p0", "0.5", "--t-max", "1",
             "--t-count", "5", "--grid-n", "257", "--grid-window", "12", "--out", out}) == 0);
  const auto rows = parse_csv(slurp(out));
  for (std::size_t r = 1; r < rows.size(); ++r) CHECK(rows[r][4] == "0");
}

TEST_CASE("absdev: drifting state escaping the window exits with the guard code") {
  TempDir tmp;
  const std::string out = tmp.file("never.csv");
  CHECK(run({"absdev", "--state", "coherent", "--x0", "2", "--p0", "2", "--t-max", "3",
             "--t-count", "4", "--grid-n", "257", "--grid-window", "12", "--out", out}) == 3);
}

TEST_CASE("homodyne: record round-trips and reruns are byte-identical") {
  TempDir tmp;
  const std::string out_a = tmp.file("ha.json");
  const std::string out_b = tmp.file("hb.json");
  const std::vector<std::string> base = {"homodyne", "--samples", "2000",      "--resamples",
                                         "200",      "--bins",    "256",       "--grid-n",
                                         "129",      "--seed",    "5",         "--out"};
  auto with_out = [&](const std::string& o) {
    std::vector<std::string> args = base;
    args.push_back(o);
    return args;
  };
  CHECK(run(with_out(out_a)) == 0);
  CHECK(run(with_out(out_b)) == 0);
  CHECK(slurp(out_a) == slurp(out_b));
  const auto rec = nlohmann::json::parse(slurp(out_a));
  CHECK(rec["samples_per_angle"] == 2000);
  CHECK(rec["seed"] == 5);
  CHECK(rec["per_angle"].size() == 3);
  const std::string verdict = rec["verdict"].get<std::string>();
  CHECK((verdict == "classical-consistent" || verdict == "negativity-witnessed" ||
         verdict == "inconclusive"));
  CHECK(rec["curvature"]["ci_low"].get<double>() <= rec["curvature"]["at_zero"].get<double>());
}

TEST_CASE("homodyne: raw sample export") {
  TempDir tmp;
  const std::string out = tmp.file("h.json");
  const std::string raw = tmp.file("h_raw.csv");
  CHECK(run({"homodyne", "--samples", "500", "--resamples", "100", "--bins", "128", "--grid-n",
             "129", "--out", out, "--raw-out", raw}) == 0);
  const auto rows = parse_csv(slurp(raw));
  REQUIRE(rows.size() == 1 + 3 * 500);
  CHECK(rows[0] == std::vector<std::string>{"theta", "sample"});
}

TEST_CASE("wigner: even grid-n is bumped so the x=0 column exists") {
  TempDir tmp;
  const std::string out = tmp.file("we.csv");
  CHECK(run({"wigner", "--grid-n", "32", "--grid-window", "6", "--out", out}) == 0);
  const auto side = nlohmann::json::parse(slurp(out + ".json"));
  CHECK(side["grid"]["nx"] == 33);
  bool has_axis_column = false;
  const auto rows = parse_csv(slurp(out));
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (std::stod(rows[r][0]) == 0.0) has_axis_column = true;
  }
  CHECK(has_axis_column);
}

TEST_CASE("cli: unwritable output path exits with the i/o code") {
  CHECK(run({"wigner", "--grid-n", "33", "--grid-window", "6", "--out",
             "/nonexistent_dir_wigdyn/out.csv"}) == 4);
}

TEST_CASE("cli: bad invocations exit with the validation code") {
  CHECK(run({}) == 2);
  CHECK(run({"unknown-subcommand"}) == 2);
  CHECK(run({"wigner", "--no-such-flag"}) == 2);
  CHECK(run({"homodyne", "--confidence", "1.5", "--samples", "100", "--grid-n", "129"}) == 2);
}

TEST_CASE("cli: help exits cleanly") {
  CHECK(run({"--help"}) == 0);
  CHECK(run({"pi2", "--help"}) == 0);
}

TEST_CASE("pi2: optional x-resolved moment profile export") {
  TempDir tmp;
  const std::string out = tmp.file("pi2.csv");
  const std::string prof = tmp.file("profile.csv");
  CHECK(run({"pi2", "--t-count", "1", "--t-max", "0", "--grid-n", "257", "--out", out,
             "--profile-out", prof, "--profile-t", "0", "--profile-order", "2"}) == 0);
  const auto rows = parse_csv(slurp(prof));
  REQUIRE(rows.size() == 1 + 257);
  CHECK(rows[0] == std::vector<std::string>{"x", "pi_n"});
  // the x=0 row holds the headline moment
  bool found_center = false;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (std::stod(rows[r][0]) == 0.0) {
      found_center = true;
      CHECK(std::stod(rows[r][1]) == doctest::Approx(-0.07635475708858216).epsilon(1e-6));
    }
  }
  CHECK(found_center);
}

TEST_CASE("pi2 reruns are byte-identical") {
  TempDir tmp;
  const std::string a = tmp.file("p1.csv");
  const std::string b = tmp.file("p2.csv");
  CHECK(run({"pi2", "--t-count", "2", "--t-max", "1", "--grid-n", "257", "--out", a}) == 0);
  CHECK(run({"pi2", "--t-count", "2", "--t-max", "1", "--grid-n", "257", "--out", b}) == 0);
  CHECK(slurp(a) == slurp(b));
}
