#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "commands.hpp"
#include "softdeco/kinematics.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string("\"") + SOFTDECO_CLI_PATH + "\" " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, p)) > 0;) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("softdeco_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }

  std::string write(const std::string& name, const std::string& text) const {
    const auto p = path / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  for (std::string line; std::getline(ss, line);) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  FAIL("no column " << name);
  return 0;
}

}  // namespace

TEST_CASE("gamma at rest") {
  TempDir tmp;
  const auto cfg = tmp.write("rest.json", R"({"geometry": {"l": 0, "tau": 1}, "cutoffs": {"omega_uv": 50},
                                              "quadrature": {"n_theta": 16, "n_phi": 32}})");
  const auto r = run("gamma --config " + cfg);
  CHECK(r.code == 0);
  const auto doc = json::parse(r.out);
  for (const char* v : {"dressed", "sub", "hard"}) CHECK(doc["variants"][v]["value"].get<double>() == 0.0);
  CHECK(doc["which_path"]["D"].get<double>() == 0.0);
  CHECK(doc["which_path"]["V_max"].get<double>() == 1.0);
  CHECK(doc["converged"].get<bool>());
}

TEST_CASE("gamma report") {
  TempDir tmp;
  const auto cfg = tmp.write("g.json", R"({"geometry": {"l": 0.05, "tau": 1}, "cutoffs": {"omega_uv": 40}})");
  const auto out = tmp.file("g_out.json");
  const auto r = run("gamma --config " + cfg + " --out " + out);
  CHECK(r.code == 0);
  const auto doc = json::parse(slurp(out));
  CHECK(doc["variants"]["dressed"]["closed_form_rel_dev"].get<double>() <= 1e-6);
  CHECK(doc["variants"]["hard"]["closed_form_rel_dev"].get<double>() <= 1e-6);
  CHECK(doc["which_path"]["from_variant"] == "dressed");
  CHECK(doc["closed_forms"]["zero_temperature"].get<bool>());
}

TEST_CASE("exit codes") {
  TempDir tmp;
  CHECK(run("gamma --config " + tmp.file("missing.json")).code == 1);
  CHECK(run("gamma --config " + tmp.write("u.json", R"({"geometri": {}})")).code == 1);
  CHECK(run("frobnicate").code == 1);
  const auto full = tmp.write("f.json", R"({"geometry": {"l": 0.1, "tau": 1}, "cutoffs": {"omega_uv": 5},
                                           "variants": ["full"]})");
  CHECK(run("gamma --config " + full).code == 1);

  const auto tight = tmp.write("t.json", R"({"geometry": {"l": 0.1, "tau": 1}, "cutoffs": {"omega_uv": 30},
      "variants": ["dressed"], "quadrature": {"n_theta": 8, "n_phi": 16, "rel_tol": 1e-18}})");
  CHECK(run("gamma --config " + tight).code == 2);

  CHECK(run("check --inject-fault metric-sign").code == 3);
}

TEST_CASE("environment override reaches the binary") {
  TempDir tmp;
  const auto full = tmp.write("f.json", R"({"geometry": {"l": 0.1, "tau": 1}, "cutoffs": {"omega_uv": 5},
      "variants": ["full"], "quadrature": {"n_theta": 16, "n_phi": 32}})");
  const std::string cmd = std::string("SOFTDECO_CUTOFFS_LAMBDA_IR=0.1 \"") + SOFTDECO_CLI_PATH + "\" gamma --config " +
                          full + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, p)) > 0;) out.append(buf, n);
  const int status = pclose(p);
  CHECK(WEXITSTATUS(status) == 0);
  CHECK(json::parse(out)["parameters"]["lambda_ir"].get<double>() == 0.1);
}

TEST_CASE("sweep output is deterministic") {
  TempDir tmp;
  const auto cfg = tmp.write("s.json", R"({"geometry": {"l": 0.02, "tau": 1}, "cutoffs": {"omega_uv": 10},
      "quadrature": {"n_theta": 16, "n_phi": 32},
      "sweep": {"parameter": "cutoffs.omega_uv", "start": 5, "stop": 500, "points": 7, "scale": "log"}})");
  const auto a = tmp.file("a.csv"), b = tmp.file("b.csv"), c = tmp.file("c.csv");
  CHECK(run("--threads 1 sweep --config " + cfg + " --out " + a).code == 0);
  CHECK(run("--threads 4 sweep --config " + cfg + " --out " + b).code == 0);
  CHECK(run("--threads 3 sweep --config " + cfg + " --out " + c).code == 0);
  const auto ta = slurp(a);
  CHECK(ta == slurp(b));
  CHECK(ta == slurp(c));

  const auto rows = csv(ta);
  REQUIRE(rows.size() == 8);
  CHECK(ta.substr(0, ta.find('\n')) == softdeco::app::kSweepHeader);
  const auto st = column(rows[0], "status");
  const auto full = column(rows[0], "gamma_full");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i][0] == "cutoffs.omega_uv");
    CHECK(rows[i][st] == "ok");
    CHECK(rows[i][full].empty());
  }
}

TEST_CASE("empty sweep") {
  TempDir tmp;
  const auto cfg = tmp.write("e.json", R"({"geometry": {"l": 0.02, "tau": 1}, "cutoffs": {"omega_uv": 10},
      "sweep": {"parameter": "geometry.l", "start": 0, "stop": 0.1, "points": 0}})");
  const auto out = tmp.file("e.csv");
  CHECK(run("sweep --config " + cfg + " --out " + out).code == 0);
  CHECK(slurp(out) == std::string(softdeco::app::kSweepHeader) + "\n");
}

TEST_CASE("sweep with invalid rows") {
  TempDir tmp;
  const auto cfg = tmp.write("i.json", R"({"geometry": {"l": 0.5, "tau": 1}, "cutoffs": {"omega_uv": 10},
      "quadrature": {"n_theta": 16, "n_phi": 32}, "variants": ["dressed"],
      "sweep": {"parameter": "geometry.tau", "start": 0.25, "stop": 1, "points": 4}})");
  const auto out = tmp.file("i.csv");
  CHECK(run("sweep --config " + cfg + " --out " + out).code == 1);
  const auto rows = csv(slurp(out));
  REQUIRE(rows.size() == 5);
  const auto st = column(rows[0], "status");
  const auto d = column(rows[0], "gamma_dressed");
  CHECK(rows[1][st] == "invalid");
  CHECK(rows[1][d].empty());
  CHECK(rows[4][st] == "ok");
  CHECK_FALSE(rows[4][d].empty());
}

TEST_CASE("dressed sweep grows like ln Omega") {
  TempDir tmp;
  const double v = 0.01;
  const auto cfg = tmp.write("d.json", R"({"geometry": {"l": 0.01, "tau": 1}, "cutoffs": {"omega_uv": 10},
      "variants": ["dressed"],
      "sweep": {"parameter": "cutoffs.omega_uv", "start": 1e3, "stop": 1e5, "points": 3, "scale": "log"}})");
  const auto out = tmp.file("d.csv");
  CHECK(run("sweep --config " + cfg + " --out " + out).code == 0);
  const auto rows = csv(slurp(out));
  REQUIRE(rows.size() == 4);
  const auto d = column(rows[0], "gamma_dressed");
  const double slope = (std::stod(rows[3][d]) - std::stod(rows[1][d])) / std::log(100.0);
  const double e2 = 4.0 * std::numbers::pi * softdeco::kFineStructure;
  const double want = 4.0 * e2 * v * v / (3.0 * std::numbers::pi * std::numbers::pi);
  CHECK(std::abs(slope / want - 1.0) <= 0.02);
}

TEST_CASE("sub sweep scales as l squared") {
  TempDir tmp;
  const auto cfg = tmp.write("l.json", R"({"geometry": {"l": 0.01, "tau": 1}, "cutoffs": {"omega_uv": 100},
      "variants": ["sub"], "quadrature": {"n_theta": 24, "n_phi": 48},
      "sweep": {"parameter": "geometry.l", "start": 0.005, "stop": 0.05, "points": 4}})");
  const auto out = tmp.file("l.csv");
  CHECK(run("sweep --config " + cfg + " --out " + out).code == 0);
  const auto rows = csv(slurp(out));
  REQUIRE(rows.size() == 5);
  const auto s = column(rows[0], "gamma_sub");
  const double first = std::stod(rows[1][s]) / std::pow(std::stod(rows[1][1]), 2);
  for (std::size_t i = 2; i < rows.size(); ++i) {
    const double ratio = std::stod(rows[i][s]) / std::pow(std::stod(rows[i][1]), 2);
    CHECK(std::abs(ratio / first - 1.0) <= 0.01);
  }
}

TEST_CASE("check subcommand") {
  const auto r = run("check");
  CHECK(r.code == 0);
  CHECK(r.out.find("11/11 checks passed") != std::string::npos);

  const auto bad = run("check --inject-fault metric-sign");
  CHECK(bad.code == 3);
  CHECK(bad.out.find("FAIL") != std::string::npos);
}

TEST_CASE("estimate-slit") {
  const auto r = run(std::string("estimate-slit --config ") + SOFTDECO_CONFIG_DIR + "/slit.json");
  CHECK(r.code == 0);
  const auto doc = json::parse(r.out);
  CHECK(doc["gamma_dressed_2slit"].get<double>() > 0.0);
  CHECK(std::abs(doc["dressed_functional"]["estimate_over_functional"].get<double>() - 1.0) <= 0.1);
  CHECK(doc["mirror"]["vdw_far"]["regime_ok"].get<bool>());
  CHECK_FALSE(doc["mirror"]["vdw_near"]["regime_ok"].get<bool>());
  CHECK(doc["mirror"]["rayleigh_rate"].get<double>() > 0.0);

  TempDir tmp;
  CHECK(run("estimate-slit --config " + tmp.write("n.json", R"({"geometry": {"l": 0.1, "tau": 1}})")).code == 1);
}
