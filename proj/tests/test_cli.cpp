#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cppou/cli.hpp"
#include "cppou/numfmt.hpp"

using namespace cppou;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "cppou");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> data_rows(const std::string& text) {
  std::vector<std::string> rows;
  std::istringstream in(text);
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    rows.push_back(line);
  }
  return rows;
}

std::string header_value(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  const std::string tag = "# " + key + "=";
  while (std::getline(in, line)) {
    if (line.rfind(tag, 0) == 0) return line.substr(tag.size());
  }
  return "";
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("cppou_cli_" + std::to_string(std::rand()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("simulate writes the reference path length and is reproducible") {
  TempDir d;
  auto r1 = cli({"simulate", "-o", d / "a.csv"});
  auto r2 = cli({"simulate", "-o", d / "b.csv"});
  REQUIRE(r1.code == 0);
  REQUIRE(r2.code == 0);
  const auto a = slurp(d / "a.csv");
  CHECK(a == slurp(d / "b.csv"));
  CHECK(data_rows(a).size() == 500);
  CHECK(header_value(a, "delta") == "1");
  CHECK(header_value(a, "model_hash") == model_hash(CppOuModel{}));
  auto r3 = cli({"simulate", "--seed", "3", "-o", d / "c.csv"});
  CHECK(slurp(d / "c.csv") != a);
}

TEST_CASE("default output names embed seed and config hash") {
  TempDir d;
  const auto r = cli({"simulate", "--set", "output.path=\"" + d.path.string() + "\""});
  REQUIRE(r.code == 0);
  const auto cfg = load_config(std::nullopt, {"output.path=\"" + d.path.string() + "\""});
  CHECK(r.out.find("path_seed20240501_" + config_hash(cfg) + ".csv") != std::string::npos);
}

TEST_CASE("estimate then band round trip") {
  TempDir d;
  REQUIRE(cli({"simulate", "-o", d / "p.csv"}).code == 0);
  REQUIRE(cli({"estimate", "-i", d / "p.csv", "--bandwidth", "0.55", "-o", d / "e.csv"}).code == 0);
  const auto est = slurp(d / "e.csv");
  CHECK(data_rows(est).size() == 11);
  CHECK(header_value(est, "h") == "0.55");
  CHECK(header_value(est, "h_source") == "pinned");
  CHECK(header_value(est, "n") == "500");

  REQUIRE(cli({"band", "-i", d / "e.csv", "--set", "spectral.h=0.55", "-o", d / "b.csv"}).code == 0);
  const auto band = slurp(d / "b.csv");

  // The in-process pipeline gives byte-identical bands.
  const auto cfg = load_config(std::nullopt, {"spectral.h=0.55"});
  std::ifstream pin(d / "p.csv");
  const auto rec = cmd_estimate(cfg, read_path_csv(pin));
  std::ostringstream direct;
  write_band(direct, cmd_band(cfg, rec), "csv");
  CHECK(direct.str() == band);

  // Widths are recomputable from the file alone.
  const double n = std::stod(header_value(band, "n"));
  const double h = parse_double(header_value(band, "h"));
  const double q = parse_double(header_value(band, "q[0.05]"));
  for (const auto& row : data_rows(band)) {
    std::vector<double> v;
    std::stringstream ss(row);
    std::string cell;
    while (std::getline(ss, cell, ',')) v.push_back(parse_double(cell));
    REQUIRE(v.size() == 9);
    const double width = v[6] - v[5];
    CHECK(width == doctest::Approx(2.0 * q * v[2] / (std::sqrt(n) * h)).epsilon(1e-13));
  }
}

TEST_CASE("json estimates round trip exactly") {
  TempDir d;
  REQUIRE(cli({"simulate", "-o", d / "p.csv"}).code == 0);
  REQUIRE(cli({"estimate", "-i", d / "p.csv", "--set", "output.format=json", "-o", d / "e.json"}).code == 0);
  std::ifstream in(d / "e.json");
  const auto rec = read_estimate(in);
  CHECK(rec.h_source == "selector");
  CHECK(rec.est.x.size() == 11);
  const auto cfg = load_config(std::nullopt, {});
  std::ifstream pin(d / "p.csv");
  const auto direct = cmd_estimate(cfg, read_path_csv(pin));
  CHECK(direct.est.khat == rec.est.khat);
  CHECK(direct.est.sigma_hat == rec.est.sigma_hat);
  CHECK(direct.est.h == rec.est.h);
}

TEST_CASE("select-bandwidth lists the candidates") {
  TempDir d;
  REQUIRE(cli({"simulate", "-o", d / "p.csv"}).code == 0);
  const auto r = cli({"select-bandwidth", "-i", d / "p.csv", "-o", "-"});
  REQUIRE(r.code == 0);
  CHECK(data_rows(r.out).size() == 20);
  const double chosen = parse_double(header_value(r.out, "chosen"));
  CHECK(chosen > 0.0);
  CHECK(chosen <= 1.0);
}

TEST_CASE("exit codes") {
  TempDir d;
  CHECK(cli({"estimate", "-i", d / "missing.csv"}).code == 3);
  CHECK(cli({"simulate", "--set", "model.bogus=1"}).code == 1);
  CHECK(cli({"simulate", "--set", "sampling.n=0"}).code == 1);
  CHECK(cli({"frobnicate"}).code == 1);
  CHECK(cli({"estimate"}).code == 1);  // --input is required
  CHECK(cli({"simulate", "--help"}).code == 0);
  std::ofstream(d / "garbage.csv") << "# delta=1\nvalue\nxyz\n";
  CHECK(cli({"estimate", "-i", d / "garbage.csv"}).code == 3);
  const auto w = cli({"simulate", "--set", "model.alpha=1.5", "-o", d / "w.csv"});
  CHECK(w.code == 0);
  CHECK(w.err.find("warning") != std::string::npos);
}

TEST_CASE("coverage study writes records and a summary") {
  TempDir d;
  const auto r = cli({"study", "--kind", "coverage", "--replications", "3", "--bandwidth", "0.5", "-o",
                      d.path.string()});
  REQUIRE(r.code == 0);
  const auto cfg = load_config(std::nullopt, {"study.kind=coverage", "study.replications=3", "spectral.h=0.5"});
  const auto base = study_basename(cfg);
  CHECK(base.rfind("coverage_seed20240501_", 0) == 0);
  const auto summary = nlohmann::json::parse(slurp(d / (base + ".json")));
  CHECK(summary["config_hash"] == config_hash(cfg));
  CHECK(summary["result"]["levels"].size() == 3);
  CHECK(summary["result"]["levels"][1]["pointwise"].size() == 11);
  CHECK(summary["result"]["levels"][1].contains("joint"));
  CHECK(data_rows(slurp(d / (base + ".csv"))).size() == 3 * 11);
}

TEST_CASE("normality study output is reproducible") {
  TempDir d;
  const std::vector<std::string> args = {"study", "--replications", "2", "-o", d.path.string()};
  REQUIRE(cli(args).code == 0);
  const auto cfg = load_config(std::nullopt, {"study.replications=2"});
  const auto base = study_basename(cfg);
  const auto first = slurp(d / (base + ".csv"));
  const auto first_json = slurp(d / (base + ".json"));
  REQUIRE(cli(args).code == 0);
  CHECK(slurp(d / (base + ".csv")) == first);
  CHECK(slurp(d / (base + ".json")) == first_json);
  CHECK(data_rows(first).size() == 2 * 3);
}

TEST_CASE("installed binary runs") {
  const char* bin = std::getenv("CPPOU_BIN");
  if (!bin) return;
  TempDir d;
  const std::string cmd = std::string(bin) + " simulate --n 50 -o " + (d / "p.csv") + " > /dev/null";
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(data_rows(slurp(d / "p.csv")).size() == 50);
  const std::string bad = std::string(bin) + " estimate -i " + (d / "nope.csv") + " 2> /dev/null";
  const int status = std::system(bad.c_str());
  CHECK(WEXITSTATUS(status) == 3);
}
