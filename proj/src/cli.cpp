#include "cppou/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cppou/error.hpp"
#include "cppou/numfmt.hpp"

namespace cppou {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string fmt(double v) { return format_double(v); }

// Header lines are "# key=value"; returns false for other lines.
bool split_header(const std::string& line, std::string& key, std::string& value) {
  if (line.size() < 2 || line[0] != '#') return false;
  const auto eq = line.find('=');
  if (eq == std::string::npos) return false;
  key = line.substr(1, eq - 1);
  key.erase(0, key.find_first_not_of(' '));
  value = line.substr(eq + 1);
  return true;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

json diagnostics_json(const EstimateDiagnostics& d) {
  return {{"clamped_nodes", d.clamped_nodes},
          {"total_nodes", d.total_nodes},
          {"clamp_fraction", d.clamp_fraction},
          {"max_imag_residue", d.max_imag_residue},
          {"warnings", d.warnings}};
}

std::string tau_label(double tau) { return fmt(tau); }

void write_text(const fs::path& file, const std::string& text) {
  if (file.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(file.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + file.parent_path().string() + "'");
  }
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoError("cannot write '" + file.string() + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + file.string() + "'");
}

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string opt_csv(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

json summary_json(const PointSummary& s) {
  return {{"x", s.x},           {"count", s.count}, {"mean", opt_json(s.mean)},
          {"sd", opt_json(s.sd)}, {"ks", opt_json(s.ks)}, {"max_abs", s.max_abs}};
}

}  // namespace

void write_estimate(std::ostream& out, const EstimateRecord& rec, const std::string& format) {
  const auto& e = rec.est;
  if (format == "json") {
    json rows = json::array();
    for (std::size_t l = 0; l < e.x.size(); ++l) {
      rows.push_back({{"x", e.x[l]}, {"khat", e.khat[l]}, {"sigma_hat", e.sigma_hat[l]}});
    }
    out << json_text({{"kind", "estimate"},
                      {"config_hash", rec.config_hash},
                      {"n", e.n},
                      {"h", e.h},
                      {"h_source", rec.h_source},
                      {"theta", e.theta},
                      {"input_seed", rec.input_seed},
                      {"unreliable", e.unreliable},
                      {"diagnostics", diagnostics_json(e.diagnostics)},
                      {"rows", rows}});
    return;
  }
  out << "# kind=estimate\n";
  out << "# config_hash=" << rec.config_hash << '\n';
  out << "# n=" << e.n << '\n';
  out << "# h=" << fmt(e.h) << '\n';
  out << "# h_source=" << rec.h_source << '\n';
  out << "# theta=" << fmt(e.theta) << '\n';
  out << "# input_seed=" << rec.input_seed << '\n';
  out << "# unreliable=" << (e.unreliable ? "true" : "false") << '\n';
  out << "# clamped_nodes=" << e.diagnostics.clamped_nodes << '\n';
  out << "# total_nodes=" << e.diagnostics.total_nodes << '\n';
  out << "# clamp_fraction=" << fmt(e.diagnostics.clamp_fraction) << '\n';
  out << "# max_imag_residue=" << fmt(e.diagnostics.max_imag_residue) << '\n';
  for (const auto& w : e.diagnostics.warnings) out << "# warning=" << w << '\n';
  out << "x,khat,sigma_hat\n";
  for (std::size_t l = 0; l < e.x.size(); ++l) {
    out << fmt(e.x[l]) << ',' << fmt(e.khat[l]) << ',' << fmt(e.sigma_hat[l]) << '\n';
  }
}

EstimateRecord read_estimate(std::istream& in) {
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  EstimateRecord rec;
  auto& e = rec.est;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw IoError("estimate file is empty");
  try {
    if (text[first] == '{') {
      const json j = json::parse(text);
      rec.config_hash = j.at("config_hash").get<std::string>();
      rec.h_source = j.at("h_source").get<std::string>();
      rec.input_seed = j.at("input_seed").get<std::uint64_t>();
      e.n = j.at("n").get<std::size_t>();
      e.h = j.at("h").get<double>();
      e.theta = j.at("theta").get<double>();
      e.unreliable = j.at("unreliable").get<bool>();
      const auto& d = j.at("diagnostics");
      e.diagnostics.clamped_nodes = d.at("clamped_nodes").get<std::size_t>();
      e.diagnostics.total_nodes = d.at("total_nodes").get<std::size_t>();
      e.diagnostics.clamp_fraction = d.at("clamp_fraction").get<double>();
      e.diagnostics.max_imag_residue = d.at("max_imag_residue").get<double>();
      e.diagnostics.warnings = d.at("warnings").get<std::vector<std::string>>();
      for (const auto& r : j.at("rows")) {
        e.x.push_back(r.at("x").get<double>());
        e.khat.push_back(r.at("khat").get<double>());
        e.sigma_hat.push_back(r.at("sigma_hat").get<double>());
      }
    } else {
      std::istringstream lines(text);
      std::string line, key, value;
      bool header_row = false;
      bool have_n = false, have_h = false;
      while (std::getline(lines, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (split_header(line, key, value)) {
          if (key == "config_hash") rec.config_hash = value;
          else if (key == "h_source") rec.h_source = value;
          else if (key == "input_seed") rec.input_seed = std::stoull(value);
          else if (key == "n") { e.n = std::stoull(value); have_n = true; }
          else if (key == "h") { e.h = parse_double(value); have_h = true; }
          else if (key == "theta") e.theta = parse_double(value);
          else if (key == "unreliable") e.unreliable = value == "true";
          else if (key == "clamped_nodes") e.diagnostics.clamped_nodes = std::stoull(value);
          else if (key == "total_nodes") e.diagnostics.total_nodes = std::stoull(value);
          else if (key == "clamp_fraction") e.diagnostics.clamp_fraction = parse_double(value);
          else if (key == "max_imag_residue") e.diagnostics.max_imag_residue = parse_double(value);
          else if (key == "warning") e.diagnostics.warnings.push_back(value);
          continue;
        }
        if (line[0] == '#') continue;
        if (line == "x,khat,sigma_hat") {
          header_row = true;
          continue;
        }
        const auto cells = split_csv(line);
        if (!header_row || cells.size() != 3) throw IoError("malformed estimate row '" + line + "'");
        e.x.push_back(parse_double(cells[0]));
        e.khat.push_back(parse_double(cells[1]));
        e.sigma_hat.push_back(parse_double(cells[2]));
      }
      if (!have_n || !have_h) throw IoError("estimate file lacks the n or h header");
    }
  } catch (const IoError&) {
    throw;
  } catch (const std::exception& ex) {
    throw IoError(std::string("cannot parse estimate file: ") + ex.what());
  }
  if (e.x.empty()) throw IoError("estimate file has no rows");
  if (e.n < 1 || !(e.h > 0.0)) throw IoError("estimate file has invalid n or h");
  return rec;
}

void write_band(std::ostream& out, const BandRecord& rec, const std::string& format) {
  const auto& e = rec.est;
  if (format == "json") {
    json bands = json::array();
    for (const auto& b : rec.bands) {
      bands.push_back({{"tau", b.tau},
                       {"q", b.q},
                       {"monotonized", b.monotonized},
                       {"unreliable", b.unreliable},
                       {"lower", b.lower},
                       {"upper", b.upper}});
    }
    out << json_text({{"kind", "band"},
                      {"config_hash", rec.config_hash},
                      {"n", e.n},
                      {"h", e.h},
                      {"x", e.x},
                      {"khat", e.khat},
                      {"sigma_hat", e.sigma_hat},
                      {"bands", bands}});
    return;
  }
  out << "# kind=band\n";
  out << "# config_hash=" << rec.config_hash << '\n';
  out << "# n=" << e.n << '\n';
  out << "# h=" << fmt(e.h) << '\n';
  out << "# unreliable=" << (e.unreliable ? "true" : "false") << '\n';
  for (const auto& b : rec.bands) out << "# q[" << tau_label(b.tau) << "]=" << fmt(b.q) << '\n';
  const bool mono = !rec.bands.empty() && rec.bands.front().monotonized;
  out << "# monotonized=" << (mono ? "true" : "false") << '\n';
  out << "x,khat,sigma_hat";
  for (const auto& b : rec.bands) {
    out << ",lower_" << tau_label(b.tau) << ",upper_" << tau_label(b.tau);
  }
  out << '\n';
  for (std::size_t l = 0; l < e.x.size(); ++l) {
    out << fmt(e.x[l]) << ',' << fmt(e.khat[l]) << ',' << fmt(e.sigma_hat[l]);
    for (const auto& b : rec.bands) out << ',' << fmt(b.lower[l]) << ',' << fmt(b.upper[l]);
    out << '\n';
  }
}

SamplePath cmd_simulate(const RunConfig& cfg) {
  PathConfig pc;
  pc.n = cfg.n;
  pc.delta = cfg.delta;
  pc.seed = cfg.seed;
  pc.burn_in_time = cfg.burn_in_time();
  pc.x0 = cfg.model.stationary_mean();
  return simulate_path(cfg.model, pc);
}

EstimateRecord cmd_estimate(const RunConfig& cfg, const SamplePath& path) {
  EstimateRecord rec;
  rec.config_hash = config_hash(cfg);
  rec.input_seed = path.seed;
  double h = 0.0;
  if (cfg.h) {
    h = *cfg.h;
    rec.h_source = "pinned";
  } else {
    h = cmd_select_bandwidth(cfg, path).chosen;
    rec.h_source = "selector";
  }
  // Stored unrearranged; monotonization applies when bands are built.
  rec.est = estimate(path.values, spectral_config(cfg, path.size(), h));
  return rec;
}

BandRecord cmd_band(const RunConfig& cfg, const EstimateRecord& rec) {
  BandRecord out;
  out.config_hash = config_hash(cfg);
  out.est = rec.est;
  for (double tau : cfg.taus) {
    auto band = confidence_band(rec.est, tau);
    if (cfg.monotonize) band = monotonize(std::move(band));
    out.bands.push_back(std::move(band));
  }
  return out;
}

BandwidthSelection cmd_select_bandwidth(const RunConfig& cfg, const SamplePath& path) {
  return select_bandwidth(path.values, spectral_config(cfg, path.size(), cfg.pilot), cfg.pilot, cfg.J,
                          cfg.kappa);
}

std::string study_basename(const RunConfig& cfg) {
  return std::string(to_string(cfg.kind)) + "_seed" + std::to_string(cfg.seed) + "_" + config_hash(cfg);
}

namespace {

struct StudyFiles {
  std::string csv;
  json summary;
  bool ok = true;
};

StudyFiles normality_files(const StudySpec& spec) {
  const auto res = run_normality_study(spec);
  StudyFiles f;
  std::ostringstream csv;
  csv << "replication,seed,h,x,khat,sigma_hat,stat\n";
  for (std::size_t r = 0; r < res.seeds.size(); ++r) {
    for (std::size_t p = 0; p < res.points.size(); ++p) {
      csv << r << ',' << res.seeds[r] << ',' << fmt(res.h[r]) << ',' << fmt(res.points[p]) << ','
          << fmt(res.khat[r][p]) << ',' << fmt(res.sigma_hat[r][p]) << ',' << opt_csv(res.stat[r][p])
          << '\n';
    }
  }
  f.csv = csv.str();
  json stud = json::array(), emp = json::array();
  for (const auto& s : res.studentized) stud.push_back(summary_json(s));
  for (const auto& s : res.empirical) emp.push_back(summary_json(s));
  f.summary = {{"studentized", stud}, {"empirical", emp}, {"degenerate", res.degenerate},
               {"failed", res.failed}};
  f.ok = !res.failed;
  return f;
}

StudyFiles coverage_files(const StudySpec& spec) {
  const auto res = run_coverage_study(spec);
  StudyFiles f;
  std::ostringstream csv;
  csv << "replication,seed,h,x,truth,khat,sigma_hat\n";
  for (std::size_t r = 0; r < res.seeds.size(); ++r) {
    for (std::size_t l = 0; l < res.grid.size(); ++l) {
      csv << r << ',' << res.seeds[r] << ',' << fmt(res.h[r]) << ',' << fmt(res.grid[l]) << ','
          << fmt(res.truth[l]) << ',' << fmt(res.khat[r][l]) << ',' << fmt(res.sigma_hat[r][l]) << '\n';
    }
  }
  f.csv = csv.str();
  json levels = json::array();
  for (const auto& lv : res.levels) {
    levels.push_back({{"tau", lv.tau},
                      {"q", lv.q},
                      {"joint", lv.joint},
                      {"pointwise", lv.pointwise},
                      {"mean_width", lv.mean_width},
                      {"joint_monotonized", opt_json(lv.joint_monotonized)}});
  }
  f.summary = {{"grid", res.grid}, {"truth", res.truth}, {"levels", levels},
               {"degenerate", res.degenerate}, {"failed", res.failed}};
  f.ok = !res.failed;
  return f;
}

StudyFiles bandwidth_files(const StudySpec& spec) {
  const auto res = run_bandwidth_diagnostic(spec);
  StudyFiles f;
  std::ostringstream csv;
  csv << "replication,seed,j,h,distance,error,chosen";
  for (double x : res.grid) csv << ",khat_" << fmt(x);
  csv << '\n';
  json chosen = json::array();
  for (std::size_t r = 0; r < res.curves.size(); ++r) {
    const auto& c = res.curves[r];
    for (std::size_t j = 0; j < c.candidates.size(); ++j) {
      csv << r << ',' << c.seed << ',' << j + 1 << ',' << fmt(c.candidates[j]) << ','
          << (j == 0 ? std::string() : fmt(c.distances[j - 1])) << ',' << fmt(c.errors[j]) << ','
          << (j == c.chosen_index ? 1 : 0);
      for (double v : c.estimates[j]) csv << ',' << fmt(v);
      csv << '\n';
    }
    chosen.push_back({{"replication", r}, {"h", c.candidates[c.chosen_index]}, {"fallback", c.fallback}});
  }
  f.csv = csv.str();
  f.summary = {{"grid", res.grid}, {"within_factor3", res.within_factor3}, {"chosen", chosen}};
  return f;
}

StudyFiles consistency_files(const StudySpec& spec) {
  const auto res = run_consistency_study(spec);
  StudyFiles f;
  std::ostringstream csv;
  csv << "replication,seed,h_small,error_small,h_large,error_large\n";
  for (std::size_t r = 0; r < res.seeds.size(); ++r) {
    csv << r << ',' << res.seeds[r] << ',' << fmt(res.h_small[r]) << ',' << fmt(res.error_small[r])
        << ',' << fmt(res.h_large[r]) << ',' << fmt(res.error_large[r]) << '\n';
  }
  f.csv = csv.str();
  f.summary = {{"n_small", res.n_small},           {"n_large", res.n_large},
               {"median_small", res.median_small}, {"median_large", res.median_large},
               {"fraction_improved", res.fraction_improved}};
  return f;
}

StudyFiles bias_files(const StudySpec& spec) {
  const auto res = run_bias_study(spec);
  StudyFiles f;
  std::ostringstream csv;
  csv << "replication,seed,error_sharp,error_naive\n";
  for (std::size_t r = 0; r < res.seeds.size(); ++r) {
    csv << r << ',' << res.seeds[r] << ',' << fmt(res.error_sharp[r]) << ',' << fmt(res.error_naive[r])
        << '\n';
  }
  f.csv = csv.str();
  f.summary = {{"h", res.h}, {"mean_error_sharp", res.mean_error_sharp},
               {"mean_error_naive", res.mean_error_naive}};
  return f;
}

StudyFiles oracle_files(const StudySpec& spec) {
  const auto rep = run_oracle_suite(spec);
  StudyFiles f;
  std::ostringstream csv;
  csv << "check,measured,threshold,passed\n";
  json checks = json::array();
  for (const auto& c : rep.checks) {
    csv << c.name << ',' << fmt(c.measured) << ',' << fmt(c.threshold) << ',' << (c.passed ? 1 : 0) << '\n';
    checks.push_back({{"name", c.name}, {"measured", c.measured}, {"threshold", c.threshold},
                      {"passed", c.passed}});
  }
  f.csv = csv.str();
  f.summary = {{"passed", rep.passed}, {"checks", checks}};
  f.ok = rep.passed;
  return f;
}

}  // namespace

StudyOutcome cmd_study(const RunConfig& cfg) {
  const auto spec = study_spec(cfg);
  StudyFiles files;
  switch (cfg.kind) {
    case StudyKind::normality: files = normality_files(spec); break;
    case StudyKind::coverage: files = coverage_files(spec); break;
    case StudyKind::bandwidth_diagnostic: files = bandwidth_files(spec); break;
    case StudyKind::consistency: files = consistency_files(spec); break;
    case StudyKind::bias: files = bias_files(spec); break;
    case StudyKind::oracle: files = oracle_files(spec); break;
  }
  json summary = {{"kind", std::string(to_string(cfg.kind))},
                  {"seed", cfg.seed},
                  {"replications", spec.replications},
                  {"config_hash", config_hash(cfg)},
                  {"config", config_to_json(cfg)},
                  {"result", files.summary}};
  summary["config"]["output"].erase("path");
  summary["config"]["study"].erase("threads");
  const fs::path dir(cfg.path);
  const std::string base = study_basename(cfg);
  StudyOutcome out;
  out.ok = files.ok;
  out.files = {dir / (base + ".csv"), dir / (base + ".json")};
  write_text(out.files[0], files.csv);
  write_text(out.files[1], json_text(summary));
  return out;
}

namespace {

SamplePath load_path(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open input '" + file.string() + "'");
  return read_path_csv(in);
}

EstimateRecord load_estimate(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open input '" + file.string() + "'");
  return read_estimate(in);
}

// Writes to `out_file`, "-" for stdout, or a default name inside output.path.
void emit(const RunConfig& cfg, const std::string& out_file, const std::string& default_name,
          const std::string& text, std::ostream& out) {
  if (out_file == "-") {
    out << text;
    return;
  }
  const fs::path target = out_file.empty() ? fs::path(cfg.path) / default_name : fs::path(out_file);
  write_text(target, text);
  out << target.string() << '\n';
}

std::string ext(const RunConfig& cfg) { return cfg.format == "json" ? ".json" : ".csv"; }

std::string selection_text(const BandwidthSelection& sel, const RunConfig& cfg) {
  if (cfg.format == "json") {
    return json_text({{"kind", "select-bandwidth"},
                      {"config_hash", config_hash(cfg)},
                      {"pilot", sel.pilot},
                      {"J", sel.J},
                      {"kappa", sel.kappa},
                      {"candidates", sel.candidates},
                      {"distances", sel.distances},
                      {"chosen", sel.chosen},
                      {"fallback", sel.fallback}});
  }
  std::ostringstream s;
  s << "# kind=select-bandwidth\n# config_hash=" << config_hash(cfg) << "\n# chosen=" << fmt(sel.chosen)
    << "\n# fallback=" << (sel.fallback ? "true" : "false") << "\nj,h,distance,chosen\n";
  for (std::size_t j = 0; j < sel.candidates.size(); ++j) {
    s << j + 1 << ',' << fmt(sel.candidates[j]) << ',' << (j == 0 ? std::string() : fmt(sel.distances[j - 1]))
      << ',' << (j == sel.chosen_index ? 1 : 0) << '\n';
  }
  return s.str();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral inference for compound-Poisson driven OU processes"};
  app.require_subcommand(1);

  std::string config_file;
  std::vector<std::string> sets;
  std::string out_file;
  std::string input;

  auto common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_file, "JSON config file");
    sub->add_option("--set", sets, "override a config key, e.g. --set spectral.h=0.5")->take_all();
  };

  auto* sim = app.add_subcommand("simulate", "simulate a stationary path");
  auto* est = app.add_subcommand("estimate", "estimate k on the design grid from a path file");
  auto* band = app.add_subcommand("band", "confidence bands from an estimate file");
  auto* sel = app.add_subcommand("select-bandwidth", "run the bandwidth selector on a path file");
  auto* study = app.add_subcommand("study", "Monte Carlo study");

  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n, reps;
  std::optional<double> h;
  std::optional<std::string> kind;
  std::optional<unsigned> threads;
  for (auto* sub : {sim, est, band, sel, study}) {
    common(sub);
    sub->add_option("-o,--out", out_file, "output file ('-' for stdout)");
  }
  for (auto* sub : {est, band, sel}) sub->add_option("-i,--input", input, "input file")->required();
  for (auto* sub : {sim, study}) {
    sub->add_option("--seed", seed, "sampling.seed");
    sub->add_option("--n", n, "sampling.n");
  }
  for (auto* sub : {est, study}) sub->add_option("--bandwidth", h, "spectral.h (pins the bandwidth)");
  study->add_option("--kind", kind, "normality|coverage|bandwidth-diagnostic|consistency|bias|oracle");
  study->add_option("--replications", reps, "study.replications");
  study->add_option("--threads", threads, "worker threads (0: all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    auto overrides = sets;
    if (seed) overrides.push_back("sampling.seed=" + std::to_string(*seed));
    if (n) overrides.push_back("sampling.n=" + std::to_string(*n));
    if (h) overrides.push_back("spectral.h=" + format_double(*h));
    if (kind) overrides.push_back("study.kind=\"" + *kind + "\"");
    if (reps) overrides.push_back("study.replications=" + std::to_string(*reps));
    if (threads) overrides.push_back("study.threads=" + std::to_string(*threads));
    std::optional<fs::path> cfile;
    if (!config_file.empty()) cfile = config_file;
    const RunConfig cfg = load_config(cfile, overrides);
    const std::string hash = config_hash(cfg);
    for (const auto& w : cfg.model.validate()) err << "warning: " << w << '\n';

    if (sim->parsed()) {
      std::ostringstream s;
      write_path_csv(s, cmd_simulate(cfg), model_hash(cfg.model));
      emit(cfg, out_file, "path_seed" + std::to_string(cfg.seed) + "_" + hash + ".csv", s.str(), out);
    } else if (est->parsed()) {
      std::ostringstream s;
      write_estimate(s, cmd_estimate(cfg, load_path(input)), cfg.format);
      emit(cfg, out_file, "estimate_" + hash + ext(cfg), s.str(), out);
    } else if (band->parsed()) {
      std::ostringstream s;
      write_band(s, cmd_band(cfg, load_estimate(input)), cfg.format);
      emit(cfg, out_file, "band_" + hash + ext(cfg), s.str(), out);
    } else if (sel->parsed()) {
      emit(cfg, out_file, "bandwidth_" + hash + ext(cfg),
           selection_text(cmd_select_bandwidth(cfg, load_path(input)), cfg), out);
    } else if (study->parsed()) {
      RunConfig scfg = cfg;
      if (!out_file.empty()) scfg.path = out_file;
      const auto res = cmd_study(scfg);
      for (const auto& f : res.files) out << f.string() << '\n';
      if (!res.ok) {
        err << "study reported a failure; see " << res.files.back().string() << '\n';
        return 2;
      }
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  } catch (const DomainError& e) {
    err << "invalid input: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace cppou
