#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cppou/config.hpp"
#include "cppou/inference.hpp"

namespace cppou {

/// Contents of an estimate file: enough to rebuild bands without the sample.
struct EstimateRecord {
  std::string config_hash;
  std::string h_source;  // "pinned" or "selector"
  std::uint64_t input_seed = 0;
  KEstimate est;
};

struct BandRecord {
  std::string config_hash;
  KEstimate est;
  std::vector<ConfidenceBand> bands;  // one per tau
};

void write_estimate(std::ostream& out, const EstimateRecord& rec, const std::string& format);
/// Accepts either format; the JSON form is detected by its leading brace.
EstimateRecord read_estimate(std::istream& in);
void write_band(std::ostream& out, const BandRecord& rec, const std::string& format);

SamplePath cmd_simulate(const RunConfig& cfg);
EstimateRecord cmd_estimate(const RunConfig& cfg, const SamplePath& path);
BandRecord cmd_band(const RunConfig& cfg, const EstimateRecord& rec);
BandwidthSelection cmd_select_bandwidth(const RunConfig& cfg, const SamplePath& path);

struct StudyOutcome {
  std::vector<std::filesystem::path> files;
  bool ok = true;  // false when the study reported a failure
};
StudyOutcome cmd_study(const RunConfig& cfg);

/// Base name "<kind>_seed<seed>_<hash>" used for study outputs.
std::string study_basename(const RunConfig& cfg);

/// Full command-line entry point; returns the process exit status
/// (0 ok, 1 validation, 2 numerical or oracle failure, 3 I/O).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cppou
