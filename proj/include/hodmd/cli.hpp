#pragma once

#include "hodmd/calibrate.hpp"
#include "hodmd/hodmd.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hodmd::cli {

enum ExitCode : int { kSuccess = 0, kComputationFailure = 1, kUsageError = 2 };

/// Inclusive integer range `start:stop:step`.
struct IntRange {
  long start = 0;
  long stop = 0;
  long step = 1;
  std::vector<Eigen::Index> expand() const;
};

/// Throws `ValidationError` on malformed input.
IntRange parse_range(const std::string& text);
std::vector<double> parse_real_list(const std::string& text);

/// Horizon given as samples ("432") or a duration with suffix s/m/h/d ("3d").
struct HorizonSpec {
  std::optional<Eigen::Index> samples;
  std::optional<double> seconds;
  /// Samples at sampling interval `dt`; a duration must be a whole number of
  /// samples.
  Eigen::Index resolve(double dt) const;
};
HorizonSpec parse_horizon(const std::string& text);

/// Parsed settings shared by every subcommand.
struct RunConfig {
  std::string command;
  std::vector<std::filesystem::path> inputs;
  std::optional<std::filesystem::path> truth;
  std::filesystem::path out_dir = ".";
  HodmdOptions hodmd;
  double growth_limit = kDefaultGrowthLimit;
  std::optional<std::size_t> num_pairs;
  HorizonSpec horizon;
  std::optional<IntRange> sweep_d;
  std::optional<std::vector<double>> sweep_eps;
  std::optional<std::uint64_t> seed;

  /// Checks the numeric parameters before any work starts.
  void validate() const;
};

SynthSpec synth_spec_from_json(const std::string& json_text);

/// Entry point; `args` excludes the program name. Diagnostics go to `err`,
/// tables and summaries to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hodmd::cli
