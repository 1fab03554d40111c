#pragma once

#include "hodmd/hodmd.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace hodmd {

/// ln(10^3): a mode whose envelope changes more than a thousand-fold over the
/// training window is treated as a transient.
inline const double kDefaultGrowthLimit = std::log(1e3);

/// Matching tolerance for conjugate partners, per-sample units.
inline constexpr double kConjugateTolerance = 1e-8;

struct ModePair {
  Eigen::Index first = 0;
  std::optional<Eigen::Index> second;  // empty for real (self-paired) or unmatched modes
  bool unmatched = false;             // complex mode with no partner
};

struct ExcludedMode {
  Eigen::Index index = 0;
  std::string reason;
};

struct RankedSpectrum {
  DmdSpectrum spectrum;
  Eigen::VectorXd contributions;     // one per mode, including excluded ones
  std::vector<Eigen::Index> order;   // kept modes, descending contribution
  std::vector<ModePair> pairs;       // kept modes, descending contribution
  std::vector<ExcludedMode> excluded;
  std::vector<std::string> warnings;

  /// Pair id of mode m, or -1 if it was excluded.
  long pair_of(Eigen::Index m) const;
};

/// |a| ||u|| sum_{k=0}^{K-1} exp(delta k dt) dt.
double integral_contribution(Complex amplitude, double mode_norm, double growth_rate, Eigen::Index snapshots,
                             double dt);

/// Mode m is a transient iff |delta_m| K dt > growth_limit.
bool is_transient(double growth_rate, Eigen::Index snapshots, double dt, double growth_limit);

struct TransientSplit {
  std::vector<Eigen::Index> kept;
  std::vector<ExcludedMode> excluded;
};
TransientSplit filter_transients(const DmdSpectrum& spectrum, double growth_limit = kDefaultGrowthLimit);

RankedSpectrum rank_and_pair(const DmdSpectrum& spectrum, double growth_limit = kDefaultGrowthLimit);

/// Top `num_pairs` pairs, both members of each. Throws `RangeError` when
/// num_pairs is 0 or exceeds the pair count.
DmdSpectrum truncate(const RankedSpectrum& ranked, std::size_t num_pairs);

/// Every kept mode (no elbow truncation).
DmdSpectrum kept_modes(const RankedSpectrum& ranked);

}  // namespace hodmd
