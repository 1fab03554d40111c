#include "hodmd/mode_select.hpp"

#include "hodmd/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace hodmd {

double integral_contribution(Complex amplitude, double mode_norm, double growth_rate, Eigen::Index snapshots,
                             double dt) {
  const double weight = std::abs(amplitude) * mode_norm;
  if (weight == 0.0) return 0.0;
  double envelope = 0.0;
  for (Eigen::Index k = 0; k < snapshots; ++k) {
    envelope += std::exp(growth_rate * static_cast<double>(k) * dt);
  }
  const double value = weight * envelope * dt;
  return std::isfinite(value) ? value : std::numeric_limits<double>::max();
}

bool is_transient(double growth_rate, Eigen::Index snapshots, double dt, double growth_limit) {
  return std::abs(growth_rate) * static_cast<double>(snapshots) * dt > growth_limit;
}

TransientSplit filter_transients(const DmdSpectrum& spectrum, double growth_limit) {
  if (!(growth_limit > 0.0)) throw RangeError("growth limit must be > 0");
  TransientSplit split;
  const double window = static_cast<double>(spectrum.num_snapshots) * spectrum.dt;
  for (Eigen::Index m = 0; m < spectrum.size(); ++m) {
    if (is_transient(spectrum.growth_rates[m], spectrum.num_snapshots, spectrum.dt, growth_limit)) {
      split.excluded.push_back(
          {m, "transient: |delta| K dt = " + std::to_string(std::abs(spectrum.growth_rates[m]) * window) +
                  " > " + std::to_string(growth_limit)});
    } else {
      split.kept.push_back(m);
    }
  }
  return split;
}

long RankedSpectrum::pair_of(Eigen::Index m) const {
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    if (pairs[p].first == m || pairs[p].second == m) return static_cast<long>(p);
  }
  return -1;
}

RankedSpectrum rank_and_pair(const DmdSpectrum& spectrum, double growth_limit) {
  RankedSpectrum ranked;
  ranked.spectrum = spectrum;
  const Eigen::Index M = spectrum.size();

  ranked.contributions.resize(M);
  for (Eigen::Index m = 0; m < M; ++m) {
    ranked.contributions[m] = integral_contribution(spectrum.amplitudes[m], spectrum.modes.col(m).norm(),
                                                    spectrum.growth_rates[m], spectrum.num_snapshots, spectrum.dt);
  }

  auto split = filter_transients(spectrum, growth_limit);
  ranked.excluded = std::move(split.excluded);
  ranked.order = std::move(split.kept);
  std::stable_sort(ranked.order.begin(), ranked.order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return ranked.contributions[a] > ranked.contributions[b];
  });

  // Pairs are discovered in ranking order, so pair p is ranked by its
  // stronger member.
  const double dt = spectrum.dt;
  std::vector<bool> paired(static_cast<std::size_t>(M), false);
  for (const Eigen::Index m : ranked.order) {
    if (paired[static_cast<std::size_t>(m)]) continue;
    paired[static_cast<std::size_t>(m)] = true;
    const double w = spectrum.frequencies[m] * dt;
    const double g = spectrum.growth_rates[m] * dt;
    if (std::abs(w) <= kConjugateTolerance || std::abs(std::abs(w) - std::numbers::pi) <= kConjugateTolerance) {
      ranked.pairs.push_back({m, std::nullopt, false});
      continue;
    }
    std::optional<Eigen::Index> partner;
    double best = std::numeric_limits<double>::infinity();
    for (const Eigen::Index c : ranked.order) {
      if (paired[static_cast<std::size_t>(c)]) continue;
      const double dw = std::abs(spectrum.frequencies[c] * dt + w);
      const double dg = std::abs(spectrum.growth_rates[c] * dt - g);
      if (dw <= kConjugateTolerance && dg <= kConjugateTolerance && dw + dg < best) {
        best = dw + dg;
        partner = c;
      }
    }
    if (partner) {
      paired[static_cast<std::size_t>(*partner)] = true;
      ranked.pairs.push_back({m, partner, false});
    } else {
      ranked.pairs.push_back({m, std::nullopt, true});
      ranked.warnings.push_back("mode " + std::to_string(m) + " has no conjugate partner");
    }
  }
  return ranked;
}

DmdSpectrum truncate(const RankedSpectrum& ranked, std::size_t num_pairs) {
  if (num_pairs < 1 || num_pairs > ranked.pairs.size()) {
    throw RangeError("num_pairs=" + std::to_string(num_pairs) + " outside [1, " +
                     std::to_string(ranked.pairs.size()) + "]");
  }
  std::vector<Eigen::Index> indices;
  for (std::size_t p = 0; p < num_pairs; ++p) {
    indices.push_back(ranked.pairs[p].first);
    if (ranked.pairs[p].second) indices.push_back(*ranked.pairs[p].second);
  }
  return ranked.spectrum.select(indices);
}

DmdSpectrum kept_modes(const RankedSpectrum& ranked) {
  if (ranked.pairs.empty()) return ranked.spectrum.select({});
  return truncate(ranked, ranked.pairs.size());
}

}  // namespace hodmd
