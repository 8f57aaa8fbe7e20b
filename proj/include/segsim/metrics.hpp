#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include "segsim/lattice.hpp"
#include "segsim/segregation.hpp"

namespace segsim {

struct MetricsRow {
  Tick tick = 0;
  double desegregation_index = 0.0;
  double happiness_index = 0.0;
  std::size_t moves = 0;
  std::size_t leaders_cooperative = 0;
  std::size_t leaders_fierce = 0;
  std::size_t nests = 0;

  friend bool operator==(const MetricsRow&, const MetricsRow&) = default;
};

/// Mean iid over all agents (summed in agent order); 0 with no agents.
double desegregation_index(const World& world, std::span<const Agent> agents);

/// Fraction of agents Happy under `mode` in the current world; 0 with no agents.
double happiness_index(const World& world, std::span<const Agent> agents, HappinessMode mode,
                       double pdtu);

struct IndexMeans {
  double desegregation = 0.0;
  double happiness = 0.0;
};

/// Means of both indices over rows after the first `warmup` rows. Throws
/// UsageError when that window is empty.
IndexMeans aggregate_run(std::span<const MetricsRow> series, std::size_t warmup);

/// Fixed-point decimal with `places` digits, '.' separator, locale-independent.
std::string format_fixed(double value, int places = 6);

inline constexpr std::string_view kSeriesCsvHeader =
    "tick,desegregation_index,happiness_index,moves,leaders_cooperative,leaders_fierce,nests";

/// Header line plus one line per row, LF endings.
void write_series_csv(std::ostream& out, std::span<const MetricsRow> rows);

}  // namespace segsim
