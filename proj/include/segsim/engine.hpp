#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "segsim/foundress.hpp"
#include "segsim/lattice.hpp"
#include "segsim/mapgen.hpp"
#include "segsim/metrics.hpp"
#include "segsim/rng.hpp"
#include "segsim/segregation.hpp"

namespace segsim {

/// Synthetic map: generate_voronoi_map(width, height, regions, seed).
struct VoronoiSpec {
  int width = 100;
  int height = 100;
  std::size_t regions = 54;
  std::uint64_t seed = 7;

  friend bool operator==(const VoronoiSpec&, const VoronoiSpec&) = default;
};

/// Path of a region-raster file, an in-memory raster, or a Voronoi spec.
using MapSource = std::variant<std::string, RegionRaster, VoronoiSpec>;

struct SimConfig {
  MapSource map = VoronoiSpec{};
  std::size_t population = 5000;
  double expat_fraction = 0.5;
  double pdtu = 0.4;
  double segregation_threshold = 0.4;
  HappinessMode happiness_mode = HappinessMode::Reconciled;
  FoundressConfig foundress;
  Tick ir = 5;
  Tick influence_duration = 1;
  Tick max_ticks = 100;
  Tick equilibrium_window = 3;
  std::uint64_t seed = 1;

  /// Range checks that need no map. Throws ConfigError.
  void validate() const;
};

/// Loads, parses or generates the raster named by `source`.
/// Throws ConfigError when a file cannot be read, ParseError/ValidationError on bad content.
RegionRaster load_map(const MapSource& source);

enum class StopReason { MaxTicks, Equilibrium };

std::string_view to_string(StopReason reason) noexcept;

/// Named random substreams, all derived from SimConfig::seed with Rng::stream:
///   "placement"    initial household placement and types
///   "agent_order"  relocation order and destination draws
///   "leader_cycle" reproduction, clustering order, fights, influence speakers
///   "tie_breaks"   clustering and competition ties
struct RngStreams {
  explicit RngStreams(std::uint64_t seed);

  Rng placement;
  Rng agent_order;
  Rng leader_cycle;
  Rng tie_breaks;
};

struct SimState {
  SimConfig cfg;
  World world;
  std::vector<Agent> agents;
  FoundressState leaders;
  RngStreams rng;
  Tick tick = 0;  ///< last completed tick
  bool stopped = false;
  std::size_t expat_count = 0;
  std::size_t native_count = 0;
  Tick influence_until = 0;  ///< first tick at which all stamped influence has expired
};

/// Builds the world, seeds and classifies the population. No leader cycle
/// has run and all influence is Null.
SimState initialize(const SimConfig& cfg);

/// Advances one tick t = state.tick + 1:
///   1. leader cycle when nol > 0 and t % ir == 0 (influence expires at t + influence_duration)
///   2. expire influence due at t
///   3. reclassify regions
///   4. movement phase
///   5. record metrics
/// Throws UsageError if the state is stopped.
MetricsRow step(SimState& state);

struct WorldSummary {
  std::size_t agents = 0;
  std::size_t expats = 0;
  std::size_t natives = 0;
  std::size_t expat_regions = 0;
  std::size_t native_regions = 0;
  std::size_t neutral_regions = 0;

  friend bool operator==(const WorldSummary&, const WorldSummary&) = default;
};

WorldSummary summarize(const SimState& state);

struct RunResult {
  std::vector<MetricsRow> series;
  WorldSummary final_world;
  StopReason stop_reason = StopReason::MaxTicks;

  friend bool operator==(const RunResult&, const RunResult&) = default;
};

/// Called after every step.
using StepObserver = std::function<void(const SimState&, const MetricsRow&)>;

/// Steps until max_ticks, or until `equilibrium_window` consecutive
/// influence-free ticks have zero moves and no leader cycle can fire again
/// before max_ticks.
RunResult run(const SimConfig& cfg, const StepObserver& observer = {});

/// Returns an empty string when every structural invariant holds, otherwise
/// a description of the first violation: occupancy is a bijection between
/// agents and occupied cells, per-type counts match the initial counts, and
/// free-cell indexes agree with occupancy.
std::string check_invariants(const SimState& state);

}  // namespace segsim
