#include "segsim/engine.hpp"

#include <fstream>
#include <sstream>

#include "segsim/errors.hpp"

namespace segsim {

namespace {

bool in_unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

bool cycle_due(const SimConfig& cfg, Tick t) {
  return cfg.foundress.nol > 0 && t % cfg.ir == 0;
}

}  // namespace

void SimConfig::validate() const {
  if (!in_unit_interval(pdtu)) throw ConfigError("pdtu must lie in [0, 1]");
  if (!in_unit_interval(segregation_threshold)) {
    throw ConfigError("segregation_threshold must lie in [0, 1]");
  }
  if (!in_unit_interval(expat_fraction)) throw ConfigError("expat_fraction must lie in [0, 1]");
  if (ir < 1) throw ConfigError("ir must be at least 1");
  if (influence_duration < 1) throw ConfigError("influence_duration must be at least 1");
  if (max_ticks < 1) throw ConfigError("max_ticks must be at least 1");
  if (equilibrium_window < 1) throw ConfigError("equilibrium_window must be at least 1");
  if (const auto* v = std::get_if<VoronoiSpec>(&map)) {
    if (v->width < 1 || v->height < 1) throw ConfigError("map dimensions must be positive");
    const auto cells = static_cast<std::size_t>(v->width) * static_cast<std::size_t>(v->height);
    if (v->regions < 1 || v->regions > cells) {
      throw ConfigError("region count must lie in [1, width*height]");
    }
  }
  foundress.validate();
}

RegionRaster load_map(const MapSource& source) {
  if (const auto* path = std::get_if<std::string>(&source)) {
    std::ifstream in(*path);
    if (!in) throw ConfigError("cannot open map file '" + *path + "'");
    return parse_region_raster(in);
  }
  if (const auto* raster = std::get_if<RegionRaster>(&source)) {
    validate_raster(*raster);
    return *raster;
  }
  const auto& v = std::get<VoronoiSpec>(source);
  return generate_voronoi_map(v.width, v.height, v.regions, v.seed);
}

std::string_view to_string(StopReason reason) noexcept {
  return reason == StopReason::Equilibrium ? "equilibrium" : "max_ticks";
}

RngStreams::RngStreams(std::uint64_t seed)
    : placement(Rng::stream(seed, "placement")),
      agent_order(Rng::stream(seed, "agent_order")),
      leader_cycle(Rng::stream(seed, "leader_cycle")),
      tie_breaks(Rng::stream(seed, "tie_breaks")) {}

SimState initialize(const SimConfig& cfg) {
  cfg.validate();
  World world = make_world(load_map(cfg.map));
  if (cfg.population > world.size()) {
    throw CapacityError("population " + std::to_string(cfg.population) + " exceeds the " +
                        std::to_string(world.size()) + " cells of the map");
  }
  SimState state{cfg, std::move(world), {}, {}, RngStreams(cfg.seed)};
  state.agents = seed_population(state.world, cfg.population, state.rng.placement, cfg.expat_fraction);
  for (const Agent& a : state.agents) {
    if (a.type == AgentType::Expat) {
      ++state.expat_count;
    } else {
      ++state.native_count;
    }
  }
  classify_regions(state.world, cfg.segregation_threshold);
  return state;
}

MetricsRow step(SimState& state) {
  if (state.stopped) throw UsageError("cannot step a stopped simulation");
  const SimConfig& cfg = state.cfg;
  const Tick t = state.tick + 1;

  if (cycle_due(cfg, t)) {
    run_cycle(state.leaders, cfg.foundress, state.world, t, cfg.influence_duration,
              state.rng.leader_cycle, state.rng.tie_breaks);
    state.influence_until = t + cfg.influence_duration;
  }
  expire_influence(state.world, t);
  classify_regions(state.world, cfg.segregation_threshold);
  const std::size_t moves = movement_phase(state.world, state.agents, cfg.happiness_mode, cfg.pdtu,
                                           state.rng.agent_order);

  MetricsRow row;
  row.tick = t;
  row.desegregation_index = desegregation_index(state.world, state.agents);
  row.happiness_index = happiness_index(state.world, state.agents, cfg.happiness_mode, cfg.pdtu);
  row.moves = moves;
  for (const Leader& l : state.leaders.leaders) {
    if (!l.alive) continue;
    if (l.type == LeaderType::Cooperative) {
      ++row.leaders_cooperative;
    } else {
      ++row.leaders_fierce;
    }
  }
  row.nests = state.leaders.nests.size();
  state.tick = t;
  return row;
}

WorldSummary summarize(const SimState& state) {
  WorldSummary s;
  s.agents = state.agents.size();
  for (const Agent& a : state.agents) {
    if (a.type == AgentType::Expat) {
      ++s.expats;
    } else {
      ++s.natives;
    }
  }
  for (const Region& r : state.world.regions()) {
    switch (r.region_type) {
      case RegionType::Expat:
        ++s.expat_regions;
        break;
      case RegionType::Native:
        ++s.native_regions;
        break;
      case RegionType::Neutral:
        ++s.neutral_regions;
        break;
    }
  }
  return s;
}

RunResult run(const SimConfig& cfg, const StepObserver& observer) {
  SimState state = initialize(cfg);
  RunResult result;
  result.series.reserve(static_cast<std::size_t>(cfg.max_ticks));
  Tick quiet = 0;

  while (state.tick < cfg.max_ticks) {
    const MetricsRow row = step(state);
    if (observer) observer(state, row);
    result.series.push_back(row);

    // A tick counts toward equilibrium only if no influence was active during it.
    const bool influence_free = row.tick >= state.influence_until;
    quiet = (row.moves == 0 && influence_free) ? quiet + 1 : 0;

    bool cycles_ahead = false;
    if (cfg.foundress.nol > 0) {
      const Tick next_cycle = (row.tick / cfg.ir + 1) * cfg.ir;
      cycles_ahead = next_cycle <= cfg.max_ticks;
    }
    if (quiet >= cfg.equilibrium_window && !cycles_ahead) {
      result.stop_reason = StopReason::Equilibrium;
      break;
    }
  }
  state.stopped = true;
  result.final_world = summarize(state);
  return result;
}

std::string check_invariants(const SimState& state) {
  const World& world = state.world;
  std::ostringstream problem;
  std::size_t expats = 0;
  std::size_t natives = 0;
  std::vector<bool> seen(world.size(), false);

  for (std::size_t i = 0; i < state.agents.size(); ++i) {
    const Agent& a = state.agents[i];
    if (a.id != i) {
      problem << "agent at slot " << i << " has id " << a.id;
      return problem.str();
    }
    if (!world.contains(a.position)) {
      problem << "agent " << a.id << " is off the map";
      return problem.str();
    }
    const std::size_t cell = world.index_of(a.position);
    if (seen[cell]) {
      problem << "two agents share cell (" << a.position.x << ", " << a.position.y << ")";
      return problem.str();
    }
    seen[cell] = true;
    const auto occupant = world.occupant(a.position);
    if (!occupant || *occupant != a.id) {
      problem << "cell of agent " << a.id << " does not list it as occupant";
      return problem.str();
    }
    if (world.occupant_code(cell) != static_cast<std::uint8_t>(a.type)) {
      problem << "occupancy code of agent " << a.id << " does not match its type";
      return problem.str();
    }
    (a.type == AgentType::Expat ? expats : natives)++;
  }
  if (expats != state.expat_count || natives != state.native_count) {
    problem << "type counts drifted: " << expats << "/" << natives << " vs " << state.expat_count
            << "/" << state.native_count;
    return problem.str();
  }
  if (world.occupied_count() != state.agents.size()) {
    problem << "world has " << world.occupied_count() << " occupied cells for "
            << state.agents.size() << " agents";
    return problem.str();
  }
  std::size_t listed_free = 0;
  for (const Region& r : world.regions()) {
    for (const std::uint32_t cell : world.free_cells(r.id)) {
      if (seen[cell] || world.region_id(cell) != r.id) {
        problem << "free list of region " << r.id << " holds an invalid cell";
        return problem.str();
      }
      ++listed_free;
    }
  }
  if (listed_free != world.size() - state.agents.size()) {
    problem << "free lists hold " << listed_free << " cells, expected "
            << world.size() - state.agents.size();
    return problem.str();
  }
  return {};
}

}  // namespace segsim
