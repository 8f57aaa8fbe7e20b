#include "segsim/segregation.hpp"

#include <string>

#include "segsim/errors.hpp"
#include "segsim/kernels.hpp"

namespace segsim {

std::string_view to_string(HappinessMode mode) noexcept {
  switch (mode) {
    case HappinessMode::Base:
      return "base";
    case HappinessMode::LiteralEq2:
      return "literal";
    case HappinessMode::Reconciled:
      return "reconciled";
  }
  return "unknown";
}

std::optional<HappinessMode> parse_happiness_mode(std::string_view text) noexcept {
  if (text == "base") return HappinessMode::Base;
  if (text == "literal" || text == "literal_eq2") return HappinessMode::LiteralEq2;
  if (text == "reconciled") return HappinessMode::Reconciled;
  return std::nullopt;
}

double iid(const World& world, const Agent& agent) {
  unsigned same = 0;
  unsigned other = 0;
  for (const Coord n : moore_neighbors(world, agent.position)) {
    const std::uint8_t code = world.occupant_code(world.index_of(n));
    if (code == 0) continue;
    if (code == static_cast<std::uint8_t>(agent.type)) {
      ++same;
    } else {
      ++other;
    }
  }
  return iid_from_counts(same, other);
}

AgentState happiness_rule(double iid, InfluenceTag influence, HappinessMode mode,
                          double pdtu) noexcept {
  bool happy = false;
  switch (mode) {
    case HappinessMode::Base:
      happy = iid <= pdtu;
      break;
    case HappinessMode::LiteralEq2:
      happy = iid >= pdtu && influence != InfluenceTag::NonCooperation;
      break;
    case HappinessMode::Reconciled:
      happy = influence == InfluenceTag::Cooperation ? iid >= pdtu : iid <= pdtu;
      break;
  }
  return happy ? AgentState::Happy : AgentState::Unhappy;
}

AgentState evaluate_happiness(const World& world, const Agent& agent, HappinessMode mode,
                              double pdtu) {
  if (!(pdtu >= 0.0 && pdtu <= 1.0)) throw UsageError("pdtu must lie in [0, 1]");
  return happiness_rule(iid(world, agent), world.influence(agent.position), mode, pdtu);
}

NeighborSnapshot::NeighborSnapshot(const World& world)
    : expat_(world.size()), native_(world.size()) {
  kernels::neighbor_counts(world.padded_occupancy(), world.width(), world.height(), expat_,
                           native_);
}

std::optional<Coord> select_destination(const World& world, const Agent& agent, Rng& rng) {
  const RegionType own =
      agent.type == AgentType::Expat ? RegionType::Expat : RegionType::Native;
  std::vector<RegionId> candidates;
  for (const Region& region : world.regions()) {
    if (region.region_type != own && region.region_type != RegionType::Neutral) continue;
    if (world.free_cells(region.id).empty()) continue;
    candidates.push_back(region.id);
  }
  if (candidates.empty()) return std::nullopt;
  const RegionId chosen = candidates[rng.below(candidates.size())];
  const auto free = world.free_cells(chosen);
  return world.coord_of(free[rng.below(free.size())]);
}

std::size_t movement_phase(World& world, std::span<Agent> agents, HappinessMode mode, double pdtu,
                           Rng& rng) {
  if (!(pdtu >= 0.0 && pdtu <= 1.0)) throw UsageError("pdtu must lie in [0, 1]");

  const NeighborSnapshot snapshot(world);
  std::vector<std::size_t> unhappy;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    Agent& a = agents[i];
    const std::size_t cell = world.index_of(a.position);
    a.state = happiness_rule(snapshot.iid(cell, a.type), world.influence(cell), mode, pdtu);
    if (a.state == AgentState::Unhappy) unhappy.push_back(i);
  }

  rng.shuffle(std::span<std::size_t>(unhappy));
  std::size_t moves = 0;
  for (const std::size_t i : unhappy) {
    Agent& a = agents[i];
    const auto dest = select_destination(world, a, rng);
    if (!dest) continue;
    world.relocate(a.position, *dest);
    a.position = *dest;
    ++moves;
  }
  return moves;
}

}  // namespace segsim
