#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "segsim/lattice.hpp"
#include "segsim/rng.hpp"

namespace segsim {

enum class AgentState : std::uint8_t { Happy, Unhappy };

/// A household. `position`'s cell holds `id` as its occupant.
struct Agent {
  AgentId id = 0;
  AgentType type = AgentType::Expat;
  Coord position;
  AgentState state = AgentState::Happy;
};

/// How influence combines with the unlike-neighbour ratio.
///   Base:       Unhappy iff iid > pdtu; influence ignored.
///   LiteralEq2: Happy iff iid >= pdtu and the cell reads Cooperation or Null.
///   Reconciled: under Cooperation, Happy iff iid >= pdtu (diversity-seeking);
///               under NonCooperation or Null, Happy iff iid <= pdtu.
enum class HappinessMode : std::uint8_t { Base, LiteralEq2, Reconciled };

std::string_view to_string(HappinessMode mode) noexcept;
/// Accepts "base", "literal" / "literal_eq2", "reconciled".
std::optional<HappinessMode> parse_happiness_mode(std::string_view text) noexcept;

/// Unlike-neighbour ratio from counts of occupied same-type and other-type neighbours.
inline double iid_from_counts(unsigned same, unsigned other) noexcept {
  const unsigned occupied = same + other;
  return occupied == 0 ? 0.0 : static_cast<double>(other) / static_cast<double>(occupied);
}

/// Fraction of `agent`'s occupied Moore neighbours holding the other type (0 if none).
double iid(const World& world, const Agent& agent);

/// The happiness rule on precomputed inputs.
AgentState happiness_rule(double iid, InfluenceTag influence, HappinessMode mode,
                          double pdtu) noexcept;

/// Throws UsageError if pdtu is outside [0, 1].
AgentState evaluate_happiness(const World& world, const Agent& agent, HappinessMode mode,
                              double pdtu);

/// Per-cell Moore neighbour counts by type, computed once over the whole grid.
class NeighborSnapshot {
 public:
  explicit NeighborSnapshot(const World& world);

  unsigned expat(std::size_t index) const noexcept { return expat_[index]; }
  unsigned native(std::size_t index) const noexcept { return native_[index]; }
  double iid(std::size_t index, AgentType type) const noexcept {
    return type == AgentType::Expat ? iid_from_counts(expat_[index], native_[index])
                                    : iid_from_counts(native_[index], expat_[index]);
  }

 private:
  std::vector<std::uint8_t> expat_;
  std::vector<std::uint8_t> native_;
};

/// A uniformly drawn free cell of a uniformly drawn region whose type is the
/// agent's own or Neutral; nullopt when no such region has room.
std::optional<Coord> select_destination(const World& world, const Agent& agent, Rng& rng);

/// One relocation round. Happiness of every agent is evaluated against the
/// occupancy and influence at entry (stored in Agent::state). Unhappy agents
/// then move in a seeded random permutation, at most once each, seeing the
/// moves made before them. Returns the number of moves.
std::size_t movement_phase(World& world, std::span<Agent> agents, HappinessMode mode, double pdtu,
                           Rng& rng);

}  // namespace segsim
