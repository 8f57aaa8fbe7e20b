#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "segsim/lattice.hpp"
#include "segsim/rng.hpp"

namespace segsim {

using LeaderId = std::uint32_t;

enum class LeaderType : std::uint8_t { Cooperative, Fierce };

/// A virtual leader. Its id is its index in the generation's leader vector.
struct Leader {
  LeaderId id = 0;
  LeaderType type = LeaderType::Fierce;
  Coord position;
  bool alive = true;
};

/// Leaders sharing one cell. `members` are kept in ascending id order and
/// pruned as members die; pop() is the living population.
struct Nest {
  Coord site;
  std::vector<LeaderId> members;
  bool alive = true;

  std::size_t pop() const noexcept { return members.size(); }
};

struct FoundressConfig {
  std::size_t nol = 0;             ///< leaders per generation
  double fc = 0.1;                 ///< cooperative fraction of a fresh generation
  double pmutation = 0.01;         ///< per-offspring type-flip probability
  double cluster_radius = 10.0;    ///< cells
  double radius_competition = 50.0;  ///< cells; also the per-member influence radius
  double pif = 0.1;                ///< probability a fierce leader initiates a fight

  /// Throws ConfigError when a field is out of range.
  void validate() const;
};

/// Nest survival score: -2.88 + 4.28 n - 0.377 n^2. Throws UsageError for n = 0.
double surv(std::size_t nest_pop);

/// A new generation of exactly cfg.nol leaders placed uniformly over the
/// world. With survivors, each offspring copies a uniformly drawn survivor's
/// type and flips it with probability cfg.pmutation. Without survivors,
/// floor(fc * nol) are Cooperative and the rest Fierce.
std::vector<Leader> reproduce(std::span<const LeaderType> survivor_types,
                              const FoundressConfig& cfg, const World& world, Rng& rng);

/// Sequential clustering in the given turn order. On its turn a leader looks
/// at every cell within `radius` of its position that holds at least one
/// other leader, and joins the cell holding the most (ties drawn uniformly
/// with `tie_rng`, considered in row-major order). It stays when no such cell
/// exists or when its own cell is already among the most crowded.
/// Returns one nest per occupied cell, in row-major site order.
std::vector<Nest> cluster_in_order(std::span<Leader> leaders, std::span<const std::size_t> order,
                                   double radius, Rng& tie_rng);

/// cluster_in_order with a turn order drawn from `order_rng`.
std::vector<Nest> cluster(std::span<Leader> leaders, double radius, Rng& order_rng, Rng& tie_rng);

/// One round of fight turns inside a nest. Returns the surviving member ids
/// (also written back to nest.members).
std::vector<LeaderId> nest_fights(Nest& nest, std::span<Leader> leaders, double pif, Rng& rng);

/// Single greedy pass over nests in row-major site order: each living nest
/// is compared against every other living nest within `radius`; the lower
/// surv score is destroyed with its members, equal scores decided by a fair
/// coin from `tie_rng`. Returns the number destroyed.
std::size_t group_competition(std::span<Nest> nests, std::span<Leader> leaders, double radius,
                              Rng& tie_rng);

/// Each living nest, in row-major order, stamps a disc of radius
/// pop * radius_competition expiring at now + duration. The tag follows one
/// uniformly drawn member: Cooperation for a cooperative, else NonCooperation.
void emit_influence(std::span<const Nest> nests, std::span<const Leader> leaders, World& world,
                    double radius_competition, Tick now, Tick duration, Rng& rng);

struct GenerationSummary {
  std::size_t cooperative = 0;  ///< living leaders after the cycle
  std::size_t fierce = 0;
  std::size_t nests_formed = 0;
  std::size_t nests_destroyed = 0;

  friend bool operator==(const GenerationSummary&, const GenerationSummary&) = default;
};

/// Virtual-layer state carried across generations.
struct FoundressState {
  std::vector<LeaderType> survivor_types;
  std::vector<Leader> leaders;  ///< the latest generation, dead ones included
  std::vector<Nest> nests;      ///< the latest generation's nests after competition
};

/// reproduce -> cluster -> fights in every nest -> group competition ->
/// influence. `rng` drives the turn orders and stochastic outcomes,
/// `tie_rng` the tie-breaks.
GenerationSummary run_cycle(FoundressState& state, const FoundressConfig& cfg, World& world,
                            Tick now, Tick duration, Rng& rng, Rng& tie_rng);

}  // namespace segsim
