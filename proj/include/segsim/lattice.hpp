#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace segsim {

using AgentId = std::uint32_t;
using RegionId = std::uint32_t;
using Tick = std::int64_t;

/// Column `x`, row `y`. Cells are stored row-major.
struct Coord {
  int x = 0;
  int y = 0;

  friend constexpr bool operator==(const Coord&, const Coord&) = default;
};

/// Row-major ordering (y first, then x).
constexpr bool row_major_less(const Coord& a, const Coord& b) noexcept {
  return a.y != b.y ? a.y < b.y : a.x < b.x;
}

enum class InfluenceTag : std::uint8_t { Null = 0, Cooperation = 1, NonCooperation = 2 };

/// Household ethnic type. The numeric values double as occupancy codes (0 = empty).
enum class AgentType : std::uint8_t { Expat = 1, Native = 2 };

enum class RegionType : std::uint8_t { Expat, Native, Neutral };

constexpr AgentType other_type(AgentType t) noexcept {
  return t == AgentType::Expat ? AgentType::Native : AgentType::Expat;
}

struct Region {
  RegionId id = 0;
  std::size_t area = 0;
  RegionType region_type = RegionType::Neutral;
  std::size_t quota = 0;
};

/// Snapshot of one cell, assembled from the world's per-field arrays.
struct Cell {
  RegionId region_id = 0;
  std::optional<AgentId> occupant;
  InfluenceTag infected_with = InfluenceTag::Null;
  std::optional<Tick> influence_expires_at;
};

inline constexpr Tick kNoExpiry = std::numeric_limits<Tick>::max();

/// The cellular-automaton lattice.
///
/// Storage is structure-of-arrays so the data-parallel kernels can scan it
/// directly:
///   - occupancy codes live in a zero-padded (width+2) x (height+2) byte grid,
///     0 = empty, otherwise the occupant's AgentType value;
///   - influence is a byte tag per cell plus an expiry tick (kNoExpiry when Null).
/// Free cells are indexed per region so relocation can draw one in O(1).
class World {
 public:
  World(int width, int height, std::vector<RegionId> region_grid, std::size_t num_regions);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return region_of_.size(); }

  bool contains(Coord c) const noexcept {
    return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_;
  }
  std::size_t index_of(Coord c) const noexcept {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.x);
  }
  Coord coord_of(std::size_t index) const noexcept {
    return {static_cast<int>(index % static_cast<std::size_t>(width_)),
            static_cast<int>(index / static_cast<std::size_t>(width_))};
  }

  /// Throws UsageError when `c` is out of bounds.
  Cell cell(Coord c) const;

  RegionId region_id(std::size_t index) const noexcept { return region_of_[index]; }
  RegionId region_id(Coord c) const noexcept { return region_of_[index_of(c)]; }

  std::span<const Region> regions() const noexcept { return regions_; }
  std::span<Region> regions() noexcept { return regions_; }

  // Occupancy.
  std::optional<AgentId> occupant(Coord c) const noexcept;
  std::uint8_t occupant_code(std::size_t index) const noexcept;
  bool is_free(Coord c) const noexcept { return !occupant(c).has_value(); }

  /// Throws UsageError if `c` is out of bounds or already occupied.
  void place(AgentId id, AgentType type, Coord c);
  /// Throws UsageError if `c` is empty.
  void vacate(Coord c);
  /// Moves the occupant of `from` to the free cell `to`.
  void relocate(Coord from, Coord to);

  /// Indices of the free cells of region `r`, in an unspecified but deterministic order.
  std::span<const std::uint32_t> free_cells(RegionId r) const noexcept { return free_by_region_[r]; }
  std::size_t free_count() const noexcept { return free_total_; }
  std::size_t occupied_count() const noexcept { return size() - free_total_; }

  /// Row stride is width()+2; cell (x, y) sits at (y+1)*(width()+2) + (x+1).
  std::span<const std::uint8_t> padded_occupancy() const noexcept { return padded_; }

  // Influence.
  InfluenceTag influence(std::size_t index) const noexcept {
    return static_cast<InfluenceTag>(tags_[index]);
  }
  InfluenceTag influence(Coord c) const noexcept { return influence(index_of(c)); }
  std::optional<Tick> influence_expiry(Coord c) const noexcept;

 private:
  friend void stamp_influence(World&, Coord, double, InfluenceTag, Tick);
  friend std::size_t expire_influence(World&, Tick);

  std::size_t padded_index(std::size_t index) const noexcept {
    const auto w = static_cast<std::size_t>(width_);
    return (index / w + 1) * (w + 2) + (index % w) + 1;
  }
  void take_free(std::size_t index);
  void give_free(std::size_t index);

  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  int width_;
  int height_;
  std::vector<RegionId> region_of_;
  std::vector<Region> regions_;
  std::vector<std::uint32_t> occupant_;
  std::vector<std::uint8_t> padded_;
  std::vector<std::uint8_t> tags_;
  std::vector<Tick> expiry_;
  std::vector<std::vector<std::uint32_t>> free_by_region_;
  std::vector<std::uint32_t> free_slot_;
  std::size_t free_total_ = 0;
};

/// In-bounds Moore neighbours of `c` in row-major order. No wrap-around.
std::vector<Coord> moore_neighbors(const World& world, Coord c);

/// All in-bounds cells whose centre lies within Euclidean distance `r` of
/// `c`'s centre (inclusive, `c` itself included), row-major.
std::vector<Coord> cells_within(const World& world, Coord c, double r);

/// Tags every cell of cells_within(center, r) with `tag` until `expires_at`.
/// Later stamps overwrite earlier ones.
void stamp_influence(World& world, Coord center, double r, InfluenceTag tag, Tick expires_at);

/// Resets every cell whose influence expires at or before `now`. Returns the count reset.
std::size_t expire_influence(World& world, Tick now);

}  // namespace segsim
