#include "segsim/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "segsim/errors.hpp"
#include "segsim/kernels.hpp"

namespace segsim {

namespace {

std::string describe(Coord c) {
  return "(" + std::to_string(c.x) + ", " + std::to_string(c.y) + ")";
}

void require_in_bounds(const World& world, Coord c) {
  if (!world.contains(c)) throw UsageError("coordinate " + describe(c) + " is out of bounds");
}

void require_radius(double r) {
  if (!(r >= 0.0)) throw UsageError("radius must be non-negative");
}

// Largest h >= 0 with h^2 + dy^2 <= r^2, or -1 if row dy is outside the disc.
// The sqrt estimate is corrected against the exact comparison used everywhere else.
long long half_width(long long dy, double r) {
  const double r2 = r * r;
  const auto dy2 = static_cast<double>(dy * dy);
  if (dy2 > r2) return -1;
  auto h = static_cast<long long>(std::floor(std::sqrt(r2 - dy2)));
  while (static_cast<double>((h + 1) * (h + 1)) + dy2 <= r2) ++h;
  while (h > 0 && static_cast<double>(h * h) + dy2 > r2) --h;
  return h;
}

// Calls fn(y, x_begin, x_end) for each row span of the clipped disc, top to bottom.
template <class Fn>
void for_each_disc_row(const World& world, Coord c, double r, Fn&& fn) {
  const double reach = std::min(r, static_cast<double>(world.width() + world.height()));
  const auto ry = static_cast<long long>(std::floor(reach));
  const long long y0 = std::max<long long>(0, c.y - ry);
  const long long y1 = std::min<long long>(world.height() - 1, c.y + ry);
  for (long long y = y0; y <= y1; ++y) {
    const long long h = half_width(y - c.y, r);
    if (h < 0) continue;
    const long long x0 = std::max<long long>(0, c.x - h);
    const long long x1 = std::min<long long>(world.width() - 1, c.x + h);
    if (x0 > x1) continue;
    fn(static_cast<int>(y), static_cast<int>(x0), static_cast<int>(x1) + 1);
  }
}

}  // namespace

World::World(int width, int height, std::vector<RegionId> region_grid, std::size_t num_regions)
    : width_(width), height_(height), region_of_(std::move(region_grid)) {
  if (width < 1 || height < 1) throw UsageError("world dimensions must be positive");
  const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (region_of_.size() != n) throw UsageError("region grid size does not match dimensions");
  if (n >= kNone) throw UsageError("world too large");

  regions_.resize(num_regions);
  for (std::size_t r = 0; r < num_regions; ++r) regions_[r].id = static_cast<RegionId>(r);
  free_by_region_.resize(num_regions);
  free_slot_.assign(n, kNone);
  for (std::size_t i = 0; i < n; ++i) {
    const RegionId r = region_of_[i];
    if (r >= num_regions) throw UsageError("region id out of range");
    ++regions_[r].area;
    free_slot_[i] = static_cast<std::uint32_t>(free_by_region_[r].size());
    free_by_region_[r].push_back(static_cast<std::uint32_t>(i));
  }
  free_total_ = n;

  occupant_.assign(n, kNone);
  padded_.assign((static_cast<std::size_t>(width) + 2) * (static_cast<std::size_t>(height) + 2), 0);
  tags_.assign(n, static_cast<std::uint8_t>(InfluenceTag::Null));
  expiry_.assign(n, kNoExpiry);
}

Cell World::cell(Coord c) const {
  require_in_bounds(*this, c);
  const std::size_t i = index_of(c);
  return Cell{region_of_[i], occupant(c), influence(i), influence_expiry(c)};
}

std::optional<AgentId> World::occupant(Coord c) const noexcept {
  const std::uint32_t id = occupant_[index_of(c)];
  if (id == kNone) return std::nullopt;
  return id;
}

std::uint8_t World::occupant_code(std::size_t index) const noexcept {
  return padded_[padded_index(index)];
}

std::optional<Tick> World::influence_expiry(Coord c) const noexcept {
  const Tick t = expiry_[index_of(c)];
  if (t == kNoExpiry) return std::nullopt;
  return t;
}

void World::take_free(std::size_t index) {
  auto& list = free_by_region_[region_of_[index]];
  const std::uint32_t slot = free_slot_[index];
  const std::uint32_t last = list.back();
  list[slot] = last;
  free_slot_[last] = slot;
  list.pop_back();
  free_slot_[index] = kNone;
  --free_total_;
}

void World::give_free(std::size_t index) {
  auto& list = free_by_region_[region_of_[index]];
  free_slot_[index] = static_cast<std::uint32_t>(list.size());
  list.push_back(static_cast<std::uint32_t>(index));
  ++free_total_;
}

void World::place(AgentId id, AgentType type, Coord c) {
  require_in_bounds(*this, c);
  const std::size_t i = index_of(c);
  if (occupant_[i] != kNone) throw UsageError("cell " + describe(c) + " is already occupied");
  occupant_[i] = id;
  padded_[padded_index(i)] = static_cast<std::uint8_t>(type);
  take_free(i);
}

void World::vacate(Coord c) {
  require_in_bounds(*this, c);
  const std::size_t i = index_of(c);
  if (occupant_[i] == kNone) throw UsageError("cell " + describe(c) + " is empty");
  occupant_[i] = kNone;
  padded_[padded_index(i)] = 0;
  give_free(i);
}

void World::relocate(Coord from, Coord to) {
  require_in_bounds(*this, from);
  require_in_bounds(*this, to);
  const std::size_t src = index_of(from);
  if (occupant_[src] == kNone) throw UsageError("cell " + describe(from) + " is empty");
  const AgentId id = occupant_[src];
  const auto type = static_cast<AgentType>(padded_[padded_index(src)]);
  vacate(from);
  place(id, type, to);
}

std::vector<Coord> moore_neighbors(const World& world, Coord c) {
  require_in_bounds(world, c);
  std::vector<Coord> out;
  out.reserve(8);
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      if (dx == 0 && dy == 0) continue;
      const Coord n{c.x + dx, c.y + dy};
      if (world.contains(n)) out.push_back(n);
    }
  }
  return out;
}

std::vector<Coord> cells_within(const World& world, Coord c, double r) {
  require_in_bounds(world, c);
  require_radius(r);
  std::vector<Coord> out;
  for_each_disc_row(world, c, r, [&](int y, int x0, int x1) {
    for (int x = x0; x < x1; ++x) out.push_back({x, y});
  });
  return out;
}

void stamp_influence(World& world, Coord center, double r, InfluenceTag tag, Tick expires_at) {
  require_in_bounds(world, center);
  require_radius(r);
  if (tag == InfluenceTag::Null) throw UsageError("cannot stamp a Null influence");
  if (expires_at == kNoExpiry) throw UsageError("influence stamp needs a finite expiry");
  const auto w = static_cast<std::size_t>(world.width());
  for_each_disc_row(world, center, r, [&](int y, int x0, int x1) {
    const std::size_t row = static_cast<std::size_t>(y) * w;
    std::fill(world.tags_.begin() + static_cast<std::ptrdiff_t>(row + static_cast<std::size_t>(x0)),
              world.tags_.begin() + static_cast<std::ptrdiff_t>(row + static_cast<std::size_t>(x1)),
              static_cast<std::uint8_t>(tag));
    std::fill(world.expiry_.begin() + static_cast<std::ptrdiff_t>(row + static_cast<std::size_t>(x0)),
              world.expiry_.begin() + static_cast<std::ptrdiff_t>(row + static_cast<std::size_t>(x1)),
              expires_at);
  });
}

std::size_t expire_influence(World& world, Tick now) {
  return kernels::expire(world.tags_, world.expiry_, now, kNoExpiry);
}

}  // namespace segsim
