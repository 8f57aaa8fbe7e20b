#include "segsim/mapgen.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include "segsim/errors.hpp"

namespace segsim {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::uint64_t parse_uint(std::string_view token, std::size_t line) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError(line, "expected a non-negative integer, got '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

void validate_raster(const RegionRaster& raster) {
  if (raster.width < 1 || raster.height < 1) throw ValidationError("raster dimensions must be positive");
  if (raster.num_regions < 1) throw ValidationError("raster needs at least one region");
  const auto cells = static_cast<std::size_t>(raster.width) * static_cast<std::size_t>(raster.height);
  if (raster.grid.size() != cells) throw ValidationError("raster grid size does not match dimensions");
  std::vector<bool> seen(raster.num_regions, false);
  for (std::size_t i = 0; i < cells; ++i) {
    const RegionId id = raster.grid[i];
    if (id >= raster.num_regions) {
      throw ValidationError("cell (" + std::to_string(i % static_cast<std::size_t>(raster.width)) +
                            ", " + std::to_string(i / static_cast<std::size_t>(raster.width)) +
                            ") has region id " + std::to_string(id) + " >= num_regions " +
                            std::to_string(raster.num_regions));
    }
    seen[id] = true;
  }
  for (std::size_t r = 0; r < raster.num_regions; ++r) {
    if (!seen[r]) throw ValidationError("region " + std::to_string(r) + " has no cells");
  }
}

RegionRaster parse_region_raster(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  ++line_no;
  const auto header = split_ws(line);
  if (header.size() != 3) throw ParseError(line_no, "header must be 'width height num_regions'");
  const std::uint64_t width = parse_uint(header[0], line_no);
  const std::uint64_t height = parse_uint(header[1], line_no);
  const std::uint64_t regions = parse_uint(header[2], line_no);
  if (width < 1 || height < 1 || width > 1'000'000 || height > 1'000'000 ||
      width * height > 100'000'000ULL) {
    throw ParseError(line_no, "unsupported raster dimensions");
  }
  if (regions < 1) throw ParseError(line_no, "num_regions must be at least 1");

  RegionRaster raster;
  raster.width = static_cast<int>(width);
  raster.height = static_cast<int>(height);
  raster.num_regions = static_cast<std::size_t>(regions);
  raster.grid.reserve(static_cast<std::size_t>(width * height));

  for (std::uint64_t row = 0; row < height; ++row) {
    ++line_no;
    if (!std::getline(in, line)) {
      throw ParseError(line_no, "expected " + std::to_string(height) + " rows, found " +
                                    std::to_string(row));
    }
    const auto tokens = split_ws(line);
    if (tokens.size() != width) {
      throw ParseError(line_no, "ragged row: expected " + std::to_string(width) +
                                    " ids, found " + std::to_string(tokens.size()));
    }
    for (const auto token : tokens) {
      const std::uint64_t id = parse_uint(token, line_no);
      if (id >= regions) {
        throw ValidationError("line " + std::to_string(line_no) + ": region id " +
                              std::to_string(id) + " >= num_regions " + std::to_string(regions));
      }
      raster.grid.push_back(static_cast<RegionId>(id));
    }
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (!split_ws(line).empty()) throw ParseError(line_no, "unexpected content after last row");
  }
  validate_raster(raster);
  return raster;
}

RegionRaster parse_region_raster(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_region_raster(in);
}

std::string emit_region_raster(const RegionRaster& raster) {
  std::string out;
  out += std::to_string(raster.width) + ' ' + std::to_string(raster.height) + ' ' +
         std::to_string(raster.num_regions) + '\n';
  const auto w = static_cast<std::size_t>(raster.width);
  for (std::size_t y = 0; y < static_cast<std::size_t>(raster.height); ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      if (x > 0) out += ' ';
      out += std::to_string(raster.grid[y * w + x]);
    }
    out += '\n';
  }
  return out;
}

std::vector<Coord> voronoi_sites(int width, int height, std::size_t k, std::uint64_t seed) {
  if (width < 1 || height < 1) throw UsageError("map dimensions must be positive");
  const auto cells = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (k < 1 || k > cells) {
    throw UsageError("region count must lie in [1, " + std::to_string(cells) + "]");
  }
  // Partial Fisher-Yates over the cell indices.
  Rng rng = Rng::stream(seed, "voronoi");
  std::vector<std::size_t> pool(cells);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  std::vector<Coord> sites;
  sites.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(cells - i));
    std::swap(pool[i], pool[j]);
    sites.push_back({static_cast<int>(pool[i] % static_cast<std::size_t>(width)),
                     static_cast<int>(pool[i] / static_cast<std::size_t>(width))});
  }
  return sites;
}

RegionRaster generate_voronoi_map(int width, int height, std::size_t k, std::uint64_t seed) {
  const std::vector<Coord> seeds = voronoi_sites(width, height, k, seed);
  const auto cells = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  RegionRaster raster{width, height, k, std::vector<RegionId>(cells)};
  for (std::size_t i = 0; i < cells; ++i) {
    const auto x = static_cast<long long>(i % static_cast<std::size_t>(width));
    const auto y = static_cast<long long>(i / static_cast<std::size_t>(width));
    std::size_t best = 0;
    long long best_d2 = -1;
    for (std::size_t s = 0; s < k; ++s) {
      const long long dx = x - seeds[s].x;
      const long long dy = y - seeds[s].y;
      const long long d2 = dx * dx + dy * dy;
      if (best_d2 < 0 || d2 < best_d2) {
        best_d2 = d2;
        best = s;
      }
    }
    raster.grid[i] = static_cast<RegionId>(best);
  }
  return raster;
}

World make_world(const RegionRaster& raster) {
  validate_raster(raster);
  return World(raster.width, raster.height, raster.grid, raster.num_regions);
}

std::vector<std::size_t> apportion(std::span<const std::size_t> weights, std::size_t total) {
  const std::size_t weight_sum = std::accumulate(weights.begin(), weights.end(), std::size_t{0});
  std::vector<std::size_t> quotas(weights.size(), 0);
  if (weights.empty() || total == 0) return quotas;
  if (weight_sum == 0) throw UsageError("cannot apportion over zero total weight");

  // Exact integer arithmetic: quota = floor(total*w/W), remainder = total*w mod W.
  std::vector<std::uint64_t> remainder(weights.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] != 0 && total > std::numeric_limits<std::uint64_t>::max() / weights[i]) {
      throw UsageError("apportionment overflow");
    }
    const std::uint64_t scaled = static_cast<std::uint64_t>(total) * weights[i];
    quotas[i] = static_cast<std::size_t>(scaled / weight_sum);
    remainder[i] = scaled % weight_sum;
    assigned += quotas[i];
  }
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t i = 0; assigned < total; ++i, ++assigned) ++quotas[order[i]];
  return quotas;
}

std::vector<Agent> seed_population(World& world, std::size_t total, Rng& rng,
                                   double expat_fraction) {
  if (!(expat_fraction >= 0.0 && expat_fraction <= 1.0)) {
    throw UsageError("expat fraction must lie in [0, 1]");
  }
  if (total > world.free_count()) {
    throw CapacityError("population " + std::to_string(total) + " exceeds the " +
                        std::to_string(world.free_count()) + " free cells of the map");
  }

  auto regions = world.regions();
  std::vector<std::size_t> areas;
  areas.reserve(regions.size());
  for (const Region& r : regions) areas.push_back(r.area);
  const auto quotas = apportion(areas, total);

  for (std::size_t r = 0; r < regions.size(); ++r) {
    const std::size_t room = world.free_cells(regions[r].id).size();
    if (quotas[r] > room) {
      throw CapacityError("region " + std::to_string(r) + " needs " + std::to_string(quotas[r]) +
                          " households but has " + std::to_string(room) + " free cells");
    }
  }

  std::vector<Agent> agents;
  agents.reserve(total);
  for (std::size_t r = 0; r < regions.size(); ++r) {
    regions[r].quota = quotas[r];
    for (std::size_t q = 0; q < quotas[r]; ++q) {
      const auto free = world.free_cells(regions[r].id);
      const Coord c = world.coord_of(free[rng.below(free.size())]);
      const AgentType type = rng.chance(expat_fraction) ? AgentType::Expat : AgentType::Native;
      const auto id = static_cast<AgentId>(agents.size());
      world.place(id, type, c);
      agents.push_back(Agent{id, type, c, AgentState::Happy});
    }
  }
  return agents;
}

RegionType classify_counts(std::size_t expats, std::size_t natives, double threshold) noexcept {
  const std::size_t n = expats + natives;
  if (n == 0) return RegionType::Neutral;
  const double total = static_cast<double>(n);
  const double native_margin =
      (static_cast<double>(natives) - static_cast<double>(expats)) / total;
  if (native_margin >= threshold) return RegionType::Native;
  if (-native_margin >= threshold) return RegionType::Expat;
  return RegionType::Neutral;
}

void classify_regions(World& world, double segregation_threshold) {
  if (!(segregation_threshold >= 0.0 && segregation_threshold <= 1.0)) {
    throw UsageError("segregation threshold must lie in [0, 1]");
  }
  auto regions = world.regions();
  std::vector<std::size_t> expats(regions.size(), 0);
  std::vector<std::size_t> natives(regions.size(), 0);
  for (std::size_t i = 0; i < world.size(); ++i) {
    const std::uint8_t code = world.occupant_code(i);
    if (code == static_cast<std::uint8_t>(AgentType::Expat)) ++expats[world.region_id(i)];
    if (code == static_cast<std::uint8_t>(AgentType::Native)) ++natives[world.region_id(i)];
  }
  for (std::size_t r = 0; r < regions.size(); ++r) {
    regions[r].region_type = classify_counts(expats[r], natives[r], segregation_threshold);
  }
}

}  // namespace segsim
