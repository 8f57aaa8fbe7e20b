#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "segsim/lattice.hpp"
#include "segsim/rng.hpp"
#include "segsim/segregation.hpp"

namespace segsim {

/// Region partition of a width x height grid, row-major.
struct RegionRaster {
  int width = 0;
  int height = 0;
  std::size_t num_regions = 0;
  std::vector<RegionId> grid;

  friend bool operator==(const RegionRaster&, const RegionRaster&) = default;
};

/// Text format:
///
///     width height num_regions
///     <height lines of width space-separated region ids>
///
/// Throws ParseError (with a 1-based line) for malformed text and
/// ValidationError when an id is out of range or some region has no cell.
RegionRaster parse_region_raster(std::istream& in);
RegionRaster parse_region_raster(std::string_view text);

/// Canonical form: single spaces, LF endings, no trailing whitespace.
std::string emit_region_raster(const RegionRaster& raster);

/// Throws ValidationError on a structural problem.
void validate_raster(const RegionRaster& raster);

/// The k distinct seed cells generate_voronoi_map uses; site i seeds region i.
std::vector<Coord> voronoi_sites(int width, int height, std::size_t k, std::uint64_t seed);

/// Nearest-seed partition around k distinct seed cells drawn uniformly with
/// `seed`. Ties go to the lowest seed index. Throws UsageError unless
/// 1 <= k <= width*height.
RegionRaster generate_voronoi_map(int width, int height, std::size_t k, std::uint64_t seed);

World make_world(const RegionRaster& raster);

/// Largest-remainder apportionment of `total` by `weights`. Remainder ties go
/// to the lower index. The result sums exactly to `total`.
std::vector<std::size_t> apportion(std::span<const std::size_t> weights, std::size_t total);

/// Places `total` households. Each region receives its area-proportional quota
/// (recorded in Region::quota) on distinct uniformly drawn free cells; each
/// household is Expat with probability `expat_fraction`. Agent ids are
/// assigned in placement order. Throws CapacityError naming the region that
/// cannot hold its quota.
std::vector<Agent> seed_population(World& world, std::size_t total, Rng& rng,
                                   double expat_fraction = 0.5);

/// Region type from occupant counts: Native when (natives - expats)/n >=
/// threshold, Expat when (expats - natives)/n >= threshold, else Neutral.
/// Empty regions are Neutral.
RegionType classify_counts(std::size_t expats, std::size_t natives, double threshold) noexcept;

/// Recomputes every region's type from current occupancy.
void classify_regions(World& world, double segregation_threshold);

}  // namespace segsim
