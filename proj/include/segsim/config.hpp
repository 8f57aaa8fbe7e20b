#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "segsim/engine.hpp"

namespace segsim {

/// Keys accepted in config files, named after SimConfig fields:
///
///   map                    path to a region-raster file (selects the file source)
///   map_width, map_height, map_regions, map_seed
///                          Voronoi map parameters (select the Voronoi source)
///   population, expat_fraction, pdtu, segregation_threshold, happiness_mode,
///   nol, fc, pmutation, cluster_radius, radius_competition, pif,
///   ir, influence_duration, max_ticks, equilibrium_window, seed
const std::vector<std::string_view>& config_keys();

/// Sets one field. Throws ConfigError for an unknown key or unparsable value.
void apply_setting(SimConfig& cfg, std::string_view key, std::string_view value);

/// Flat `key = value` text: one pair per line, '#' starts a comment, blank
/// lines ignored, surrounding whitespace trimmed. Throws ConfigError with the
/// line number on malformed lines.
std::vector<std::pair<std::string, std::string>> parse_config_text(std::string_view text);

/// Reads and applies a config file. Throws ConfigError if it cannot be read.
void apply_config_file(SimConfig& cfg, const std::string& path);

}  // namespace segsim
