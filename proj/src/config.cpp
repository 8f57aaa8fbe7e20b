#include "segsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "segsim/errors.hpp"

namespace segsim {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key));
  }
  return out;
}

VoronoiSpec& voronoi(SimConfig& cfg) {
  if (auto* v = std::get_if<VoronoiSpec>(&cfg.map)) return *v;
  cfg.map = VoronoiSpec{};
  return std::get<VoronoiSpec>(cfg.map);
}

}  // namespace

const std::vector<std::string_view>& config_keys() {
  static const std::vector<std::string_view> keys = {
      "map",        "map_width",       "map_height",         "map_regions",
      "map_seed",   "population",      "expat_fraction",     "pdtu",
      "segregation_threshold",         "happiness_mode",     "nol",
      "fc",         "pmutation",       "cluster_radius",     "radius_competition",
      "pif",        "ir",              "influence_duration", "max_ticks",
      "equilibrium_window",            "seed"};
  return keys;
}

void apply_setting(SimConfig& cfg, std::string_view key, std::string_view raw) {
  const std::string_view value = trim(raw);
  if (key == "map") {
    if (value.empty()) throw ConfigError("map path is empty");
    cfg.map = std::string(value);
  } else if (key == "map_width") {
    voronoi(cfg).width = parse_number<int>(key, value);
  } else if (key == "map_height") {
    voronoi(cfg).height = parse_number<int>(key, value);
  } else if (key == "map_regions") {
    voronoi(cfg).regions = parse_number<std::size_t>(key, value);
  } else if (key == "map_seed") {
    voronoi(cfg).seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "population") {
    cfg.population = parse_number<std::size_t>(key, value);
  } else if (key == "expat_fraction") {
    cfg.expat_fraction = parse_number<double>(key, value);
  } else if (key == "pdtu") {
    cfg.pdtu = parse_number<double>(key, value);
  } else if (key == "segregation_threshold") {
    cfg.segregation_threshold = parse_number<double>(key, value);
  } else if (key == "happiness_mode") {
    const auto mode = parse_happiness_mode(value);
    if (!mode) throw ConfigError("unknown happiness_mode '" + std::string(value) + "'");
    cfg.happiness_mode = *mode;
  } else if (key == "nol") {
    cfg.foundress.nol = parse_number<std::size_t>(key, value);
  } else if (key == "fc") {
    cfg.foundress.fc = parse_number<double>(key, value);
  } else if (key == "pmutation") {
    cfg.foundress.pmutation = parse_number<double>(key, value);
  } else if (key == "cluster_radius") {
    cfg.foundress.cluster_radius = parse_number<double>(key, value);
  } else if (key == "radius_competition") {
    cfg.foundress.radius_competition = parse_number<double>(key, value);
  } else if (key == "pif") {
    cfg.foundress.pif = parse_number<double>(key, value);
  } else if (key == "ir") {
    cfg.ir = parse_number<Tick>(key, value);
  } else if (key == "influence_duration") {
    cfg.influence_duration = parse_number<Tick>(key, value);
  } else if (key == "max_ticks") {
    cfg.max_ticks = parse_number<Tick>(key, value);
  } else if (key == "equilibrium_window") {
    cfg.equilibrium_window = parse_number<Tick>(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(key, value);
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

std::vector<std::pair<std::string, std::string>> parse_config_text(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    out.emplace_back(std::string(key), std::string(trim(line.substr(eq + 1))));
  }
  return out;
}

void apply_config_file(SimConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  for (const auto& [key, value] : parse_config_text(text.str())) apply_setting(cfg, key, value);
}

}  // namespace segsim
