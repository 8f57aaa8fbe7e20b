#include "segsim/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "segsim/config.hpp"
#include "segsim/errors.hpp"
#include "segsim/kernels.hpp"
#include "segsim/log.hpp"
#include "segsim/mapgen.hpp"
#include "segsim/sweep.hpp"

namespace segsim::cli {

namespace {

// Keys given as lists on the sweep command line or in a sweep config file.
constexpr std::string_view kGridKeys[] = {"nol", "fc", "ir", "pif"};

std::string flag_for(std::string_view key) {
  std::string flag = "--";
  for (const char c : key) flag += c == '_' ? '-' : c;
  return flag;
}

bool is_grid_key(std::string_view key) {
  return std::find(std::begin(kGridKeys), std::end(kGridKeys), key) != std::end(kGridKeys);
}

template <class T>
std::vector<T> parse_list(std::string_view key, const std::string& text) {
  std::vector<T> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    SimConfig probe;
    // Reuse the scalar parser for validation of each element.
    apply_setting(probe, key, item);
    if constexpr (std::is_same_v<T, std::size_t>) {
      out.push_back(probe.foundress.nol);
    } else if constexpr (std::is_same_v<T, Tick>) {
      out.push_back(probe.ir);
    } else {
      out.push_back(key == "fc" ? probe.foundress.fc : probe.foundress.pif);
    }
  }
  if (out.empty()) throw ConfigError("empty list for " + std::string(key));
  return out;
}

std::size_t parse_count(std::string_view key, std::string_view text) {
  std::size_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw ConfigError("invalid value '" + std::string(text) + "' for " + std::string(key));
  }
  return value;
}

// Writes `text` to `path`, or to `out` when path is empty or "-".
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  file << text;
  if (!file.flush()) throw std::runtime_error("failed writing '" + path + "'");
}

struct SettingFlags {
  std::map<std::string, std::string> values;

  void attach(CLI::App& cmd, bool grid_as_lists) {
    for (const std::string_view key : config_keys()) {
      auto& slot = values[std::string(key)];
      const bool list = grid_as_lists && is_grid_key(key);
      cmd.add_option(flag_for(key), slot,
                     list ? "comma-separated values of " + std::string(key)
                          : "override config key " + std::string(key));
    }
  }

  std::vector<std::pair<std::string, std::string>> given(const CLI::App& cmd) const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const std::string_view key : config_keys()) {
      if (cmd.count(flag_for(key)) > 0) out.emplace_back(std::string(key), values.at(std::string(key)));
    }
    return out;
  }
};

std::vector<std::pair<std::string, std::string>> read_config_pairs(const std::string& path) {
  if (path.empty()) return {};
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

void select_kernel(const std::string& name) {
  if (name == "auto") {
    kernels::reset_backend();
  } else if (name == "scalar") {
    kernels::set_backend(kernels::Backend::Scalar);
  } else if (name == "avx2") {
    kernels::set_backend(kernels::Backend::Avx2);
  } else {
    throw ConfigError("unknown kernel backend '" + name + "'");
  }
  log::debug("kernel backend: ", kernels::backend_name(kernels::active_backend()));
}

}  // namespace

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Segregation / desegregation simulator with an evolving leader layer", "segsim"};
  app.require_subcommand(1);
  std::string kernel = "auto";
  app.add_option("--kernel", kernel, "data-parallel kernel backend: auto | scalar | avx2");

  // genmap
  auto* genmap = app.add_subcommand("genmap", "write a synthetic Voronoi region raster");
  int width = 100;
  int height = 100;
  long long regions = 54;
  std::uint64_t map_seed = 7;
  std::string genmap_out;
  genmap->add_option("--width", width, "columns")->capture_default_str();
  genmap->add_option("--height", height, "rows")->capture_default_str();
  genmap->add_option("--regions", regions, "region count")->capture_default_str();
  genmap->add_option("--seed", map_seed, "generator seed")->capture_default_str();
  genmap->add_option("-o,--output", genmap_out, "output file (default stdout)");

  // run
  auto* run_cmd = app.add_subcommand("run", "simulate one configuration, write the per-tick CSV");
  std::string run_config;
  std::string run_out;
  SettingFlags run_flags;
  run_cmd->add_option("--config", run_config, "key=value config file (flags take precedence)");
  run_cmd->add_option("-o,--output", run_out, "output CSV (default stdout)");
  run_flags.attach(*run_cmd, false);

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "run the nol x fc x ir x pif grid with replicates");
  std::string sweep_config;
  std::string sweep_out;
  std::string summary_out;
  std::size_t replicates = 10;
  std::size_t warmup = 0;
  unsigned threads = 0;
  SettingFlags sweep_flags;
  sweep_cmd->add_option("--config", sweep_config, "key=value config file (flags take precedence)");
  sweep_cmd->add_option("-o,--output", sweep_out, "output CSV (default stdout)");
  sweep_cmd->add_option("--summary", summary_out, "also write per-cell mean/sd CSV here");
  sweep_cmd->add_option("--replicates", replicates, "replicates per grid cell")->capture_default_str();
  sweep_cmd->add_option("--warmup", warmup, "leading ticks excluded from run means")->capture_default_str();
  sweep_cmd->add_option("--threads", threads, "worker threads (0 = all cores)")->capture_default_str();
  sweep_flags.attach(*sweep_cmd, true);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    select_kernel(kernel);

    if (genmap->parsed()) {
      if (regions < 1) throw ConfigError("--regions must be at least 1");
      if (width < 1 || height < 1) throw ConfigError("--width and --height must be positive");
      const auto cells = static_cast<long long>(width) * height;
      if (regions > cells) throw ConfigError("--regions exceeds the number of cells");
      const RegionRaster raster =
          generate_voronoi_map(width, height, static_cast<std::size_t>(regions), map_seed);
      emit(genmap_out, emit_region_raster(raster), out);
      return kExitOk;
    }

    if (run_cmd->parsed()) {
      SimConfig cfg;
      for (const auto& [k, v] : read_config_pairs(run_config)) apply_setting(cfg, k, v);
      for (const auto& [k, v] : run_flags.given(*run_cmd)) apply_setting(cfg, k, v);
      const RunResult result = run(cfg);
      std::ostringstream csv;
      write_series_csv(csv, result.series);
      emit(run_out, csv.str(), out);
      log::info("run stopped after ", result.series.size(), " ticks (",
                to_string(result.stop_reason), ")");
      return kExitOk;
    }

    SweepSpec spec;
    spec.nol = {25, 50};
    spec.fc = {0.1, 0.2, 0.5};
    spec.ir = {5, 25, 50};
    spec.pif = {0.1, 0.2, 0.5};
    spec.replicates = replicates;
    spec.warmup = warmup;
    auto apply_sweep_setting = [&](const std::string& k, const std::string& v) {
      if (k == "nol") {
        spec.nol = parse_list<std::size_t>(k, v);
      } else if (k == "fc") {
        spec.fc = parse_list<double>(k, v);
      } else if (k == "ir") {
        spec.ir = parse_list<Tick>(k, v);
      } else if (k == "pif") {
        spec.pif = parse_list<double>(k, v);
      } else if (k == "replicates") {
        spec.replicates = parse_count(k, v);
      } else if (k == "warmup") {
        spec.warmup = parse_count(k, v);
      } else {
        apply_setting(spec.base, k, v);
      }
    };
    for (const auto& [k, v] : read_config_pairs(sweep_config)) apply_sweep_setting(k, v);
    if (sweep_cmd->count("--replicates") > 0) spec.replicates = replicates;
    if (sweep_cmd->count("--warmup") > 0) spec.warmup = warmup;
    for (const auto& [k, v] : sweep_flags.given(*sweep_cmd)) apply_sweep_setting(k, v);

    const SweepResult result = run_sweep(spec, threads);
    std::ostringstream csv;
    write_sweep_csv(csv, result);
    std::string summary_text;
    if (!summary_out.empty()) {
      std::ostringstream summary;
      write_sweep_summary_csv(summary, result);
      summary_text = summary.str();
    }
    emit(sweep_out, csv.str(), out);
    if (!summary_out.empty()) emit(summary_out, summary_text, out);
    log::info("sweep finished: ", result.rows.size(), " runs over ", result.summaries.size(),
              " cells");
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "segsim: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "segsim: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "segsim: map " << e.what() << '\n';
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "segsim: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CapacityError& e) {
    err << "segsim: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "segsim: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace segsim::cli
