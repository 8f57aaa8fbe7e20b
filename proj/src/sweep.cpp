#include "segsim/sweep.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "segsim/errors.hpp"

namespace segsim {

namespace {

void write_cell_prefix(std::ostream& out, const SweepCell& c) {
  out << c.nol << ',' << format_fixed(c.fc) << ',' << c.ir << ',' << format_fixed(c.pif) << ',';
}

}  // namespace

void SweepSpec::validate() const {
  if (nol.empty() || fc.empty() || ir.empty() || pif.empty()) {
    throw ConfigError("sweep parameter lists must be non-empty");
  }
  if (replicates < 1) throw ConfigError("replicates must be at least 1");
  if (warmup >= static_cast<std::size_t>(base.max_ticks)) {
    throw ConfigError("warmup must be smaller than max_ticks");
  }
}

std::vector<SweepCell> expand_cells(const SweepSpec& spec) {
  std::vector<SweepCell> cells;
  cells.reserve(spec.cell_count());
  for (const std::size_t nol : spec.nol) {
    for (const double fc : spec.fc) {
      for (const Tick ir : spec.ir) {
        for (const double pif : spec.pif) {
          cells.push_back(SweepCell{cells.size(), nol, fc, ir, pif});
        }
      }
    }
  }
  return cells;
}

SimConfig cell_config(const SweepSpec& spec, const SweepCell& cell, std::size_t replicate) {
  SimConfig cfg = spec.base;
  cfg.foundress.nol = cell.nol;
  cfg.foundress.fc = cell.fc;
  cfg.ir = cell.ir;
  cfg.foundress.pif = cell.pif;
  cfg.seed = replicate_seed(spec.base.seed, cell.index, replicate);
  return cfg;
}

SweepResult run_sweep(const SweepSpec& spec, unsigned threads) {
  spec.validate();
  const auto cells = expand_cells(spec);

  // Resolve the map once and check every configuration before any run starts.
  SweepSpec resolved = spec;
  const RegionRaster raster = load_map(spec.base.map);
  resolved.base.map = raster;
  const std::size_t capacity = raster.grid.size();
  for (const SweepCell& cell : cells) {
    const SimConfig cfg = cell_config(resolved, cell, 0);
    cfg.validate();
    if (cfg.population > capacity) {
      throw CapacityError("population " + std::to_string(cfg.population) + " exceeds the " +
                          std::to_string(capacity) + " cells of the map");
    }
  }

  const std::size_t jobs = cells.size() * spec.replicates;
  SweepResult result;
  result.rows.resize(jobs);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t job = next.fetch_add(1);
      if (job >= jobs) return;
      try {
        const SweepCell& cell = cells[job / spec.replicates];
        const std::size_t replicate = job % spec.replicates;
        const RunResult run_result = run(cell_config(resolved, cell, replicate));
        result.rows[job] = SweepRow{cell, replicate, aggregate_run(run_result.series, spec.warmup)};
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(jobs);
      }
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(jobs, 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  for (const SweepCell& cell : cells) {
    SweepSummary s{cell, spec.replicates, {}, {}};
    const auto first = result.rows.begin() + static_cast<std::ptrdiff_t>(cell.index * spec.replicates);
    const auto last = first + static_cast<std::ptrdiff_t>(spec.replicates);
    for (auto it = first; it != last; ++it) {
      s.mean.desegregation += it->means.desegregation;
      s.mean.happiness += it->means.happiness;
    }
    const auto n = static_cast<double>(spec.replicates);
    s.mean.desegregation /= n;
    s.mean.happiness /= n;
    if (spec.replicates > 1) {
      for (auto it = first; it != last; ++it) {
        s.sd.desegregation += std::pow(it->means.desegregation - s.mean.desegregation, 2);
        s.sd.happiness += std::pow(it->means.happiness - s.mean.happiness, 2);
      }
      s.sd.desegregation = std::sqrt(s.sd.desegregation / (n - 1.0));
      s.sd.happiness = std::sqrt(s.sd.happiness / (n - 1.0));
    }
    result.summaries.push_back(s);
  }
  return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << kSweepCsvHeader << '\n';
  std::size_t row = 0;
  for (const SweepSummary& s : result.summaries) {
    for (std::size_t k = 0; k < s.replicates; ++k, ++row) {
      const SweepRow& r = result.rows[row];
      write_cell_prefix(out, r.cell);
      out << r.replicate << ',' << format_fixed(r.means.desegregation) << ','
          << format_fixed(r.means.happiness) << '\n';
    }
    write_cell_prefix(out, s.cell);
    out << "mean," << format_fixed(s.mean.desegregation) << ',' << format_fixed(s.mean.happiness)
        << '\n';
  }
}

void write_sweep_summary_csv(std::ostream& out, const SweepResult& result) {
  out << kSweepSummaryCsvHeader << '\n';
  for (const SweepSummary& s : result.summaries) {
    write_cell_prefix(out, s.cell);
    out << s.replicates << ',' << format_fixed(s.mean.desegregation) << ','
        << format_fixed(s.sd.desegregation) << ',' << format_fixed(s.mean.happiness) << ','
        << format_fixed(s.sd.happiness) << '\n';
  }
}

}  // namespace segsim
