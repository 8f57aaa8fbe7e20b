#pragma once

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "segsim/engine.hpp"

namespace segsim {

/// Cross product nol x fc x ir x pif (in that nesting order, last varying
/// fastest) times `replicates`, each run from `base` with those four fields
/// overridden.
struct SweepSpec {
  std::vector<std::size_t> nol;
  std::vector<double> fc;
  std::vector<Tick> ir;
  std::vector<double> pif;
  std::size_t replicates = 10;
  std::size_t warmup = 0;  ///< leading rows excluded from each run's means
  SimConfig base;

  /// Throws ConfigError on an empty list or zero replicates.
  void validate() const;
  std::size_t cell_count() const noexcept { return nol.size() * fc.size() * ir.size() * pif.size(); }
};

/// Seed of replicate `replicate` of cell `cell`:
///   mix64(mix64(base_seed + mix64(cell)) + replicate)
/// so any subset of a sweep reproduces the same rows.
constexpr std::uint64_t replicate_seed(std::uint64_t base_seed, std::uint64_t cell,
                                       std::uint64_t replicate) noexcept {
  return mix64(mix64(base_seed + mix64(cell)) + replicate);
}

struct SweepCell {
  std::size_t index = 0;
  std::size_t nol = 0;
  double fc = 0.0;
  Tick ir = 1;
  double pif = 0.0;
};

struct SweepRow {
  SweepCell cell;
  std::size_t replicate = 0;
  IndexMeans means;
};

struct SweepSummary {
  SweepCell cell;
  std::size_t replicates = 0;
  IndexMeans mean;
  IndexMeans sd;  ///< sample standard deviation (n - 1); 0 for a single replicate
};

struct SweepResult {
  std::vector<SweepRow> rows;  ///< cell-major, replicates ascending
  std::vector<SweepSummary> summaries;
};

std::vector<SweepCell> expand_cells(const SweepSpec& spec);

/// The run configuration of one (cell, replicate).
SimConfig cell_config(const SweepSpec& spec, const SweepCell& cell, std::size_t replicate);

/// Validates every cell's configuration, then runs all of them on `threads`
/// workers (0 = hardware concurrency). Output order does not depend on the
/// thread count or completion order.
SweepResult run_sweep(const SweepSpec& spec, unsigned threads = 0);

inline constexpr std::string_view kSweepCsvHeader =
    "nol,fc,ir,pif,replicate,mean_desegregation,mean_happiness";
inline constexpr std::string_view kSweepSummaryCsvHeader =
    "nol,fc,ir,pif,replicates,mean_desegregation,sd_desegregation,mean_happiness,sd_happiness";

/// Per cell: one row per replicate, then one row with replicate = "mean"
/// holding the cross-replicate means.
void write_sweep_csv(std::ostream& out, const SweepResult& result);

/// One row per cell with cross-replicate means and standard deviations.
void write_sweep_summary_csv(std::ostream& out, const SweepResult& result);

}  // namespace segsim
