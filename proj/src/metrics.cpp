#include "segsim/metrics.hpp"

#include <charconv>
#include <ostream>

#include "segsim/errors.hpp"

namespace segsim {

double desegregation_index(const World& world, std::span<const Agent> agents) {
  if (agents.empty()) return 0.0;
  const NeighborSnapshot snapshot(world);
  double sum = 0.0;
  for (const Agent& a : agents) sum += snapshot.iid(world.index_of(a.position), a.type);
  return sum / static_cast<double>(agents.size());
}

double happiness_index(const World& world, std::span<const Agent> agents, HappinessMode mode,
                       double pdtu) {
  if (agents.empty()) return 0.0;
  if (!(pdtu >= 0.0 && pdtu <= 1.0)) throw UsageError("pdtu must lie in [0, 1]");
  const NeighborSnapshot snapshot(world);
  std::size_t happy = 0;
  for (const Agent& a : agents) {
    const std::size_t cell = world.index_of(a.position);
    if (happiness_rule(snapshot.iid(cell, a.type), world.influence(cell), mode, pdtu) ==
        AgentState::Happy) {
      ++happy;
    }
  }
  return static_cast<double>(happy) / static_cast<double>(agents.size());
}

IndexMeans aggregate_run(std::span<const MetricsRow> series, std::size_t warmup) {
  if (warmup >= series.size()) throw UsageError("aggregation window is empty");
  IndexMeans means;
  for (std::size_t i = warmup; i < series.size(); ++i) {
    means.desegregation += series[i].desegregation_index;
    means.happiness += series[i].happiness_index;
  }
  const auto n = static_cast<double>(series.size() - warmup);
  means.desegregation /= n;
  means.happiness /= n;
  return means;
}

std::string format_fixed(double value, int places) {
  char buf[64];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, places);
  if (ec != std::errc{}) throw UsageError("value not representable in fixed notation");
  return std::string(buf, ptr);
}

void write_series_csv(std::ostream& out, std::span<const MetricsRow> rows) {
  out << kSeriesCsvHeader << '\n';
  for (const MetricsRow& r : rows) {
    out << r.tick << ',' << format_fixed(r.desegregation_index) << ','
        << format_fixed(r.happiness_index) << ',' << r.moves << ',' << r.leaders_cooperative << ','
        << r.leaders_fierce << ',' << r.nests << '\n';
  }
}

}  // namespace segsim
