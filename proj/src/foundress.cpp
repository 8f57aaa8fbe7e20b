#include "segsim/foundress.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <utility>

#include "segsim/errors.hpp"

namespace segsim {

namespace {

bool within(Coord a, Coord b, double radius) {
  const double dx = static_cast<double>(a.x) - static_cast<double>(b.x);
  const double dy = static_cast<double>(a.y) - static_cast<double>(b.y);
  return dx * dx + dy * dy <= radius * radius;
}

// Row-major key for ordered maps.
std::pair<int, int> key(Coord c) { return {c.y, c.x}; }

bool in_unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

void FoundressConfig::validate() const {
  if (!in_unit_interval(fc)) throw ConfigError("fc must lie in [0, 1]");
  if (!in_unit_interval(pmutation)) throw ConfigError("pmutation must lie in [0, 1]");
  if (!in_unit_interval(pif)) throw ConfigError("pif must lie in [0, 1]");
  if (!(cluster_radius >= 0.0) || !std::isfinite(cluster_radius)) {
    throw ConfigError("cluster_radius must be a finite non-negative number");
  }
  if (!(radius_competition >= 0.0) || !std::isfinite(radius_competition)) {
    throw ConfigError("radius_competition must be a finite non-negative number");
  }
}

double surv(std::size_t nest_pop) {
  if (nest_pop == 0) throw UsageError("surv is defined for nest_pop >= 1");
  const auto n = static_cast<double>(nest_pop);
  return -2.88 + 4.28 * n - 0.377 * n * n;
}

std::vector<Leader> reproduce(std::span<const LeaderType> survivor_types,
                              const FoundressConfig& cfg, const World& world, Rng& rng) {
  std::vector<Leader> out;
  out.reserve(cfg.nol);
  // The epsilon keeps products such as 0.29 * 100 from flooring to 28.
  const auto fresh_cooperative = static_cast<std::size_t>(
      std::floor(cfg.fc * static_cast<double>(cfg.nol) + 1e-9));
  for (std::size_t i = 0; i < cfg.nol; ++i) {
    LeaderType type;
    if (survivor_types.empty()) {
      type = i < fresh_cooperative ? LeaderType::Cooperative : LeaderType::Fierce;
    } else {
      type = survivor_types[rng.below(survivor_types.size())];
      if (rng.chance(cfg.pmutation)) {
        type = type == LeaderType::Cooperative ? LeaderType::Fierce : LeaderType::Cooperative;
      }
    }
    const Coord at = world.coord_of(rng.below(world.size()));
    out.push_back(Leader{static_cast<LeaderId>(i), type, at, true});
  }
  return out;
}

std::vector<Nest> cluster_in_order(std::span<Leader> leaders, std::span<const std::size_t> order,
                                   double radius, Rng& tie_rng) {
  for (const std::size_t turn : order) {
    Leader& mover = leaders[turn];
    if (!mover.alive) continue;

    std::map<std::pair<int, int>, std::size_t> counts;
    for (const Leader& other : leaders) {
      if (other.id == mover.id || !other.alive) continue;
      if (within(other.position, mover.position, radius)) ++counts[key(other.position)];
    }
    if (counts.empty()) continue;

    std::size_t best = 0;
    for (const auto& [cell, n] : counts) best = std::max(best, n);
    // Already on a best cell: moving gains nothing, so the leader stays.
    if (auto here = counts.find(key(mover.position)); here != counts.end() && here->second == best) {
      continue;
    }
    std::vector<Coord> ties;
    for (const auto& [cell, n] : counts) {
      if (n == best) ties.push_back({cell.second, cell.first});
    }
    mover.position = ties.size() == 1 ? ties.front() : ties[tie_rng.below(ties.size())];
  }

  std::map<std::pair<int, int>, std::vector<LeaderId>> by_cell;
  for (const Leader& l : leaders) {
    if (l.alive) by_cell[key(l.position)].push_back(l.id);
  }
  std::vector<Nest> nests;
  nests.reserve(by_cell.size());
  for (auto& [cell, members] : by_cell) {
    std::sort(members.begin(), members.end());
    nests.push_back(Nest{{cell.second, cell.first}, std::move(members), true});
  }
  return nests;
}

std::vector<Nest> cluster(std::span<Leader> leaders, double radius, Rng& order_rng, Rng& tie_rng) {
  std::vector<std::size_t> order(leaders.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  order_rng.shuffle(std::span<std::size_t>(order));
  return cluster_in_order(leaders, order, radius, tie_rng);
}

std::vector<LeaderId> nest_fights(Nest& nest, std::span<Leader> leaders, double pif, Rng& rng) {
  std::vector<LeaderId> order = nest.members;
  rng.shuffle(std::span<LeaderId>(order));

  std::vector<LeaderId> living;
  for (const LeaderId initiator : order) {
    living.clear();
    bool any_fierce = false;
    for (const LeaderId m : nest.members) {
      if (!leaders[m].alive) continue;
      living.push_back(m);
      any_fierce = any_fierce || leaders[m].type == LeaderType::Fierce;
    }
    if (living.size() < 2 || !any_fierce) break;

    const Leader& self = leaders[initiator];
    if (!self.alive || self.type == LeaderType::Cooperative) continue;
    if (!(pif > rng.uniform())) continue;

    living.erase(std::find(living.begin(), living.end(), initiator));
    const LeaderId opponent = living[rng.below(living.size())];
    // Fierce vs fierce is an even fight; a fierce initiator loses to a cooperative 60% of the time.
    const double initiator_loses =
        leaders[opponent].type == LeaderType::Fierce ? 0.5 : 0.6;
    const LeaderId loser = rng.chance(initiator_loses) ? initiator : opponent;
    leaders[loser].alive = false;
  }

  std::erase_if(nest.members, [&](LeaderId m) { return !leaders[m].alive; });
  if (nest.members.empty()) nest.alive = false;
  return nest.members;
}

std::size_t group_competition(std::span<Nest> nests, std::span<Leader> leaders, double radius,
                              Rng& tie_rng) {
  std::vector<std::size_t> order(nests.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return row_major_less(nests[a].site, nests[b].site);
  });

  auto destroy = [&](Nest& nest) {
    for (const LeaderId m : nest.members) leaders[m].alive = false;
    nest.alive = false;
  };

  std::size_t destroyed = 0;
  for (const std::size_t i : order) {
    for (const std::size_t j : order) {
      if (!nests[i].alive) break;
      if (i == j || !nests[j].alive) continue;
      if (!within(nests[i].site, nests[j].site, radius)) continue;
      const double si = surv(nests[i].pop());
      const double sj = surv(nests[j].pop());
      bool i_loses;
      if (si == sj) {
        i_loses = tie_rng.chance(0.5);
      } else {
        i_loses = si < sj;
      }
      destroy(i_loses ? nests[i] : nests[j]);
      ++destroyed;
    }
  }
  return destroyed;
}

void emit_influence(std::span<const Nest> nests, std::span<const Leader> leaders, World& world,
                    double radius_competition, Tick now, Tick duration, Rng& rng) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < nests.size(); ++i) {
    if (nests[i].alive && nests[i].pop() > 0) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return row_major_less(nests[a].site, nests[b].site);
  });

  for (const std::size_t i : order) {
    const Nest& nest = nests[i];
    const LeaderId speaker = nest.members[rng.below(nest.pop())];
    const InfluenceTag tag = leaders[speaker].type == LeaderType::Cooperative
                                 ? InfluenceTag::Cooperation
                                 : InfluenceTag::NonCooperation;
    stamp_influence(world, nest.site, static_cast<double>(nest.pop()) * radius_competition, tag,
                    now + duration);
  }
}

GenerationSummary run_cycle(FoundressState& state, const FoundressConfig& cfg, World& world,
                            Tick now, Tick duration, Rng& rng, Rng& tie_rng) {
  GenerationSummary summary;
  state.leaders = reproduce(state.survivor_types, cfg, world, rng);
  std::vector<Nest> nests = cluster(state.leaders, cfg.cluster_radius, rng, tie_rng);
  summary.nests_formed = nests.size();

  for (Nest& nest : nests) nest_fights(nest, state.leaders, cfg.pif, rng);
  summary.nests_destroyed = group_competition(nests, state.leaders, cfg.radius_competition, tie_rng);
  emit_influence(nests, state.leaders, world, cfg.radius_competition, now, duration, rng);

  std::erase_if(nests, [](const Nest& n) { return !n.alive; });
  state.nests = std::move(nests);
  state.survivor_types.clear();
  for (const Leader& l : state.leaders) {
    if (!l.alive) continue;
    state.survivor_types.push_back(l.type);
    if (l.type == LeaderType::Cooperative) {
      ++summary.cooperative;
    } else {
      ++summary.fierce;
    }
  }
  return summary;
}

}  // namespace segsim
