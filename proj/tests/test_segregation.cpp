#include "doctest.h"

#include <set>

#include "segsim/errors.hpp"
#include "segsim/kernels.hpp"
#include "segsim/mapgen.hpp"
#include "segsim/segregation.hpp"

using namespace segsim;

namespace {

World single_region(int w, int h) {
  return World(w, h, std::vector<RegionId>(static_cast<std::size_t>(w * h), 0), 1);
}

// Places agents from a picture: 'E' expat, 'N' native, '.' empty. Rows top to bottom.
std::vector<Agent> populate(World& world, const std::vector<std::string>& rows) {
  std::vector<Agent> agents;
  for (std::size_t y = 0; y < rows.size(); ++y) {
    for (std::size_t x = 0; x < rows[y].size(); ++x) {
      const char c = rows[y][x];
      if (c == '.') continue;
      const AgentType t = c == 'E' ? AgentType::Expat : AgentType::Native;
      const auto id = static_cast<AgentId>(agents.size());
      const Coord at{static_cast<int>(x), static_cast<int>(y)};
      world.place(id, t, at);
      agents.push_back({id, t, at, AgentState::Happy});
    }
  }
  return agents;
}

std::vector<Agent> random_population(World& world, double density, Rng& rng) {
  std::vector<Agent> agents;
  for (std::size_t i = 0; i < world.size(); ++i) {
    if (!rng.chance(density)) continue;
    const AgentType t = rng.chance(0.5) ? AgentType::Expat : AgentType::Native;
    const auto id = static_cast<AgentId>(agents.size());
    world.place(id, t, world.coord_of(i));
    agents.push_back({id, t, world.coord_of(i), AgentState::Happy});
  }
  return agents;
}

}  // namespace

TEST_CASE("iid examples") {
  World w = single_region(3, 3);
  // Centre expat; 5 occupied neighbours, 3 of them expat.
  auto agents = populate(w, {"EEE", "NEN", "..."});
  CHECK(iid(w, agents[4]) == doctest::Approx(0.4));

  World v = single_region(3, 3);
  agents = populate(v, {"EEN", "NEN", "..."});
  CHECK(iid(v, agents[4]) == doctest::Approx(0.6));

  World u = single_region(3, 3);
  agents = populate(u, {"NNN", "NNN", "NNN"});
  CHECK(iid(u, agents[4]) == 0.0);

  World lone = single_region(3, 3);
  agents = populate(lone, {"...", ".E.", "..."});
  CHECK(iid(lone, agents[0]) == 0.0);
}

TEST_CASE("happiness examples") {
  CHECK(happiness_rule(0.6, InfluenceTag::Cooperation, HappinessMode::LiteralEq2, 0.5) ==
        AgentState::Happy);
  CHECK(happiness_rule(0.6, InfluenceTag::Null, HappinessMode::Base, 0.5) == AgentState::Unhappy);
  CHECK(happiness_rule(0.3, InfluenceTag::NonCooperation, HappinessMode::Reconciled, 0.4) ==
        AgentState::Happy);

  // Reconciled: cooperation flips the inequality.
  CHECK(happiness_rule(0.3, InfluenceTag::Cooperation, HappinessMode::Reconciled, 0.4) ==
        AgentState::Unhappy);
  CHECK(happiness_rule(0.3, InfluenceTag::Null, HappinessMode::Reconciled, 0.4) == AgentState::Happy);
  // Literal: Null behaves like Cooperation.
  CHECK(happiness_rule(0.3, InfluenceTag::Null, HappinessMode::LiteralEq2, 0.4) ==
        AgentState::Unhappy);
  // Boundaries.
  CHECK(happiness_rule(0.4, InfluenceTag::Null, HappinessMode::Base, 0.4) == AgentState::Happy);
  CHECK(happiness_rule(0.4, InfluenceTag::Cooperation, HappinessMode::Reconciled, 0.4) ==
        AgentState::Happy);

  World w = single_region(2, 1);
  auto agents = populate(w, {"EN"});
  CHECK(evaluate_happiness(w, agents[0], HappinessMode::Base, 0.4) == AgentState::Unhappy);
  CHECK_THROWS_AS(evaluate_happiness(w, agents[0], HappinessMode::Base, 1.2), UsageError);
}

TEST_CASE("happiness rule properties") {
  for (int other = 0; other <= 8; ++other) {
    for (int same = 0; same + other <= 8; ++same) {
      const double v = iid_from_counts(static_cast<unsigned>(same), static_cast<unsigned>(other));
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      if (other > 0 && same == 0) CHECK(v == 1.0);
      // Base mode extremes.
      CHECK(happiness_rule(v, InfluenceTag::Null, HappinessMode::Base, 1.0) == AgentState::Happy);
      CHECK((happiness_rule(v, InfluenceTag::Null, HappinessMode::Base, 0.0) == AgentState::Unhappy) ==
            (other > 0));
      // Literal rule never accepts non-cooperation influence.
      for (const double pdtu : {0.0, 0.4, 1.0}) {
        CHECK(happiness_rule(v, InfluenceTag::NonCooperation, HappinessMode::LiteralEq2, pdtu) ==
              AgentState::Unhappy);
      }
    }
  }
}

TEST_CASE("snapshot iid equals the per-agent definition on every backend and under relabelling") {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    World w = single_region(1 + static_cast<int>(rng.below(70)), 1 + static_cast<int>(rng.below(30)));
    const auto agents = random_population(w, rng.uniform(), rng);

    std::vector<double> reference;
    for (const Agent& a : agents) reference.push_back(iid(w, a));

    for (const auto backend : {kernels::Backend::Scalar, kernels::Backend::Avx2}) {
      if (!kernels::backend_supported(backend)) continue;
      kernels::set_backend(backend);
      const NeighborSnapshot snap(w);
      for (std::size_t i = 0; i < agents.size(); ++i) {
        REQUIRE(snap.iid(w.index_of(agents[i].position), agents[i].type) == reference[i]);
      }
    }
    kernels::reset_backend();

    // Swap every type and check iid is unchanged.
    World swapped = single_region(w.width(), w.height());
    auto relabelled = agents;
    for (Agent& a : relabelled) {
      a.type = other_type(a.type);
      swapped.place(a.id, a.type, a.position);
    }
    for (std::size_t i = 0; i < agents.size(); ++i) CHECK(iid(swapped, relabelled[i]) == reference[i]);
  }
}

TEST_CASE("select_destination") {
  SUBCASE("no acceptable region with room") {
    World w(2, 1, {0, 1}, 2);
    auto agents = populate(w, {"EN"});
    w.regions()[0].region_type = RegionType::Expat;
    w.regions()[1].region_type = RegionType::Native;
    Rng rng(1);
    CHECK_FALSE(select_destination(w, agents[0], rng).has_value());
  }
  SUBCASE("one neutral region with one free cell") {
    World w(3, 1, {0, 0, 1}, 2);
    auto agents = populate(w, {"EN."});
    classify_regions(w, 0.4);
    REQUIRE(w.regions()[1].region_type == RegionType::Neutral);
    Rng rng(1);
    CHECK(select_destination(w, agents[0], rng) == Coord{2, 0});
  }
  SUBCASE("deterministic for a fixed seed") {
    World w = make_world(generate_voronoi_map(30, 30, 6, 3));
    Rng seeding(2);
    auto agents = seed_population(w, 300, seeding);
    classify_regions(w, 0.4);
    Rng a(9);
    Rng b(9);
    for (const Agent& agent : agents) CHECK(select_destination(w, agent, a) == select_destination(w, agent, b));
  }
  SUBCASE("only own-type or neutral regions are chosen") {
    World w = make_world(generate_voronoi_map(20, 20, 8, 5));
    Rng rng(3);
    auto agents = seed_population(w, 200, rng);
    for (std::size_t r = 0; r < w.regions().size(); ++r) {
      w.regions()[r].region_type = static_cast<RegionType>(r % 3);
    }
    for (const Agent& a : agents) {
      const auto dest = select_destination(w, a, rng);
      REQUIRE(dest.has_value());
      CHECK(w.is_free(*dest));
      const RegionType t = w.regions()[w.region_id(*dest)].region_type;
      const RegionType own = a.type == AgentType::Expat ? RegionType::Expat : RegionType::Native;
      CHECK((t == own || t == RegionType::Neutral));
    }
  }
}

TEST_CASE("movement_phase examples") {
  SUBCASE("all happy: nothing moves") {
    World w = single_region(4, 1);
    auto agents = populate(w, {"EE.N"});
    Rng rng(1);
    CHECK(movement_phase(w, agents, HappinessMode::Base, 0.4, rng) == 0);
    CHECK(w.occupant({0, 0}) == AgentId{0});
  }
  SUBCASE("one unhappy agent with one destination") {
    World w(2, 1, {0, 1}, 2);
    auto agents = populate(w, {"E."});
    classify_regions(w, 0.4);
    stamp_influence(w, {0, 0}, 0.0, InfluenceTag::Cooperation, 1);
    Rng rng(1);
    CHECK(movement_phase(w, agents, HappinessMode::Reconciled, 0.4, rng) == 1);
    CHECK(agents[0].position == Coord{1, 0});
    CHECK(agents[0].state == AgentState::Unhappy);
    CHECK(w.is_free({0, 0}));
  }
}

TEST_CASE("two movers competing for the last free cell: exactly one wins in either order") {
  // Regions: x0 (expat A), x1 (native B), x2 (empty, neutral). Both are
  // unhappy; the only acceptable free cell for either is x2, and the cell a
  // winner vacates lies in a region typed for the other's opposite.
  std::set<AgentId> winners;
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    World w(3, 1, {0, 1, 2}, 3);
    auto agents = populate(w, {"EN."});
    classify_regions(w, 0.4);
    Rng rng(seed);
    const auto moves = movement_phase(w, agents, HappinessMode::Base, 0.4, rng);
    REQUIRE(moves == 1);
    REQUIRE(agents[0].state == AgentState::Unhappy);
    REQUIRE(agents[1].state == AgentState::Unhappy);
    const auto at_target = w.occupant({2, 0});
    REQUIRE(at_target.has_value());
    const Agent& loser = agents[1 - *at_target];
    CHECK(loser.position == Coord{static_cast<int>(loser.id), 0});
    winners.insert(*at_target);
  }
  // Both permutation orders occur.
  CHECK(winners == std::set<AgentId>{0, 1});
}

TEST_CASE("movement_phase conserves agents and keeps occupancy a bijection") {
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    World w = make_world(generate_voronoi_map(40, 40, 10, static_cast<std::uint64_t>(trial)));
    auto agents = seed_population(w, 1000, rng);
    std::size_t expats = 0;
    for (const Agent& a : agents) expats += a.type == AgentType::Expat;
    for (int tick = 0; tick < 5; ++tick) {
      classify_regions(w, 0.4);
      movement_phase(w, agents, HappinessMode::Base, 0.4, rng);
      std::size_t e = 0;
      std::set<std::size_t> cells;
      for (const Agent& a : agents) {
        e += a.type == AgentType::Expat;
        REQUIRE(w.occupant(a.position) == a.id);
        cells.insert(w.index_of(a.position));
      }
      CHECK(e == expats);
      CHECK(cells.size() == agents.size());
      CHECK(w.occupied_count() == agents.size());
    }
  }
}
