#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "segsim/cli.hpp"
#include "segsim/config.hpp"
#include "segsim/errors.hpp"
#include "segsim/mapgen.hpp"
#include "segsim/sweep.hpp"

using namespace segsim;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::main(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

// A scratch directory removed on scope exit.
struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() /
          ("segsim_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("config text") {
  const auto pairs = parse_config_text("# comment\n  pdtu = 0.3 \n\nnol=25 # trailing\n");
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0] == std::pair<std::string, std::string>{"pdtu", "0.3"});
  CHECK(pairs[1] == std::pair<std::string, std::string>{"nol", "25"});
  CHECK_THROWS_AS(parse_config_text("pdtu 0.3\n"), ConfigError);

  SimConfig cfg;
  apply_setting(cfg, "pdtu", "0.25");
  apply_setting(cfg, "happiness_mode", "base");
  apply_setting(cfg, "map_regions", "9");
  apply_setting(cfg, "nol", "12");
  CHECK(cfg.pdtu == 0.25);
  CHECK(cfg.happiness_mode == HappinessMode::Base);
  CHECK(std::get<VoronoiSpec>(cfg.map).regions == 9);
  CHECK(cfg.foundress.nol == 12);
  apply_setting(cfg, "map", "some.txt");
  CHECK(std::get<std::string>(cfg.map) == "some.txt");
  CHECK_THROWS_AS(apply_setting(cfg, "bogus", "1"), ConfigError);
  CHECK_THROWS_AS(apply_setting(cfg, "pdtu", "abc"), ConfigError);
  CHECK_THROWS_AS(apply_setting(cfg, "nol", "-3"), ConfigError);
}

TEST_CASE("genmap") {
  const Outcome ok = invoke({"genmap", "--width", "100", "--height", "100", "--regions", "54", "--seed", "7"});
  REQUIRE(ok.code == 0);
  const RegionRaster r = parse_region_raster(ok.out);
  CHECK(r.num_regions == 54);
  CHECK(r == generate_voronoi_map(100, 100, 54, 7));

  const Outcome one = invoke({"genmap", "--width", "5", "--height", "4", "--regions", "1"});
  REQUIRE(one.code == 0);
  const RegionRaster u = parse_region_raster(one.out);
  CHECK(std::all_of(u.grid.begin(), u.grid.end(), [](RegionId id) { return id == 0; }));

  const Outcome zero = invoke({"genmap", "--width", "5", "--height", "4", "--regions", "0"});
  CHECK(zero.code == 1);
  CHECK(zero.out.empty());
  CHECK_FALSE(zero.err.empty());

  CHECK(invoke({"genmap", "--width", "0", "--height", "4", "--regions", "1"}).code == 1);
  CHECK(invoke({"genmap", "--width", "2", "--height", "2", "--regions", "5"}).code == 1);
  CHECK(invoke({"genmap", "--no-such-flag"}).code == 1);
  CHECK(invoke({}).code == 1);
}

TEST_CASE("run") {
  Scratch tmp;
  REQUIRE(invoke({"genmap", "--width", "100", "--height", "100", "--regions", "54", "--seed", "7", "-o",
                  tmp.path("map.txt")})
              .code == 0);
  const std::vector<std::string> args{"run",    "--map",  tmp.path("map.txt"), "--population", "5000",
                                      "--pdtu", "0.4",    "--nol",             "0",            "--seed",
                                      "1"};
  const Outcome a = invoke(args);
  REQUIRE(a.code == 0);
  const auto rows = lines(a.out);
  REQUIRE(rows.size() >= 4);
  CHECK(rows[0] == kSeriesCsvHeader);
  CHECK(rows[1].rfind("1,", 0) == 0);
  // Base-model series ends at a fixpoint.
  for (std::size_t i = rows.size() - 3; i < rows.size(); ++i) {
    std::vector<std::string> cols;
    std::stringstream ss(rows[i]);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    REQUIRE(cols.size() == 7);
    CHECK(cols[3] == "0");
  }
  CHECK(a.out.find('\r') == std::string::npos);

  const Outcome b = invoke(args);
  CHECK(a.out == b.out);

  SUBCASE("output file matches stdout") {
    auto to_file = args;
    to_file.insert(to_file.end(), {"-o", tmp.path("series.csv")});
    const Outcome f = invoke(to_file);
    REQUIRE(f.code == 0);
    CHECK(f.out.empty());
    CHECK(slurp(tmp.path("series.csv")) == a.out);
  }
  SUBCASE("missing map: exit 1, nothing written") {
    const Outcome m = invoke({"run", "--map", tmp.path("absent.txt"), "-o", tmp.path("never.csv")});
    CHECK(m.code == 1);
    CHECK(m.out.empty());
    CHECK_FALSE(fs::exists(tmp.path("never.csv")));
  }
  SUBCASE("malformed map: exit 1") {
    const auto bad = tmp.write("bad.txt", "3 2 1\n0 0 0\n0 0\n");
    const Outcome m = invoke({"run", "--map", bad});
    CHECK(m.code == 1);
    CHECK(m.err.find("line 3") != std::string::npos);
  }
  SUBCASE("capacity error: exit 1") {
    CHECK(invoke({"run", "--map-width", "10", "--map-height", "10", "--map-regions", "2", "--population",
                  "101"})
              .code == 1);
  }
}

TEST_CASE("config file and flag precedence") {
  Scratch tmp;
  const auto conf = tmp.write("c.conf",
                              "map_width = 30\nmap_height = 30\nmap_regions = 5\npopulation = 300\n"
                              "max_ticks = 4\nseed = 3\n");
  const Outcome from_file = invoke({"run", "--config", conf});
  REQUIRE(from_file.code == 0);
  CHECK(lines(from_file.out).size() <= 5);

  const Outcome flags = invoke({"run", "--map-width", "30", "--map-height", "30", "--map-regions", "5",
                                "--population", "300", "--max-ticks", "4", "--seed", "3"});
  CHECK(flags.out == from_file.out);

  const Outcome overridden = invoke({"run", "--config", conf, "--max-ticks", "2"});
  REQUIRE(overridden.code == 0);
  CHECK(lines(overridden.out).size() <= 3);
  const Outcome reseeded = invoke({"run", "--config", conf, "--seed", "4"});
  CHECK(reseeded.out != from_file.out);

  CHECK(invoke({"run", "--config", tmp.path("none.conf")}).code == 1);
  CHECK(invoke({"run", "--config", tmp.write("bad.conf", "nonsense\n")}).code == 1);
  CHECK(invoke({"run", "--config", tmp.write("unknown.conf", "colour = red\n")}).code == 1);
}

TEST_CASE("sweep") {
  const std::vector<std::string> small{"sweep", "--map-width", "30", "--map-height", "30",
                                       "--map-regions", "5", "--population", "200", "--max-ticks",
                                       "6"};
  SUBCASE("single values, one replicate: one row plus one summary row") {
    auto args = small;
    args.insert(args.end(), {"--nol", "5", "--fc", "0.2", "--ir", "3", "--pif", "0.5", "--replicates", "1"});
    const Outcome o = invoke(args);
    REQUIRE(o.code == 0);
    const auto rows = lines(o.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == kSweepCsvHeader);
    CHECK(rows[1].rfind("5,0.200000,3,0.500000,0,", 0) == 0);
    CHECK(rows[2].rfind("5,0.200000,3,0.500000,mean,", 0) == 0);
  }
  SUBCASE("row count and order of a small grid; thread count does not matter") {
    auto args = small;
    args.insert(args.end(), {"--nol", "2,4", "--fc", "0.1,0.5", "--ir", "3", "--pif", "0.1,0.2,0.5",
                             "--replicates", "2"});
    auto one = args;
    one.insert(one.end(), {"--threads", "1"});
    auto many = args;
    many.insert(many.end(), {"--threads", "5"});
    const Outcome a = invoke(one);
    const Outcome b = invoke(many);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const auto rows = lines(a.out);
    CHECK(rows.size() == 1 + 12 * 2 + 12);
    CHECK(rows[1].rfind("2,0.100000,3,0.100000,0,", 0) == 0);
    CHECK(rows[4].rfind("2,0.100000,3,0.200000,0,", 0) == 0);
    CHECK(rows.back().rfind("4,0.500000,3,0.500000,mean,", 0) == 0);
  }
  SUBCASE("summary companion file") {
    Scratch tmp;
    auto args = small;
    args.insert(args.end(), {"--nol", "3", "--fc", "0.1", "--ir", "2", "--pif", "0.1,0.2", "--replicates",
                             "3", "--summary", tmp.path("sd.csv"), "-o", tmp.path("sweep.csv")});
    REQUIRE(invoke(args).code == 0);
    const auto rows = lines(slurp(tmp.path("sd.csv")));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == kSweepSummaryCsvHeader);
    CHECK(rows[1].rfind("3,0.100000,2,0.100000,3,", 0) == 0);
    CHECK(lines(slurp(tmp.path("sweep.csv"))).size() == 1 + 2 * 3 + 2);
  }
  SUBCASE("an invalid cell aborts before any output") {
    Scratch tmp;
    auto args = small;
    args.insert(args.end(), {"--ir", "3,0", "-o", tmp.path("x.csv")});
    const Outcome o = invoke(args);
    CHECK(o.code == 1);
    CHECK_FALSE(fs::exists(tmp.path("x.csv")));
    CHECK(invoke({"sweep", "--replicates", "0"}).code == 1);
    CHECK(invoke({"sweep", "--pif", "0.1,1.5"}).code == 1);
  }
}

TEST_CASE("sweep grid arithmetic") {
  SweepSpec spec;
  spec.nol = {25, 50};
  spec.fc = {0.1, 0.2, 0.5};
  spec.ir = {5, 25, 50};
  spec.pif = {0.1, 0.2, 0.5};
  spec.replicates = 10;
  const auto cells = expand_cells(spec);
  CHECK(cells.size() == 54);
  CHECK(cells.size() * spec.replicates == 540);
  CHECK(cells[0].nol == 25);
  CHECK(cells[1].pif == 0.2);
  CHECK(cells[3].ir == 25);
  CHECK(cells.back().nol == 50);
  for (std::size_t i = 0; i < cells.size(); ++i) CHECK(cells[i].index == i);

  // Replicate seeds depend only on (base, cell, replicate).
  const SimConfig c = cell_config(spec, cells[7], 3);
  CHECK(c.seed == replicate_seed(spec.base.seed, 7, 3));
  CHECK(c.foundress.nol == cells[7].nol);
  CHECK(c.ir == cells[7].ir);
  std::set<std::uint64_t> seeds;
  for (std::size_t cell = 0; cell < 54; ++cell) {
    for (std::size_t k = 0; k < 10; ++k) seeds.insert(replicate_seed(1, cell, k));
  }
  CHECK(seeds.size() == 540);
}
