#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "cv2x/output.hpp"
#include "cv2x/sweep.hpp"

using namespace cv2x;

namespace {

ScenarioConfig tiny() {
  ScenarioConfig c;
  c.num_vehicles = 6;
  c.rri = 20;
  c.sim_duration = 600;
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const char* name) {
  auto dir = std::filesystem::temp_directory_path() / ("cv2x_test_" + std::string(name));
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("seed lists") {
  CHECK(sweep::parse_seed_list("1..4") == std::vector<std::uint64_t>{1, 2, 3, 4});
  CHECK(sweep::parse_seed_list("7") == std::vector<std::uint64_t>{7});
  CHECK(sweep::parse_seed_list("3,1,2") == std::vector<std::uint64_t>{3, 1, 2});
  CHECK_THROWS_AS(sweep::parse_seed_list("5..2"), ConfigError);
  CHECK_THROWS_AS(sweep::parse_seed_list("a..b"), ConfigError);
}

TEST_CASE("axis parsing") {
  const auto a = sweep::parse_axis("rri=20,50,100");
  CHECK(a.field == "rri");
  CHECK(a.values == std::vector<std::string>{"20", "50", "100"});
  CHECK_THROWS_AS(sweep::parse_axis("rri"), ConfigError);
}

TEST_CASE("empty axes run the base config once") {
  const auto cells = sweep::run_sweep(tiny(), {}, {});
  REQUIRE(cells.size() == 1);
  CHECK(cells[0].params.empty());
  CHECK(cells[0].seed == 1);
  CHECK(cells[0].summary.has_value());
}

TEST_CASE("2 axes x 2 values x 3 seeds is 12 distinct runs in product order") {
  const std::vector<sweep::SweepAxis> axes{{"access_mode", {"oma", "noma"}}, {"rri", {"20", "50"}}};
  const std::vector<std::uint64_t> seeds{1, 2, 3};
  const auto cells = sweep::run_sweep(tiny(), axes, seeds);
  REQUIRE(cells.size() == 12);
  std::set<std::pair<std::string, std::uint64_t>> keys;
  std::set<std::uint64_t> digests;
  for (const auto& c : cells) {
    REQUIRE(c.summary.has_value());
    keys.insert({c.param_key(), c.seed});
    digests.insert(c.summary->state_digest);
  }
  CHECK(keys.size() == 12);
  CHECK(cells[0].param_key() == "access_mode=oma,rri=20");
  CHECK(cells[0].seed == 1);
  CHECK(cells[2].seed == 3);
  CHECK(cells[3].param_key() == "access_mode=oma,rri=50");
  CHECK(cells[11].param_key() == "access_mode=noma,rri=50");
  // OMA and NOMA share arrival and scheduling streams, so only decoding differs.
  for (std::size_t k = 0; k < 6; ++k)
    CHECK(cells[k].summary->transmissions == cells[k + 6].summary->transmissions);
  CHECK(digests.size() >= 6);
}

TEST_CASE("sweep results do not depend on the worker count") {
  const std::vector<sweep::SweepAxis> axes{{"nv", {"4", "7"}}, {"mode", {"oma", "noma"}}};
  const std::vector<std::uint64_t> seeds{5, 6};
  const auto serial = sweep::run_sweep(tiny(), axes, seeds, 1);
  const auto parallel = sweep::run_sweep(tiny(), axes, seeds, 3);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t k = 0; k < serial.size(); ++k) {
    CHECK(serial[k].param_key() == parallel[k].param_key());
    CHECK(serial[k].summary == parallel[k].summary);
  }
}

TEST_CASE("bad axes fail before running; bad cells are reported and skipped") {
  const std::vector<sweep::SweepAxis> unknown{{"warp_factor", {"9"}}};
  CHECK_THROWS_AS(sweep::run_sweep(tiny(), unknown, {}), ConfigError);
  const std::vector<sweep::SweepAxis> garbage{{"rri", {"fast"}}};
  CHECK_THROWS_AS(sweep::run_sweep(tiny(), garbage, {}), ConfigError);

  const std::vector<sweep::SweepAxis> mixed{{"nv", {"1", "3"}}};
  const auto cells = sweep::run_sweep(tiny(), mixed, {});
  REQUIRE(cells.size() == 2);
  CHECK_FALSE(cells[0].summary.has_value());
  CHECK(cells[0].error.find("num_vehicles") != std::string::npos);
  CHECK(cells[1].summary.has_value());
}

TEST_CASE("series CSV layout") {
  CHECK(output::series_csv({}) == std::string(output::kSeriesHeader) + "\n");
  auto c = tiny();
  c.sim_duration = 3;
  const auto r = engine::run(ValidatedConfig::validate(c));
  const auto csv = output::series_csv(r.series);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == output::kSeriesHeader);
  for (int k = 0; k < 3; ++k) {
    REQUIRE(std::getline(in, line));
    CHECK(line.rfind(std::to_string(k) + ",", 0) == 0);
  }
  CHECK_FALSE(std::getline(in, line));
  CHECK(csv.back() == '\n');
}

TEST_CASE("numbers keep full precision") {
  CHECK(std::stod(output::format_number(0.1 + 0.2)) == 0.1 + 0.2);
  CHECK(std::stod(output::format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("summary round-trips through CSV and JSON") {
  auto c = tiny();
  c.sim_duration = 3000;
  const auto r = engine::run(ValidatedConfig::validate(c));
  CHECK(output::parse_summary_csv(output::summary_csv(r.summary)) == r.summary);
  CHECK(output::parse_summary_json(nlohmann::json::parse(output::summary_json(r.summary).dump())) == r.summary);

  engine::SimulationSummary empty;
  CHECK(output::parse_summary_csv(output::summary_csv(empty)) == empty);
}

TEST_CASE("emit writes the bundle and the manifest reproduces the run") {
  auto c = tiny();
  c.rng_seed = 42;
  const auto cfg = ValidatedConfig::validate(c);
  const auto r = engine::run(cfg);
  const auto dir = scratch("emit");
  output::emit({r.summary, r.series, cfg.config()}, output::Format::Json, dir / "nested");
  CHECK(std::filesystem::exists(dir / "nested" / "summary.json"));
  CHECK(std::filesystem::exists(dir / "nested" / "series.csv"));
  const auto manifest = nlohmann::json::parse(slurp(dir / "nested" / "manifest.json"));
  CHECK(manifest.at("seed").get<std::uint64_t>() == 42);

  ScenarioConfig back;
  for (const auto& [k, v] : manifest.at("config").items()) set_field(back, k, v.get<std::string>());
  const auto again = engine::run(ValidatedConfig::validate(back));
  CHECK(output::series_csv(again.series) == slurp(dir / "nested" / "series.csv"));
  CHECK(again.summary == r.summary);
  std::filesystem::remove_all(dir);
}

TEST_CASE("format names") {
  CHECK(output::parse_format("csv") == output::Format::Csv);
  CHECK(output::parse_format("json") == output::Format::Json);
  CHECK_THROWS(output::parse_format("xml"));
}
