#include "cv2x/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <thread>

namespace cv2x::sweep {

std::string SweepCell::param_key() const {
  std::string key;
  for (const auto& [f, v] : params) key += (key.empty() ? "" : ",") + f + "=" + v;
  return key;
}

namespace {

std::uint64_t parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw ConfigError("seeds", "expected an unsigned integer, got '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto k = s.find(sep);
    out.push_back(s.substr(0, k));
    if (k == std::string_view::npos) break;
    s = s.substr(k + 1);
  }
  return out;
}

}  // namespace

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> seeds;
  if (const auto dots = text.find(".."); dots != std::string_view::npos) {
    const auto lo = parse_u64(text.substr(0, dots));
    const auto hi = parse_u64(text.substr(dots + 2));
    if (hi < lo) throw ConfigError("seeds", "empty seed range");
    for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    return seeds;
  }
  for (auto part : split(text, ',')) seeds.push_back(parse_u64(part));
  return seeds;
}

SweepAxis parse_axis(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) throw ConfigError("axis", "expected field=v1,v2,...");
  SweepAxis axis{std::string(text.substr(0, eq)), {}};
  for (auto v : split(text.substr(eq + 1), ',')) axis.values.emplace_back(v);
  return axis;
}

std::vector<SweepCell> run_sweep(const ScenarioConfig& base, std::span<const SweepAxis> axes,
                                 std::span<const std::uint64_t> seeds, int jobs,
                                 engine::RunOptions options, const RunSink& sink) {
  // Reject bad axes before running anything.
  for (const auto& axis : axes) {
    if (!is_field(axis.field)) throw ConfigError(axis.field, "unknown sweep field");
    if (axis.values.empty()) throw ConfigError(axis.field, "axis has no values");
    for (const auto& v : axis.values) {
      ScenarioConfig probe = base;
      set_field(probe, axis.field, v);
    }
  }

  std::vector<std::vector<std::pair<std::string, std::string>>> combos{{}};
  for (const auto& axis : axes) {
    std::vector<std::vector<std::pair<std::string, std::string>>> next;
    for (const auto& c : combos)
      for (const auto& v : axis.values) {
        auto e = c;
        e.emplace_back(axis.field, v);
        next.push_back(std::move(e));
      }
    combos = std::move(next);
  }

  const std::vector<std::uint64_t> seed_list =
      seeds.empty() ? std::vector<std::uint64_t>{base.rng_seed} : std::vector<std::uint64_t>(seeds.begin(), seeds.end());
  std::vector<SweepCell> cells;
  for (const auto& c : combos)
    for (auto seed : seed_list) cells.push_back({c, seed, std::nullopt, {}});

  auto run_cell = [&](SweepCell& cell) {
    try {
      ScenarioConfig cfg = base;
      for (const auto& [f, v] : cell.params) set_field(cfg, f, v);
      cfg.rng_seed = cell.seed;
      const auto validated = ValidatedConfig::validate(cfg);
      auto report = engine::run(validated, options);
      cell.summary = report.summary;
      if (sink) sink(cell, validated.config(), report);
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  };

  const auto workers = static_cast<std::size_t>(std::clamp(jobs, 1, 256));
  if (workers == 1 || cells.size() <= 1) {
    for (auto& cell : cells) run_cell(cell);
    return cells;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < std::min(workers, cells.size()); ++w)
    pool.emplace_back([&] {
      for (auto k = next.fetch_add(1); k < cells.size(); k = next.fetch_add(1)) run_cell(cells[k]);
    });
  pool.clear();
  return cells;
}

}  // namespace cv2x::sweep
