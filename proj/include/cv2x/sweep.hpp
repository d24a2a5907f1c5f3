#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cv2x/config.hpp"
#include "cv2x/engine.hpp"

namespace cv2x::sweep {

struct SweepAxis {
  std::string field;
  std::vector<std::string> values;
};

struct SweepCell {
  std::vector<std::pair<std::string, std::string>> params;  // axis order
  std::uint64_t seed = 0;
  std::optional<engine::SimulationSummary> summary;
  std::string error;  // set when the cell failed

  /// "field=value,field=value" (empty for the base config).
  std::string param_key() const;
};

/// Called once per finished run, possibly from a worker thread.
using RunSink = std::function<void(const SweepCell&, const ScenarioConfig&, const engine::SimulationReport&)>;

/// Parses "N..M" (inclusive) or a comma list "a,b,c".
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

/// Parses "field=v1,v2,...".
SweepAxis parse_axis(std::string_view text);

/// Cartesian product of axes x seeds, each an independent run of `base` with
/// the axis values applied and `rng_seed` set to the seed. Cells come back in
/// product order (first axis slowest, seeds fastest) regardless of `jobs`.
/// An empty seed list means the base config's own seed.
/// Unknown fields or unparsable values throw ConfigError before anything
/// runs; a cell whose combined configuration fails validation or whose run
/// faults is reported through SweepCell::error and the sweep continues.
std::vector<SweepCell> run_sweep(const ScenarioConfig& base, std::span<const SweepAxis> axes,
                                 std::span<const std::uint64_t> seeds, int jobs = 1,
                                 engine::RunOptions options = {.keep_series = false},
                                 const RunSink& sink = {});

}  // namespace cv2x::sweep
