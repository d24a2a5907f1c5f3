#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "cv2x/config.hpp"
#include "cv2x/engine.hpp"

namespace cv2x::output {

enum class Format { Csv, Json };

Format parse_format(std::string_view text);

/// Everything needed to write, and later reproduce, one run.
struct OutputBundle {
  engine::SimulationSummary summary;
  std::vector<engine::SlotReport> series;
  ScenarioConfig config;  // fully resolved
  std::string version = CV2X_VERSION;
};

/// Shortest round-trip decimal form (%.17g).
std::string format_number(double v);

inline constexpr const char* kSeriesHeader =
    "slot,phi_bar,delta_t,tx,rx_success,rx_attempts,collisions,drops";

std::string series_csv(const std::vector<engine::SlotReport>& series);
std::string summary_csv(const engine::SimulationSummary& s);
nlohmann::ordered_json summary_json(const engine::SimulationSummary& s);
nlohmann::ordered_json manifest_json(const OutputBundle& bundle);

engine::SimulationSummary parse_summary_json(const nlohmann::json& j);
engine::SimulationSummary parse_summary_csv(const std::string& text);

/// Writes `content` to `path` via a temporary file and rename.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Writes summary.{csv|json}, series.csv and manifest.json into `dir`
/// (created if missing). Filesystem failures throw std::runtime_error naming the path.
void emit(const OutputBundle& bundle, Format format, const std::filesystem::path& dir);

}  // namespace cv2x::output
