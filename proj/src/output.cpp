#include "cv2x/output.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cv2x::output {

namespace {

using nlohmann::ordered_json;

constexpr std::array<const char*, kNumMessageTypes> kTypeKeys{"queue_aoi_hpd", "queue_aoi_denm",
                                                              "queue_aoi_cam", "queue_aoi_mhd"};
constexpr std::array<const char*, kNumMessageTypes> kQueuedKeys{"queued_age_hpd", "queued_age_denm",
                                                                "queued_age_cam", "queued_age_mhd"};

// Column order of summary.csv; the JSON form uses the same keys.
constexpr const char* kSummaryColumns[] = {
    "slots", "measured_slots", "success_rate", "mean_phi_bar", "mean_delta", "transmissions",
    "rx_success", "rx_attempts", "collisions", "collided_transmissions", "drops",
    "reselection_events", "pi_estimate", "p_ncol_analytic", "mc_non_collision", "queue_aoi_hpd",
    "queue_aoi_denm", "queue_aoi_cam", "queue_aoi_mhd", "queued_age_hpd",
    "queued_age_denm", "queued_age_cam", "queued_age_mhd", "state_digest"};

std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::vector<std::string> summary_values(const engine::SimulationSummary& s) {
  std::vector<std::string> v = {
      std::to_string(s.slots), std::to_string(s.measured_slots), opt(s.success_rate),
      format_number(s.mean_phi_bar), format_number(s.mean_delta), std::to_string(s.transmissions),
      std::to_string(s.rx_success), std::to_string(s.rx_attempts), std::to_string(s.collisions),
      std::to_string(s.collided_transmissions), std::to_string(s.drops),
      std::to_string(s.reselection_events), opt(s.pi_estimate), opt(s.p_ncol_analytic),
      opt(s.mc_non_collision)};
  for (double q : s.queue_aoi_by_type) v.push_back(format_number(q));
  for (const auto& q : s.queued_age_by_type) v.push_back(opt(q));
  v.push_back(std::to_string(s.state_digest));
  return v;
}

}  // namespace

Format parse_format(std::string_view text) {
  if (text == "csv") return Format::Csv;
  if (text == "json") return Format::Json;
  throw ConfigError("format", "expected csv or json, got '" + std::string(text) + "'");
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string series_csv(const std::vector<engine::SlotReport>& series) {
  std::string out = kSeriesHeader;
  out += '\n';
  out.reserve(series.size() * 48 + out.size());
  for (const auto& r : series) {
    out += std::to_string(r.slot);
    out += ',' + format_number(r.phi_bar);
    out += ',' + format_number(r.delta_t);
    out += ',' + std::to_string(r.tx);
    out += ',' + std::to_string(r.rx_success);
    out += ',' + std::to_string(r.rx_attempts);
    out += ',' + std::to_string(r.collisions);
    out += ',' + std::to_string(r.drops);
    out += '\n';
  }
  return out;
}

std::string summary_csv(const engine::SimulationSummary& s) {
  std::string header, row;
  const auto values = summary_values(s);
  for (std::size_t k = 0; k < values.size(); ++k) {
    header += (k ? "," : "") + std::string(kSummaryColumns[k]);
    row += (k ? "," : "") + values[k];
  }
  return header + "\n" + row + "\n";
}

ordered_json summary_json(const engine::SimulationSummary& s) {
  auto o = [](const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); };
  ordered_json j;
  j["slots"] = s.slots;
  j["measured_slots"] = s.measured_slots;
  j["success_rate"] = o(s.success_rate);
  j["mean_phi_bar"] = s.mean_phi_bar;
  j["mean_delta"] = s.mean_delta;
  j["transmissions"] = s.transmissions;
  j["rx_success"] = s.rx_success;
  j["rx_attempts"] = s.rx_attempts;
  j["collisions"] = s.collisions;
  j["collided_transmissions"] = s.collided_transmissions;
  j["drops"] = s.drops;
  j["reselection_events"] = s.reselection_events;
  j["pi_estimate"] = o(s.pi_estimate);
  j["p_ncol_analytic"] = o(s.p_ncol_analytic);
  j["mc_non_collision"] = o(s.mc_non_collision);
  for (std::size_t k = 0; k < kNumMessageTypes; ++k) j[kTypeKeys[k]] = s.queue_aoi_by_type[k];
  for (std::size_t k = 0; k < kNumMessageTypes; ++k) j[kQueuedKeys[k]] = o(s.queued_age_by_type[k]);
  j["state_digest"] = s.state_digest;
  return j;
}

engine::SimulationSummary parse_summary_json(const nlohmann::json& j) {
  auto o = [&](const char* key) -> std::optional<double> {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
  };
  engine::SimulationSummary s;
  s.slots = j.at("slots").get<std::int64_t>();
  s.measured_slots = j.at("measured_slots").get<std::int64_t>();
  s.success_rate = o("success_rate");
  s.mean_phi_bar = j.at("mean_phi_bar").get<double>();
  s.mean_delta = j.at("mean_delta").get<double>();
  s.transmissions = j.at("transmissions").get<std::int64_t>();
  s.rx_success = j.at("rx_success").get<std::int64_t>();
  s.rx_attempts = j.at("rx_attempts").get<std::int64_t>();
  s.collisions = j.at("collisions").get<std::int64_t>();
  s.collided_transmissions = j.at("collided_transmissions").get<std::int64_t>();
  s.drops = j.at("drops").get<std::int64_t>();
  s.reselection_events = j.at("reselection_events").get<std::int64_t>();
  s.pi_estimate = o("pi_estimate");
  s.p_ncol_analytic = o("p_ncol_analytic");
  s.mc_non_collision = o("mc_non_collision");
  for (std::size_t k = 0; k < kNumMessageTypes; ++k) s.queue_aoi_by_type[k] = j.at(kTypeKeys[k]).get<double>();
  for (std::size_t k = 0; k < kNumMessageTypes; ++k) s.queued_age_by_type[k] = o(kQueuedKeys[k]);
  s.state_digest = j.at("state_digest").get<std::uint64_t>();
  return s;
}

engine::SimulationSummary parse_summary_csv(const std::string& text) {
  std::istringstream in(text);
  std::string header, row;
  if (!std::getline(in, header) || !std::getline(in, row))
    throw std::runtime_error("summary csv: expected a header and one data row");
  auto cells = [](const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
  };
  const auto names = cells(header);
  const auto values = cells(row);
  if (names.size() != values.size()) throw std::runtime_error("summary csv: column count mismatch");
  nlohmann::json j;
  for (std::size_t k = 0; k < names.size(); ++k) {
    const auto& v = values[k];
    if (v.empty()) {
      j[names[k]] = nullptr;
    } else if (names[k] == "state_digest") {
      j[names[k]] = std::stoull(v);
    } else if (v.find_first_of(".eEn") != std::string::npos) {
      j[names[k]] = std::stod(v);
    } else {
      j[names[k]] = std::stoll(v);
    }
  }
  return parse_summary_json(j);
}

ordered_json manifest_json(const OutputBundle& bundle) {
  ordered_json j;
  j["tool"] = "cv2x_aoi";
  j["version"] = bundle.version;
  j["seed"] = bundle.config.rng_seed;
  ordered_json cfg;
  for (const auto& name : field_names()) cfg[name] = get_field(bundle.config, name);
  j["config"] = cfg;
  j["state_digest"] = bundle.summary.state_digest;
  return j;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw std::runtime_error("cannot rename '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
}

void emit(const OutputBundle& bundle, Format format, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create '" + dir.string() + "': " + ec.message());
  if (format == Format::Csv)
    write_atomic(dir / "summary.csv", summary_csv(bundle.summary));
  else
    write_atomic(dir / "summary.json", summary_json(bundle.summary).dump(2) + "\n");
  write_atomic(dir / "series.csv", series_csv(bundle.series));
  write_atomic(dir / "manifest.json", manifest_json(bundle).dump(2) + "\n");
}

}  // namespace cv2x::output
