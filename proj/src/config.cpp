#include "cv2x/config.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "cv2x/phy.hpp"
#include "cv2x/traffic.hpp"

namespace cv2x {

std::string_view to_string(MessageType t) {
  switch (t) {
    case MessageType::Hpd: return "HPD";
    case MessageType::Denm: return "DENM";
    case MessageType::Cam: return "CAM";
    case MessageType::Mhd: return "MHD";
  }
  return "?";
}

namespace {

std::string join_issues(const std::vector<FieldIssue>& issues) {
  std::string out = "invalid configuration:";
  for (const auto& i : issues) out += "\n  " + i.field + ": " + i.message;
  return out;
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_integer(std::string_view key, std::string_view text) {
  T v{};
  text = trim(text);
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || p != text.data() + text.size())
    throw ConfigError(std::string(key), "expected an integer, got '" + std::string(text) + "'");
  return v;
}

double parse_double(std::string_view key, std::string_view text) {
  text = trim(text);
  std::string buf(text);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size() || errno == ERANGE)
    throw ConfigError(std::string(key), "expected a number, got '" + buf + "'");
  if (!std::isfinite(v)) throw ConfigError(std::string(key), "value must be finite");
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError(std::string(key), "expected true/false, got '" + std::string(text) + "'");
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class E>
struct EnumName {
  E value;
  std::string_view name;
};

template <class E, std::size_t N>
E parse_enum(std::string_view key, std::string_view text, const EnumName<E> (&names)[N]) {
  text = trim(text);
  std::string lower(text);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (const auto& n : names)
    if (n.name == lower) return n.value;
  std::string allowed;
  for (const auto& n : names) allowed += (allowed.empty() ? "" : "|") + std::string(n.name);
  throw ConfigError(std::string(key), "expected one of " + allowed + ", got '" + std::string(text) + "'");
}

template <class E, std::size_t N>
std::string enum_name(E v, const EnumName<E> (&names)[N]) {
  for (const auto& n : names)
    if (n.value == v) return std::string(n.name);
  return "?";
}

constexpr EnumName<AccessMode> kAccessModes[] = {{AccessMode::Oma, "oma"}, {AccessMode::Noma, "noma"}};
constexpr EnumName<FadingMode> kFadingModes[] = {{FadingMode::Constant, "constant"},
                                                 {FadingMode::Random, "random"}};
constexpr EnumName<CamMode> kCamModes[] = {{CamMode::Periodic, "periodic"},
                                           {CamMode::Bernoulli, "bernoulli"}};
constexpr EnumName<DistanceMode> kDistanceModes[] = {{DistanceMode::OneD, "1d"},
                                                     {DistanceMode::TwoD, "2d"}};
constexpr EnumName<QueueDiscipline> kDisciplines[] = {{QueueDiscipline::Priority, "priority"},
                                                      {QueueDiscipline::SingleFifo, "single_fifo"}};
constexpr EnumName<QueueAoiMean> kAoiMeans[] = {{QueueAoiMean::Flat, "flat"},
                                                {QueueAoiMean::Weighted, "weighted"}};

struct Field {
  std::string name;
  std::function<void(ScenarioConfig&, std::string_view)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

#define INT_FIELD(member)                                                                   \
  Field {                                                                                   \
    #member,                                                                                \
        [](ScenarioConfig& c, std::string_view v) {                                         \
          c.member = parse_integer<decltype(c.member)>(#member, v);                          \
        },                                                                                  \
        [](const ScenarioConfig& c) { return std::to_string(c.member); }                    \
  }
#define DOUBLE_FIELD(member)                                                                        \
  Field {                                                                                           \
    #member, [](ScenarioConfig& c, std::string_view v) { c.member = parse_double(#member, v); },    \
        [](const ScenarioConfig& c) { return format_double(c.member); }                             \
  }
#define BOOL_FIELD(member)                                                                       \
  Field {                                                                                        \
    #member, [](ScenarioConfig& c, std::string_view v) { c.member = parse_bool(#member, v); },   \
        [](const ScenarioConfig& c) { return std::string(c.member ? "true" : "false"); }         \
  }
#define ENUM_FIELD(member, table)                                                                   \
  Field {                                                                                           \
    #member, [](ScenarioConfig& c, std::string_view v) { c.member = parse_enum(#member, v, table); }, \
        [](const ScenarioConfig& c) { return enum_name(c.member, table); }                          \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      INT_FIELD(num_vehicles),
      DOUBLE_FIELD(road_length),
      INT_FIELD(lanes),
      DOUBLE_FIELD(lane_width),
      DOUBLE_FIELD(edge_offset),
      DOUBLE_FIELD(speed),
      DOUBLE_FIELD(slot_duration),
      INT_FIELD(sim_duration),
      INT_FIELD(rri),
      INT_FIELD(selection_window),
      INT_FIELD(total_rbs),
      INT_FIELD(rbs_per_subchannel),
      DOUBLE_FIELD(bandwidth_per_rb),
      DOUBLE_FIELD(message_size),
      DOUBLE_FIELD(tx_power_dbm),
      DOUBLE_FIELD(noise_power_dbm),
      DOUBLE_FIELD(path_loss_exponent),
      ENUM_FIELD(fading, kFadingModes),
      INT_FIELD(cam_period),
      ENUM_FIELD(cam_mode, kCamModes),
      DOUBLE_FIELD(lambda_hpd),
      DOUBLE_FIELD(lambda_denm),
      DOUBLE_FIELD(lambda_mhd),
      INT_FIELD(retrans_period_hpd),
      INT_FIELD(retrans_period_denm),
      INT_FIELD(retrans_count_hpd),
      INT_FIELD(retrans_count_denm),
      INT_FIELD(queue_capacity),
      ENUM_FIELD(queue_discipline, kDisciplines),
      DOUBLE_FIELD(p_rk),
      BOOL_FIELD(decrement_on_silence),
      BOOL_FIELD(occupy_when_silent),
      ENUM_FIELD(access_mode, kAccessModes),
      BOOL_FIELD(sic_gated),
      ENUM_FIELD(distance_mode, kDistanceModes),
      DOUBLE_FIELD(max_range),
      ENUM_FIELD(queue_aoi_mean, kAoiMeans),
      INT_FIELD(discard_slots),
      BOOL_FIELD(allow_nonstandard_rri),
      INT_FIELD(rng_seed),
  };
  return table;
}

#undef INT_FIELD
#undef DOUBLE_FIELD
#undef BOOL_FIELD
#undef ENUM_FIELD

const Field* find_field(std::string_view key) {
  for (const auto& f : fields())
    if (f.name == key) return &f;
  return nullptr;
}

}  // namespace

ConfigError::ConfigError(std::vector<FieldIssue> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

ConfigError::ConfigError(std::string field, std::string message)
    : ConfigError(std::vector<FieldIssue>{{std::move(field), std::move(message)}}) {}

void set_field(ScenarioConfig& cfg, std::string_view key, std::string_view value) {
  key = trim(key);
  if (key == "nv") key = "num_vehicles";
  if (key == "seed") key = "rng_seed";
  if (key == "mode") key = "access_mode";
  if (key == "speed_kmh") {
    cfg.speed = parse_double(key, value) / 3.6;
    return;
  }
  if (key == "tx_power_w") {
    const double w = parse_double(key, value);
    if (w <= 0) throw ConfigError(std::string(key), "must be > 0");
    cfg.tx_power_dbm = 10.0 * std::log10(w * 1e3);
    return;
  }
  const Field* f = find_field(key);
  if (f == nullptr) throw ConfigError(std::string(key), "unknown configuration key");
  f->set(cfg, value);
}

std::string get_field(const ScenarioConfig& cfg, std::string_view key) {
  const Field* f = find_field(key);
  if (f == nullptr) throw ConfigError(std::string(key), "unknown configuration key");
  return f->get(cfg);
}

bool is_field(std::string_view key) {
  return find_field(key) != nullptr || key == "nv" || key == "seed" || key == "mode" ||
         key == "speed_kmh" || key == "tx_power_w";
}

const std::vector<std::string>& field_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& f : fields()) n.push_back(f.name);
    return n;
  }();
  return names;
}

std::map<std::string, std::string> to_key_values(const ScenarioConfig& cfg) {
  std::map<std::string, std::string> kv;
  for (const auto& f : fields()) kv[f.name] = f.get(cfg);
  return kv;
}

ScenarioConfig parse_config_text(std::string_view text, ScenarioConfig base) {
  std::vector<FieldIssue> issues;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find_first_of("=:");
    if (eq == std::string_view::npos) {
      issues.push_back({"line " + std::to_string(line_no), "expected 'key = value'"});
      continue;
    }
    try {
      set_field(base, line.substr(0, eq), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      for (const auto& i : e.issues()) issues.push_back(i);
    }
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return base;
}

ScenarioConfig load_config_file(const std::string& path, ScenarioConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), base);
}

std::string format_config_text(const ScenarioConfig& cfg) {
  std::string out;
  for (const auto& f : fields()) out += f.name + " = " + f.get(cfg) + "\n";
  return out;
}

double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }

ScenarioConfig reference_scenario(int num_vehicles, int rri, AccessMode mode) {
  ScenarioConfig c;
  c.num_vehicles = num_vehicles;
  c.rri = rri;
  c.selection_window = 0;
  c.access_mode = mode;
  c.occupy_when_silent = true;
  return c;
}

ValidatedConfig ValidatedConfig::validate(const ScenarioConfig& c) {
  std::vector<FieldIssue> issues;
  auto require = [&](bool ok, const char* field, std::string msg) {
    if (!ok) issues.push_back({field, std::move(msg)});
  };
  auto probability = [&](double p, const char* field) {
    require(p >= 0.0 && p <= 1.0, field, "must lie in [0, 1]");
  };

  require(c.num_vehicles >= 2, "num_vehicles", "need at least one receiver (num_vehicles >= 2)");
  require(c.road_length > 0, "road_length", "must be > 0");
  require(c.lanes >= 2 && c.lanes % 2 == 0, "lanes", "must be a positive even count");
  require(c.lane_width > 0, "lane_width", "must be > 0");
  require(c.edge_offset >= 0, "edge_offset", "must be >= 0");
  require(c.speed >= 0, "speed", "must be >= 0");
  require(c.slot_duration > 0, "slot_duration", "must be > 0");
  require(c.sim_duration >= 0 && c.sim_duration <= 10'000'000, "sim_duration",
          "must lie in [0, 1e7] slots");
  if (c.allow_nonstandard_rri)
    require(c.rri >= 1, "rri", "must be >= 1");
  else
    require(c.rri == 20 || c.rri == 50 || c.rri == 100, "rri",
            "must be one of 20, 50, 100 (set allow_nonstandard_rri to override)");
  require(c.selection_window == 0 || c.selection_window == c.rri, "selection_window",
          "selection window must equal RRI");
  require(c.total_rbs > 0, "total_rbs", "must be > 0");
  require(c.rbs_per_subchannel > 0, "rbs_per_subchannel", "must be > 0");
  if (c.total_rbs > 0 && c.rbs_per_subchannel > 0)
    require(c.total_rbs % c.rbs_per_subchannel == 0, "total_rbs",
            "must be a multiple of rbs_per_subchannel");
  require(c.bandwidth_per_rb > 0, "bandwidth_per_rb", "must be > 0");
  require(c.message_size > 0, "message_size", "must be > 0");
  require(std::isfinite(c.tx_power_dbm), "tx_power_dbm", "must be finite");
  require(std::isfinite(c.noise_power_dbm), "noise_power_dbm", "must be finite");
  require(c.path_loss_exponent > 0, "path_loss_exponent", "must be > 0");
  require(c.cam_period >= 1, "cam_period", "must be >= 1 slot");
  probability(c.lambda_hpd, "lambda_hpd");
  probability(c.lambda_denm, "lambda_denm");
  probability(c.lambda_mhd, "lambda_mhd");
  require(c.retrans_period_hpd >= 1, "retrans_period_hpd", "must be >= 1 slot");
  require(c.retrans_period_denm >= 1, "retrans_period_denm", "must be >= 1 slot");
  require(c.retrans_count_hpd >= 1, "retrans_count_hpd", "must be >= 1");
  require(c.retrans_count_denm >= 1, "retrans_count_denm", "must be >= 1");
  require(c.queue_capacity >= 1, "queue_capacity", "must be >= 1");
  probability(c.p_rk, "p_rk");
  require(c.max_range >= 0, "max_range", "must be >= 0 (0 disables)");
  require(c.discard_slots >= 0 && c.discard_slots <= c.sim_duration, "discard_slots",
          "must lie in [0, sim_duration]");

  ValidatedConfig v;
  v.cfg_ = c;
  if (v.cfg_.selection_window == 0) v.cfg_.selection_window = c.rri;
  if (issues.empty()) {
    v.num_subchannels_ = c.total_rbs / c.rbs_per_subchannel;
    v.subchannel_bandwidth_ = c.rbs_per_subchannel * c.bandwidth_per_rb;
    v.tx_power_w_ = dbm_to_watts(c.tx_power_dbm);
    v.noise_power_w_ = dbm_to_watts(c.noise_power_dbm);
    try {
      v.sinr_threshold_ = phy::sinr_threshold(c.message_size, v.subchannel_bandwidth_, c.slot_duration);
    } catch (const std::domain_error& e) {
      issues.push_back({"message_size", e.what()});
    }
    v.arrival_probability_[index_of(MessageType::Hpd)] = traffic::arrival_probability(c.lambda_hpd);
    v.arrival_probability_[index_of(MessageType::Denm)] = traffic::arrival_probability(c.lambda_denm);
    v.arrival_probability_[index_of(MessageType::Mhd)] = traffic::arrival_probability(c.lambda_mhd);
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return v;
}

}  // namespace cv2x
