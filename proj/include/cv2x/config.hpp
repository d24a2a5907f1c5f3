#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cv2x {

/// Message classes. Enumerator order is the priority order, highest first.
enum class MessageType : std::uint8_t { Hpd = 0, Denm = 1, Cam = 2, Mhd = 3 };

inline constexpr std::size_t kNumMessageTypes = 4;
inline constexpr std::array<MessageType, kNumMessageTypes> kPriorityOrder{
    MessageType::Hpd, MessageType::Denm, MessageType::Cam, MessageType::Mhd};

constexpr std::size_t index_of(MessageType t) { return static_cast<std::size_t>(t); }

/// True when `a` is served before `b`.
constexpr bool higher_priority(MessageType a, MessageType b) { return index_of(a) < index_of(b); }

std::string_view to_string(MessageType t);

enum class AccessMode { Oma, Noma };
enum class FadingMode { Constant, Random };
enum class CamMode { Periodic, Bernoulli };
enum class DistanceMode { OneD, TwoD };
enum class QueueDiscipline { Priority, SingleFifo };
enum class QueueAoiMean { Flat, Weighted };

/// Every tunable of a scenario. Defaults are the reference highway settings
/// (23 dBm, 120 km/h, 10 MHz / 50 RB, 500 B messages).
struct ScenarioConfig {
  int num_vehicles = 30;
  double road_length = 500.0;       // m
  int lanes = 4;
  double lane_width = 4.0;          // m
  double edge_offset = 2.0;         // m
  double speed = 120.0 / 3.6;       // m/s
  double slot_duration = 0.001;     // s
  std::int64_t sim_duration = 100000;  // slots
  int rri = 100;                    // slots
  int selection_window = 0;         // slots; 0 means "equal to rri"
  int total_rbs = 50;
  int rbs_per_subchannel = 10;
  double bandwidth_per_rb = 180e3;  // Hz
  double message_size = 4000.0;     // bits
  double tx_power_dbm = 23.0;
  double noise_power_dbm = -95.0;
  double path_loss_exponent = 2.0;
  FadingMode fading = FadingMode::Constant;
  int cam_period = 100;             // slots
  CamMode cam_mode = CamMode::Periodic;
  double lambda_hpd = 1e-4;
  double lambda_denm = 1e-4;
  double lambda_mhd = 1e-4;
  int retrans_period_hpd = 100;     // slots
  int retrans_period_denm = 500;    // slots
  int retrans_count_hpd = 8;
  int retrans_count_denm = 5;
  int queue_capacity = 5;
  QueueDiscipline queue_discipline = QueueDiscipline::Priority;
  double p_rk = 1.0;
  bool decrement_on_silence = false;
  bool occupy_when_silent = false;
  AccessMode access_mode = AccessMode::Oma;
  bool sic_gated = false;
  DistanceMode distance_mode = DistanceMode::TwoD;
  double max_range = 0.0;           // m, 0 disables the cutoff
  QueueAoiMean queue_aoi_mean = QueueAoiMean::Flat;
  std::int64_t discard_slots = 0;
  bool allow_nonstandard_rri = false;
  std::uint64_t rng_seed = 1;
};

struct FieldIssue {
  std::string field;
  std::string message;
};

/// Raised for any malformed or out-of-range configuration value.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<FieldIssue> issues);
  ConfigError(std::string field, std::string message);
  const std::vector<FieldIssue>& issues() const { return issues_; }

 private:
  std::vector<FieldIssue> issues_;
};

/// Sets one field from its textual form. Accepts the canonical key names,
/// plus `nv` and the unit-converting aliases `speed_kmh`, `tx_power_w`.
void set_field(ScenarioConfig& cfg, std::string_view key, std::string_view value);

/// Textual value of a canonical field.
std::string get_field(const ScenarioConfig& cfg, std::string_view key);

bool is_field(std::string_view key);

/// Canonical field names in schema order.
const std::vector<std::string>& field_names();

/// Ordered canonical key -> value map; the on-disk schema.
std::map<std::string, std::string> to_key_values(const ScenarioConfig& cfg);

/// Parses `key = value` lines. `#` starts a comment; blank lines are ignored.
ScenarioConfig parse_config_text(std::string_view text, ScenarioConfig base = {});
ScenarioConfig load_config_file(const std::string& path, ScenarioConfig base = {});
std::string format_config_text(const ScenarioConfig& cfg);

double dbm_to_watts(double dbm);

/// Reference highway experiment (500 m road, 23 dBm, 120 km/h, 500 B,
/// 10 MHz / 50 RB, lambda = 1e-4, T_c = 100 ms, HPD 8 x 100 ms, DENM 5 x 500 ms)
/// for one (vehicle count, RRI, access mode) cell.
ScenarioConfig reference_scenario(int num_vehicles, int rri, AccessMode mode);

/// A configuration that passed every invariant, with derived quantities.
class ValidatedConfig {
 public:
  static ValidatedConfig validate(const ScenarioConfig& cfg);

  const ScenarioConfig& config() const { return cfg_; }
  int num_subchannels() const { return num_subchannels_; }
  double subchannel_bandwidth() const { return subchannel_bandwidth_; }
  int candidate_resources() const { return cfg_.selection_window * num_subchannels_; }
  double cam_probability() const { return 1.0 / cfg_.cam_period; }
  double tx_power_w() const { return tx_power_w_; }
  double noise_power_w() const { return noise_power_w_; }
  double sinr_threshold() const { return sinr_threshold_; }
  /// Per-slot probability of a new packet of type `t` (0 for CAM, which is periodic).
  double arrival_probability(MessageType t) const { return arrival_probability_[index_of(t)]; }

 private:
  ValidatedConfig() = default;
  ScenarioConfig cfg_;
  int num_subchannels_ = 0;
  double subchannel_bandwidth_ = 0.0;
  double tx_power_w_ = 0.0;
  double noise_power_w_ = 0.0;
  double sinr_threshold_ = 0.0;
  std::array<double, kNumMessageTypes> arrival_probability_{};
};

}  // namespace cv2x
