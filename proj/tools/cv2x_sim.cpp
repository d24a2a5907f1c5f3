// Command-line front end for the C-V2X Mode 4 age-of-information simulator.
//
//   cv2x_sim run        single simulation
//   cv2x_sim sweep      Cartesian grid of runs
//   cv2x_sim table1     success-rate grid: {OMA,NOMA} x RRI {20,50,100} x Nv {30,50}
//   cv2x_sim fig-queues per-type and mean in-queue age series
//   cv2x_sim fig-aoi    mean receiver age series
//   cv2x_sim analytic   closed-form non-collision probability
//
// Exit codes: 0 success, 1 configuration error, 2 runtime fault.

#include <CLI11.hpp>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "cv2x/analytic.hpp"
#include "cv2x/config.hpp"
#include "cv2x/engine.hpp"
#include "cv2x/errors.hpp"
#include "cv2x/output.hpp"
#include "cv2x/sweep.hpp"

namespace fs = std::filesystem;
using namespace cv2x;

namespace {

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::string seeds;
  std::string out;
  std::string format = "csv";
  bool quiet = false;
  int jobs = 1;
};

void add_common(CLI::App* sub, CommonOptions& o, bool with_seeds) {
  sub->add_option("--config", o.config_path, "key = value configuration file");
  sub->add_option("--set", o.sets, "override one field, key=value (repeatable)");
  sub->add_option("--seed", o.seed, "RNG seed");
  if (with_seeds) sub->add_option("--seeds", o.seeds, "seed range N..M or list a,b,c");
  sub->add_option("--out", o.out, "output directory (default $CV2X_SIM_OUT or ./cv2x_out)");
  sub->add_option("--format", o.format, "summary format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_flag("--quiet", o.quiet, "suppress console tables");
  sub->add_option("--jobs", o.jobs, "concurrent runs")->check(CLI::Range(1, 256));
}

/// File, then --set overrides, then --seed; validation happens later.
ScenarioConfig resolve_config(const CommonOptions& o, ScenarioConfig base) {
  if (!o.config_path.empty()) base = load_config_file(o.config_path, base);
  std::vector<FieldIssue> issues;
  for (const auto& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      issues.push_back({kv, "expected key=value"});
      continue;
    }
    try {
      set_field(base, kv.substr(0, eq), kv.substr(eq + 1));
    } catch (const ConfigError& e) {
      issues.insert(issues.end(), e.issues().begin(), e.issues().end());
    }
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
  if (o.seed) base.rng_seed = *o.seed;
  return base;
}

fs::path output_dir(const CommonOptions& o) {
  if (!o.out.empty()) return o.out;
  if (const char* env = std::getenv("CV2X_SIM_OUT"); env && *env) return env;
  return "cv2x_out";
}

std::vector<std::uint64_t> seeds_of(const CommonOptions& o, std::uint64_t fallback_lo,
                                    std::uint64_t fallback_hi) {
  if (!o.seeds.empty()) return sweep::parse_seed_list(o.seeds);
  if (o.seed) return {*o.seed};
  std::vector<std::uint64_t> s;
  for (auto k = fallback_lo; k <= fallback_hi; ++k) s.push_back(k);
  return s;
}

std::string fmt(double v, int prec = 5) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

std::string opt_text(const std::optional<double>& v) { return v ? fmt(*v) : "n/a"; }

void print_summary(const engine::SimulationSummary& s) {
  std::cout << "success_rate      " << opt_text(s.success_rate) << "\n"
            << "mean_phi_bar      " << fmt(s.mean_phi_bar, 3) << " slots\n"
            << "mean_delta        " << fmt(s.mean_delta, 3) << " slots\n"
            << "transmissions     " << s.transmissions << "\n"
            << "collisions        " << s.collisions << "\n"
            << "drops             " << s.drops << "\n"
            << "pi_estimate       " << opt_text(s.pi_estimate) << "\n"
            << "p_ncol_analytic   " << opt_text(s.p_ncol_analytic) << "\n"
            << "mc_non_collision  " << opt_text(s.mc_non_collision) << "\n"
            << "state_digest      " << s.state_digest << "\n";
}

std::string cell_dir_name(const sweep::SweepCell& cell) {
  std::string name;
  for (const auto& [f, v] : cell.params) name += (name.empty() ? "" : "_") + f + "-" + v;
  if (name.empty()) name = "base";
  return name;
}

/// sweep.csv: one row per run, params first, then status and the summary columns.
std::string sweep_table(const std::vector<sweep::SweepCell>& cells) {
  std::string out;
  std::string summary_header;
  {
    const auto csv = output::summary_csv({});
    summary_header = csv.substr(0, csv.find('\n'));
  }
  if (!cells.empty())
    for (const auto& [f, v] : cells.front().params) out += f + ",";
  out += "seed,status," + summary_header + "\n";
  for (const auto& c : cells) {
    for (const auto& [f, v] : c.params) out += v + ",";
    out += std::to_string(c.seed) + ",";
    if (c.summary) {
      const auto csv = output::summary_csv(*c.summary);
      out += "ok," + csv.substr(csv.find('\n') + 1);
    } else {
      std::string err = c.error;
      for (auto& ch : err)
        if (ch == ',' || ch == '\n') ch = ' ';
      out += "error: " + err + "\n";
    }
  }
  return out;
}

int report_failures(const std::vector<sweep::SweepCell>& cells) {
  int failed = 0;
  for (const auto& c : cells)
    if (!c.summary) {
      ++failed;
      std::cerr << "cell [" << c.param_key() << "] seed " << c.seed << " failed: " << c.error << "\n";
    }
  return failed;
}

int cmd_run(const CommonOptions& o) {
  const auto cfg = ValidatedConfig::validate(resolve_config(o, {}));
  auto report = engine::run(cfg);
  const auto dir = output_dir(o);
  output::emit({report.summary, std::move(report.series), cfg.config()}, output::parse_format(o.format), dir);
  if (!o.quiet) {
    print_summary(report.summary);
    std::cout << "wrote " << dir.string() << "\n";
  }
  return 0;
}

int cmd_sweep(const CommonOptions& o, const std::vector<std::string>& axis_specs, bool series) {
  const auto base = resolve_config(o, {});
  std::vector<sweep::SweepAxis> axes;
  for (const auto& a : axis_specs) axes.push_back(sweep::parse_axis(a));
  const auto seeds = seeds_of(o, base.rng_seed, base.rng_seed);
  const auto dir = output_dir(o);
  const auto format = output::parse_format(o.format);
  auto sink = [&](const sweep::SweepCell& cell, const ScenarioConfig& cfg, const engine::SimulationReport& r) {
    output::emit({r.summary, r.series, cfg}, format,
                 dir / "runs" / cell_dir_name(cell) / ("seed-" + std::to_string(cell.seed)));
  };
  const auto cells = sweep::run_sweep(base, axes, seeds, o.jobs, {.keep_series = series}, sink);
  output::write_atomic(dir / "sweep.csv", sweep_table(cells));
  if (!o.quiet) std::cout << "ran " << cells.size() << " runs; wrote " << (dir / "sweep.csv").string() << "\n";
  return report_failures(cells) == 0 ? 0 : 2;
}

struct Stats {
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t n = 0;
};

Stats stats_of(const std::vector<double>& xs) {
  Stats s;
  s.n = xs.size();
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

// Reference success rates of the reference grid, indexed [mode][nv][rri].
double reference_success(AccessMode mode, int nv, int rri) {
  static const std::map<std::tuple<int, int, int>, double> table = {
      {{0, 30, 20}, 0.82891}, {{0, 30, 50}, 0.83738}, {{0, 30, 100}, 0.91560},
      {{0, 50, 20}, 0.75367}, {{0, 50, 50}, 0.80050}, {{0, 50, 100}, 0.85184},
      {{1, 30, 20}, 0.89488}, {{1, 30, 50}, 0.93332}, {{1, 30, 100}, 0.97274},
      {{1, 50, 20}, 0.87902}, {{1, 50, 50}, 0.92636}, {{1, 50, 100}, 0.95356}};
  return table.at({mode == AccessMode::Noma ? 1 : 0, nv, rri});
}

int cmd_table1(const CommonOptions& o) {
  const auto base = resolve_config(o, reference_scenario(30, 100, AccessMode::Oma));
  const auto seeds = seeds_of(o, 1, 10);
  std::vector<sweep::SweepAxis> axes = {
      {"num_vehicles", {"30", "50"}}, {"access_mode", {"oma", "noma"}}, {"rri", {"20", "50", "100"}}};
  const auto cells = sweep::run_sweep(base, axes, seeds, o.jobs);
  const auto dir = output_dir(o);
  output::write_atomic(dir / "table1_runs.csv", sweep_table(cells));

  std::map<std::tuple<int, int, int>, std::vector<double>> rates;
  for (const auto& c : cells) {
    if (!c.summary || !c.summary->success_rate) continue;
    const int nv = std::stoi(c.params[0].second);
    const int mode = c.params[1].second == "noma" ? 1 : 0;
    const int rri = std::stoi(c.params[2].second);
    rates[{mode, nv, rri}].push_back(*c.summary->success_rate);
  }
  std::string table = "access_mode,num_vehicles,rri,seeds,mean_success_rate,stddev,reference\n";
  std::string pretty;
  for (int mode : {0, 1}) {
    pretty += mode ? "NOMA " : "OMA  ";
    for (int nv : {30, 50})
      for (int rri : {20, 50, 100}) {
        const auto s = stats_of(rates[{mode, nv, rri}]);
        const auto am = mode ? AccessMode::Noma : AccessMode::Oma;
        table += std::string(mode ? "noma," : "oma,") + std::to_string(nv) + "," + std::to_string(rri) + "," +
                 std::to_string(s.n) + "," + output::format_number(s.mean) + "," +
                 output::format_number(s.stddev) + "," + output::format_number(reference_success(am, nv, rri)) + "\n";
        pretty += " " + fmt(s.mean) + "±" + fmt(s.stddev, 3);
      }
    pretty += "\n";
  }
  output::write_atomic(dir / "table1.csv", table);
  if (!o.quiet) {
    std::cout << "Nv              30                                    50\n"
              << "RRI  20                50                100               20                50                100\n"
              << pretty << "wrote " << (dir / "table1.csv").string() << "\n";
  }
  return report_failures(cells) == 0 ? 0 : 2;
}

/// Runs one series per labelled config and writes them side by side.
void write_side_by_side(const fs::path& path, const std::vector<std::string>& labels,
                        const std::vector<std::vector<double>>& columns) {
  std::string out = "slot";
  for (const auto& l : labels) out += "," + l;
  out += "\n";
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (std::size_t r = 0; r < rows; ++r) {
    out += std::to_string(r);
    for (const auto& c : columns) out += "," + output::format_number(r < c.size() ? c[r] : 0.0);
    out += "\n";
  }
  output::write_atomic(path, out);
}

std::vector<engine::SimulationReport> run_many(const std::vector<ScenarioConfig>& configs, int jobs) {
  std::vector<engine::SimulationReport> reports(configs.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::string> errors(configs.size());
  auto worker = [&] {
    for (auto k = next.fetch_add(1); k < configs.size(); k = next.fetch_add(1)) {
      try {
        reports[k] = engine::run(ValidatedConfig::validate(configs[k]));
      } catch (const std::exception& e) {
        errors[k] = e.what();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < std::max(1, jobs); ++w) pool.emplace_back(worker);
  }
  for (const auto& e : errors)
    if (!e.empty()) throw std::runtime_error(e);
  return reports;
}

int cmd_fig_queues(const CommonOptions& o) {
  const auto dir = output_dir(o);
  // Per-type ages at Nv = 50, RRI = 100 under both queue disciplines.
  auto base = resolve_config(o, reference_scenario(50, 100, AccessMode::Oma));
  std::vector<ScenarioConfig> configs;
  for (auto d : {QueueDiscipline::Priority, QueueDiscipline::SingleFifo}) {
    auto c = base;
    c.queue_discipline = d;
    configs.push_back(c);
  }
  for (int nv : {30, 50})
    for (int rri : {20, 50, 100}) {
      auto c = base;
      c.num_vehicles = nv;
      c.rri = rri;
      c.selection_window = 0;
      configs.push_back(c);
    }
  const auto reports = run_many(configs, o.jobs);

  for (std::size_t k = 0; k < 2; ++k) {
    std::vector<std::vector<double>> cols(kNumMessageTypes);
    for (const auto& r : reports[k].series)
      for (std::size_t t = 0; t < kNumMessageTypes; ++t)
        cols[t].push_back(r.type_phi[t]);
    write_side_by_side(dir / (k == 0 ? "queue_types_priority.csv" : "queue_types_single_fifo.csv"),
                       {"hpd", "denm", "cam", "mhd"}, cols);
  }
  std::size_t k = 2;
  for (int nv : {30, 50}) {
    std::vector<std::vector<double>> cols;
    for (int rri : {20, 50, 100}) {
      (void)rri;
      std::vector<double> c;
      for (const auto& r : reports[k].series) c.push_back(r.phi_bar);
      cols.push_back(std::move(c));
      ++k;
    }
    write_side_by_side(dir / ("phi_bar_nv" + std::to_string(nv) + ".csv"), {"rri20", "rri50", "rri100"}, cols);
  }
  if (!o.quiet) {
    const char* names[] = {"HPD", "DENM", "CAM", "MHD"};
    std::cout << "mean in-queue age by type (Nv=50, RRI=100)\n         priority   single_fifo\n";
    for (std::size_t t = 0; t < kNumMessageTypes; ++t)
      std::cout << names[t] << "\t " << fmt(reports[0].summary.queue_aoi_by_type[t], 3) << "\t"
                << fmt(reports[1].summary.queue_aoi_by_type[t], 3) << "\n";
    std::cout << "wrote " << dir.string() << "\n";
  }
  return 0;
}

int cmd_fig_aoi(const CommonOptions& o) {
  const auto dir = output_dir(o);
  auto base = resolve_config(o, reference_scenario(30, 100, AccessMode::Oma));
  std::vector<ScenarioConfig> configs;
  std::vector<std::string> labels;
  for (int nv : {30, 50})
    for (int rri : {20, 50, 100})
      for (auto mode : {AccessMode::Oma, AccessMode::Noma}) {
        auto c = base;
        c.num_vehicles = nv;
        c.rri = rri;
        c.selection_window = 0;
        c.access_mode = mode;
        configs.push_back(c);
      }
  const auto reports = run_many(configs, o.jobs);
  std::size_t k = 0;
  for (int nv : {30, 50}) {
    std::vector<std::vector<double>> cols;
    std::vector<std::string> labels_nv;
    for (int rri : {20, 50, 100})
      for (const char* m : {"oma", "noma"}) {
        std::vector<double> c;
        for (const auto& r : reports[k].series) c.push_back(r.delta_t);
        cols.push_back(std::move(c));
        labels_nv.push_back(std::string(m) + "_rri" + std::to_string(rri));
        if (!o.quiet)
          std::cout << "Nv=" << nv << " " << labels_nv.back() << "  mean delta " << fmt(reports[k].summary.mean_delta, 2)
                    << "\n";
        ++k;
      }
    write_side_by_side(dir / ("delta_nv" + std::to_string(nv) + ".csv"), labels_nv, cols);
  }
  if (!o.quiet) std::cout << "wrote " << dir.string() << "\n";
  return 0;
}

int cmd_analytic(const CommonOptions& o) {
  // Analytic parameters are read from --set alongside any scenario fields.
  ScenarioConfig base;
  analytic::AnalyticParams p;
  std::optional<int> csr, window;
  std::vector<std::string> scenario_sets;
  for (const auto& kv : o.sets) {
    const auto eq = kv.find('=');
    const auto key = kv.substr(0, eq);
    const auto val = eq == std::string::npos ? std::string() : kv.substr(eq + 1);
    try {
      if (key == "pi") p.pi = std::stod(val);
      else if (key == "csr") csr = std::stoi(val);
      else if (key == "gamma" || key == "window") window = std::stoi(val);
      else scenario_sets.push_back(kv);
    } catch (const std::exception&) {
      throw ConfigError(key, "expected a number, got '" + val + "'");
    }
  }
  CommonOptions rest = o;
  rest.sets = scenario_sets;
  base = resolve_config(rest, base);
  if (base.selection_window == 0) base.selection_window = base.rri;
  const int subchannels = base.rbs_per_subchannel > 0 ? base.total_rbs / base.rbs_per_subchannel : 0;
  p.p_rk = base.p_rk;
  p.num_vehicles = base.num_vehicles;
  p.window = window.value_or(base.selection_window);
  p.csr = csr.value_or(p.window * subchannels);
  double value = 0.0;
  try {
    value = analytic::p_no_collision(p);
  } catch (const std::domain_error& e) {
    throw ConfigError("analytic", e.what());
  }
  std::cout << output::format_number(value) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"C-V2X Mode 4 sidelink age-of-information simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", CV2X_VERSION);

  CommonOptions run_o, sweep_o, table_o, figq_o, figa_o, an_o;
  std::vector<std::string> axes;
  bool sweep_series = false;

  auto* run = app.add_subcommand("run", "single simulation");
  add_common(run, run_o, false);
  auto* sw = app.add_subcommand("sweep", "grid of runs over config fields and seeds");
  add_common(sw, sweep_o, true);
  sw->add_option("--axis", axes, "field=v1,v2,... (repeatable)");
  sw->add_flag("--series", sweep_series, "also write per-run series.csv");
  auto* t1 = app.add_subcommand("table1", "success-rate grid over access mode, RRI and Nv");
  add_common(t1, table_o, true);
  auto* fq = app.add_subcommand("fig-queues", "in-queue age series");
  add_common(fq, figq_o, false);
  auto* fa = app.add_subcommand("fig-aoi", "receiver age series");
  add_common(fa, figa_o, false);
  auto* an = app.add_subcommand("analytic", "closed-form non-collision probability");
  add_common(an, an_o, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) return cmd_run(run_o);
    if (sw->parsed()) return cmd_sweep(sweep_o, axes, sweep_series);
    if (t1->parsed()) return cmd_table1(table_o);
    if (fq->parsed()) return cmd_fig_queues(figq_o);
    if (fa->parsed()) return cmd_fig_aoi(figa_o);
    if (an->parsed()) return cmd_analytic(an_o);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "fault: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
