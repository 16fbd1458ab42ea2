#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ogd/dynamics.hpp"
#include "ogd/games.hpp"
#include "ogd/metrics.hpp"

namespace ogd {

inline constexpr std::string_view kCodeVersion = "ogd-lab 0.1.0";
inline constexpr std::string_view kReportSchemaVersion = "1.0";

// A requested check. `bound` is the slope/distance threshold where one
// applies; `t_min`/`t_max` restrict the dyadic window; `ratio` is the
// tail-product shrink factor.
struct CheckSpec {
  std::string id;
  std::optional<double> bound;
  std::optional<double> t_min;
  std::optional<double> t_max;
  std::optional<double> ratio;
  friend bool operator==(const CheckSpec&, const CheckSpec&) = default;
};

const std::vector<std::string>& known_check_ids();

struct OutputOptions {
  std::string dir;
  bool trajectories = false;
  friend bool operator==(const OutputOptions&, const OutputOptions&) = default;
};

struct ExperimentConfig {
  std::string name;
  GameSpec game;
  DynamicsConfig dynamics;
  std::size_t trials = 1;
  std::uint64_t master_seed = 0;
  OutputOptions outputs;
  std::vector<CheckSpec> checks;
  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// Throws ConfigError.
void validate(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Config documents
// ---------------------------------------------------------------------------

nlohmann::json to_json(const GameSpec& spec);
GameSpec game_spec_from_json(const nlohmann::json& j, const std::string& path = "game");
nlohmann::json to_json(const DynamicsConfig& config);
DynamicsConfig dynamics_from_json(const nlohmann::json& j,
                                  const std::string& path = "dynamics");
nlohmann::json to_json(const ExperimentConfig& config);
// Throws ConfigError naming the offending field.
ExperimentConfig config_from_json(const nlohmann::json& j);

// Throws IoError if unreadable, ConfigError with line context if malformed.
nlohmann::json read_json_file(const std::filesystem::path& path);

// Sets the value at a dotted path ("dynamics.schedule.eta", array indices as
// numbers). `value` is parsed as a JSON literal, falling back to a string.
// The path must already exist. Throws ConfigError.
void apply_override(nlohmann::json& doc, std::string_view dotted_path, std::string_view value);
void apply_override(nlohmann::json& doc, std::string_view dotted_path,
                    const nlohmann::json& value);
inline void apply_override(nlohmann::json& doc, std::string_view dotted_path, const char* value) {
  apply_override(doc, dotted_path, std::string_view(value));
}
bool has_path(const nlohmann::json& doc, std::string_view dotted_path);

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct TrialSummary {
  std::size_t index = 0;
  std::size_t steps = 0;
  double final_gap = 0.0;
  std::optional<double> final_distance;
  bool diverged = false;
  std::optional<std::size_t> divergence_step;
  friend bool operator==(const TrialSummary&, const TrialSummary&) = default;
};

// Cross-trial mean and standard error on a set of (dyadic) time points.
struct Curve {
  std::vector<double> t;
  std::vector<double> mean;
  std::vector<double> std_error;

  std::vector<RatePoint> points() const;
  friend bool operator==(const Curve&, const Curve&) = default;
};

struct Provenance {
  std::string config_hash;
  std::uint64_t master_seed = 0;
  std::string code_version;
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct ExperimentReport {
  std::string schema_version{kReportSchemaVersion};
  std::string name;
  Provenance provenance;
  nlohmann::json config;
  std::vector<TrialSummary> trials;
  std::size_t diverged_trials = 0;
  bool all_diverged = false;
  // last_iterate, time_average, step_size, tail_product, distance_to_nash
  std::map<std::string, Curve> curves;
  std::map<std::string, RateFit> fits;
  std::vector<ConvergenceVerdict> verdicts;

  bool checks_passed() const;
  std::vector<std::string> curve_names() const;
  // Throws InvalidArgument listing the available curves.
  const Curve& curve(const std::string& name) const;
  friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

struct RunOptions {
  // 0: hardware concurrency.
  std::size_t workers = 0;
};

// Runs `trials` trajectories on RandomStream(master_seed, trial), aggregates
// in trial order and evaluates the requested checks. Writes per-trial
// trajectory files when outputs request them.
ExperimentReport run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

std::string serialize_report(const ExperimentReport& report);
// Throws ParseError (VersionError for an unknown major version).
ExperimentReport parse_report(std::string_view text);
void write_report(const ExperimentReport& report, const std::filesystem::path& path);
ExperimentReport read_report(const std::filesystem::path& path);

// Header: t,mean_gap,stderr_gap,mean_time_average_gap,mean_distance_to_nash
std::string curves_csv(const ExperimentReport& report);

// Header record with the config snapshot, then one record per step.
void write_trajectory(const TrajectoryRecord& traj, const nlohmann::json& config_snapshot,
                      std::ostream& out);

// Shortest round-trip decimal form.
std::string format_double(double v);

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

struct SweepAxis {
  std::string path;
  std::vector<nlohmann::json> values;
};

struct SweepPoint {
  nlohmann::json value;
  std::optional<ExperimentReport> report;
  std::string error;
};

// One run per grid value, in grid order. Failures are isolated per point.
// Throws ConfigError for an empty grid or a path absent from the template.
std::vector<SweepPoint> sweep(const nlohmann::json& config_template, const SweepAxis& axis,
                              const RunOptions& options = {});

}  // namespace ogd
