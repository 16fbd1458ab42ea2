#include "ogd/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "ogd/errors.hpp"

namespace ogd {
namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::vector<std::size_t> dyadic_steps(std::size_t horizon) {
  std::vector<std::size_t> out;
  for (std::size_t t = 1; t <= horizon; t *= 2) out.push_back(t);
  return out;
}

// Per-trial reduction computed inside the worker so full trajectories never
// need to be held for all trials at once.
struct TrialResult {
  TrialSummary summary;
  std::vector<double> gap;       // at dyadic t
  std::vector<double> average;   // time-average gap at dyadic t
  std::vector<double> eta;       // eta_t at dyadic t
  std::vector<double> distance;  // distance to Nash at dyadic t
  std::vector<double> tail;      // T * gap_{2T-1} at dyadic T
  std::map<std::string, std::vector<ConvergenceVerdict>> verdicts;
};

const CheckSpec* find_check(const ExperimentConfig& config, std::string_view id) {
  for (const auto& c : config.checks) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

std::vector<RatePoint> tail_window(const TrajectoryRecord& traj, const CheckSpec* spec) {
  const double lo = spec && spec->t_min ? *spec->t_min : 16.0;
  const double hi = spec && spec->t_max ? *spec->t_max : 4096.0;
  std::vector<RatePoint> out;
  for (const auto& p : tail_product(traj).points) {
    if (p.t >= lo && p.t <= hi) out.push_back(p);
  }
  return out;
}

TrialResult reduce_trial(const ExperimentConfig& config, const Game& game,
                         const TrajectoryRecord& traj, std::size_t index) {
  TrialResult r;
  r.summary.index = index;
  r.summary.steps = traj.steps();
  r.summary.final_gap = traj.gap.empty() ? kNaN : traj.gap.back();
  r.summary.diverged = traj.diverged;
  r.summary.divergence_step = traj.divergence_step;

  const bool oracle = game.has_nash_oracle();
  std::vector<double> proj(game.dimension());
  auto distance_at = [&](std::size_t t) -> double {
    const auto s = traj.state_at(t);
    if (!s) return kNaN;
    game.project(*s, proj);
    return std::sqrt(vec::squared_distance(*s, proj));
  };
  if (oracle && !traj.state_steps.empty()) {
    r.summary.final_distance = distance_at(traj.state_steps.back());
  }

  const auto averages = time_average_gap(traj);
  for (std::size_t t : dyadic_steps(config.dynamics.horizon)) {
    const bool have = t < traj.gap.size();
    r.gap.push_back(have ? traj.gap[t] : kNaN);
    r.average.push_back(have ? averages[t] : kNaN);
    r.eta.push_back(t - 1 < traj.step_size.size() ? traj.step_size[t - 1] : kNaN);
    if (oracle) r.distance.push_back(have ? distance_at(t) : kNaN);
  }
  for (const auto& p : tail_product(traj).points) r.tail.push_back(p.value);

  if (find_check(config, "lemma1")) {
    const double eta = std::get<ConstantStep>(config.dynamics.schedule).eta;
    r.verdicts["lemma1"] = check_lemma1(traj, game, eta, *game.cocoercivity());
  }
  if (const auto* spec = find_check(config, "tail_product")) {
    r.verdicts["tail_product"] = {
        check_tail_decreasing(tail_window(traj, spec), spec->ratio.value_or(1e-3))};
  }
  if (find_check(config, "beta_stabilized")) {
    r.verdicts["beta_stabilized"] = {check_beta_stabilized(traj)};
  }
  if (find_check(config, "step_size_nonincreasing")) {
    r.verdicts["step_size_nonincreasing"] = {check_step_size_nonincreasing(traj)};
  }
  return r;
}

void write_trial_file(const ExperimentConfig& config, const TrajectoryRecord& traj,
                      std::size_t index) {
  const auto dir = std::filesystem::path(config.outputs.dir) / "trajectories";
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto path = dir / ("trial_" + std::to_string(index) + ".ndjson");
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  write_trajectory(traj, to_json(config), out);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

// Mean and standard error over the trials that did not diverge, in trial
// order so the reduction is reproducible.
Curve aggregate(const std::vector<double>& t, const std::vector<TrialResult>& results,
                std::vector<double> TrialResult::*member) {
  Curve c;
  c.t = t;
  for (std::size_t k = 0; k < t.size(); ++k) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& r : results) {
      if (r.summary.diverged) continue;
      const auto& series = r.*member;
      if (k >= series.size()) continue;
      sum += series[k];
      ++n;
    }
    if (n == 0) {
      c.mean.push_back(kNaN);
      c.std_error.push_back(kNaN);
      continue;
    }
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (const auto& r : results) {
      if (r.summary.diverged) continue;
      const auto& series = r.*member;
      if (k >= series.size()) continue;
      ss += (series[k] - mean) * (series[k] - mean);
    }
    const double se =
        n > 1 ? std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
    c.mean.push_back(mean);
    c.std_error.push_back(se);
  }
  return c;
}

ConvergenceVerdict merge_trials(const std::vector<TrialResult>& results,
                                const std::string& key, std::size_t slot) {
  ConvergenceVerdict merged;
  bool first = true;
  for (const auto& r : results) {
    const auto it = r.verdicts.find(key);
    if (it == r.verdicts.end() || slot >= it->second.size()) continue;
    const auto& v = it->second[slot];
    if (first) {
      merged.id = v.id;
      merged.tolerance = v.tolerance;
      merged.worst_violation = v.worst_violation;
      merged.detail = "all trials: " + v.detail;
      first = false;
    }
    merged.worst_violation = std::max(merged.worst_violation, v.worst_violation);
    if (!v.passed && merged.passed) {
      merged.passed = false;
      merged.first_violation = v.first_violation;
      merged.detail = "trial " + std::to_string(r.summary.index) + ": " + v.detail;
    }
  }
  return merged;
}

json double_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json doubles_json(const std::vector<double>& vs) {
  json a = json::array();
  for (double v : vs) a.push_back(double_json(v));
  return a;
}

// Report field access with path-qualified errors.
struct Reader {
  const json& node;
  std::string path;

  const json& at(const std::string& key) const {
    if (!node.is_object()) throw ParseError("report: " + path + ": expected an object");
    const auto it = node.find(key);
    if (it == node.end()) {
      throw ParseError("report: missing field '" + (path.empty() ? key : path + "." + key) +
                       "'");
    }
    return *it;
  }
  Reader child(const std::string& key) const {
    return {at(key), path.empty() ? key : path + "." + key};
  }
  std::string where(const std::string& key) const {
    return path.empty() ? key : path + "." + key;
  }
  double num(const std::string& key) const { return as_double(at(key), where(key)); }
  std::optional<double> opt_num(const std::string& key) const {
    const json& v = at(key);
    if (v.is_null()) return std::nullopt;
    return as_double(v, where(key));
  }
  std::string str(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_string()) throw ParseError("report: " + where(key) + ": expected a string");
    return v.get<std::string>();
  }
  bool boolean(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_boolean()) throw ParseError("report: " + where(key) + ": expected a boolean");
    return v.get<bool>();
  }
  std::uint64_t uint(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_number_unsigned()) {
      throw ParseError("report: " + where(key) + ": expected a nonnegative integer");
    }
    return v.get<std::uint64_t>();
  }
  std::vector<double> nums(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_array()) throw ParseError("report: " + where(key) + ": expected an array");
    std::vector<double> out;
    for (std::size_t k = 0; k < v.size(); ++k) {
      out.push_back(as_double(v[k], where(key) + "[" + std::to_string(k) + "]"));
    }
    return out;
  }

  static double as_double(const json& v, const std::string& where) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
      const auto s = v.get<std::string>();
      if (s == "nan") return kNaN;
      if (s == "inf") return std::numeric_limits<double>::infinity();
      if (s == "-inf") return -std::numeric_limits<double>::infinity();
    }
    throw ParseError("report: " + where + ": expected a number");
  }
};

json to_json(const RateFit& f) {
  return json{{"slope", double_json(f.slope)},
              {"intercept", double_json(f.intercept)},
              {"residual_rms", double_json(f.residual_rms)},
              {"t_min", f.t_min},
              {"t_max", f.t_max},
              {"points", f.points}};
}

json to_json(const ConvergenceVerdict& v) {
  return json{{"id", v.id},
              {"passed", v.passed},
              {"worst_violation", double_json(v.worst_violation)},
              {"tolerance", double_json(v.tolerance)},
              {"first_violation", v.first_violation ? json(*v.first_violation) : json(nullptr)},
              {"detail", v.detail}};
}

}  // namespace

std::vector<RatePoint> Curve::points() const {
  std::vector<RatePoint> out;
  for (std::size_t k = 0; k < t.size(); ++k) out.push_back({t[k], mean[k]});
  return out;
}

bool ExperimentReport::checks_passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(),
                     [](const ConvergenceVerdict& v) { return v.passed; });
}

std::vector<std::string> ExperimentReport::curve_names() const {
  std::vector<std::string> names;
  for (const auto& [name, _] : curves) names.push_back(name);
  return names;
}

const Curve& ExperimentReport::curve(const std::string& name) const {
  const auto it = curves.find(name);
  if (it == curves.end()) {
    std::string avail;
    for (const auto& n : curve_names()) avail += (avail.empty() ? "" : ", ") + n;
    throw InvalidArgument("report has no curve '" + name + "'; available: " + avail);
  }
  return it->second;
}

ExperimentReport run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  validate(config);
  const Game game = make_game(config.game);
  if (config.dynamics.x0.size() != game.dimension()) {
    throw ConfigError("config: dynamics.x0: has dimension " +
                      std::to_string(config.dynamics.x0.size()) + ", game expects " +
                      std::to_string(game.dimension()));
  }
  if (find_check(config, "lemma1") && (!game.has_nash_oracle() || !game.cocoercivity())) {
    throw ConfigError("config: checks: 'lemma1' needs a game with a Nash oracle and known lambda");
  }
  if (find_check(config, "max_final_distance") && !game.has_nash_oracle()) {
    throw ConfigError("config: checks: 'max_final_distance' needs a Nash oracle");
  }

  const std::size_t trials = config.trials;
  std::size_t workers = options.workers != 0
                            ? options.workers
                            : std::max<std::size_t>(1, std::thread::hardware_concurrency());
  workers = std::min(workers, trials);

  std::vector<TrialResult> results(trials);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= trials) return;
      try {
        RandomStream rng(config.master_seed, k);
        const TrajectoryRecord traj = run_trajectory(game, config.dynamics, rng);
        if (config.outputs.trajectories && !config.outputs.dir.empty()) {
          write_trial_file(config, traj, k);
        }
        results[k] = reduce_trial(config, game, traj, k);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(trials);
        return;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);

  ExperimentReport report;
  report.name = config.name;
  report.config = to_json(config);
  report.provenance = {hex64(fnv1a(report.config.dump())), config.master_seed,
                       std::string(kCodeVersion)};
  for (const auto& r : results) {
    report.trials.push_back(r.summary);
    if (r.summary.diverged) ++report.diverged_trials;
  }
  report.all_diverged = report.diverged_trials == trials;

  std::vector<double> t;
  for (std::size_t s : dyadic_steps(config.dynamics.horizon)) t.push_back(static_cast<double>(s));
  report.curves["last_iterate"] = aggregate(t, results, &TrialResult::gap);
  report.curves["time_average"] = aggregate(t, results, &TrialResult::average);
  report.curves["step_size"] = aggregate(t, results, &TrialResult::eta);
  if (game.has_nash_oracle()) {
    report.curves["distance_to_nash"] = aggregate(t, results, &TrialResult::distance);
  }
  std::vector<double> tail_t;
  for (std::size_t T = 1; 2 * T - 1 <= config.dynamics.horizon; T *= 2) {
    tail_t.push_back(static_cast<double>(T));
  }
  report.curves["tail_product"] = aggregate(tail_t, results, &TrialResult::tail);

  for (const char* name : {"last_iterate", "time_average"}) {
    const auto pts = report.curves[name].points();
    if (auto fit = try_fit_rate(rate_window(pts))) report.fits[name] = *fit;
  }

  for (const auto& spec : config.checks) {
    if (spec.id == "lemma1") {
      for (std::size_t slot = 0; slot < 3; ++slot) {
        report.verdicts.push_back(merge_trials(results, "lemma1", slot));
      }
    } else if (spec.id == "tail_product" || spec.id == "beta_stabilized" ||
               spec.id == "step_size_nonincreasing") {
      report.verdicts.push_back(merge_trials(results, spec.id, 0));
    } else if (spec.id == "no_divergence") {
      ConvergenceVerdict v;
      v.id = "no_divergence";
      v.worst_violation = static_cast<double>(report.diverged_trials);
      v.passed = report.diverged_trials == 0;
      for (const auto& r : results) {
        if (r.summary.diverged) {
          v.first_violation = r.summary.divergence_step;
          break;
        }
      }
      v.detail = std::to_string(report.diverged_trials) + " of " + std::to_string(trials) +
                 " trials diverged";
      report.verdicts.push_back(std::move(v));
    } else if (spec.id == "last_iterate_slope" || spec.id == "time_average_slope") {
      const auto& curve =
          report.curves[spec.id == "last_iterate_slope" ? "last_iterate" : "time_average"];
      const auto window =
          rate_window(curve.points(), spec.t_min.value_or(0.0), spec.t_max.value_or(0.0));
      report.verdicts.push_back(check_slope_at_most(spec.id, window, *spec.bound));
    } else if (spec.id == "max_final_distance") {
      ConvergenceVerdict v;
      v.id = "max_final_distance";
      v.tolerance = *spec.bound;
      double worst = 0.0;
      for (const auto& r : results) {
        const double d = r.summary.diverged || !r.summary.final_distance
                             ? std::numeric_limits<double>::infinity()
                             : *r.summary.final_distance;
        if (d > worst) worst = d;
      }
      v.worst_violation = worst;
      v.passed = worst < *spec.bound;
      v.detail = "max final distance to Nash " + format_double(worst) + ", bound " +
                 format_double(*spec.bound);
      report.verdicts.push_back(std::move(v));
    }
  }
  return report;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string serialize_report(const ExperimentReport& report) {
  json trials = json::array();
  for (const auto& t : report.trials) {
    trials.push_back(json{
        {"index", t.index},
        {"steps", t.steps},
        {"final_gap", double_json(t.final_gap)},
        {"final_distance", t.final_distance ? double_json(*t.final_distance) : json(nullptr)},
        {"diverged", t.diverged},
        {"divergence_step", t.divergence_step ? json(*t.divergence_step) : json(nullptr)}});
  }
  json curves = json::object();
  for (const auto& [name, c] : report.curves) {
    curves[name] = json{{"t", doubles_json(c.t)},
                        {"mean", doubles_json(c.mean)},
                        {"std_error", doubles_json(c.std_error)}};
  }
  json fits = json::object();
  for (const auto& [name, f] : report.fits) fits[name] = to_json(f);
  json verdicts = json::array();
  for (const auto& v : report.verdicts) verdicts.push_back(to_json(v));

  const json doc{{"schema_version", report.schema_version},
                 {"name", report.name},
                 {"provenance",
                  {{"config_hash", report.provenance.config_hash},
                   {"master_seed", report.provenance.master_seed},
                   {"code_version", report.provenance.code_version}}},
                 {"config", report.config},
                 {"trials", trials},
                 {"diverged_trials", report.diverged_trials},
                 {"all_diverged", report.all_diverged},
                 {"curves", curves},
                 {"fits", fits},
                 {"verdicts", verdicts}};
  return doc.dump(2) + "\n";
}

ExperimentReport parse_report(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
  const Reader root{doc, ""};
  ExperimentReport r;
  r.schema_version = root.str("schema_version");
  const auto dot = r.schema_version.find('.');
  const std::string major = r.schema_version.substr(0, dot);
  const std::string ours(kReportSchemaVersion.substr(0, kReportSchemaVersion.find('.')));
  if (major != ours) {
    throw VersionError("report: unsupported schema major version '" + r.schema_version +
                       "' (this build reads " + std::string(kReportSchemaVersion) + ")");
  }
  r.name = root.str("name");
  const Reader prov = root.child("provenance");
  r.provenance = {prov.str("config_hash"), prov.uint("master_seed"), prov.str("code_version")};
  r.config = root.at("config");

  const json& trials = root.at("trials");
  if (!trials.is_array()) throw ParseError("report: trials: expected an array");
  for (std::size_t k = 0; k < trials.size(); ++k) {
    const Reader t{trials[k], "trials[" + std::to_string(k) + "]"};
    TrialSummary s;
    s.index = t.uint("index");
    s.steps = t.uint("steps");
    s.final_gap = t.num("final_gap");
    s.final_distance = t.opt_num("final_distance");
    s.diverged = t.boolean("diverged");
    if (!t.at("divergence_step").is_null()) s.divergence_step = t.uint("divergence_step");
    r.trials.push_back(s);
  }
  r.diverged_trials = root.uint("diverged_trials");
  r.all_diverged = root.boolean("all_diverged");

  const Reader curves = root.child("curves");
  for (const auto& [name, _] : curves.node.items()) {
    const Reader c = curves.child(name);
    Curve curve{c.nums("t"), c.nums("mean"), c.nums("std_error")};
    if (curve.mean.size() != curve.t.size() || curve.std_error.size() != curve.t.size()) {
      throw ParseError("report: curves." + name + ": array lengths differ");
    }
    r.curves[name] = std::move(curve);
  }
  const Reader fits = root.child("fits");
  for (const auto& [name, _] : fits.node.items()) {
    const Reader f = fits.child(name);
    r.fits[name] = RateFit{f.num("slope"),  f.num("intercept"), f.num("residual_rms"),
                           f.num("t_min"),  f.num("t_max"),
                           static_cast<std::size_t>(f.uint("points"))};
  }
  const json& verdicts = root.at("verdicts");
  if (!verdicts.is_array()) throw ParseError("report: verdicts: expected an array");
  for (std::size_t k = 0; k < verdicts.size(); ++k) {
    const Reader v{verdicts[k], "verdicts[" + std::to_string(k) + "]"};
    ConvergenceVerdict cv;
    cv.id = v.str("id");
    cv.passed = v.boolean("passed");
    cv.worst_violation = v.num("worst_violation");
    cv.tolerance = v.num("tolerance");
    if (!v.at("first_violation").is_null()) cv.first_violation = v.uint("first_violation");
    cv.detail = v.str("detail");
    r.verdicts.push_back(std::move(cv));
  }
  return r;
}

void write_report(const ExperimentReport& report, const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << serialize_report(report);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

ExperimentReport read_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_report(buf.str());
  } catch (const VersionError& e) {
    throw VersionError(path.string() + ": " + e.what());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string curves_csv(const ExperimentReport& report) {
  std::string out = "t,mean_gap,stderr_gap,mean_time_average_gap,mean_distance_to_nash\n";
  const Curve& gap = report.curve("last_iterate");
  const Curve& avg = report.curve("time_average");
  const auto dist = report.curves.find("distance_to_nash");
  for (std::size_t k = 0; k < gap.t.size(); ++k) {
    out += format_double(gap.t[k]) + "," + format_double(gap.mean[k]) + "," +
           format_double(gap.std_error[k]) + "," + format_double(avg.mean[k]) + ",";
    if (dist != report.curves.end()) out += format_double(dist->second.mean[k]);
    out += "\n";
  }
  return out;
}

void write_trajectory(const TrajectoryRecord& traj, const json& config_snapshot,
                      std::ostream& out) {
  const json header{{"record", "header"},
                    {"game", traj.game},
                    {"config", config_snapshot},
                    {"seed", traj.seed},
                    {"stream", traj.stream},
                    {"steps", traj.steps()},
                    {"diverged", traj.diverged},
                    {"divergence_step",
                     traj.divergence_step ? json(*traj.divergence_step) : json(nullptr)}};
  out << header.dump() << '\n';
  std::size_t next_state = 0;
  for (std::size_t t = 0; t < traj.gap.size(); ++t) {
    json rec{{"t", t}, {"gap", double_json(traj.gap[t])}};
    if (t < traj.steps()) {
      rec["eta"] = double_json(traj.step_size[t]);
      rec["step_norm_sq"] = double_json(traj.step_norm_sq[t]);
      if (!traj.beta.empty()) rec["beta"] = double_json(traj.beta[t]);
    }
    if (!traj.anchor_distance.empty()) {
      rec["anchor_distance"] = double_json(traj.anchor_distance[t]);
    }
    if (next_state < traj.state_steps.size() && traj.state_steps[next_state] == t) {
      const auto s = traj.state(next_state++);
      rec["x"] = doubles_json(std::vector<double>(s.begin(), s.end()));
    }
    out << rec.dump() << '\n';
  }
}

std::vector<SweepPoint> sweep(const json& config_template, const SweepAxis& axis,
                              const RunOptions& options) {
  if (axis.values.empty()) throw ConfigError("sweep: empty grid");
  if (!has_path(config_template, axis.path)) {
    throw ConfigError("sweep: axis path '" + axis.path + "' does not exist in the template");
  }
  std::vector<SweepPoint> points;
  for (const auto& value : axis.values) {
    SweepPoint p;
    p.value = value;
    try {
      json doc = config_template;
      apply_override(doc, axis.path, value);
      ExperimentConfig config = config_from_json(doc);
      p.report = run_experiment(config, options);
    } catch (const std::exception& e) {
      p.error = e.what();
    }
    points.push_back(std::move(p));
  }
  return points;
}

}  // namespace ogd
