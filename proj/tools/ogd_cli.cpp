// ogd: command-line front end for running online-gradient-descent learning
// experiments on cocoercive games.
//
// Exit codes: 0 success, 1 check failure, 2 config error, 3 I/O error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ogd/errors.hpp"
#include "ogd/games.hpp"
#include "ogd/harness.hpp"
#include "ogd/metrics.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kConfigError = 2, kIoError = 3 };

struct CommonArgs {
  std::string config;
  std::vector<std::string> overrides;
  std::string out;
  std::size_t workers = 0;
  std::optional<std::uint64_t> seed;
};

json load_document(const CommonArgs& args) {
  json doc = ogd::read_json_file(args.config);
  for (const auto& kv : args.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw ogd::ConfigError("--set expects dotted.path=value, got '" + kv + "'");
    }
    ogd::apply_override(doc, kv.substr(0, eq), std::string_view(kv).substr(eq + 1));
  }
  if (args.seed) doc["master_seed"] = *args.seed;
  return doc;
}

fs::path output_dir(const CommonArgs& args, const ogd::ExperimentConfig& config) {
  if (!args.out.empty()) return args.out;
  if (!config.outputs.dir.empty()) return config.outputs.dir;
  return "ogd_out";
}

void write_text(const fs::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ogd::IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw ogd::IoError("write failed for '" + path.string() + "'");
}

void print_verdicts(const ogd::ExperimentReport& report) {
  for (const auto& v : report.verdicts) {
    std::cout << (v.passed ? "[PASS] " : "[FAIL] ") << v.id << ": " << v.detail << '\n';
  }
}

int cmd_run(const CommonArgs& args) {
  json doc = load_document(args);
  ogd::ExperimentConfig config = ogd::config_from_json(doc);
  const fs::path dir = output_dir(args, config);
  config.outputs.dir = dir.string();
  const auto report = ogd::run_experiment(config, {args.workers});
  ogd::write_report(report, dir / "report.json");
  write_text(dir / "curves.csv", ogd::curves_csv(report));
  std::cout << "trials: " << report.trials.size() << ", diverged: " << report.diverged_trials
            << '\n';
  for (const auto& [name, fit] : report.fits) {
    std::cout << "fit " << name << ": slope " << ogd::format_double(fit.slope) << '\n';
  }
  print_verdicts(report);
  std::cout << "report: " << (dir / "report.json").string() << '\n';
  return report.checks_passed() ? kOk : kCheckFailed;
}

int cmd_sweep(const CommonArgs& args, std::string axis, std::vector<std::string> values) {
  json doc = load_document(args);
  if (doc.contains("sweep")) {
    const json& s = doc["sweep"];
    if (axis.empty() && s.contains("axis")) axis = s["axis"].get<std::string>();
    if (values.empty() && s.contains("values")) {
      for (const auto& v : s["values"]) values.push_back(v.dump());
    }
  }
  if (axis.empty()) throw ogd::ConfigError("sweep: no axis given (--axis or sweep.axis)");
  ogd::SweepAxis grid{axis, {}};
  for (const auto& v : values) {
    json parsed = json::parse(v, nullptr, false);
    grid.values.push_back(parsed.is_discarded() ? json(v) : parsed);
  }
  // Validates the template before running anything.
  const auto base = ogd::config_from_json(doc);
  const fs::path dir = output_dir(args, base);

  const auto points = ogd::sweep(doc, grid, {args.workers});
  std::string summary = "index,value,status,last_iterate_slope,time_average_slope,final_mean_gap\n";
  bool all_ok = true;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& p = points[k];
    std::string value = p.value.dump();
    if (value.find(',') != std::string::npos) value = "\"" + value + "\"";
    std::cout << "point " << k << " (" << axis << " = " << p.value.dump() << "): ";
    if (!p.report) {
      all_ok = false;
      std::cout << "error: " << p.error << '\n';
      summary += std::to_string(k) + "," + value + ",error,,,\n";
      continue;
    }
    const auto& r = *p.report;
    const fs::path pdir = dir / ("point_" + std::to_string(k));
    ogd::write_report(r, pdir / "report.json");
    write_text(pdir / "curves.csv", ogd::curves_csv(r));
    const bool ok = r.checks_passed();
    all_ok = all_ok && ok;
    std::cout << (ok ? "ok" : "check failed") << '\n';
    auto slope = [&](const char* name) {
      const auto it = r.fits.find(name);
      return it == r.fits.end() ? std::string() : ogd::format_double(it->second.slope);
    };
    const auto& gap = r.curve("last_iterate");
    summary += std::to_string(k) + "," + value + "," + (ok ? "ok" : "check_failed") + "," +
               slope("last_iterate") + "," + slope("time_average") + "," +
               ogd::format_double(gap.mean.empty() ? NAN : gap.mean.back()) + "\n";
  }
  write_text(dir / "sweep.csv", summary);
  return all_ok ? kOk : kCheckFailed;
}

int cmd_verify_game(const std::string& config_path, const std::string& builtin) {
  ogd::GameSpec spec;
  if (!builtin.empty()) {
    spec = ogd::builtin_game_spec(builtin);
  } else {
    const json doc = ogd::read_json_file(config_path);
    spec = ogd::game_spec_from_json(doc.contains("game") ? doc["game"] : doc);
  }
  const ogd::Game game = ogd::make_game(spec);
  const std::size_t n = game.dimension();
  bool ok = true;
  std::cout << "game: " << game.name() << " (players " << game.players() << ", dimension "
            << n << ")\n";

  ogd::RandomStream rng(0, 0);
  auto sample = [&](double scale) {
    std::vector<double> x(n);
    for (double& v : x) v = rng.uniform(-scale, scale);
    return game.action(std::move(x));
  };

  if (game.has_payoffs()) {
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      worst = std::max(worst, ogd::verify_gradient(game, sample(5.0), 1e-5).max_abs_error);
    }
    const bool pass = worst <= 1e-6;
    ok = ok && pass;
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " gradient vs payoffs: max abs error "
              << ogd::format_double(worst) << '\n';
  } else {
    std::cout << "[SKIP] gradient vs payoffs: no payoff functions\n";
  }

  const auto est = ogd::estimate_cocoercivity(game, ogd::SampleBox::cube(n, -10.0, 10.0),
                                              10000, 0);
  const bool mono = est.status == ogd::CocoercivityStatus::estimated;
  ok = ok && mono;
  std::cout << (mono ? "[PASS]" : "[FAIL]") << " cocoercivity: lambda_hat = "
            << ogd::format_double(est.lambda_hat) << " over "
            << est.informative_pairs << " pairs"
            << (est.status == ogd::CocoercivityStatus::monotonicity_violated
                    ? " (monotonicity violated)"
                    : est.status == ogd::CocoercivityStatus::indeterminate ? " (indeterminate)"
                                                                            : "")
            << '\n';
  if (const auto lambda = game.cocoercivity()) {
    const bool pass = mono && est.lambda_hat >= *lambda - 1e-9;
    ok = ok && pass;
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " declared lambda = "
              << ogd::format_double(*lambda) << " <= lambda_hat\n";
  }

  if (game.has_nash_oracle()) {
    double worst_field = 0.0, worst_idem = 0.0;
    for (int k = 0; k < 100; ++k) {
      const auto x = sample(10.0);
      const auto p = ogd::project_to_nash(game, x);
      const auto pp = ogd::project_to_nash(game, p);
      worst_field = std::max(worst_field, game.gradient_field(p).norm());
      worst_idem =
          std::max(worst_idem, std::sqrt(ogd::vec::squared_distance(p.values(), pp.values())));
    }
    const bool pass = worst_field <= 1e-9 && worst_idem <= 1e-12;
    ok = ok && pass;
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " Nash oracle: max ||v(P(x))|| "
              << ogd::format_double(worst_field) << ", idempotence error "
              << ogd::format_double(worst_idem) << '\n';
  } else {
    std::cout << "[SKIP] Nash oracle: none\n";
  }
  return ok ? kOk : kCheckFailed;
}

int cmd_fit_rate(const std::string& report_path, const std::string& curve_name,
                 const std::vector<double>& window) {
  const auto report = ogd::read_report(report_path);
  const auto& curve = report.curve(curve_name);
  const double lo = window.size() > 0 ? window[0] : 0.0;
  const double hi = window.size() > 1 ? window[1] : 0.0;
  const auto pts = ogd::rate_window(curve.points(), lo, hi);
  const auto fit = ogd::try_fit_rate(pts);
  if (!fit) {
    const bool vanished = !pts.empty() && pts.back().value == 0.0;
    std::cout << "curve: " << curve_name << "\nslope: "
              << (vanished ? "-inf (curve reached exactly zero)" : "indeterminate") << '\n';
    return vanished ? kOk : kCheckFailed;
  }
  std::cout << "curve: " << curve_name << '\n'
            << "slope: " << ogd::format_double(fit->slope) << '\n'
            << "intercept: " << ogd::format_double(fit->intercept) << '\n'
            << "residual_rms: " << ogd::format_double(fit->residual_rms) << '\n'
            << "window: [" << ogd::format_double(fit->t_min) << ", "
            << ogd::format_double(fit->t_max) << "] (" << fit->points << " points)\n";
  return kOk;
}

int cmd_list_games() {
  for (const auto& name : ogd::builtin_game_names()) {
    const auto game = ogd::make_game(ogd::builtin_game_spec(name));
    std::cout << name << ": kind " << ogd::game_kind_name(ogd::builtin_game_spec(name).kind)
              << ", dimension " << game.dimension() << ", lambda "
              << (game.cocoercivity() ? ogd::format_double(*game.cocoercivity()) : "n/a")
              << (game.has_nash_oracle() ? ", nash oracle" : "") << '\n';
  }
  return kOk;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config, "Experiment config document")->required();
  cmd->add_option("--set", args.overrides, "Override: dotted.path=value (repeatable)");
  cmd->add_option("--out", args.out, "Output directory");
  cmd->add_option("--workers", args.workers, "Concurrent trials (0: all cores)");
  cmd->add_option("--seed", args.seed, "Master seed override");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online gradient descent dynamics on cocoercive games"};
  app.require_subcommand(1);

  CommonArgs run_args;
  auto* run = app.add_subcommand("run", "Run an experiment and write report + CSV");
  add_common(run, run_args);

  CommonArgs sweep_args;
  std::string axis;
  std::vector<std::string> values;
  auto* sw = app.add_subcommand("sweep", "Run one experiment per grid value");
  add_common(sw, sweep_args);
  sw->add_option("--axis", axis, "Dotted config path to vary");
  sw->add_option("--values", values, "Grid values (JSON literals)");

  std::string game_config, builtin;
  auto* verify = app.add_subcommand("verify-game", "Check gradient, cocoercivity and Nash oracle");
  verify->add_option("--config", game_config, "Game spec or experiment config");
  verify->add_option("--builtin", builtin, "Builtin game name");

  std::string report_path, curve_name = "last_iterate";
  std::vector<double> window;
  auto* fit = app.add_subcommand("fit-rate", "Fit a log-log rate to a report curve");
  fit->add_option("--report", report_path, "Report document")->required();
  fit->add_option("--curve", curve_name, "Curve name");
  fit->add_option("--window", window, "t_min,t_max")->delimiter(',')->expected(2);

  auto* list = app.add_subcommand("list-games", "List builtin games");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) return cmd_run(run_args);
    if (*sw) return cmd_sweep(sweep_args, axis, values);
    if (*verify) {
      if (game_config.empty() == builtin.empty()) {
        std::cerr << "verify-game: give exactly one of --config or --builtin\n";
        return kConfigError;
      }
      return cmd_verify_game(game_config, builtin);
    }
    if (*fit) return cmd_fit_rate(report_path, curve_name, window);
    if (*list) return cmd_list_games();
  } catch (const ogd::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const ogd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ogd::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ogd::InvalidArgument& e) {
    std::cerr << "rejected: " << e.what() << '\n';
    return kConfigError;
  } catch (const ogd::UnsupportedOperation& e) {
    std::cerr << "unsupported: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kOk;
}
