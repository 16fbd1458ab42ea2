// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Thresholds are pinned here; the bundled configs only supply the setup.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ogd/dynamics.hpp"
#include "ogd/games.hpp"
#include "ogd/harness.hpp"
#include "ogd/metrics.hpp"

#ifndef OGD_CONFIG_DIR
#error "OGD_CONFIG_DIR must point at the bundled configs"
#endif

using namespace ogd;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

ExperimentConfig load(const std::string& name) {
  return config_from_json(read_json_file(std::string(OGD_CONFIG_DIR) + "/" + name + ".cfg"));
}

const ConvergenceVerdict* find(const ExperimentReport& r, const std::string& id) {
  for (const auto& v : r.verdicts)
    if (v.id == id) return &v;
  return nullptr;
}

// Runs a bundled config with the given checks and records each verdict.
ExperimentReport run_checked(const std::string& name, std::vector<CheckSpec> checks,
                             Outcome& out) {
  auto config = load(name);
  config.checks = std::move(checks);
  config.outputs = {};
  const auto report = run_experiment(config);
  for (const auto& c : config.checks) {
    const auto* v = find(report, c.id);
    out.require(v != nullptr, name + ": verdict " + c.id + " missing");
    if (!v) continue;
    out.require(v->passed, name + ": " + v->id + " (" + v->detail + ")");
    if (v->passed) out.note(name + ": " + v->detail);
  }
  return report;
}

Outcome c1_lemma1() {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  std::size_t runs = 0;
  for (const auto& name : builtin_game_names()) {
    const Game game = make_game(builtin_game_spec(name));
    const double lambda = *game.cocoercivity();
    RandomStream seeds(1, 0);
    for (double frac : {0.25, 0.5, 1.0}) {
      for (int k = 0; k < 5; ++k) {
        DynamicsConfig cfg;
        cfg.schedule = ConstantStep{frac * lambda};
        cfg.horizon = 100000;
        cfg.thinning = 0;
        cfg.x0.resize(game.dimension());
        for (double& v : cfg.x0) v = seeds.uniform(-5.0, 5.0);
        RandomStream rng(0, 0);
        const auto traj = run_trajectory(game, cfg, rng);
        for (const auto& v : check_lemma1(traj, game, frac * lambda, lambda)) {
          out.require(v.passed, name + " eta=" + num(frac) + "*lambda: " + v.id + " " + v.detail);
        }
        ++runs;
      }
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.require(secs < 10.0, "runtime " + num(secs) + " s >= 10 s");
  out.note(std::to_string(runs) + " runs at T=1e5 in " + num(secs) + " s");
  return out;
}

CheckSpec tail_check() { return {"tail_product", std::nullopt, 16.0, 4096.0, 1e-3}; }

Outcome c2_tail_product() {
  Outcome out;
  for (const char* name : {"c2_tail_product_piecewise_scalar", "c2_tail_product_quadratic_2d"}) {
    // eta must equal the game's lambda
    const auto cfg = load(name);
    const double lambda = *make_game(cfg.game).cocoercivity();
    const auto* step = std::get_if<ConstantStep>(&cfg.dynamics.schedule);
    out.require(step && step->eta == lambda, std::string(name) + ": eta != lambda");
    out.require(cfg.dynamics.horizon >= 2 * 4096, std::string(name) + ": horizon too short");
    run_checked(name, {tail_check(), {"no_divergence"}}, out);
  }
  return out;
}

Outcome c3_adaptive() {
  Outcome out;
  for (const char* name : {"c3_adaptive_piecewise_scalar", "c3_adaptive_quadratic_2d"}) {
    const auto cfg = load(name);
    const auto* rule = std::get_if<AdaptiveStep>(&cfg.dynamics.schedule);
    out.require(rule && rule->beta1 == 1.0 && rule->r == 2.0,
                std::string(name) + ": not Algorithm 1 with beta1=1, r=2");
    out.require(cfg.dynamics.horizon == 65536, std::string(name) + ": T != 2^16");
    out.require(cfg.dynamics.noise.kind == NoiseKind::none, std::string(name) + ": noisy");
    run_checked(name,
                {{"beta_stabilized"},
                 tail_check(),
                 {"last_iterate_slope", -1.0 + 0.15},
                 {"no_divergence"}},
                out);
  }
  return out;
}

// v(x) = -x, relative tau = 0.25, eta = 0.3, 100 trials
void require_relative_setup(const ExperimentConfig& cfg, const std::string& name, Outcome& out,
                            VarianceKind kind, double c) {
  out.require(cfg.game == builtin_game_spec("quadratic_1d"), name + ": game is not v(x) = -x");
  out.require(cfg.trials == 100, name + ": trials != 100");
  out.require(cfg.dynamics.noise.kind == NoiseKind::relative &&
                  cfg.dynamics.noise.schedule.kind == kind &&
                  cfg.dynamics.noise.schedule.c == c,
              name + ": noise model differs from the criterion");
}

Outcome c4_relative_as() {
  Outcome out;
  const std::string name = "c4_relative_noise_as";
  const auto cfg = load(name);
  require_relative_setup(cfg, name, out, VarianceKind::constant, 0.25);
  out.require(cfg.dynamics.horizon == 100000, name + ": T != 1e5");
  const auto* step = std::get_if<ConstantStep>(&cfg.dynamics.schedule);
  out.require(step && step->eta == 0.3, name + ": eta != 0.3");
  const auto r =
      run_checked(name, {{"max_final_distance", 1e-3}, {"no_divergence"}}, out);
  out.require(r.diverged_trials == 0, name + ": divergence flags set");
  return out;
}

Outcome c5_time_average() {
  Outcome out;
  const std::string name = "c5_relative_noise_time_average";
  const auto cfg = load(name);
  require_relative_setup(cfg, name, out, VarianceKind::constant, 0.25);
  out.require(cfg.dynamics.horizon >= 65536, name + ": T below 2^16");
  run_checked(name, {{"time_average_slope", -1.0 + 0.2, 64.0, 65536.0}}, out);
  return out;
}

Outcome c6_schedules() {
  Outcome out;
  {
    const std::string name = "c6_relative_noise_inv_sqrt";
    require_relative_setup(load(name), name, out, VarianceKind::inv_sqrt, 1.0);
    run_checked(name, {{"last_iterate_slope", -0.5 + 0.15, 64.0, 65536.0}}, out);
  }
  {
    const std::string name = "c6_relative_noise_inv";
    require_relative_setup(load(name), name, out, VarianceKind::inv, 1.0);
    run_checked(name, {{"last_iterate_slope", -0.85, 64.0, 65536.0}}, out);
  }
  return out;
}

Outcome c7_adaptive_noisy() {
  Outcome out;
  const std::string name = "c7_adaptive_noisy";
  const auto cfg = load(name);
  require_relative_setup(cfg, name, out, VarianceKind::inv_sqrt, 1.0);
  const auto* rule = std::get_if<AdaptiveNoisyStep>(&cfg.dynamics.schedule);
  out.require(rule && rule->beta == 1.0, name + ": not Algorithm 2 with beta=1");
  out.require(cfg.dynamics.horizon == 65536, name + ": T != 2^16");
  run_checked(name, {{"step_size_nonincreasing"}, {"last_iterate_slope", -0.45}}, out);
  return out;
}

Outcome c8_absolute() {
  Outcome out;
  const double lambda = 1.0;  // v(x) = -x
  {
    const std::string name = "c8a_absolute_noise_power_step";
    const auto cfg = load(name);
    const auto* step = std::get_if<PowerStep>(&cfg.dynamics.schedule);
    out.require(step && step->c == 0.5 * lambda && step->p == 0.5, name + ": eta_t != 0.5/sqrt(t)");
    out.require(cfg.dynamics.noise.kind == NoiseKind::absolute &&
                    cfg.dynamics.noise.schedule.kind == VarianceKind::constant &&
                    cfg.dynamics.noise.schedule.c == 0.01 && cfg.trials == 100,
                name + ": setup differs from the criterion");
    run_checked(name, {{"time_average_slope", -0.4}}, out);
  }
  {
    const std::string name = "c8b_absolute_noise_summable_variance";
    const auto cfg = load(name);
    const auto* step = std::get_if<ConstantStep>(&cfg.dynamics.schedule);
    out.require(step && step->eta == lambda / 2, name + ": eta != lambda/2");
    out.require(cfg.dynamics.noise.kind == NoiseKind::absolute &&
                    cfg.dynamics.noise.schedule.kind == VarianceKind::power &&
                    cfg.dynamics.noise.schedule.c == 0.01 &&
                    cfg.dynamics.noise.schedule.q == 2.0 && cfg.trials == 100,
                name + ": setup differs from the criterion");
    run_checked(name, {{"last_iterate_slope", -0.85}}, out);
  }
  {
    const std::string name = "c8c_absolute_noise_as";
    const auto cfg = load(name);
    const auto* step = std::get_if<PowerStep>(&cfg.dynamics.schedule);
    // square summable: p > 1/2
    out.require(step && step->p > 0.5, name + ": steps not square summable");
    out.require(cfg.dynamics.noise.kind == NoiseKind::absolute && cfg.trials == 100,
                name + ": setup differs from the criterion");
    run_checked(name, {{"max_final_distance", 1e-2}, {"no_divergence"}}, out);
  }
  return out;
}

Outcome c9_oracles() {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();

  double worst_grad = 0.0;
  for (const auto& name : builtin_game_names()) {
    const Game g = make_game(builtin_game_spec(name));
    if (!g.has_payoffs()) continue;
    RandomStream rng(5, 0);
    for (int k = 0; k < 200; ++k) {
      std::vector<double> x(g.dimension());
      for (double& v : x) v = rng.uniform(-5.0, 5.0);
      worst_grad = std::max(worst_grad, verify_gradient(g, g.action(x), 1e-5).max_abs_error);
    }
  }
  out.require(worst_grad <= 1e-8, "verify_gradient error " + num(worst_grad));
  out.note("max gradient error " + num(worst_grad));

  const Game q1 = make_game(GameSpec::make_quadratic({{1}}, {0}));
  const Game q2 = make_game(GameSpec::make_quadratic({{2, 1}, {1, 2}}, {0, 0}));
  const Game pw = make_game(GameSpec::piecewise_scalar());
  const auto e1 = estimate_cocoercivity(q1, SampleBox::cube(1, -10, 10), 1000, 0);
  const auto e2 = estimate_cocoercivity(q2, SampleBox::cube(2, -10, 10), 10000, 0);
  const auto e3 = estimate_cocoercivity(pw, SampleBox::cube(1, -5, 5), 10000, 0);
  out.require(std::abs(e1.lambda_hat - 1.0) <= 1e-9, "lambda_hat(v=-x) " + num(e1.lambda_hat));
  out.require(e2.lambda_hat >= 1.0 / 3.0 - 1e-12 && e2.lambda_hat <= 1.0 / 3.0 + 0.05,
              "lambda_hat([[2,1],[1,2]]) " + num(e2.lambda_hat));
  out.require(e3.lambda_hat >= 0.5 && e3.lambda_hat <= 0.5 + 1e-6,
              "lambda_hat(piecewise) " + num(e3.lambda_hat));

  double worst_idem = 0.0;
  for (const auto& name : builtin_game_names()) {
    const Game g = make_game(builtin_game_spec(name));
    RandomStream rng(6, 0);
    for (int k = 0; k < 1000; ++k) {
      std::vector<double> x(g.dimension());
      for (double& v : x) v = rng.uniform(-10.0, 10.0);
      const auto p = project_to_nash(g, g.action(x));
      const auto pp = project_to_nash(g, p);
      worst_idem = std::max(worst_idem, std::sqrt(vec::squared_distance(p.values(), pp.values())));
    }
  }
  out.require(worst_idem <= 1e-12, "projection idempotence " + num(worst_idem));

  const std::vector<RatePoint> exact{{10, 0.1}, {100, 0.01}, {1000, 0.001}};
  std::vector<RatePoint> sqrt_law;
  for (double t : {16.0, 64.0, 256.0, 1024.0}) sqrt_law.push_back({t, 3.0 / std::sqrt(t)});
  const std::vector<RatePoint> flat{{10, 1}, {100, 1}, {1000, 1}};
  out.require(std::abs(fit_rate(exact).slope + 1.0) <= 1e-9, "fit_rate slope -1");
  out.require(std::abs(fit_rate(sqrt_law).slope + 0.5) <= 1e-9, "fit_rate slope -1/2");
  out.require(std::abs(fit_rate(flat).slope) <= 1e-9, "fit_rate slope 0");

  auto cfg = load("c5_relative_noise_time_average");
  cfg.trials = 20;
  cfg.dynamics.horizon = 5000;
  cfg.outputs = {};
  const auto a = serialize_report(run_experiment(cfg, {1}));
  const auto b = serialize_report(run_experiment(cfg, {4}));
  const auto c = serialize_report(run_experiment(cfg, {}));
  out.require(a == b && b == c, "reports differ across repeated runs");

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.require(secs < 30.0, "runtime " + num(secs) + " s >= 30 s");
  out.note("runtime " + num(secs) + " s");
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 lemma 1 suite", c1_lemma1},
      {"2 tail product, constant step", c2_tail_product},
      {"3 adaptive step, noiseless", c3_adaptive},
      {"4 relative noise, almost-sure convergence", c4_relative_as},
      {"5 relative noise, time-average rate", c5_time_average},
      {"6 relative noise, vanishing variance", c6_schedules},
      {"7 adaptive step, relative noise", c7_adaptive_noisy},
      {"8 absolute noise", c8_absolute},
      {"9 oracle and property suite", c9_oracles},
  };
  int failures = 0;
  for (const auto& [label, fn] : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (o.passed ? "PASS" : "FAIL") << "  criterion " << label << " [" << num(secs)
              << " s]: " << o.detail << std::endl;
    failures += !o.passed;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
