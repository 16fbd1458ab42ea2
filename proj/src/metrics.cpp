#include "ogd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <string>

#include "ogd/errors.hpp"

namespace ogd {
namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

double optimality_gap(const Game& game, const JointAction& x) {
  return game.gradient_field(x).squared_norm();
}

double distance_to_nash(const Game& game, const JointAction& x) {
  const JointAction p = project_to_nash(game, x);
  return std::sqrt(vec::squared_distance(x.values(), p.values()));
}

std::vector<double> time_average_gap(std::span<const double> gap) {
  std::vector<double> out;
  out.reserve(gap.size());
  double sum = 0.0;
  for (std::size_t t = 0; t < gap.size(); ++t) {
    sum += gap[t];
    out.push_back(sum / static_cast<double>(t + 1));
  }
  return out;
}

std::vector<double> time_average_gap(const TrajectoryRecord& traj) {
  return time_average_gap(traj.gap);
}

TailProduct tail_product(std::span<const double> gap, std::size_t max_t) {
  TailProduct tp;
  for (std::size_t T = 1; max_t == 0 || T <= max_t; T *= 2) {
    const std::size_t idx = 2 * T - 1;
    if (idx >= gap.size()) {
      tp.truncated = max_t != 0;
      break;
    }
    tp.points.push_back({static_cast<double>(T), static_cast<double>(T) * gap[idx]});
  }
  return tp;
}

TailProduct tail_product(const TrajectoryRecord& traj, std::size_t max_t) {
  return tail_product(traj.gap, max_t);
}

std::optional<RateFit> try_fit_rate(std::span<const RatePoint> points) {
  std::set<double> seen;
  for (const auto& p : points) {
    if (!seen.insert(p.t).second) {
      throw InvalidArgument("fit_rate: repeated T = " + fmt(p.t));
    }
  }
  std::vector<std::pair<double, double>> logs;
  RateFit fit;
  for (const auto& p : points) {
    if (!(p.value > 0.0) || !std::isfinite(p.value) || !(p.t > 0.0)) continue;
    logs.emplace_back(std::log(p.t), std::log(p.value));
    if (logs.size() == 1) fit.t_min = fit.t_max = p.t;
    fit.t_min = std::min(fit.t_min, p.t);
    fit.t_max = std::max(fit.t_max, p.t);
  }
  if (logs.size() < 3) return std::nullopt;

  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : logs) {
    mx += x;
    my += y;
  }
  const double n = static_cast<double>(logs.size());
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : logs) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (const auto& [x, y] : logs) {
    const double r = y - (fit.intercept + fit.slope * x);
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / n);
  fit.points = logs.size();
  return fit;
}

RateFit fit_rate(std::span<const RatePoint> points) {
  auto fit = try_fit_rate(points);
  if (!fit) {
    throw Indeterminate("fit_rate: fewer than 3 points with positive values");
  }
  return *fit;
}

std::vector<RatePoint> rate_window(std::span<const RatePoint> points, double t_min,
                                   double t_max) {
  const auto burn = static_cast<std::size_t>(
      std::ceil(0.1 * static_cast<double>(points.size())));
  std::vector<RatePoint> out;
  for (std::size_t k = burn; k < points.size(); ++k) {
    const auto& p = points[k];
    if (t_min > 0.0 && p.t < t_min) continue;
    if (t_max > 0.0 && p.t > t_max) continue;
    out.push_back(p);
  }
  return out;
}

std::vector<ConvergenceVerdict> check_lemma1(const TrajectoryRecord& traj, const Game& game,
                                             double eta, double lambda) {
  if (!std::holds_alternative<ConstantStep>(traj.config.schedule) ||
      traj.config.noise.kind != NoiseKind::none) {
    throw UnsupportedOperation(
        "check_lemma1: needs a noiseless constant-step trajectory");
  }
  if (!game.has_nash_oracle() || traj.anchor_distance.empty()) {
    throw UnsupportedOperation("check_lemma1: needs a Nash oracle and anchor distances");
  }
  if (!(eta > 0.0) || !(lambda > 0.0)) {
    throw InvalidArgument("check_lemma1: eta and lambda must be positive");
  }
  if (traj.gap.empty()) throw InvalidArgument("check_lemma1: empty trajectory");

  std::vector<ConvergenceVerdict> out;

  {
    ConvergenceVerdict v;
    v.id = "lemma1.gradient_monotone";
    v.tolerance = 1e-10 * (1.0 + std::sqrt(traj.gap.front()));
    for (std::size_t t = 0; t + 1 < traj.gap.size(); ++t) {
      const double rise = std::sqrt(traj.gap[t + 1]) - std::sqrt(traj.gap[t]);
      v.worst_violation = std::max(v.worst_violation, rise);
      if (rise > v.tolerance && !v.first_violation) v.first_violation = t + 1;
    }
    v.passed = !v.first_violation;
    v.detail = "max increase of ||v(x_t)||: " + fmt(v.worst_violation);
    out.push_back(std::move(v));
  }

  const double d0 = traj.anchor_distance.front();
  {
    ConvergenceVerdict v;
    v.id = "lemma1.iterates_bounded";
    v.tolerance = 1e-9;
    for (std::size_t t = 0; t < traj.anchor_distance.size(); ++t) {
      const double excess = traj.anchor_distance[t] - d0;
      v.worst_violation = std::max(v.worst_violation, excess);
      if (excess > v.tolerance && !v.first_violation) v.first_violation = t;
    }
    v.passed = !v.first_violation;
    v.detail = "max ||x_t - P(x_0)|| - ||x_0 - P(x_0)||: " + fmt(v.worst_violation);
    out.push_back(std::move(v));
  }

  {
    ConvergenceVerdict v;
    v.id = "lemma1.summable";
    v.tolerance = 1e-6;
    const double bound = d0 * d0 / (eta * lambda);
    double sum = 0.0;
    for (std::size_t t = 0; t < traj.gap.size(); ++t) {
      sum += traj.gap[t];
      const double excess = sum - bound;
      v.worst_violation = std::max(v.worst_violation, excess);
      if (excess > v.tolerance && !v.first_violation) v.first_violation = t;
    }
    v.passed = !v.first_violation;
    v.detail = "sum of gaps " + fmt(sum) + " vs bound " + fmt(bound);
    out.push_back(std::move(v));
  }
  return out;
}

ConvergenceVerdict check_tail_decreasing(std::span<const RatePoint> series, double ratio) {
  ConvergenceVerdict v;
  v.id = "tail_product";
  if (series.size() < 2) {
    v.passed = false;
    v.detail = "tail product series too short";
    return v;
  }
  const bool all_zero = std::all_of(series.begin(), series.end(),
                                    [](const RatePoint& p) { return p.value == 0.0; });
  if (all_zero) {
    v.detail = "identically zero: exact convergence";
    return v;
  }
  const auto burn = static_cast<std::size_t>(
      std::ceil(0.1 * static_cast<double>(series.size())));
  for (std::size_t k = std::max<std::size_t>(burn, 1); k < series.size(); ++k) {
    const double prev = series[k - 1].value;
    const double cur = series[k].value;
    if (k - 1 < burn) continue;
    const bool ok = prev > 0.0 ? cur < prev : cur == 0.0;
    if (!ok) {
      v.worst_violation = std::max(v.worst_violation, cur - prev);
      if (!v.first_violation) v.first_violation = static_cast<std::size_t>(series[k].t);
    }
  }
  const double first = series.front().value;
  const double last = series.back().value;
  const bool small = last < ratio * first;
  if (!small) {
    v.worst_violation = std::max(v.worst_violation, last - ratio * first);
  }
  v.passed = !v.first_violation && small;
  v.detail = "first " + fmt(first) + ", last " + fmt(last) + " (need last < " +
             fmt(ratio) + " * first, strictly decreasing after burn-in)";
  return v;
}

ConvergenceVerdict check_beta_stabilized(const TrajectoryRecord& traj) {
  ConvergenceVerdict v;
  v.id = "beta_stabilized";
  const std::size_t T = traj.beta.size();
  if (T < 2) {
    v.passed = false;
    v.detail = "no adaptive beta history";
    return v;
  }
  const double late = traj.beta[T - 1];
  const double mid = traj.beta[T / 2 - 1];
  v.worst_violation = late - mid;
  v.passed = late == mid;
  if (!v.passed) {
    for (std::size_t t = T / 2; t < T; ++t) {
      if (traj.beta[t] != traj.beta[t - 1]) {
        v.first_violation = t + 1;
        break;
      }
    }
  }
  v.detail = "beta_T = " + fmt(late) + ", beta_{T/2} = " + fmt(mid);
  return v;
}

ConvergenceVerdict check_step_size_nonincreasing(const TrajectoryRecord& traj) {
  ConvergenceVerdict v;
  v.id = "step_size_nonincreasing";
  v.tolerance = 1e-15;
  for (std::size_t t = 1; t < traj.step_size.size(); ++t) {
    const double rise = (traj.step_size[t] - traj.step_size[t - 1]) / traj.step_size[t - 1];
    v.worst_violation = std::max(v.worst_violation, rise);
    if (rise > v.tolerance && !v.first_violation) v.first_violation = t + 1;
  }
  v.passed = !v.first_violation;
  v.detail = "max relative increase " + fmt(v.worst_violation);
  return v;
}

ConvergenceVerdict check_slope_at_most(std::string id, std::span<const RatePoint> window,
                                       double bound) {
  ConvergenceVerdict v;
  v.id = std::move(id);
  v.tolerance = bound;
  if (auto fit = try_fit_rate(window)) {
    v.passed = fit->slope <= bound;
    v.worst_violation = fit->slope;
    v.detail = "slope " + fmt(fit->slope) + " over T in [" + fmt(fit->t_min) + ", " +
               fmt(fit->t_max) + "] (" + std::to_string(fit->points) + " points), bound " +
               fmt(bound);
    return v;
  }
  if (!window.empty() && window.back().value == 0.0) {
    v.detail = "curve reached exactly zero inside the window: finite-time convergence";
    v.worst_violation = -std::numeric_limits<double>::infinity();
    return v;
  }
  v.passed = false;
  v.worst_violation = std::numeric_limits<double>::infinity();
  v.detail = "indeterminate: fewer than 3 positive points in window";
  return v;
}

double variance_budget(const VarianceSchedule& schedule, std::size_t horizon,
                       BudgetMode mode) {
  if (horizon < 1) throw InvalidArgument("variance_budget: horizon must be at least 1");
  double sum = 0.0;
  for (std::size_t t = 0; t < horizon; ++t) {
    const double w = mode == BudgetMode::relative ? 1.0 : static_cast<double>(t + 1);
    sum += w * schedule.at(t);
  }
  return sum / static_cast<double>(horizon + 1);
}

}  // namespace ogd
