#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ogd/dynamics.hpp"
#include "ogd/games.hpp"

namespace ogd {

// epsilon(x) = ||v(x)||^2.
double optimality_gap(const Game& game, const JointAction& x);

// ||x - P(x)|| with P the Nash projection. Throws UnsupportedOperation
// without an oracle.
double distance_to_nash(const Game& game, const JointAction& x);

// Prefix means (1/(T+1)) sum_{t<=T} gap_t, same length as the input.
std::vector<double> time_average_gap(std::span<const double> gap);
std::vector<double> time_average_gap(const TrajectoryRecord& traj);

struct RatePoint {
  double t = 0.0;
  double value = 0.0;
  friend bool operator==(const RatePoint&, const RatePoint&) = default;
};

struct TailProduct {
  std::vector<RatePoint> points;  // (T, T * gap_{2T-1}) for T = 1, 2, 4, ...
  // The gap series ended before the requested last dyadic T.
  bool truncated = false;
};

// T * gap_{2T-1} for dyadic T <= max_t (0: as far as the series allows).
TailProduct tail_product(std::span<const double> gap, std::size_t max_t = 0);
TailProduct tail_product(const TrajectoryRecord& traj, std::size_t max_t = 0);

// Least-squares line through (log T, log value).
struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
  std::size_t points = 0;
  friend bool operator==(const RateFit&, const RateFit&) = default;
};

// Points with value <= 0 (or non-finite) are dropped. Throws Indeterminate if
// fewer than 3 remain and InvalidArgument on repeated T.
RateFit fit_rate(std::span<const RatePoint> points);
std::optional<RateFit> try_fit_rate(std::span<const RatePoint> points);

// Drops the first ceil(10%) of the points (burn-in), then keeps those with
// t in [t_min, t_max].
std::vector<RatePoint> rate_window(std::span<const RatePoint> points, double t_min = 0.0,
                                   double t_max = 0.0);

struct ConvergenceVerdict {
  std::string id;
  bool passed = true;
  double worst_violation = 0.0;
  double tolerance = 0.0;
  std::optional<std::size_t> first_violation;
  std::string detail;
  friend bool operator==(const ConvergenceVerdict&, const ConvergenceVerdict&) = default;
};

// Gradient-norm monotonicity, iterate boundedness around P(x_0) and the
// summability bound for noiseless constant-step runs. Throws
// UnsupportedOperation for other trajectory kinds or a game without an oracle.
std::vector<ConvergenceVerdict> check_lemma1(const TrajectoryRecord& traj, const Game& game,
                                             double eta, double lambda);

// Strictly decreasing over the post-burn-in points while positive (an exact
// zero must persist), and last < ratio * first. A series that is identically
// zero has already reached the limit and passes.
ConvergenceVerdict check_tail_decreasing(std::span<const RatePoint> series,
                                         double ratio = 1e-3);

// beta_T == beta_{T/2} at T = the record's length.
ConvergenceVerdict check_beta_stabilized(const TrajectoryRecord& traj);

ConvergenceVerdict check_step_size_nonincreasing(const TrajectoryRecord& traj);

// Passes if a fit exists with slope <= bound, or if no fit exists because the
// curve hit exactly zero inside the window (finite-time convergence).
ConvergenceVerdict check_slope_at_most(std::string id, std::span<const RatePoint> window,
                                       double bound);

enum class BudgetMode { relative, absolute };

// relative: (1/(T+1)) sum_{t<T} tau_t; absolute: (1/(T+1)) sum_{t<T} (t+1) sigma_t^2.
double variance_budget(const VarianceSchedule& schedule, std::size_t horizon,
                       BudgetMode mode);

}  // namespace ogd
