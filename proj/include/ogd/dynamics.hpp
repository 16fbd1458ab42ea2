#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ogd/games.hpp"
#include "ogd/joint_action.hpp"
#include "ogd/rng.hpp"

namespace ogd {

// ---------------------------------------------------------------------------
// Step-size rules
// ---------------------------------------------------------------------------

struct ConstantStep {
  double eta = 0.0;
  friend bool operator==(const ConstantStep&, const ConstantStep&) = default;
};

// eta_t = c / t^p, t = 1, 2, ...
struct PowerStep {
  double c = 0.0;
  double p = 0.0;
  friend bool operator==(const PowerStep&, const PowerStep&) = default;
};

// Gradient-norm adaptive rule: beta grows by r whenever the gradient norm
// increases, eta = 1/sqrt(beta + accumulated squared gradient norms).
struct AdaptiveStep {
  double beta1 = 1.0;
  double r = 2.0;
  friend bool operator==(const AdaptiveStep&, const AdaptiveStep&) = default;
};

// Step-norm adaptive rule for noisy feedback:
// eta = 1/sqrt(beta + ln(t+2) + sum of rescaled squared step lengths).
struct AdaptiveNoisyStep {
  double beta = 1.0;
  friend bool operator==(const AdaptiveNoisyStep&, const AdaptiveNoisyStep&) = default;
};

using StepRule = std::variant<ConstantStep, PowerStep, AdaptiveStep, AdaptiveNoisyStep>;

std::string_view step_rule_name(const StepRule& rule) noexcept;
// Throws InvalidArgument on non-positive / out-of-range parameters.
void validate(const StepRule& rule);

// Observations available after step t (x_t -> x_{t+1}) has been taken.
struct StepFeedback {
  // ||v(x_t)||^2; Adaptive accumulates this.
  double gradient_sq = 0.0;
  // ||v(x_{t+1})||^2; required by Adaptive.
  std::optional<double> next_gradient_sq;
  // eta_{t+1}^{-2} ||x_t - x_{t+1}||^2; required by AdaptiveNoisy.
  std::optional<double> scaled_step_sq;
};

// Stateful schedule. current() is the step size for the upcoming step t,
// i.e. eta_{t+1}. The first step uses 1/sqrt(beta) for both adaptive rules.
class StepSchedule {
 public:
  explicit StepSchedule(StepRule rule);

  double current() const noexcept { return eta_; }
  std::size_t step() const noexcept { return t_; }
  // beta_{t+1} for the Adaptive rule, the fixed beta for AdaptiveNoisy, and
  // 0 otherwise.
  double beta() const noexcept { return beta_; }
  const StepRule& rule() const noexcept { return rule_; }

  // Consumes the feedback for step t, advances to t+1 and returns
  // eta_{t+2}. Throws InvalidArgument for negative or missing feedback.
  double next_step_size(const StepFeedback& feedback);

 private:
  StepRule rule_;
  std::size_t t_ = 0;
  double eta_ = 0.0;
  double beta_ = 0.0;
  double accumulated_ = 0.0;
};

// ---------------------------------------------------------------------------
// Noise
// ---------------------------------------------------------------------------

// Nonincreasing, nonnegative schedule indexed from t = 0. With s = t + 1:
//   constant     c
//   inv_sqrt     c / sqrt(s)
//   inv          c / s
//   inv_log      c / (s ln(s + 1))
//   inv_loglog   c / ln(ln(s + e))
//   power        c / s^q
enum class VarianceKind { constant, inv_sqrt, inv, inv_log, inv_loglog, power };

struct VarianceSchedule {
  VarianceKind kind = VarianceKind::constant;
  double c = 0.0;
  double q = 1.0;

  double at(std::size_t t) const noexcept;
  friend bool operator==(const VarianceSchedule&, const VarianceSchedule&) = default;
};

std::string_view variance_kind_name(VarianceKind kind) noexcept;
VarianceKind parse_variance_kind(std::string_view name);

enum class NoiseKind { none, relative, absolute };
enum class NoiseShape { sphere, gaussian };

std::string_view noise_kind_name(NoiseKind kind) noexcept;
NoiseKind parse_noise_kind(std::string_view name);
std::string_view noise_shape_name(NoiseShape shape) noexcept;
NoiseShape parse_noise_shape(std::string_view name);

// Relative: E||xi||^2 = tau_t ||v(x_t)||^2. Absolute: E||xi||^2 = sigma_t^2.
// `schedule` supplies tau_t or sigma_t^2 respectively.
struct NoiseModel {
  NoiseKind kind = NoiseKind::none;
  VarianceSchedule schedule;
  NoiseShape shape = NoiseShape::sphere;

  static NoiseModel none() { return {}; }
  static NoiseModel relative(VarianceSchedule tau, NoiseShape shape = NoiseShape::sphere) {
    return {NoiseKind::relative, tau, shape};
  }
  static NoiseModel absolute(VarianceSchedule sigma_sq,
                             NoiseShape shape = NoiseShape::sphere) {
    return {NoiseKind::absolute, sigma_sq, shape};
  }

  // Target E||xi_{t+1}||^2 given ||v(x_t)||^2.
  double second_moment(std::size_t t, double gradient_sq) const noexcept;
  friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

void validate(const NoiseModel& model);

// Writes xi_{t+1} into `out`. Sphere shape: ||xi||^2 equals the target
// second moment exactly. Gaussian shape: isotropic N(0, m/n I).
void sample_noise(const NoiseModel& model, std::size_t t,
                  std::span<const double> v, RandomStream& rng,
                  std::span<double> out);
JointAction sample_noise(const NoiseModel& model, std::size_t t,
                         const JointAction& v, RandomStream& rng);

// ---------------------------------------------------------------------------
// Update and trajectories
// ---------------------------------------------------------------------------

// x + eta * v_hat. Throws DimensionMismatch, InvalidArgument (eta <= 0 or
// non-finite feedback) or DivergenceError carrying the offending block.
JointAction step_ogd(const JointAction& x, const JointAction& v_hat, double eta);

struct DynamicsConfig {
  StepRule schedule = ConstantStep{0.1};
  NoiseModel noise;
  std::size_t horizon = 1;
  std::vector<double> x0;
  // Defaults to 1e8 * (1 + ||x0||).
  std::optional<double> blow_up_radius;
  // Keep the full state every `thinning` steps (0: only dyadic steps). The
  // states at t = 0, powers of two and T are always kept.
  std::size_t thinning = 1;

  double effective_blow_up_radius() const;
  friend bool operator==(const DynamicsConfig&, const DynamicsConfig&) = default;
};

void validate(const DynamicsConfig& config);

struct TrajectoryRecord {
  std::string game;
  DynamicsConfig config;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  // Index t = 0..steps: gap_t = ||v(x_t)||^2.
  std::vector<double> gap;
  // Index t = 0..steps-1 (one entry per update x_t -> x_{t+1}).
  std::vector<double> step_size;     // eta_{t+1}
  std::vector<double> step_norm_sq;  // ||x_{t+1} - x_t||^2
  std::vector<double> beta;          // beta_{t+1}; adaptive rules only
  // Index t = 0..steps: ||x_t - P(x_0)|| with P the Nash projection; empty
  // when the game has no oracle.
  std::vector<double> anchor_distance;

  std::vector<std::size_t> state_steps;
  std::vector<double> states;  // row-major, state_steps.size() x dimension
  std::size_t dimension = 0;

  bool diverged = false;
  std::optional<std::size_t> divergence_step;

  std::size_t steps() const noexcept { return step_size.size(); }
  std::span<const double> state(std::size_t k) const {
    return std::span<const double>(states).subspan(k * dimension, dimension);
  }
  // State at step t if it was kept.
  std::optional<std::span<const double>> state_at(std::size_t t) const;
};

// Runs x_{t+1} = x_t + eta_{t+1} (v(x_t) + xi_{t+1}) for t = 0..T-1. Blow-up
// or non-finite values set `diverged` and truncate the record instead of
// throwing. The Adaptive rule is rejected with noise enabled: its branch
// needs exact gradient norms.
TrajectoryRecord run_trajectory(const Game& game, const DynamicsConfig& config,
                                RandomStream& rng);

bool is_power_of_two(std::size_t t) noexcept;

}  // namespace ogd
