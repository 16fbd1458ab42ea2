#include "ogd/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ogd/errors.hpp"

namespace ogd {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

}  // namespace

std::string_view step_rule_name(const StepRule& rule) noexcept {
  return std::visit(overloaded{
                        [](const ConstantStep&) { return std::string_view("constant"); },
                        [](const PowerStep&) { return std::string_view("power"); },
                        [](const AdaptiveStep&) { return std::string_view("adaptive"); },
                        [](const AdaptiveNoisyStep&) {
                          return std::string_view("adaptive_noisy");
                        },
                    },
                    rule);
}

void validate(const StepRule& rule) {
  std::visit(overloaded{
                 [](const ConstantStep& s) {
                   if (!positive_finite(s.eta)) {
                     throw InvalidArgument("constant schedule: eta must be positive");
                   }
                 },
                 [](const PowerStep& s) {
                   if (!positive_finite(s.c)) {
                     throw InvalidArgument("power schedule: c must be positive");
                   }
                   if (!(s.p >= 0.0) || !std::isfinite(s.p)) {
                     throw InvalidArgument("power schedule: p must be nonnegative");
                   }
                 },
                 [](const AdaptiveStep& s) {
                   if (!positive_finite(s.beta1)) {
                     throw InvalidArgument("adaptive schedule: beta1 must be positive");
                   }
                   if (!(s.r > 1.0) || !std::isfinite(s.r)) {
                     throw InvalidArgument("adaptive schedule: r must exceed 1");
                   }
                 },
                 [](const AdaptiveNoisyStep& s) {
                   if (!positive_finite(s.beta)) {
                     throw InvalidArgument(
                         "adaptive_noisy schedule: beta must be positive");
                   }
                 },
             },
             rule);
}

StepSchedule::StepSchedule(StepRule rule) : rule_(std::move(rule)) {
  validate(rule_);
  std::visit(overloaded{
                 [this](const ConstantStep& s) { eta_ = s.eta; },
                 [this](const PowerStep& s) { eta_ = s.c; },
                 [this](const AdaptiveStep& s) {
                   beta_ = s.beta1;
                   eta_ = 1.0 / std::sqrt(s.beta1);
                 },
                 [this](const AdaptiveNoisyStep& s) {
                   beta_ = s.beta;
                   eta_ = 1.0 / std::sqrt(s.beta);
                 },
             },
             rule_);
}

double StepSchedule::next_step_size(const StepFeedback& fb) {
  if (fb.gradient_sq < 0.0 || (fb.next_gradient_sq && *fb.next_gradient_sq < 0.0) ||
      (fb.scaled_step_sq && *fb.scaled_step_sq < 0.0)) {
    throw InvalidArgument("next_step_size: negative feedback norm");
  }
  const std::size_t t = t_;
  std::visit(overloaded{
                 [](const ConstantStep&) {},
                 [this, t](const PowerStep& s) {
                   eta_ = s.c / std::pow(static_cast<double>(t + 2), s.p);
                 },
                 [this, &fb](const AdaptiveStep& s) {
                   if (!fb.next_gradient_sq) {
                     throw InvalidArgument(
                         "adaptive schedule: feedback lacks ||v(x_{t+1})||^2");
                   }
                   // ||v(x_{t+1})|| > ||v(x_t)|| compared on squares.
                   if (*fb.next_gradient_sq > fb.gradient_sq) beta_ *= s.r;
                   accumulated_ += fb.gradient_sq;
                   eta_ = 1.0 / std::sqrt(beta_ + accumulated_);
                 },
                 [this, &fb, t](const AdaptiveNoisyStep& s) {
                   if (!fb.scaled_step_sq) {
                     throw InvalidArgument(
                         "adaptive_noisy schedule: feedback lacks the rescaled step norm");
                   }
                   accumulated_ += *fb.scaled_step_sq;
                   eta_ = 1.0 / std::sqrt(s.beta + std::log(static_cast<double>(t + 2)) +
                                          accumulated_);
                 },
             },
             rule_);
  ++t_;
  return eta_;
}

double VarianceSchedule::at(std::size_t t) const noexcept {
  const double s = static_cast<double>(t) + 1.0;
  switch (kind) {
    case VarianceKind::constant:
      return c;
    case VarianceKind::inv_sqrt:
      return c / std::sqrt(s);
    case VarianceKind::inv:
      return c / s;
    case VarianceKind::inv_log:
      return c / (s * std::log(s + 1.0));
    case VarianceKind::inv_loglog:
      return c / std::log(std::log(s + std::numbers::e));
    case VarianceKind::power:
      return c / std::pow(s, q);
  }
  return c;
}

std::string_view variance_kind_name(VarianceKind kind) noexcept {
  switch (kind) {
    case VarianceKind::constant:
      return "constant";
    case VarianceKind::inv_sqrt:
      return "inv_sqrt";
    case VarianceKind::inv:
      return "inv";
    case VarianceKind::inv_log:
      return "inv_log";
    case VarianceKind::inv_loglog:
      return "inv_loglog";
    case VarianceKind::power:
      return "power";
  }
  return "unknown";
}

VarianceKind parse_variance_kind(std::string_view name) {
  for (auto k : {VarianceKind::constant, VarianceKind::inv_sqrt, VarianceKind::inv,
                 VarianceKind::inv_log, VarianceKind::inv_loglog, VarianceKind::power}) {
    if (variance_kind_name(k) == name) return k;
  }
  throw InvalidArgument("unknown variance schedule '" + std::string(name) + "'");
}

std::string_view noise_kind_name(NoiseKind kind) noexcept {
  switch (kind) {
    case NoiseKind::none:
      return "none";
    case NoiseKind::relative:
      return "relative";
    case NoiseKind::absolute:
      return "absolute";
  }
  return "unknown";
}

NoiseKind parse_noise_kind(std::string_view name) {
  for (auto k : {NoiseKind::none, NoiseKind::relative, NoiseKind::absolute}) {
    if (noise_kind_name(k) == name) return k;
  }
  throw InvalidArgument("unknown noise kind '" + std::string(name) + "'");
}

std::string_view noise_shape_name(NoiseShape shape) noexcept {
  return shape == NoiseShape::sphere ? "sphere" : "gaussian";
}

NoiseShape parse_noise_shape(std::string_view name) {
  if (name == "sphere") return NoiseShape::sphere;
  if (name == "gaussian") return NoiseShape::gaussian;
  throw InvalidArgument("unknown noise shape '" + std::string(name) + "'");
}

double NoiseModel::second_moment(std::size_t t, double gradient_sq) const noexcept {
  switch (kind) {
    case NoiseKind::none:
      return 0.0;
    case NoiseKind::relative:
      return schedule.at(t) * gradient_sq;
    case NoiseKind::absolute:
      return schedule.at(t);
  }
  return 0.0;
}

void validate(const NoiseModel& model) {
  if (model.kind == NoiseKind::none) return;
  if (!(model.schedule.c >= 0.0) || !std::isfinite(model.schedule.c)) {
    throw InvalidArgument("noise schedule: c must be nonnegative");
  }
  if (model.schedule.kind == VarianceKind::power &&
      (!(model.schedule.q >= 0.0) || !std::isfinite(model.schedule.q))) {
    throw InvalidArgument("noise schedule: q must be nonnegative");
  }
}

void sample_noise(const NoiseModel& model, std::size_t t, std::span<const double> v,
                  RandomStream& rng, std::span<double> out) {
  if (model.kind == NoiseKind::none) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  const double m = model.second_moment(t, vec::squared_norm(v));
  if (m == 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  if (model.shape == NoiseShape::sphere) {
    rng.unit_sphere(out);
    const double radius = std::sqrt(m);
    for (double& z : out) z *= radius;
  } else {
    const double sd = std::sqrt(m / static_cast<double>(out.size()));
    for (double& z : out) z = sd * rng.normal();
  }
}

JointAction sample_noise(const NoiseModel& model, std::size_t t, const JointAction& v,
                         RandomStream& rng) {
  validate(model);
  JointAction xi = JointAction::zeros(v.block_sizes());
  sample_noise(model, t, v.values(), rng, xi.values());
  return xi;
}

JointAction step_ogd(const JointAction& x, const JointAction& v_hat, double eta) {
  if (!x.same_shape(v_hat)) {
    throw DimensionMismatch("step_ogd: action and feedback shapes differ");
  }
  if (!positive_finite(eta)) throw InvalidArgument("step_ogd: eta must be positive");
  if (!vec::all_finite(v_hat.values())) {
    throw InvalidArgument("step_ogd: feedback is not finite");
  }
  std::vector<double> next(x.dimension());
  for (std::size_t k = 0; k < next.size(); ++k) next[k] = x[k] + eta * v_hat[k];
  std::size_t offset = 0;
  for (std::size_t i = 0; i < x.players(); ++i) {
    const std::size_t len = x.block_sizes()[i];
    if (!vec::all_finite(std::span<const double>(next).subspan(offset, len))) {
      throw DivergenceError("step_ogd: non-finite iterate in block " + std::to_string(i),
                            i);
    }
    offset += len;
  }
  return JointAction(x.block_sizes(), std::move(next));
}

double DynamicsConfig::effective_blow_up_radius() const {
  if (blow_up_radius) return *blow_up_radius;
  return 1e8 * (1.0 + std::sqrt(vec::squared_norm(x0)));
}

void validate(const DynamicsConfig& config) {
  validate(config.schedule);
  validate(config.noise);
  if (config.horizon < 1) throw InvalidArgument("dynamics: horizon must be at least 1");
  if (config.x0.empty()) throw InvalidArgument("dynamics: x0 is empty");
  if (!vec::all_finite(config.x0)) throw InvalidArgument("dynamics: x0 is not finite");
  if (config.blow_up_radius && !(*config.blow_up_radius > 0.0)) {
    throw InvalidArgument("dynamics: blow_up_radius must be positive");
  }
  if (std::holds_alternative<AdaptiveStep>(config.schedule) &&
      config.noise.kind != NoiseKind::none) {
    throw InvalidArgument(
        "dynamics: the adaptive rule compares exact gradient norms and cannot run with "
        "noisy feedback; use adaptive_noisy");
  }
}

std::optional<std::span<const double>> TrajectoryRecord::state_at(std::size_t t) const {
  const auto it = std::lower_bound(state_steps.begin(), state_steps.end(), t);
  if (it == state_steps.end() || *it != t) return std::nullopt;
  return state(static_cast<std::size_t>(it - state_steps.begin()));
}

bool is_power_of_two(std::size_t t) noexcept { return t != 0 && (t & (t - 1)) == 0; }

TrajectoryRecord run_trajectory(const Game& game, const DynamicsConfig& config,
                                RandomStream& rng) {
  validate(config);
  const std::size_t n = game.dimension();
  if (config.x0.size() != n) {
    throw DimensionMismatch("run_trajectory: x0 has dimension " +
                            std::to_string(config.x0.size()) + ", game expects " +
                            std::to_string(n));
  }
  const std::size_t horizon = config.horizon;
  const double radius = config.effective_blow_up_radius();
  const bool adaptive = std::holds_alternative<AdaptiveStep>(config.schedule) ||
                        std::holds_alternative<AdaptiveNoisyStep>(config.schedule);

  TrajectoryRecord rec;
  rec.game = game.name();
  rec.config = config;
  rec.seed = rng.seed();
  rec.stream = rng.stream();
  rec.dimension = n;
  rec.gap.reserve(horizon + 1);
  rec.step_size.reserve(horizon);
  rec.step_norm_sq.reserve(horizon);
  if (adaptive) rec.beta.reserve(horizon);

  std::vector<double> x = config.x0;
  std::vector<double> x_next(n), v(n), v_next(n), xi(n);
  std::vector<double> anchor;
  if (game.has_nash_oracle()) {
    anchor.resize(n);
    game.project(x, anchor);
    rec.anchor_distance.reserve(horizon + 1);
    rec.anchor_distance.push_back(std::sqrt(vec::squared_distance(x, anchor)));
  }

  auto keep_state = [&](std::size_t t, std::span<const double> s) {
    const bool thinned = config.thinning != 0 && t % config.thinning == 0;
    if (t == 0 || t == horizon || thinned || is_power_of_two(t)) {
      rec.state_steps.push_back(t);
      rec.states.insert(rec.states.end(), s.begin(), s.end());
    }
  };

  game.evaluate(x, v);
  if (!vec::all_finite(v)) {
    rec.diverged = true;
    rec.divergence_step = 0;
    return rec;
  }
  double gap = vec::squared_norm(v);
  rec.gap.push_back(gap);
  keep_state(0, x);

  StepSchedule schedule(config.schedule);
  for (std::size_t t = 0; t < horizon; ++t) {
    const double eta = schedule.current();
    sample_noise(config.noise, t, v, rng, xi);
    double step_sq = 0.0;
    double norm_sq = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      x_next[k] = x[k] + eta * (v[k] + xi[k]);
      const double d = x_next[k] - x[k];
      step_sq += d * d;
      norm_sq += x_next[k] * x_next[k];
    }
    game.evaluate(x_next, v_next);
    const double next_gap = vec::squared_norm(v_next);
    if (!std::isfinite(norm_sq) || !std::isfinite(next_gap) ||
        std::sqrt(norm_sq) > radius) {
      rec.diverged = true;
      rec.divergence_step = t + 1;
      break;
    }

    rec.step_size.push_back(eta);
    rec.step_norm_sq.push_back(step_sq);
    if (adaptive) rec.beta.push_back(schedule.beta());
    rec.gap.push_back(next_gap);
    if (!anchor.empty()) {
      rec.anchor_distance.push_back(std::sqrt(vec::squared_distance(x_next, anchor)));
    }
    keep_state(t + 1, x_next);

    StepFeedback fb;
    fb.gradient_sq = gap;
    fb.next_gradient_sq = next_gap;
    fb.scaled_step_sq = step_sq / (eta * eta);
    schedule.next_step_size(fb);

    x.swap(x_next);
    v.swap(v_next);
    gap = next_gap;
  }
  return rec;
}

}  // namespace ogd
