#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ogd/joint_action.hpp"

namespace ogd {

enum class GameKind { quadratic, piecewise_scalar, random_cocoercive };

std::string_view game_kind_name(GameKind kind) noexcept;
GameKind parse_game_kind(std::string_view name);

// v(x) = -A x + b. `blocks` partitions the coordinates among players; empty
// means one player per coordinate.
struct QuadraticParams {
  std::vector<std::vector<double>> matrix;
  std::vector<double> offset;
  std::vector<std::size_t> blocks;
  friend bool operator==(const QuadraticParams&, const QuadraticParams&) = default;
};

// v(x) = -M^T M x + b with M seeded gaussian, rescaled so that
// lambda_max(M^T M) equals `conditioning_bound`, and b = M^T M z for a seeded
// z so that the Nash set is nonempty.
struct RandomCocoerciveParams {
  std::size_t dimension = 0;
  std::uint64_t seed = 0;
  double conditioning_bound = 1.0;
  friend bool operator==(const RandomCocoerciveParams&, const RandomCocoerciveParams&) = default;
};

struct GameSpec {
  GameKind kind = GameKind::quadratic;
  QuadraticParams quadratic;
  RandomCocoerciveParams random;

  static GameSpec make_quadratic(std::vector<std::vector<double>> matrix,
                                 std::vector<double> offset,
                                 std::vector<std::size_t> blocks = {});
  static GameSpec piecewise_scalar();
  static GameSpec random_cocoercive(std::size_t dimension, std::uint64_t seed,
                                    double conditioning_bound);

  friend bool operator==(const GameSpec&, const GameSpec&) = default;
};

// A continuous game described by its joint payoff-gradient field. Immutable
// and cheap to copy; copies share the underlying model.
class Game {
 public:
  using Field =
      std::function<void(std::span<const double> x, std::span<double> out)>;
  using Payoff = std::function<double(std::span<const double> x)>;
  using Projection =
      std::function<void(std::span<const double> x, std::span<double> out)>;

  Game(std::string name, std::vector<std::size_t> block_sizes, Field field);

  Game& with_payoffs(std::vector<Payoff> payoffs);
  Game& with_nash_oracle(Projection projection);
  Game& with_cocoercivity(double lambda);

  const std::string& name() const noexcept { return name_; }
  std::size_t players() const noexcept { return sizes_.size(); }
  std::size_t dimension() const noexcept { return dimension_; }
  const std::vector<std::size_t>& block_sizes() const noexcept {
    return sizes_;
  }

  // Validated evaluation of the stacked field.
  JointAction gradient_field(const JointAction& x) const;
  // Unchecked evaluation for inner loops; spans must have dimension().
  void evaluate(std::span<const double> x, std::span<double> out) const {
    field_(x, out);
  }

  bool has_payoffs() const noexcept { return !payoffs_.empty(); }
  double payoff(std::size_t player, std::span<const double> x) const;

  bool has_nash_oracle() const noexcept { return static_cast<bool>(oracle_); }
  void project(std::span<const double> x, std::span<double> out) const;

  std::optional<double> cocoercivity() const noexcept { return lambda_; }

  // Wraps raw coordinates with this game's block structure.
  JointAction action(std::vector<double> values) const;

 private:
  std::string name_;
  std::vector<std::size_t> sizes_;
  std::size_t dimension_ = 0;
  Field field_;
  std::vector<Payoff> payoffs_;
  Projection oracle_;
  std::optional<double> lambda_;
};

// Throws InvalidArgument for zero dimension, non-square/asymmetric/non-PSD
// matrices, or bad block partitions.
Game make_game(const GameSpec& spec);

JointAction gradient_field(const Game& game, const JointAction& x);

struct GradientCheck {
  double max_abs_error = 0.0;
  std::size_t worst_player = 0;
  std::size_t worst_coordinate = 0;
};

// Central finite differences of u_i along block i, compared entrywise with
// the field. Throws UnsupportedOperation if the game carries no payoffs.
GradientCheck verify_gradient(const Game& game, const JointAction& x,
                              double h);

// Axis-aligned sampling region.
struct SampleBox {
  std::vector<double> lower;
  std::vector<double> upper;

  static SampleBox cube(std::size_t dimension, double lo, double hi);
};

enum class CocoercivityStatus { estimated, monotonicity_violated, indeterminate };

struct CocoercivityEstimate {
  CocoercivityStatus status = CocoercivityStatus::indeterminate;
  // Minimum over informative pairs of -(x'-x)^T(v'-v) / ||v'-v||^2. Only an
  // upper bound on the true constant over the sampled region.
  double lambda_hat = 0.0;
  std::size_t informative_pairs = 0;
  // Largest (x'-x)^T(v'-v) seen; positive means non-monotone evidence.
  double worst_monotonicity = 0.0;
};

CocoercivityEstimate estimate_cocoercivity(const Game& game,
                                           const SampleBox& region,
                                           std::size_t pairs,
                                           std::uint64_t seed);

// Euclidean projection onto the Nash set. Throws UnsupportedOperation when
// the game has no oracle.
JointAction project_to_nash(const Game& game, const JointAction& x);

std::vector<std::string> builtin_game_names();
// Throws InvalidArgument for unknown names.
GameSpec builtin_game_spec(std::string_view name);

}  // namespace ogd
