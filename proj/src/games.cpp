#include "ogd/games.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ogd/errors.hpp"
#include "ogd/rng.hpp"

namespace ogd {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Symmetric PSD linear field v(x) = -A x + b. The Nash set {A x = b} is
// stored as anchor + span(null_basis), anchor = A^+ b, so the projection
// x - A^+(A x - b) is evaluated as anchor + N N^T (x - anchor).
struct QuadraticModel {
  MatrixXd a;
  VectorXd b;
  VectorXd anchor;
  MatrixXd null_basis;
  double lambda_max = 0.0;
  bool consistent = true;
};

std::shared_ptr<const QuadraticModel> build_quadratic(MatrixXd a, VectorXd b) {
  const auto n = a.rows();
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  const double sym_tol = 1e-10 * scale;
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > sym_tol) {
    throw InvalidArgument(
        "quadratic game: matrix is not symmetric; the field would not be a "
        "cocoercive gradient field");
  }
  const MatrixXd sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(sym);
  if (eig.info() != Eigen::Success) {
    throw InvalidArgument("quadratic game: eigendecomposition failed");
  }
  const VectorXd& evals = eig.eigenvalues();
  if (evals.minCoeff() < -sym_tol) {
    throw InvalidArgument(
        "quadratic game: matrix is not positive semidefinite (smallest "
        "eigenvalue " +
        std::to_string(evals.minCoeff()) +
        "); the game would not be cocoercive");
  }

  auto model = std::make_shared<QuadraticModel>();
  model->a = sym;
  model->b = std::move(b);
  model->lambda_max = std::max(0.0, evals.maxCoeff());

  // Rank-revealing pseudo-inverse: eigenvalues below 1e-10 * lambda_max are
  // treated as zero.
  const double cutoff = 1e-10 * model->lambda_max;
  VectorXd inv = VectorXd::Zero(n);
  std::vector<Eigen::Index> null_cols;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (evals[k] > cutoff && evals[k] > 0.0) {
      inv[k] = 1.0 / evals[k];
    } else {
      null_cols.push_back(k);
    }
  }
  const MatrixXd& vecs = eig.eigenvectors();
  model->anchor = vecs * inv.asDiagonal() * (vecs.transpose() * model->b);
  model->null_basis = MatrixXd(n, static_cast<Eigen::Index>(null_cols.size()));
  for (std::size_t j = 0; j < null_cols.size(); ++j) {
    model->null_basis.col(static_cast<Eigen::Index>(j)) = vecs.col(null_cols[j]);
  }

  const VectorXd residual = model->a * model->anchor - model->b;
  model->consistent =
      residual.norm() <= 1e-9 * std::max(1.0, model->b.norm());
  return model;
}

std::vector<std::size_t> default_blocks(std::size_t n) {
  return std::vector<std::size_t>(n, 1);
}

void validate_blocks(const std::vector<std::size_t>& blocks, std::size_t n) {
  const std::size_t total =
      std::accumulate(blocks.begin(), blocks.end(), std::size_t{0});
  if (total != n || std::find(blocks.begin(), blocks.end(), 0) != blocks.end()) {
    throw InvalidArgument("game spec: player blocks must be positive and sum to " +
                          std::to_string(n));
  }
}

Game quadratic_game(std::string name, std::shared_ptr<const QuadraticModel> m,
                    std::vector<std::size_t> blocks) {
  const auto n = static_cast<Eigen::Index>(m->a.rows());
  Game game(std::move(name), blocks,
            [m, n](std::span<const double> x, std::span<double> out) {
              Eigen::Map<const VectorXd> xv(x.data(), n);
              Eigen::Map<VectorXd> ov(out.data(), n);
              ov.noalias() = m->b - m->a * xv;
            });

  // u_i(x) = -1/2 x_i^T A_ii x_i - x_i^T sum_{j != i} A_ij x_j + b_i^T x_i,
  // whose gradient in x_i is the i-th block of -A x + b.
  std::vector<Game::Payoff> payoffs;
  std::size_t offset = 0;
  for (std::size_t size : blocks) {
    const auto lo = static_cast<Eigen::Index>(offset);
    const auto len = static_cast<Eigen::Index>(size);
    payoffs.emplace_back([m, n, lo, len](std::span<const double> x) {
      Eigen::Map<const VectorXd> xv(x.data(), n);
      const auto xi = xv.segment(lo, len);
      const VectorXd ax = m->a.middleRows(lo, len) * xv;
      const VectorXd own = m->a.block(lo, lo, len, len) * xi;
      // x_i^T (A x)_i double-counts the own-block quadratic term.
      return -xi.dot(ax) + 0.5 * xi.dot(own) + m->b.segment(lo, len).dot(xi);
    });
    offset += size;
  }
  game.with_payoffs(std::move(payoffs));

  if (m->consistent) {
    game.with_nash_oracle([m, n](std::span<const double> x, std::span<double> out) {
      Eigen::Map<const VectorXd> xv(x.data(), n);
      Eigen::Map<VectorXd> ov(out.data(), n);
      const VectorXd coords = m->null_basis.transpose() * (xv - m->anchor);
      ov.noalias() = m->anchor + m->null_basis * coords;
    });
  }
  if (m->lambda_max > 0.0) game.with_cocoercivity(1.0 / m->lambda_max);
  return game;
}

Game make_quadratic(const QuadraticParams& p) {
  const std::size_t n = p.matrix.size();
  if (n == 0) throw InvalidArgument("quadratic game: zero dimension");
  if (p.offset.size() != n) {
    throw InvalidArgument("quadratic game: offset has length " +
                          std::to_string(p.offset.size()) + ", expected " +
                          std::to_string(n));
  }
  MatrixXd a(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    if (p.matrix[r].size() != n) {
      throw InvalidArgument("quadratic game: matrix row " + std::to_string(r) +
                            " has length " + std::to_string(p.matrix[r].size()) +
                            ", expected " + std::to_string(n));
    }
    for (std::size_t c = 0; c < n; ++c) a(r, c) = p.matrix[r][c];
  }
  if (!a.allFinite() ||
      !vec::all_finite(std::span<const double>(p.offset))) {
    throw InvalidArgument("quadratic game: non-finite parameter");
  }
  VectorXd b = Eigen::Map<const VectorXd>(p.offset.data(), n);
  auto blocks = p.blocks.empty() ? default_blocks(n) : p.blocks;
  validate_blocks(blocks, n);
  return quadratic_game("quadratic", build_quadratic(std::move(a), std::move(b)),
                        std::move(blocks));
}

Game make_piecewise() {
  // u(x) = -x^2 for x < 0, 0 otherwise; Nash set [0, inf).
  Game game("piecewise_scalar", {1},
            [](std::span<const double> x, std::span<double> out) {
              out[0] = x[0] < 0.0 ? -2.0 * x[0] : 0.0;
            });
  game.with_payoffs({[](std::span<const double> x) {
    return x[0] < 0.0 ? -x[0] * x[0] : 0.0;
  }});
  game.with_nash_oracle([](std::span<const double> x, std::span<double> out) {
    out[0] = std::max(x[0], 0.0);
  });
  game.with_cocoercivity(0.5);
  return game;
}

Game make_random(const RandomCocoerciveParams& p) {
  if (p.dimension == 0) throw InvalidArgument("random_cocoercive game: zero dimension");
  if (!(p.conditioning_bound > 0.0) || !std::isfinite(p.conditioning_bound)) {
    throw InvalidArgument("random_cocoercive game: conditioning_bound must be positive");
  }
  const auto n = static_cast<Eigen::Index>(p.dimension);
  RandomStream rng(p.seed, 0);
  MatrixXd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = rng.normal();
  }
  MatrixXd a = m.transpose() * m;
  a = 0.5 * (a + a.transpose());
  const double top = Eigen::SelfAdjointEigenSolver<MatrixXd>(a, Eigen::EigenvaluesOnly)
                         .eigenvalues()
                         .maxCoeff();
  a *= p.conditioning_bound / top;
  VectorXd z(n);
  for (Eigen::Index k = 0; k < n; ++k) z[k] = rng.normal();
  VectorXd b = a * z;
  return quadratic_game("random_cocoercive",
                        build_quadratic(std::move(a), std::move(b)),
                        default_blocks(p.dimension));
}

}  // namespace

std::string_view game_kind_name(GameKind kind) noexcept {
  switch (kind) {
    case GameKind::quadratic:
      return "quadratic";
    case GameKind::piecewise_scalar:
      return "piecewise_scalar";
    case GameKind::random_cocoercive:
      return "random_cocoercive";
  }
  return "unknown";
}

GameKind parse_game_kind(std::string_view name) {
  for (GameKind k : {GameKind::quadratic, GameKind::piecewise_scalar,
                     GameKind::random_cocoercive}) {
    if (game_kind_name(k) == name) return k;
  }
  throw InvalidArgument("unknown game kind '" + std::string(name) + "'");
}

GameSpec GameSpec::make_quadratic(std::vector<std::vector<double>> matrix,
                                  std::vector<double> offset,
                                  std::vector<std::size_t> blocks) {
  GameSpec spec;
  spec.kind = GameKind::quadratic;
  spec.quadratic = {std::move(matrix), std::move(offset), std::move(blocks)};
  return spec;
}

GameSpec GameSpec::piecewise_scalar() {
  GameSpec spec;
  spec.kind = GameKind::piecewise_scalar;
  return spec;
}

GameSpec GameSpec::random_cocoercive(std::size_t dimension, std::uint64_t seed,
                                     double conditioning_bound) {
  GameSpec spec;
  spec.kind = GameKind::random_cocoercive;
  spec.random = {dimension, seed, conditioning_bound};
  return spec;
}

Game::Game(std::string name, std::vector<std::size_t> block_sizes, Field field)
    : name_(std::move(name)), sizes_(std::move(block_sizes)), field_(std::move(field)) {
  dimension_ = std::accumulate(sizes_.begin(), sizes_.end(), std::size_t{0});
  if (dimension_ == 0) throw InvalidArgument("game: zero dimension");
}

Game& Game::with_payoffs(std::vector<Payoff> payoffs) {
  if (payoffs.size() != sizes_.size()) {
    throw InvalidArgument("game: need one payoff per player");
  }
  payoffs_ = std::move(payoffs);
  return *this;
}

Game& Game::with_nash_oracle(Projection projection) {
  oracle_ = std::move(projection);
  return *this;
}

Game& Game::with_cocoercivity(double lambda) {
  if (!(lambda > 0.0)) throw InvalidArgument("game: cocoercivity must be positive");
  lambda_ = lambda;
  return *this;
}

JointAction Game::gradient_field(const JointAction& x) const {
  if (x.block_sizes() != sizes_) {
    throw DimensionMismatch("gradient_field: action shape does not match game '" +
                            name_ + "'");
  }
  std::vector<double> out(dimension_);
  field_(x.values(), out);
  std::size_t offset = 0;
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    if (!vec::all_finite(std::span<const double>(out).subspan(offset, sizes_[i]))) {
      throw NonFiniteValue("gradient_field: non-finite output in block " +
                               std::to_string(i),
                           i);
    }
    offset += sizes_[i];
  }
  return JointAction(sizes_, std::move(out));
}

double Game::payoff(std::size_t player, std::span<const double> x) const {
  if (payoffs_.empty()) {
    throw UnsupportedOperation("game '" + name_ + "' has no payoff functions");
  }
  return payoffs_.at(player)(x);
}

void Game::project(std::span<const double> x, std::span<double> out) const {
  if (!oracle_) {
    throw UnsupportedOperation("game '" + name_ + "' has no Nash oracle");
  }
  oracle_(x, out);
}

JointAction Game::action(std::vector<double> values) const {
  return JointAction(sizes_, std::move(values));
}

Game make_game(const GameSpec& spec) {
  switch (spec.kind) {
    case GameKind::quadratic:
      return make_quadratic(spec.quadratic);
    case GameKind::piecewise_scalar:
      return make_piecewise();
    case GameKind::random_cocoercive:
      return make_random(spec.random);
  }
  throw InvalidArgument("make_game: unknown kind");
}

JointAction gradient_field(const Game& game, const JointAction& x) {
  return game.gradient_field(x);
}

GradientCheck verify_gradient(const Game& game, const JointAction& x, double h) {
  if (!game.has_payoffs()) {
    throw UnsupportedOperation("verify_gradient: game '" + game.name() +
                               "' has no payoff functions");
  }
  if (!(h > 0.0)) throw InvalidArgument("verify_gradient: step must be positive");
  const JointAction v = game.gradient_field(x);

  GradientCheck report;
  std::vector<double> probe(x.values().begin(), x.values().end());
  std::size_t offset = 0;
  for (std::size_t i = 0; i < game.players(); ++i) {
    for (std::size_t k = 0; k < game.block_sizes()[i]; ++k) {
      const std::size_t idx = offset + k;
      const double saved = probe[idx];
      probe[idx] = saved + h;
      const double up = game.payoff(i, probe);
      probe[idx] = saved - h;
      const double down = game.payoff(i, probe);
      probe[idx] = saved;
      const double err = std::abs((up - down) / (2.0 * h) - v[idx]);
      if (err > report.max_abs_error) {
        report = {err, i, idx};
      }
    }
    offset += game.block_sizes()[i];
  }
  return report;
}

SampleBox SampleBox::cube(std::size_t dimension, double lo, double hi) {
  return {std::vector<double>(dimension, lo), std::vector<double>(dimension, hi)};
}

CocoercivityEstimate estimate_cocoercivity(const Game& game,
                                           const SampleBox& region,
                                           std::size_t pairs,
                                           std::uint64_t seed) {
  const std::size_t n = game.dimension();
  if (pairs < 2) throw InvalidArgument("estimate_cocoercivity: need at least 2 pairs");
  if (region.lower.size() != n || region.upper.size() != n) {
    throw DimensionMismatch("estimate_cocoercivity: region dimension mismatch");
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (!(region.lower[k] <= region.upper[k])) {
      throw InvalidArgument("estimate_cocoercivity: empty region");
    }
  }

  RandomStream rng(seed, 0);
  std::vector<double> x(n), y(n), vx(n), vy(n);
  CocoercivityEstimate est;
  est.lambda_hat = std::numeric_limits<double>::infinity();
  est.worst_monotonicity = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < pairs; ++p) {
    for (std::size_t k = 0; k < n; ++k) {
      x[k] = rng.uniform(region.lower[k], region.upper[k]);
      y[k] = rng.uniform(region.lower[k], region.upper[k]);
    }
    game.evaluate(x, vx);
    game.evaluate(y, vy);
    double inner = 0.0;
    double dv2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double dv = vy[k] - vx[k];
      inner += (y[k] - x[k]) * dv;
      dv2 += dv * dv;
    }
    est.worst_monotonicity = std::max(est.worst_monotonicity, inner);
    if (dv2 == 0.0) continue;
    ++est.informative_pairs;
    est.lambda_hat = std::min(est.lambda_hat, -inner / dv2);
  }

  if (est.informative_pairs == 0) {
    est.status = CocoercivityStatus::indeterminate;
    est.lambda_hat = 0.0;
  } else if (est.worst_monotonicity > 0.0) {
    est.status = CocoercivityStatus::monotonicity_violated;
  } else {
    est.status = CocoercivityStatus::estimated;
  }
  return est;
}

JointAction project_to_nash(const Game& game, const JointAction& x) {
  if (!game.has_nash_oracle()) {
    throw UnsupportedOperation("project_to_nash: game '" + game.name() +
                               "' has no Nash oracle");
  }
  if (x.block_sizes() != game.block_sizes()) {
    throw DimensionMismatch("project_to_nash: action shape does not match game");
  }
  std::vector<double> out(game.dimension());
  game.project(x.values(), out);
  return JointAction(game.block_sizes(), std::move(out));
}

std::vector<std::string> builtin_game_names() {
  return {"quadratic_1d", "quadratic_2d", "quadratic_rank_deficient",
          "piecewise_scalar", "random_cocoercive_5"};
}

GameSpec builtin_game_spec(std::string_view name) {
  if (name == "quadratic_1d") return GameSpec::make_quadratic({{1.0}}, {0.0});
  if (name == "quadratic_2d") {
    return GameSpec::make_quadratic({{2.0, 1.0}, {1.0, 2.0}}, {0.0, 0.0});
  }
  if (name == "quadratic_rank_deficient") {
    return GameSpec::make_quadratic({{1.0, 0.0}, {0.0, 0.0}}, {0.0, 0.0});
  }
  if (name == "piecewise_scalar") return GameSpec::piecewise_scalar();
  if (name == "random_cocoercive_5") return GameSpec::random_cocoercive(5, 7, 4.0);
  throw InvalidArgument("unknown builtin game '" + std::string(name) + "'");
}

}  // namespace ogd
