#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ogd/errors.hpp"
#include "ogd/games.hpp"
#include "ogd/rng.hpp"

using namespace ogd;

namespace {

using Mat = std::vector<std::vector<double>>;

// Cyclic Jacobi eigenvalues for small symmetric matrices.
std::vector<double> jacobi_eigenvalues(Mat a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev;
  for (std::size_t k = 0; k < n; ++k) ev.push_back(a[k][k]);
  std::sort(ev.begin(), ev.end());
  return ev;
}

// -A x + b by hand.
std::vector<double> linear_field(const Mat& a, const std::vector<double>& b,
                                 const std::vector<double>& x) {
  std::vector<double> out(b);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) out[i] -= a[i][j] * x[j];
  return out;
}

double dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("jacobi oracle sanity") {
  const auto ev = jacobi_eigenvalues({{2, 1}, {1, 2}});
  CHECK(ev[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ev[1] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("quadratic 1d is v(x) = -x") {
  const Game g = make_game(GameSpec::make_quadratic({{1}}, {0}));
  CHECK(g.cocoercivity() == doctest::Approx(1.0));
  CHECK(g.gradient_field(g.action({3}))[0] == -3.0);
  CHECK(project_to_nash(g, g.action({4.5}))[0] == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("quadratic 2d field, lambda and Nash set") {
  const Mat a{{2, 1}, {1, 2}};
  const Game g = make_game(GameSpec::make_quadratic(a, {0, 0}));
  const auto v = g.gradient_field(g.action({1, 1}));
  CHECK(v[0] == -3.0);
  CHECK(v[1] == -3.0);
  const auto ev = jacobi_eigenvalues(a);
  REQUIRE(g.cocoercivity());
  CHECK(*g.cocoercivity() == doctest::Approx(1.0 / ev.back()).epsilon(1e-12));
  const auto p = project_to_nash(g, g.action({5, -7}));
  CHECK(std::abs(p[0]) < 1e-12);
  CHECK(std::abs(p[1]) < 1e-12);
}

TEST_CASE("rank deficient projection matches grid minimization") {
  const Game g = make_game(GameSpec::make_quadratic({{1, 0}, {0, 0}}, {0, 0}));
  const auto p = project_to_nash(g, g.action({3, 4}));
  CHECK(std::abs(p[0]) < 1e-12);
  CHECK(p[1] == doctest::Approx(4.0).epsilon(1e-12));
  // Nash set {x1 = 0}: minimize distance over a grid along x2.
  double best = 1e300, arg = 0.0;
  for (int k = -1000; k <= 1000; ++k) {
    const double y = k * 0.01;
    const double d = 9.0 + (4.0 - y) * (4.0 - y);
    if (d < best) best = d, arg = y;
  }
  CHECK(p[1] == doctest::Approx(arg).epsilon(1e-9));
}

TEST_CASE("projection onto an affine Nash set with offset") {
  // A = [[1,1],[1,1]], b = [2,2]: X* = {x1 + x2 = 2}.
  const Game g = make_game(GameSpec::make_quadratic({{1, 1}, {1, 1}}, {2, 2}));
  const auto p = project_to_nash(g, g.action({3, 5}));
  // Closed form: x - ((x1 + x2 - 2)/2)(1, 1)
  CHECK(p[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(g.gradient_field(p).norm() < 1e-12);
}

TEST_CASE("inconsistent offset has no Nash oracle") {
  const Game g = make_game(GameSpec::make_quadratic({{1, 0}, {0, 0}}, {0, 1}));
  CHECK_FALSE(g.has_nash_oracle());
  CHECK_THROWS_AS(project_to_nash(g, g.action({1, 1})), UnsupportedOperation);
}

TEST_CASE("piecewise scalar") {
  const Game g = make_game(GameSpec::piecewise_scalar());
  CHECK(g.gradient_field(g.action({-1}))[0] == 2.0);
  CHECK(g.gradient_field(g.action({-2}))[0] == 4.0);
  CHECK(g.gradient_field(g.action({0.5}))[0] == 0.0);
  CHECK(project_to_nash(g, g.action({-3}))[0] == 0.0);
  CHECK(project_to_nash(g, g.action({7}))[0] == 7.0);
  CHECK(g.cocoercivity() == doctest::Approx(0.5));
}

TEST_CASE("rejections") {
  CHECK_THROWS_AS(make_game(GameSpec::make_quadratic({{1, 2}, {2, 1}}, {0, 0})),
                  InvalidArgument);
  CHECK_THROWS_AS(make_game(GameSpec::make_quadratic({{1, 2}, {0, 1}}, {0, 0})),
                  InvalidArgument);
  CHECK_THROWS_AS(make_game(GameSpec::make_quadratic({}, {})), InvalidArgument);
  CHECK_THROWS_AS(make_game(GameSpec::random_cocoercive(0, 1, 1.0)), InvalidArgument);
  const Game g = make_game(GameSpec::make_quadratic({{2, 1}, {1, 2}}, {0, 0}));
  CHECK_THROWS_AS(g.gradient_field(JointAction({1}, {1.0})), DimensionMismatch);
  CHECK_THROWS_AS(builtin_game_spec("nope"), InvalidArgument);
}

TEST_CASE("non-finite field reports the block") {
  const Game g("blowup", {1, 2}, [](std::span<const double> x, std::span<double> out) {
    out[0] = x[0];
    out[1] = x[1];
    out[2] = std::log(x[2]);
  });
  try {
    (void)g.gradient_field(g.action({1, 1, -1}));
    FAIL("expected NonFiniteValue");
  } catch (const NonFiniteValue& e) {
    CHECK(e.block() == 1);
  }
}

TEST_CASE("verify_gradient against payoffs") {
  const Game q = make_game(GameSpec::make_quadratic({{1}}, {0}));
  CHECK(verify_gradient(q, q.action({1}), 1e-5).max_abs_error <= 1e-8);
  const Game p = make_game(GameSpec::piecewise_scalar());
  CHECK(verify_gradient(p, p.action({-1}), 1e-5).max_abs_error <= 1e-8);
  CHECK(verify_gradient(p, p.action({0}), 1e-5).max_abs_error <= 1e-5);
  const Game no_payoff("bare", {1}, [](std::span<const double> x, std::span<double> out) {
    out[0] = -x[0];
  });
  CHECK_THROWS_AS(verify_gradient(no_payoff, no_payoff.action({1}), 1e-5),
                  UnsupportedOperation);
}

TEST_CASE("estimate_cocoercivity brackets") {
  const Game q1 = make_game(GameSpec::make_quadratic({{1}}, {0}));
  auto e = estimate_cocoercivity(q1, SampleBox::cube(1, -10, 10), 1000, 3);
  CHECK(e.status == CocoercivityStatus::estimated);
  CHECK(std::abs(e.lambda_hat - 1.0) <= 1e-9);

  const Game q2 = make_game(GameSpec::make_quadratic({{2, 1}, {1, 2}}, {0, 0}));
  e = estimate_cocoercivity(q2, SampleBox::cube(2, -10, 10), 10000, 3);
  CHECK(e.lambda_hat >= 1.0 / 3.0 - 1e-12);
  CHECK(e.lambda_hat <= 1.0 / 3.0 + 0.05);

  const Game p = make_game(GameSpec::piecewise_scalar());
  e = estimate_cocoercivity(p, SampleBox::cube(1, -5, 5), 10000, 3);
  CHECK(e.lambda_hat >= 0.5);
  CHECK(e.lambda_hat <= 0.5 + 1e-6);

  const Game anti("rotation", {1, 1}, [](std::span<const double> x, std::span<double> out) {
    out[0] = x[1];
    out[1] = -x[0] + 0.5 * x[1];
  });
  e = estimate_cocoercivity(anti, SampleBox::cube(2, -1, 1), 100, 3);
  CHECK(e.status == CocoercivityStatus::monotonicity_violated);

  const Game constant("constant", {1}, [](std::span<const double>, std::span<double> out) {
    out[0] = 1.0;
  });
  e = estimate_cocoercivity(constant, SampleBox::cube(1, -1, 1), 100, 3);
  CHECK(e.status == CocoercivityStatus::indeterminate);
}

TEST_CASE("random cocoercive game: lambda by power iteration") {
  const auto spec = GameSpec::random_cocoercive(6, 11, 4.0);
  const Game g = make_game(spec);
  // Recover A column by column from the field: A e_k = b - v(e_k) with b = v(0).
  const std::size_t n = g.dimension();
  std::vector<double> zero(n, 0.0);
  const auto b = g.gradient_field(g.action(zero));
  Mat a(n, std::vector<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> e(n, 0.0);
    e[k] = 1.0;
    const auto v = g.gradient_field(g.action(e));
    for (std::size_t i = 0; i < n; ++i) a[i][k] = b[i] - v[i];
  }
  std::vector<double> x(n, 1.0);
  double mu = 0.0;
  for (int it = 0; it < 5000; ++it) {
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) y[i] += a[i][j] * x[j];
    double norm = 0.0;
    for (double v : y) norm += v * v;
    norm = std::sqrt(norm);
    mu = norm;
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / norm;
  }
  CHECK(mu == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(*g.cocoercivity() == doctest::Approx(1.0 / mu).epsilon(1e-9));
  const auto ev = jacobi_eigenvalues(a);
  CHECK(ev.front() >= -1e-10);
  CHECK(ev.back() == doctest::Approx(4.0).epsilon(1e-10));
  // Same seed, same game.
  const Game g2 = make_game(spec);
  const auto probe = g.action(std::vector<double>(n, 0.3));
  CHECK(g.gradient_field(probe) == g2.gradient_field(probe));
}

TEST_CASE("builtin game properties") {
  for (const auto& name : builtin_game_names()) {
    CAPTURE(name);
    const Game g = make_game(builtin_game_spec(name));
    REQUIRE(g.cocoercivity());
    REQUIRE(g.has_nash_oracle());
    const double lambda = *g.cocoercivity();
    const std::size_t n = g.dimension();
    RandomStream rng(2024, 0);
    auto draw = [&] {
      std::vector<double> x(n);
      for (double& v : x) v = rng.uniform(-10.0, 10.0);
      return g.action(std::move(x));
    };
    double worst_coco = -1e300, worst_lip = -1e300, worst_nash = 0.0, worst_idem = 0.0;
    double worst_grad = 0.0;
    for (int k = 0; k < 10000; ++k) {
      const auto x = draw();
      const auto y = draw();
      const auto vx = g.gradient_field(x);
      const auto vy = g.gradient_field(y);
      double inner = 0.0, dv = 0.0, dx = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        inner += (y[i] - x[i]) * (vy[i] - vx[i]);
        dv += (vy[i] - vx[i]) * (vy[i] - vx[i]);
        dx += (y[i] - x[i]) * (y[i] - x[i]);
      }
      worst_coco = std::max(worst_coco, (inner + lambda * dv) /
                                            (1.0 + x.squared_norm() + y.squared_norm()));
      worst_lip = std::max(worst_lip, std::sqrt(dv) - std::sqrt(dx) / lambda);
      if (k < 1000) {
        const auto p = project_to_nash(g, x);
        const auto pp = project_to_nash(g, p);
        worst_nash = std::max(worst_nash, g.gradient_field(p).norm());
        worst_idem = std::max(worst_idem, dist(p.values(), pp.values()));
        if (k < 100) worst_grad = std::max(worst_grad, verify_gradient(g, x, 1e-5).max_abs_error);
      }
    }
    CHECK(worst_coco <= 1e-9);
    CHECK(worst_lip <= 1e-9);
    CHECK(worst_nash <= 1e-9);
    CHECK(worst_idem <= 1e-12);
    CHECK(worst_grad <= 1e-8);
  }
}

TEST_CASE("quadratic field matches hand product") {
  const Mat a{{3, 1, 0}, {1, 2, 0.5}, {0, 0.5, 1}};
  const std::vector<double> b{1, -2, 0.5};
  const Game g = make_game(GameSpec::make_quadratic(a, b, {2, 1}));
  CHECK(g.players() == 2);
  RandomStream rng(5, 5);
  for (int k = 0; k < 50; ++k) {
    std::vector<double> x{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
    const auto want = linear_field(a, b, x);
    const auto got = g.gradient_field(g.action(x));
    for (std::size_t i = 0; i < 3; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-14));
  }
}
