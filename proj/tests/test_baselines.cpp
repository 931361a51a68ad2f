#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "sdca/baselines.hpp"

using namespace sdca;

TEST_CASE("momentum and shrinkage") {
  std::vector<SparseVector> rows{{{0}, {1.0}}};
  const Problem p = make_problem(InstanceMatrix::scalar(2, rows), LossFamily::squared(), {1.0},
                                 Regularizer::l2(), 0.5);
  FistaState s = fista_init(p);
  CHECK(s.t_k == 1.0);
  s = fista_step(p, s);
  CHECK(s.t_k == doctest::Approx(1.618034).epsilon(1e-6));
  const auto z = shrink(std::vector<double>{1.0, -0.2}, 0.5);
  CHECK(z[0] == doctest::Approx(0.5));
  CHECK(z[1] == 0.0);
  CHECK(shrink(std::vector<double>{-2.0}, 0.5)[0] == doctest::Approx(-1.5));
}

TEST_CASE("pure l2 FISTA matches a hand-rolled accelerated gradient on a 2-D quadratic") {
  // two instances in R^2, squared loss
  const oracle::Dense X{{1.0, 0.0}, {0.6, 0.8}};
  const std::vector<double> y{1.0, -2.0};
  const double lambda = 0.1;
  const Problem p = make_problem(InstanceMatrix::scalar(2, oracle::to_sparse(X)), LossFamily::squared(),
                                 y, Regularizer::l2(), lambda);
  // grad f(w) = (1/n) X^T (Xw - y) + lambda w
  auto grad = [&](const std::vector<double> &w) {
    std::vector<double> g(2, 0.0);
    for (std::size_t i = 0; i < 2; ++i) {
      const double r = X[i][0] * w[0] + X[i][1] * w[1] - y[i];
      g[0] += X[i][0] * r / 2.0;
      g[1] += X[i][1] * r / 2.0;
    }
    g[0] += lambda * w[0];
    g[1] += lambda * w[1];
    return g;
  };
  const double step = 1.0 / (1.0 + lambda);
  std::vector<double> w{0.0, 0.0}, u{0.0, 0.0};
  double t = 1.0;
  FistaState s = fista_init(p);
  CHECK(s.step == doctest::Approx(step));
  for (int k = 0; k < 50; ++k) {
    const auto g = grad(u);
    const std::vector<double> next{u[0] - step * g[0], u[1] - step * g[1]};
    const double tn = (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
    for (std::size_t j = 0; j < 2; ++j) u[j] = next[j] + ((t - 1.0) / tn) * (next[j] - w[j]);
    w = next;
    t = tn;
    fista_step_in_place(p, s);
    CHECK(s.w[0] == doctest::Approx(w[0]).epsilon(1e-10).scale(1e-10));
    CHECK(s.w[1] == doctest::Approx(w[1]).epsilon(1e-10).scale(1e-10));
  }
}

TEST_CASE("FISTA solve traces") {
  std::mt19937_64 gen(4);
  auto rows = oracle::sparse_unit_rows(200, 20, 0.4, gen);
  std::bernoulli_distribution flip(0.5);
  for (auto &r : rows)
    if (flip(gen))
      for (double &x : r.value) x = -x;
  const Problem p = make_problem(InstanceMatrix::scalar(20, rows), LossFamily::smooth_hinge(1.0), {},
                                 Regularizer::elastic(0.1), 1e-3);
  FistaOptions opt;
  opt.max_epochs = 100;
  opt.measure_time = false;
  const SolveOutcome out = fista_solve(p, opt);
  REQUIRE(out.trace.rows.size() == 101);
  // trend over 10-epoch windows
  for (std::size_t r = 10; r + 10 < out.trace.rows.size(); r += 10) {
    double a = 0.0, b = 0.0;
    for (std::size_t j = 0; j < 10; ++j) {
      a += out.trace.rows[r - 10 + j].primal;
      b += out.trace.rows[r + j].primal;
    }
    CHECK(b <= a + 1e-12);
  }
  CHECK(std::isnan(out.trace.rows.back().gap));

  opt.max_epochs = 0;
  const SolveOutcome zero = fista_solve(p, opt);
  CHECK(zero.w_bar == std::vector<double>(20, 0.0));

  // with a dual certificate the gap is a true upper bound and shrinks
  FistaOptions cert;
  cert.max_epochs = 500;
  cert.dual_certificate = true;
  cert.epsilon = 1e-6;
  cert.measure_time = false;
  const SolveOutcome c = fista_solve(p, cert);
  CHECK(c.gap >= 0.0);
  CHECK(c.gap <= c.trace.rows.front().gap);
}

TEST_CASE("quadratic error decays at least like 1/k^2") {
  std::mt19937_64 gen(8);
  const auto X = oracle::unit_rows(50, 10, gen);
  std::vector<double> y(50);
  std::normal_distribution<double> nd;
  for (double &v : y) v = nd(gen);
  const double lambda = 1e-6;
  const Problem p = make_problem(InstanceMatrix::scalar(10, oracle::to_sparse(X)), LossFamily::squared(),
                                 y, Regularizer::l2(), lambda);
  const double p_star = oracle::ridge_objective(X, y, lambda, oracle::ridge_solution(X, y, lambda));
  FistaState s = fista_init(p);
  const std::vector<double> w0(10, 0.0);
  const double d0 = oracle::sq_dist(w0, oracle::ridge_solution(X, y, lambda));
  for (int k = 1; k <= 200; ++k) {
    fista_step_in_place(p, s);
    // standard bound 2 L ||w0 - w*||^2 / (k + 1)^2
    const double bound = 2.0 * (1.0 + lambda) * d0 / ((k + 1.0) * (k + 1.0));
    CHECK(primal_value(p, s.w) - p_star <= bound + 1e-12);
  }
}

TEST_CASE("gradient dual is feasible") {
  std::mt19937_64 gen(2);
  auto rows = oracle::sparse_unit_rows(30, 5, 0.6, gen);
  const Problem p = make_problem(InstanceMatrix::scalar(5, rows), LossFamily::logistic(), {},
                                 Regularizer::l2(), 0.1);
  const std::vector<double> w{0.5, -1.0, 2.0, 0.0, 1.0};
  const auto a = gradient_dual(p, w);
  CHECK(std::isfinite(dual_value(p, a)));
  CHECK(dual_value(p, a) <= primal_value(p, w));
}
