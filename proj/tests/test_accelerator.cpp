#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "sdca/accelerator.hpp"
#include "sdca/errors.hpp"

using namespace sdca;

namespace {

Problem binary_problem(std::size_t n, std::size_t d, double lambda, std::uint64_t seed, LossFamily loss,
                       Regularizer reg = Regularizer::l2()) {
  std::mt19937_64 gen(seed);
  auto rows = oracle::sparse_unit_rows(n, d, 0.5, gen);
  std::bernoulli_distribution flip(0.5);
  for (auto &r : rows)
    if (flip(gen))
      for (double &x : r.value) x = -x;
  return make_problem(InstanceMatrix::scalar(d, rows), std::move(loss), {}, std::move(reg), lambda);
}

double reference_primal(const Problem &p, StepOption step, std::size_t epochs = 20000) {
  SolverOptions so;
  so.step = step;
  so.max_epochs = epochs;
  so.measure_time = false;
  return solve(p, StoppingStrategy::final_iterate(1e-10), {}, so).primal;
}

}  // namespace

TEST_CASE("acceleration parameters") {
  const auto p = accel_params(1e-4, 1.0, 1.0, 100, 2.0);
  REQUIRE(p.has_value());
  CHECK(p->kappa == doctest::Approx(0.0099).epsilon(1e-12));
  CHECK(p->mu == doctest::Approx(5e-5).epsilon(1e-12));
  CHECK(p->rho == doctest::Approx(9.95e-3).epsilon(1e-12));
  CHECK(p->eta == doctest::Approx(0.070888).epsilon(1e-5));
  CHECK(p->beta == doctest::Approx(0.867610).epsilon(1e-5));
  CHECK(p->xi1 == doctest::Approx((1.0 + 1.0 / (p->eta * p->eta)) * 2.0));
  // R^2 / ((kappa + lambda) gamma) = n
  CHECK(1.0 / (p->kappa + 1e-4) == doctest::Approx(100.0).epsilon(1e-12));
  const auto q = accel_params(3e-7, 0.5, 2.0, 77);
  REQUIRE(q.has_value());
  CHECK(2.0 / ((q->kappa + 3e-7) * 0.5) == doctest::Approx(77.0).epsilon(1e-12));
  CHECK(q->eta > 0.0);
  CHECK(q->eta < 1.0);
  CHECK(q->beta > 0.0);
  CHECK(q->beta < 1.0);
  CHECK_FALSE(accel_params(0.01, 1.0, 1.0, 100).has_value());
}

TEST_CASE("shifted problems") {
  std::vector<SparseVector> rows{{{0}, {1.0}}, {{1}, {1.0}}};
  const auto data = InstanceMatrix::scalar(2, rows);
  const Problem base = make_problem(data, LossFamily::smooth_hinge(1.0), {}, Regularizer::l2(), 1.0);
  const Problem s0 = build_shifted_problem(base, 1.0, std::vector<double>{0.0, 0.0});
  CHECK(s0.lambda == 2.0);
  CHECK(zero_state(s0).w == std::vector<double>{0.0, 0.0});
  const Problem s1 = build_shifted_problem(base, 1.0, std::vector<double>{2.0, 0.0});
  CHECK(s1.reg.id() == RegId::l2_shift);
  CHECK(zero_state(s1).w == std::vector<double>{1.0, 0.0});
  const Problem el = make_problem(data, LossFamily::smooth_hinge(1.0), {}, Regularizer::elastic(2.0), 1.0);
  const Problem s2 = build_shifted_problem(el, 3.0, std::vector<double>{0.0, 0.0});
  CHECK(s2.lambda == 4.0);
  CHECK(s2.reg.sigma_prime() == doctest::Approx(0.5));
  CHECK_THROWS_AS(build_shifted_problem(s1, 1.0, std::vector<double>{0.0, 0.0}), unsupported_operation);

  // P~(w) = P(w) + (kappa/2)||w - y||^2 up to a constant
  const std::vector<double> y{0.3, -0.7};
  const Problem sh = build_shifted_problem(el, 0.5, y);
  auto diff = [&](const std::vector<double> &w) {
    return primal_value(sh, w) - primal_value(el, w) - 0.25 * oracle::sq_dist(w, y);
  };
  CHECK(diff({0.1, 0.2}) == doctest::Approx(diff({-1.0, 0.4})).epsilon(1e-12));
}

TEST_CASE("zero optimum stops at the first outer iteration") {
  std::mt19937_64 gen(1);
  const auto X = oracle::unit_rows(10, 3, gen);
  const Problem p = make_problem(InstanceMatrix::scalar(3, oracle::to_sparse(X)), LossFamily::squared(),
                                 std::vector<double>(10, 0.0), Regularizer::l2(), 1e-5);
  const AccelOutcome out = accelerated_solve(p, 1e-3);
  CHECK(out.accelerated);
  CHECK(out.stop == AccelStop::certificate);
  CHECK(out.outer_iterations == 1);
  REQUIRE(out.history.size() == 1);
  CHECK(out.history[0].t == 2);
}

TEST_CASE("accelerated solve reaches the reference optimum") {
  const Problem p = binary_problem(200, 20, 1e-5, 3, LossFamily::smooth_hinge(1.0));
  AccelOptions opt;
  opt.seed = 4;
  opt.measure_time = false;
  const double eps = 1e-3;
  const AccelOutcome out = accelerated_solve(p, eps, opt);
  CHECK(out.accelerated);
  CHECK(out.result.converged);
  const double ref = reference_primal(p, StepOption::closed_form);
  CHECK(primal_value(p, out.result.w_bar) - ref <= eps);
  double prev = std::numeric_limits<double>::infinity();
  for (const AccelIterate &it : out.history) {
    CHECK(it.xi_t < prev);
    prev = it.xi_t;
    CHECK(it.primal - ref <= it.xi_t + 1e-12);
  }
  // trace starts at the origin and then reports one row per outer iteration
  CHECK(out.result.trace.rows.size() == out.history.size() + 1);
  CHECK(out.result.trace.rows.front().epoch == 0.0);
}

TEST_CASE("guard failure runs the plain solver") {
  const Problem p = binary_problem(100, 10, 0.01, 5, LossFamily::smooth_hinge(1.0));
  const AccelOutcome out = accelerated_solve(p, 1e-6);
  CHECK_FALSE(out.accelerated);
  CHECK(out.stop == AccelStop::vanilla);
  CHECK(out.result.converged);
  CHECK(out.result.gap <= 1e-6);
}

TEST_CASE("Lipschitz driver") {
  const Problem p = binary_problem(100, 10, 1e-4, 6, LossFamily::hinge());
  AccelOptions opt;
  opt.measure_time = false;
  const SmoothedOutcome out = lipschitz_driver(p, 0.1, opt);
  CHECK(out.gamma == 0.1);
  CHECK(out.accel.history.front().inner_target > 0.0);
  const SmoothedOutcome half = lipschitz_driver(p, 0.05, opt);
  CHECK(half.gamma == 0.05);
  const double ref = reference_primal(p, StepOption::closed_form, 50000);
  CHECK(out.original_primal - ref <= 0.1);
  CHECK(half.original_primal - ref <= 0.05);
  CHECK(out.original_primal == doctest::Approx(primal_value(p, out.accel.result.w_bar)));
  const Problem smooth = binary_problem(10, 3, 1e-4, 6, LossFamily::smooth_hinge(1.0));
  CHECK_THROWS_AS(lipschitz_driver(smooth, 0.1), unsupported_operation);
}

TEST_CASE("Lasso driver") {
  std::mt19937_64 gen(10);
  const std::size_t n = 100, d = 20;
  const auto X = oracle::unit_rows(n, d, gen);
  const auto data = InstanceMatrix::scalar(d, oracle::to_sparse(X));
  // labels with (1/2n) sum y^2 = 1
  std::vector<double> y(n);
  std::normal_distribution<double> nd;
  double sq = 0.0;
  for (double &v : y) {
    v = nd(gen);
    sq += v * v;
  }
  for (double &v : y) v *= std::sqrt(2.0 * n / sq);
  AccelOptions opt;
  opt.measure_time = false;
  const double sigma = 0.1, eps = 0.01;
  const LassoOutcome out = lasso_driver(data, y, sigma, eps, opt);
  CHECK(out.y_bar == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(out.lambda == doctest::Approx(1e-4).epsilon(1e-12));
  CHECK(out.sigma_prime == doctest::Approx(1000.0).epsilon(1e-12));
  const auto w_ref = oracle::lasso_coordinate_descent(X, y, sigma);
  const double ref = oracle::lasso_value(X, y, sigma, w_ref);
  CHECK(out.lasso_objective == doctest::Approx(oracle::lasso_value(X, y, sigma, out.w)).epsilon(1e-12));
  CHECK(out.lasso_objective - ref <= eps);
  CHECK(out.lasso_objective >= ref - 1e-12);

  const LassoOutcome zero = lasso_driver(data, std::vector<double>(n, 0.0), sigma, eps, opt);
  CHECK(zero.y_bar == 0.0);
  CHECK(zero.w == std::vector<double>(d, 0.0));
  CHECK(zero.accel.result.converged);
}
