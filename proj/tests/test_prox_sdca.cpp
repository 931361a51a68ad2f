#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "sdca/errors.hpp"
#include "sdca/prox_sdca.hpp"

using namespace sdca;

namespace {

Problem ridge_problem(std::size_t n, std::size_t d, double lambda, std::uint64_t seed,
                      oracle::Dense *dense = nullptr, std::vector<double> *labels = nullptr) {
  std::mt19937_64 gen(seed);
  const auto X = oracle::unit_rows(n, d, gen);
  std::normal_distribution<double> nd;
  std::vector<double> y(n);
  for (double &v : y) v = nd(gen);
  if (dense) *dense = X;
  if (labels) *labels = y;
  return make_problem(InstanceMatrix::scalar(d, oracle::to_sparse(X)), LossFamily::squared(), y,
                      Regularizer::l2(), lambda);
}

Problem svm_problem(std::size_t n, std::size_t d, double lambda, std::uint64_t seed,
                    LossFamily loss, Regularizer reg) {
  std::mt19937_64 gen(seed);
  auto rows = oracle::sparse_unit_rows(n, d, 0.5, gen);
  std::bernoulli_distribution flip(0.5);
  for (auto &r : rows)
    if (flip(gen))
      for (double &x : r.value) x = -x;
  return make_problem(InstanceMatrix::scalar(d, rows), std::move(loss), {}, std::move(reg), lambda);
}

Problem multiclass_problem(std::size_t n, std::size_t d, std::size_t k, double lambda,
                           std::uint64_t seed, LossFamily loss) {
  std::mt19937_64 gen(seed);
  auto rows = oracle::sparse_unit_rows(n, d, 0.6, gen);
  std::vector<std::size_t> labels(n);
  for (auto &l : labels) l = gen() % k;
  return make_problem(InstanceMatrix::multiclass(d, k, rows, labels), std::move(loss), {},
                      Regularizer::l2(), lambda);
}

// One-coordinate dual objective along delta, times n.
double coordinate_dual(const Problem &p, const DualState &s, std::size_t i, double delta) {
  std::vector<double> alpha = s.alpha;
  alpha[i] += delta;
  return static_cast<double>(p.n()) * dual_value(p, alpha);
}

}  // namespace

TEST_CASE("ridge closed form matches one-dimensional maximization") {
  CHECK(ridge_delta_alpha(0.0, 0.0, 1.0, 1.0, 1.0) == doctest::Approx(0.5));
  CHECK(ridge_delta_alpha(0.3, 0.2, 0.5, 2.0, 1.0) == 0.0);
  CHECK(ridge_delta_alpha(1.0, 1.0, 0.0, 0.0, 1.0) == doctest::Approx(-2.0));
  // n = 1, lambda = 1, x = 1, y = 1 from alpha = 0: maximize the dual directly
  std::vector<SparseVector> rows{{{0}, {1.0}}};
  const Problem p = make_problem(InstanceMatrix::scalar(1, rows), LossFamily::squared(), {1.0},
                                 Regularizer::l2(), 1.0);
  const DualState s = zero_state(p);
  const double best =
      oracle::golden_max([&](double t) { return coordinate_dual(p, s, 0, t); }, -5.0, 5.0);
  CHECK(coordinate_step(p, s, 0, StepOption::closed_form)[0] == doctest::Approx(best).epsilon(1e-6));
}

TEST_CASE("closed-form steps are coordinate maximizers on random states") {
  const Problem ridge = ridge_problem(20, 5, 0.05, 3);
  const Problem svm = svm_problem(20, 5, 0.05, 4, LossFamily::smooth_hinge(0.5), Regularizer::l2());
  const Problem hinge = svm_problem(20, 5, 0.05, 5, LossFamily::hinge(), Regularizer::l2());
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const Problem *p : {&ridge, &svm, &hinge}) {
    std::vector<double> alpha(p->n());
    for (double &a : alpha) a = u(gen);
    const DualState s = refresh_state(*p, alpha);
    for (std::size_t i = 0; i < 5; ++i) {
      const double lo = p->loss.id() == LossId::squared ? -10.0 : -alpha[i];
      const double hi = p->loss.id() == LossId::squared ? 10.0 : 1.0 - alpha[i];
      const double best =
          oracle::golden_max([&](double t) { return coordinate_dual(*p, s, i, t); }, lo, hi, 1e-12);
      const double got = coordinate_step(*p, s, i, StepOption::closed_form)[0];
      CHECK(got == doctest::Approx(best).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("smooth hinge closed form examples") {
  CHECK(smooth_hinge_delta_alpha(0.0, 0.0, 1.0, 1.0, 1.0) == doctest::Approx(0.5));
  CHECK(smooth_hinge_delta_alpha(1.0, 2.0, 1.0, 1.0, 1.0) == doctest::Approx(-1.0));
  CHECK(smooth_hinge_delta_alpha(0.0, 1.0, 1.0, 1.0, 1.0) == 0.0);
  CHECK_THROWS_AS(smooth_hinge_delta_alpha(1.5, 0.0, 1.0, 1.0, 1.0), sdca::domain_error);
}

TEST_CASE("logistic step") {
  CHECK(logistic_step(-0.5, 0.0, 1.0, 1.0) == 0.0);
  const double s = (std::log(2.0) + 0.5) / 1.25;
  CHECK(s == doctest::Approx(0.95452).epsilon(1e-5));
  CHECK(logistic_step(0.0, 0.0, 1.0, 1.0) == doctest::Approx(-0.5 * s).epsilon(1e-14));
  CHECK_THROWS_AS(logistic_step(0.5, 0.0, 1.0, 1.0), sdca::domain_error);
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> up(-20.0, 20.0), ua(-1.0, 0.0), ux(0.0, 3.0);
  for (int t = 0; t < 1000; ++t) {
    const double a = ua(gen);
    const double next = a + logistic_step(a, up(gen), ux(gen), 0.5);
    CHECK(next >= -1.0);
    CHECK(next <= 0.0);
  }
  // the step increases the one-coordinate dual
  std::vector<SparseVector> rows{{{0}, {1.0}}};
  const Problem p = make_problem(InstanceMatrix::scalar(1, rows), LossFamily::logistic(), {},
                                 Regularizer::l2(), 1.0);
  const DualState z = zero_state(p);
  const double step = logistic_step(0.0, 0.0, 1.0, 1.0);
  CHECK(coordinate_dual(p, z, 0, step) > coordinate_dual(p, z, 0, 0.0));
}

TEST_CASE("multiclass closed form") {
  // all margins satisfied
  const std::vector<double> zero{0.0, 0.0, 0.0};
  const auto a0 = multiclass_delta_alpha(zero, std::vector<double>{-2.0, 0.0, -3.0},
                                         std::vector<double>{1.0, 0.0, 1.0}, 1.0, 1.0, 1.0);
  for (double x : a0) CHECK(x == 0.0);
  // one violating class with mu = (0.4, -0.5) and C = 1
  const auto a1 = multiclass_delta_alpha(zero, std::vector<double>{-0.6, 0.0, -1.5},
                                         std::vector<double>{1.0, 0.0, 1.0}, 0.0, 1.0, 1.0);
  CHECK(a1[0] == doctest::Approx(-0.2));
  CHECK(a1[1] == 0.0);
  CHECK(a1[2] == 0.0);

  // the step never decreases the dual and beats nearby feasible points
  const Problem p = multiclass_problem(12, 4, 3, 0.1, 6, LossFamily::smooth_max_of_hinge(3, 0.5));
  std::mt19937_64 gen(12);
  DualState s = zero_state(p);
  CoordinateStepper stepper(p);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  for (int t = 0; t < 100; ++t) {
    const std::size_t i = gen() % p.n();
    const double before = dual_value(p, s.alpha);
    const auto d = stepper.step(s, i, StepOption::closed_form, false);
    const std::vector<double> delta(d.begin(), d.end());
    const double gain = stepper.scaled_dual_change(s, i, delta);
    for (int r = 0; r < 5; ++r) {
      std::vector<double> other = delta;
      for (std::size_t j = 0; j < 3; ++j)
        if (j != p.data.label(i)) other[j] += u(gen);
      CHECK(stepper.scaled_dual_change(s, i, other) <= gain + 1e-12);
    }
    apply_delta(p, s, i, delta);
    CHECK(dual_value(p, s.alpha) >= before - 1e-12);
  }
}

TEST_CASE("step options") {
  // lambda n = 1, gamma = 1, R = 1: Option V uses s = 1/2
  std::vector<SparseVector> rows{{{0}, {1.0}}};
  const Problem p = make_problem(InstanceMatrix::scalar(1, rows), LossFamily::smooth_hinge(1.0), {},
                                 Regularizer::l2(), 1.0);
  const DualState z = zero_state(p);
  CoordinateStepper stepper(p);
  const auto d = stepper.step(z, 0, StepOption::fixed_s);
  CHECK(stepper.last_s() == 0.5);
  CHECK(d[0] == doctest::Approx(0.5));  // u = 1, alpha = 0

  // Option III at a dual optimum does not move
  const Problem q = svm_problem(30, 4, 0.1, 2, LossFamily::smooth_hinge(1.0), Regularizer::l2());
  const SolveOutcome opt =
      solve(q, StoppingStrategy::final_iterate(1e-14), {},
            SolverOptions{StepOption::closed_form, 1, 2000, {}, true, false});
  const DualState s = refresh_state(q, opt.alpha_bar);
  for (std::size_t i = 0; i < q.n(); ++i)
    CHECK(std::abs(coordinate_step(q, s, i, StepOption::analytic_s)[0]) < 1e-6);

  // no closed form for logistic or elastic
  const Problem lg = svm_problem(5, 3, 0.1, 1, LossFamily::logistic(), Regularizer::l2());
  CHECK_THROWS_AS(coordinate_step(lg, zero_state(lg), 0, StepOption::closed_form),
                  unsupported_operation);
  const Problem el = svm_problem(5, 3, 0.1, 1, LossFamily::smooth_hinge(1.0), Regularizer::elastic(0.1));
  CHECK_FALSE(has_closed_form(el));
  CHECK(parse_step_option("IV") == StepOption::r_bound);
  CHECK(parse_step_option("analytic_s") == StepOption::analytic_s);
}

TEST_CASE("step sizes stay in [0, 1] and the safeguard rejects decreases") {
  const Problem p = svm_problem(30, 6, 0.01, 7, LossFamily::smooth_hinge(0.2), Regularizer::elastic(0.3));
  std::mt19937_64 gen(3);
  DualState s = zero_state(p);
  CoordinateStepper stepper(p);
  for (StepOption opt : {StepOption::line_search, StepOption::analytic_s, StepOption::r_bound,
                         StepOption::fixed_s}) {
    for (int t = 0; t < 300; ++t) {
      const std::size_t i = gen() % p.n();
      const auto d = stepper.step(s, i, opt);
      CHECK(stepper.last_s() >= 0.0);
      CHECK(stepper.last_s() <= 1.0);
      const std::vector<double> delta(d.begin(), d.end());
      CHECK(stepper.scaled_dual_change(s, i, delta) >= 0.0);
      apply_delta(p, s, i, delta);
    }
  }
}

TEST_CASE("solve: ridge converges within the iteration budget") {
  oracle::Dense X;
  std::vector<double> y;
  const Problem p = ridge_problem(200, 20, 0.1, 42, &X, &y);
  const double gap0 = duality_gap(p, zero_state(p));
  const SolveOutcome out = solve(p, StoppingStrategy::final_iterate(1e-6), {},
                                 SolverOptions{StepOption::fixed_s, 5, 1000, {}, true, false});
  CHECK(out.converged);
  CHECK(out.gap <= 1e-6);
  CHECK(out.iterations <= iteration_budget(p, gap0, 1e-6));
  // the reported gap matches a recomputation from the returned pair
  CHECK(primal_dual_gap(p, out.w_bar, out.alpha_bar) == doctest::Approx(out.gap).epsilon(1e-9).scale(1e-9));
  const auto w_star = oracle::ridge_solution(X, y, 0.1);
  CHECK(primal_value(p, out.w_bar) - oracle::ridge_objective(X, y, 0.1, w_star) <= 1e-6);
}

TEST_CASE("solve: warm start at the optimum, determinism and caps") {
  const Problem p = svm_problem(100, 10, 0.01, 9, LossFamily::smooth_hinge(1.0), Regularizer::elastic(0.05));
  const SolverOptions so{StepOption::analytic_s, 11, 500, {}, true, false};
  const SolveOutcome a = solve(p, StoppingStrategy::final_iterate(1e-10), {}, so);
  REQUIRE(a.converged);
  const SolveOutcome warm = solve(p, StoppingStrategy::final_iterate(1e-9), a.alpha_bar, so);
  CHECK(warm.converged);
  CHECK(warm.iterations == 0);

  const SolveOutcome b = solve(p, StoppingStrategy::final_iterate(1e-10), {}, so);
  REQUIRE(a.trace.rows.size() == b.trace.rows.size());
  for (std::size_t r = 0; r < a.trace.rows.size(); ++r) {
    CHECK(a.trace.rows[r].primal == b.trace.rows[r].primal);
    CHECK(a.trace.rows[r].dual == b.trace.rows[r].dual);
  }
  CHECK(a.w_bar == b.w_bar);

  SolverOptions capped = so;
  capped.max_epochs = 1;
  const SolveOutcome c = solve(p, StoppingStrategy::final_iterate(1e-14), {}, capped);
  CHECK_FALSE(c.converged);
  CHECK(c.gap > 1e-14);
}

TEST_CASE("solve: averaged and random-sample strategies") {
  const Problem p = svm_problem(80, 8, 0.05, 13, LossFamily::smooth_hinge(1.0), Regularizer::l2());
  const SolverOptions so{StepOption::fixed_s, 2, 500, {}, true, false};
  const SolveOutcome avg = solve(p, StoppingStrategy::averaged(1e-5), {}, so);
  CHECK(avg.converged);
  CHECK(avg.gap <= 1e-5);
  CHECK(primal_dual_gap(p, avg.w_bar, avg.alpha_bar) == doctest::Approx(avg.gap).epsilon(1e-9).scale(1e-9));
  const SolveOutcome rnd = solve(p, StoppingStrategy::random_sample(1e-5, 3), {}, so);
  CHECK(rnd.converged);
  CHECK(rnd.gap <= 1e-5);
  CHECK_THROWS_AS(StoppingStrategy::random_sample(1e-3, 0), std::invalid_argument);
}

TEST_CASE("restart amplification") {
  const Problem p = ridge_problem(100, 10, 0.1, 21);
  const SolverOptions so{StepOption::fixed_s, 3, 1000, {}, true, false};
  const AmplifiedOutcome good = restart_amplify(p, 1e-4, 0.1, so);
  CHECK(good.attempts == 1);
  CHECK(good.outcome.converged);
  // a budget that cannot succeed exhausts ceil(log2(1/delta)) attempts
  const BudgetFn tiny = [](const Problem &, double, double) -> std::uint64_t { return 1; };
  CHECK(restart_amplify(p, 1e-8, 0.5, so, tiny).attempts == 1);
  const AmplifiedOutcome bad = restart_amplify(p, 1e-8, 0.1, so, tiny);
  CHECK(bad.attempts == 4);
  CHECK_FALSE(bad.outcome.converged);
  // success frequency over seeded trials
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    SolverOptions o = so;
    o.seed = seed;
    ok += restart_amplify(p, 1e-4, 0.5, o).outcome.converged ? 1 : 0;
  }
  CHECK(ok >= 50);
}
