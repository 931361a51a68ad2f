#include "sdca/baselines.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sdca {

FistaState fista_init(const Problem &problem) {
  FistaState s;
  s.w.assign(problem.dim(), 0.0);
  s.u = s.w;
  s.t_k = 1.0;
  const double lipschitz = problem.data.r2() / problem.loss.gamma() + problem.lambda;
  s.step = 1.0 / lipschitz;
  return s;
}

void fista_smooth_gradient(const Problem &problem, std::span<const double> u,
                           std::span<double> out) {
  const std::size_t n = problem.n(), k = problem.k();
  std::fill(out.begin(), out.end(), 0.0);
  std::vector<double> a(k), g(k);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    problem.data.apply_transpose(i, u, a);
    loss_grad(problem.loss, problem.param(i), a, g);
    problem.data.add_scaled(i, g, inv_n, out);
  }
  const auto z = problem.reg.shift();
  for (std::size_t j = 0; j < out.size(); ++j)
    out[j] += problem.lambda * (u[j] - (z.empty() ? 0.0 : z[j]));
}

std::vector<double> shrink(std::span<const double> x, double threshold) {
  return reg_conj_grad(Regularizer::elastic(threshold), x);
}

void fista_step_in_place(const Problem &problem, FistaState &state) {
  const std::size_t dim = problem.dim();
  std::vector<double> grad(dim);
  fista_smooth_gradient(problem, state.u, grad);
  std::vector<double> x(dim);
  for (std::size_t j = 0; j < dim; ++j) x[j] = state.u[j] - state.step * grad[j];
  const double threshold = state.step * problem.lambda * problem.reg.sigma_prime();
  std::vector<double> w_next = shrink(x, threshold);
  const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * state.t_k * state.t_k));
  const double momentum = (state.t_k - 1.0) / t_next;
  for (std::size_t j = 0; j < dim; ++j)
    state.u[j] = w_next[j] + momentum * (w_next[j] - state.w[j]);
  state.w = std::move(w_next);
  state.t_k = t_next;
  ++state.iteration;
}

FistaState fista_step(const Problem &problem, const FistaState &state) {
  FistaState next = state;
  fista_step_in_place(problem, next);
  return next;
}

std::vector<double> gradient_dual(const Problem &problem, std::span<const double> w) {
  const std::size_t n = problem.n(), k = problem.k();
  std::vector<double> alpha(n * k), a(k);
  for (std::size_t i = 0; i < n; ++i) {
    problem.data.apply_transpose(i, w, a);
    auto col = std::span<double>(alpha).subspan(i * k, k);
    loss_grad(problem.loss, problem.param(i), a, col);
    for (double &x : col) x = -x;
  }
  return alpha;
}

SolveOutcome fista_solve(const Problem &problem, const FistaOptions &options) {
  using clock = std::chrono::steady_clock;
  const auto started = clock::now();
  auto elapsed_ms = [&] {
    if (!options.measure_time) return 0.0;
    return std::chrono::duration<double, std::milli>(clock::now() - started).count();
  };
  const double nan = std::numeric_limits<double>::quiet_NaN();
  FistaState state = fista_init(problem);
  SolveOutcome out;
  std::optional<double> bound = options.dual_bound;
  auto record = [&](std::size_t epoch) {
    const double p = primal_value(problem, state.w);
    if (options.dual_certificate) {
      const double cert = dual_value(problem, gradient_dual(problem, state.w));
      if (!bound || cert > *bound) bound = cert;
    }
    const double d = bound ? *bound : nan;
    const double gap = bound ? p - d : nan;
    out.trace.rows.push_back({static_cast<double>(epoch), p, d, gap, elapsed_ms()});
    out.primal = p;
    out.dual = d;
    out.gap = gap;
    return bound && gap <= options.epsilon;
  };
  bool converged = record(0);
  std::size_t epoch = 0;
  while (!converged && epoch < options.max_epochs) {
    fista_step_in_place(problem, state);
    ++epoch;
    converged = record(epoch);
  }
  out.w_bar = state.w;
  out.iterations = epoch;
  out.epochs = static_cast<double>(epoch);
  out.converged = converged;
  return out;
}

}  // namespace sdca
