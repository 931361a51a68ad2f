#include "sdca/accelerator.hpp"

#include <chrono>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "sdca/errors.hpp"

namespace sdca {

namespace {

Regularizer shifted_regularizer(const Regularizer &base, double lambda, double kappa,
                                std::span<const double> y) {
  const double lt = lambda + kappa;
  std::vector<double> z(y.size());
  for (std::size_t j = 0; j < y.size(); ++j) z[j] = (kappa / lt) * y[j];
  switch (base.id()) {
    case RegId::l2: return Regularizer::l2_shift(std::move(z));
    case RegId::elastic:
      return Regularizer::elastic_shift(base.sigma_prime() * lambda / lt, std::move(z));
    default:
      throw unsupported_operation(std::string("cannot shift regularizer ") +
                                  std::string(to_string(base.id())) +
                                  "; the base must be l2 or elastic");
  }
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
  return s;
}

}  // namespace

std::optional<AccelParams> accel_params(double lambda, double gamma, double r2, std::size_t n,
                                        double initial_gap) {
  if (!(lambda > 0.0) || !(gamma > 0.0) || n == 0)
    throw std::invalid_argument("accel_params needs lambda > 0, gamma > 0 and n > 0");
  if (!(r2 / (gamma * lambda) > 10.0 * static_cast<double>(n))) return std::nullopt;
  AccelParams p;
  p.kappa = r2 / (gamma * static_cast<double>(n)) - lambda;
  p.mu = lambda / 2.0;
  p.rho = p.mu + p.kappa;
  p.eta = std::sqrt(p.mu / p.rho);
  p.beta = (1.0 - p.eta) / (1.0 + p.eta);
  p.xi1 = (1.0 + 1.0 / (p.eta * p.eta)) * initial_gap;
  return p;
}

Problem build_shifted_problem(const Problem &problem, double kappa, std::span<const double> y) {
  if (y.size() != problem.dim()) throw std::invalid_argument("center has wrong dimension");
  Problem out = problem;
  out.reg = shifted_regularizer(problem.reg, problem.lambda, kappa, y);
  out.lambda = problem.lambda + kappa;
  return out;
}

AccelOutcome accelerated_solve(const Problem &problem, double epsilon, const AccelOptions &options) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  using clock = std::chrono::steady_clock;
  const auto started = clock::now();
  auto elapsed_ms = [&] {
    if (!options.measure_time) return 0.0;
    return std::chrono::duration<double, std::milli>(clock::now() - started).count();
  };

  const std::size_t n = problem.n(), dim = problem.dim();
  const double gamma = problem.loss.gamma();
  const DualState zero = zero_state(problem);
  const double p0 = primal_value(problem, zero.w);
  const double gap0 = duality_gap(problem, zero);

  AccelOutcome out;
  out.params = accel_params(problem.lambda, gamma, problem.data.r2(), n, gap0);
  if (!out.params) {
    SolverOptions so;
    so.step = options.inner_step;
    so.seed = options.seed;
    so.max_epochs = options.vanilla_max_epochs;
    so.measure_time = options.measure_time;
    out.result = solve(problem, StoppingStrategy::final_iterate(epsilon), {}, so);
    out.stop = AccelStop::vanilla;
    return out;
  }
  const AccelParams &ap = *out.params;
  out.accelerated = true;

  const double t_bound = 1.0 + (2.0 / ap.eta) * std::log(ap.xi1 / epsilon);
  const double cert_scale = 1.0 + ap.rho / ap.mu;
  const double dist_scale = ap.rho * ap.kappa / (2.0 * ap.mu);

  std::vector<double> w_prev(dim, 0.0), y(dim, 0.0), alpha(n * problem.k(), 0.0);
  Problem shifted = problem;
  shifted.lambda = problem.lambda + ap.kappa;

  ConvergenceTrace &trace = out.result.trace;
  trace.rows.push_back({0.0, p0, p0 - gap0, gap0, elapsed_ms()});
  double epochs = 0.0;
  std::uint64_t iterations = 0;
  double xi_prev = ap.xi1;
  bool all_inner_converged = true;

  for (std::size_t t = 2;; ++t) {
    shifted.reg = shifted_regularizer(problem.reg, problem.lambda, ap.kappa, y);
    SolverOptions so;
    so.step = options.inner_step;
    so.seed = options.seed + 0x9e3779b97f4a7c15ULL * t;
    so.max_epochs = options.inner_max_epochs;
    so.measure_time = false;
    // xi is zero when the origin is already optimal; the inner solver still
    // needs a positive target.
    const double target = std::max(ap.eta / (2.0 * (1.0 + 1.0 / (ap.eta * ap.eta))) * xi_prev,
                                   std::numeric_limits<double>::min());
    SolveOutcome inner = solve(shifted, StoppingStrategy::final_iterate(target), alpha, so);
    all_inner_converged = all_inner_converged && inner.converged;
    epochs += inner.epochs;
    iterations += inner.iterations;

    const std::vector<double> &w = inner.w_bar;
    const double eps_t = std::max(inner.gap, 0.0);
    const double cert = cert_scale * eps_t + dist_scale * squared_distance(w, y);
    const double xi_t = std::pow(1.0 - ap.eta / 2.0, static_cast<double>(t - 1)) * ap.xi1;
    const double primal = primal_value(problem, w);
    out.history.push_back({t, xi_t, target, eps_t, cert, primal, inner.epochs, inner.converged});
    trace.rows.push_back({epochs, primal, primal - cert, cert, elapsed_ms()});

    for (std::size_t j = 0; j < dim; ++j) {
      const double next = w[j] + ap.beta * (w[j] - w_prev[j]);
      w_prev[j] = w[j];
      y[j] = next;
    }
    alpha = std::move(inner.alpha_bar);
    xi_prev = xi_t;
    out.outer_iterations = t - 1;
    out.result.w_bar = w;
    out.result.gap = cert;
    out.result.primal = primal;
    out.result.dual = primal - cert;

    if (cert <= epsilon) {
      out.stop = AccelStop::certificate;
      out.result.converged = true;
      break;
    }
    if (static_cast<double>(t) >= t_bound) {
      out.stop = AccelStop::iteration_bound;
      out.result.converged = all_inner_converged;
      break;
    }
    if ((options.max_outer > 0 && t - 1 >= options.max_outer) ||
        (options.max_total_epochs > 0.0 && epochs >= options.max_total_epochs)) {
      out.stop = AccelStop::budget;
      out.result.converged = false;
      break;
    }
  }
  out.result.alpha_bar = std::move(alpha);
  out.result.epochs = epochs;
  out.result.iterations = iterations;
  return out;
}

SmoothedOutcome lipschitz_driver(const Problem &problem, double epsilon,
                                 const AccelOptions &options) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  const LossId id = problem.loss.id();
  if (id != LossId::hinge && id != LossId::max_of_hinge)
    throw unsupported_operation(std::string("lipschitz_driver expects hinge or max_of_hinge, got ") +
                                std::string(problem.loss.name()));
  Problem smoothed = problem;
  smoothed.loss = smooth_lipschitz(problem.loss, epsilon);
  SmoothedOutcome out{accelerated_solve(smoothed, epsilon / 2.0, options), epsilon, 0.0};
  out.original_primal = primal_value(problem, out.accel.result.w_bar);
  return out;
}

double lasso_objective(const InstanceMatrix &data, std::span<const double> labels, double sigma,
                       std::span<const double> w) {
  const std::size_t n = data.n();
  std::vector<double> terms(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = data.feature_dot(i, w) - labels[i];
    terms[i] = 0.5 * r * r;
  }
  double l1 = 0.0;
  for (double x : w) l1 += std::abs(x);
  return pairwise_sum(terms) / static_cast<double>(n) + sigma * l1;
}

LassoOutcome lasso_driver(const InstanceMatrix &data, std::span<const double> labels, double sigma,
                          double epsilon, const AccelOptions &options) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (data.structure() != InstanceStructure::scalar)
    throw std::invalid_argument("lasso_driver needs scalar instances");
  if (labels.size() != data.n()) throw std::invalid_argument("one label per instance required");
  const std::size_t n = data.n();
  double sq = 0.0;
  for (double y : labels) sq += y * y;
  LassoOutcome out;
  out.y_bar = sq / (2.0 * static_cast<double>(n));
  if (out.y_bar == 0.0) {
    // w = 0 minimizes the objective exactly.
    out.w.assign(data.dim(), 0.0);
    out.lasso_objective = 0.0;
    out.accel.result.w_bar = out.w;
    out.accel.result.alpha_bar.assign(n, 0.0);
    out.accel.result.converged = true;
    out.accel.stop = AccelStop::certificate;
    return out;
  }
  out.lambda = epsilon * (sigma / out.y_bar) * (sigma / out.y_bar);
  out.sigma_prime = sigma / out.lambda;
  Problem problem = make_problem(data, LossFamily::squared(),
                                 std::vector<double>(labels.begin(), labels.end()),
                                 Regularizer::elastic(out.sigma_prime), out.lambda);
  out.accel = accelerated_solve(problem, epsilon / 2.0, options);
  out.w = out.accel.result.w_bar;
  out.lasso_objective = lasso_objective(data, labels, sigma, out.w);
  return out;
}

}  // namespace sdca
