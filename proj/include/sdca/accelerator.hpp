#ifndef SDCA_ACCELERATOR_HPP
#define SDCA_ACCELERATOR_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sdca/core_model.hpp"
#include "sdca/prox_sdca.hpp"

namespace sdca {

struct AccelParams {
  double kappa;  // R^2/(gamma n) - lambda
  double mu;     // lambda / 2
  double rho;    // mu + kappa
  double eta;    // sqrt(mu / rho)
  double beta;   // (1 - eta) / (1 + eta)
  double xi1;    // (1 + eta^-2) (P(0) - D(0))
};

/// Momentum parameters, or nullopt when R^2/(gamma lambda) <= 10 n and the
/// plain solver should be used instead. `initial_gap` is P(0) - D(0).
std::optional<AccelParams> accel_params(double lambda, double gamma, double r2, std::size_t n,
                                        double initial_gap = 0.0);

/// P(w) + (kappa/2)||w - y||^2 written as a problem with lambda' = lambda +
/// kappa and a shifted regularizer: l2 -> l2_shift, elastic -> elastic_shift
/// with sigma'' = sigma' lambda / lambda' and z = (kappa / lambda') y.
Problem build_shifted_problem(const Problem &problem, double kappa, std::span<const double> y);

struct AccelOptions {
  StepOption inner_step = StepOption::analytic_s;
  std::size_t inner_max_epochs = 20;
  std::uint64_t seed = 0;
  // Safety cap on outer iterations beyond the theoretical bound (0: none).
  std::size_t max_outer = 0;
  // Stop once the inner solvers have used this many passes in total (0: none).
  double max_total_epochs = 0.0;
  // Epoch cap of the plain solver when the acceleration guard fails.
  std::size_t vanilla_max_epochs = 100;
  bool measure_time = true;
};

enum class AccelStop { iteration_bound, certificate, budget, vanilla };

struct AccelIterate {
  std::size_t t;
  double xi_t;
  double inner_target;
  double eps_t;          // final duality gap of the inner call
  double certificate;    // (1 + rho/mu) eps_t + (rho kappa / 2 mu) ||w_t - y_{t-1}||^2
  double primal;         // P(w_t) on the original problem
  double inner_epochs;
  bool inner_converged;
};

struct AccelOutcome {
  // w_bar is w_t and alpha_bar the last inner dual; gap is the final
  // certificate (for the plain path, the duality gap).
  SolveOutcome result;
  bool accelerated = false;
  AccelStop stop = AccelStop::iteration_bound;
  std::optional<AccelParams> params;
  std::vector<AccelIterate> history;
  std::size_t outer_iterations = 0;
};

/// Outer loop around solve: each call minimizes P(w) + (kappa/2)||w - y||^2
/// from the previous dual, then extrapolates y with momentum beta. Stops when
/// t >= 1 + (2/eta) log(xi1/epsilon) or when the certificate drops below
/// epsilon.
AccelOutcome accelerated_solve(const Problem &problem, double epsilon,
                               const AccelOptions &options = {});

struct SmoothedOutcome {
  AccelOutcome accel;
  double gamma;            // smoothing parameter used (= epsilon)
  double original_primal;  // P(w) with the unsmoothed loss
};

/// Smooths a hinge or max-of-hinge problem with gamma = epsilon and solves
/// the smoothed problem to epsilon/2.
SmoothedOutcome lipschitz_driver(const Problem &problem, double epsilon,
                                 const AccelOptions &options = {});

struct LassoOutcome {
  AccelOutcome accel;
  double lambda = 0.0;
  double sigma_prime = 0.0;
  double y_bar = 0.0;
  // (1/2n) sum (x_i^T w - y_i)^2 + sigma ||w||_1 at the returned w.
  double lasso_objective = 0.0;
  std::vector<double> w;
};

/// Solves (1/2n) sum (x_i^T w - y_i)^2 + sigma ||w||_1 through the elastic
/// problem with lambda = epsilon (sigma / y_bar)^2, y_bar = (1/2n) sum y_i^2,
/// solved to epsilon/2. `data` must be scalar instances.
LassoOutcome lasso_driver(const InstanceMatrix &data, std::span<const double> labels, double sigma,
                          double epsilon, const AccelOptions &options = {});

/// (1/2n) sum (x_i^T w - y_i)^2 + sigma ||w||_1.
double lasso_objective(const InstanceMatrix &data, std::span<const double> labels, double sigma,
                       std::span<const double> w);

}  // namespace sdca

#endif
