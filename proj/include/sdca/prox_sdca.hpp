#ifndef SDCA_PROX_SDCA_HPP
#define SDCA_PROX_SDCA_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sdca/core_model.hpp"

namespace sdca {

/// How a coordinate step chooses delta alpha_i.
enum class StepOption {
  closed_form,  // exact maximization of the per-coordinate dual (registered pairs only)
  line_search,  // s maximizing the quadratic dual model along q = u - alpha_i
  analytic_s,   // s from the per-instance gap bound, with ||X_i||
  r_bound,      // as analytic_s with R^2 in place of ||X_i||^2
  fixed_s,      // s = lambda n gamma / (R^2 + lambda n gamma)
};

std::string_view to_string(StepOption opt);
std::optional<StepOption> parse_step_option(std::string_view name);

struct StoppingStrategy {
  enum class Kind { final_iterate, averaged, random_sample };

  Kind kind = Kind::final_iterate;
  double epsilon = 1e-6;
  // Window length t - T0 in iterations; default n + ceil(R^2 / (lambda gamma)).
  std::optional<std::uint64_t> window;
  // Number of random iterates tried by random_sample.
  std::size_t samples = 1;

  static StoppingStrategy final_iterate(double epsilon);
  static StoppingStrategy averaged(double epsilon, std::optional<std::uint64_t> window = {});
  static StoppingStrategy random_sample(double epsilon, std::size_t m,
                                        std::optional<std::uint64_t> window = {});
};

struct SolverOptions {
  StepOption step = StepOption::fixed_s;
  std::uint64_t seed = 0;
  std::size_t max_epochs = 100;
  // Overrides max_epochs when set.
  std::optional<std::uint64_t> max_iterations;
  // Reject steps whose exact dual change is negative.
  bool safeguard = true;
  // Record wall-clock time in the trace; zero otherwise (for reproducible files).
  bool measure_time = true;
};

struct SolveOutcome {
  std::vector<double> w_bar;
  std::vector<double> alpha_bar;
  double gap = 0.0;
  double primal = 0.0;
  double dual = 0.0;
  ConvergenceTrace trace;
  std::uint64_t iterations = 0;
  double epochs = 0.0;
  bool converged = false;
};

/// True when `closed_form` is available for this loss/regularizer pair:
/// squared, (smooth) hinge and (smooth) max-of-hinge, with an l2 or l2_shift
/// regularizer.
bool has_closed_form(const Problem &problem);

/// Computes delta alpha_i for one coordinate. Keeps scratch buffers so the
/// inner loop does not allocate.
class CoordinateStepper {
 public:
  explicit CoordinateStepper(const Problem &problem);

  /// Returns delta alpha_i (a view into internal storage, valid until the
  /// next call). With `safeguard`, a step that would decrease the dual is
  /// replaced by zero.
  std::span<const double> step(const DualState &state, std::size_t i, StepOption opt,
                               bool safeguard = true);

  /// Step size s of the last Option II-V step (1 for closed_form, 0 if rejected).
  double last_s() const noexcept { return last_s_; }
  bool last_rejected() const noexcept { return last_rejected_; }

  /// n * (D(alpha + delta e_i) - D(alpha)), evaluated from the i-th conjugate
  /// term and the coordinates of v touched by X_i.
  double scaled_dual_change(const DualState &state, std::size_t i,
                            std::span<const double> delta);

  /// Option II-V step with an explicit s in [0,1]: delta = s (u - alpha_i).
  std::span<const double> step_with_s(const DualState &state, std::size_t i, double s);

 private:
  void closed_form(const DualState &state, std::size_t i);
  void direction(const DualState &state, std::size_t i);
  double line_search_s(std::size_t i, std::span<const double> alpha_i);
  double analytic_s(std::size_t i, std::span<const double> alpha_i, double xnorm2);
  double q_norm2() const;

  const Problem *problem_;
  double lambda_n_;
  std::vector<double> a_, u_, q_, delta_, scratch_;
  std::vector<std::size_t> coords_;
  std::vector<double> image_;
  double last_s_ = 0.0;
  bool last_rejected_ = false;
};

/// One-shot convenience wrapper around CoordinateStepper::step.
std::vector<double> coordinate_step(const Problem &problem, const DualState &state,
                                    std::size_t i, StepOption opt, bool safeguard = true);

/// Closed-form step for the squared loss 0.5 (a - y)^2; p = w^T x_i.
double ridge_delta_alpha(double alpha_i, double p, double y_tilde, double xnorm2,
                         double lambda_n);

/// Closed-form step for the smoothed hinge (gamma = 0 gives the hinge);
/// keeps alpha_i + delta in [0, 1].
double smooth_hinge_delta_alpha(double alpha_i, double p, double gamma, double xnorm2,
                                double lambda_n);

/// Analytic-s step for the logistic loss log(1 + e^a), alpha_i in [-1, 0].
double logistic_step(double alpha_i, double p, double xnorm2, double lambda_n);

/// Closed-form step for the (smoothed) multiclass hinge. `w_hat_products` is
/// X_i^T w_hat where w_hat excludes instance i's own contribution, `cost` is
/// c_i and `xnorm2` is ||x_i||^2. Returns the new alpha_i = -a, where a is
/// supported off the label (its label coordinate is 0). `scalar` selects the
/// one-column instance form, whose quadratic term has no ||a||_1^2 part.
std::vector<double> multiclass_delta_alpha(std::span<const double> alpha_i,
                                           std::span<const double> w_hat_products,
                                           std::span<const double> cost, double gamma,
                                           double xnorm2, double lambda_n, bool scalar = false);

/// Runs randomized coordinate ascent from alpha0 (empty means zero) until the
/// stopping strategy's gap test passes, checking once per epoch.
SolveOutcome solve(const Problem &problem, const StoppingStrategy &stop,
                   std::span<const double> alpha0, const SolverOptions &options);

/// (n + R^2/(lambda gamma)) log((n + R^2/(lambda gamma)) gap0 / epsilon),
/// the iteration count after which the expected gap is at most epsilon.
std::uint64_t iteration_budget(const Problem &problem, double gap0, double epsilon);

using BudgetFn = std::function<std::uint64_t(const Problem &, double gap0, double epsilon)>;

struct AmplifiedOutcome {
  SolveOutcome outcome;
  std::size_t attempts = 0;
};

/// Repeats solve with fresh seeds and an iteration budget that gives an
/// expected gap of epsilon/2, so each attempt succeeds with probability at
/// least 1/2. Makes at most max(1, ceil(log2(1/delta))) attempts.
AmplifiedOutcome restart_amplify(const Problem &problem, double epsilon, double delta,
                                 const SolverOptions &options, BudgetFn budget = {});

}  // namespace sdca

#endif
