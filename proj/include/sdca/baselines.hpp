#ifndef SDCA_BASELINES_HPP
#define SDCA_BASELINES_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sdca/core_model.hpp"
#include "sdca/prox_sdca.hpp"

namespace sdca {

/// Accelerated proximal gradient on P(w), with the loss average and the
/// (lambda/2)||w||^2 - lambda z^T w part as the smooth term and
/// lambda sigma' ||w||_1 handled by shrinkage.
struct FistaState {
  std::vector<double> w;
  std::vector<double> u;  // extrapolation point
  double t_k = 1.0;
  double step = 0.0;      // 1/L with L = R^2/gamma + lambda
  std::size_t iteration = 0;
};

FistaState fista_init(const Problem &problem);

/// Gradient of the smooth part at u.
void fista_smooth_gradient(const Problem &problem, std::span<const double> u,
                           std::span<double> out);

/// sign(x)[|x| - threshold]_+ componentwise.
std::vector<double> shrink(std::span<const double> x, double threshold);

/// One gradient/shrinkage/momentum update; one pass over the data.
FistaState fista_step(const Problem &problem, const FistaState &state);
void fista_step_in_place(const Problem &problem, FistaState &state);

/// alpha_i = -grad phi_i(X_i^T w): a dual-feasible point attached to w.
std::vector<double> gradient_dual(const Problem &problem, std::span<const double> w);

struct FistaOptions {
  std::size_t max_epochs = 100;
  // Lower bound on min P; when given, the trace gap column is primal - bound
  // and the run stops once it reaches epsilon.
  std::optional<double> dual_bound;
  double epsilon = 1e-3;
  // After each pass, also evaluate D at alpha_i = -grad phi_i(X_i^T w) and
  // keep the best value as the dual bound.
  bool dual_certificate = false;
  bool measure_time = true;
};

/// Runs FISTA for up to max_epochs passes, recording P(w) after every pass.
SolveOutcome fista_solve(const Problem &problem, const FistaOptions &options = {});

}  // namespace sdca

#endif
