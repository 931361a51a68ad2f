#ifndef SDCA_CORE_MODEL_HPP
#define SDCA_CORE_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sdca/instance_matrix.hpp"
#include "sdca/losses.hpp"
#include "sdca/regularizers.hpp"

namespace sdca {

/// P(w) = (1/n) sum_i phi_i(X_i^T w) + lambda g(w).
struct Problem {
  InstanceMatrix data;
  LossFamily loss;
  // n * loss.param_size() values, instance-major.
  std::vector<double> params;
  Regularizer reg;
  double lambda;

  std::size_t n() const noexcept { return data.n(); }
  std::size_t k() const noexcept { return data.k(); }
  std::size_t dim() const noexcept { return data.dim(); }
  std::span<const double> param(std::size_t i) const noexcept {
    const std::size_t m = loss.param_size();
    return std::span<const double>(params).subspan(i * m, m);
  }
};

/// Validates sizes and lambda > 0. For multiclass data with a max-of-hinge
/// family and empty params, fills c_i = 1 - e_{y_i}.
Problem make_problem(InstanceMatrix data, LossFamily loss, std::vector<double> params,
                     Regularizer reg, double lambda);

struct DualState {
  std::vector<double> alpha;  // k * n, column i at [i*k, (i+1)*k)
  std::vector<double> v;      // (lambda n)^{-1} sum_i X_i alpha_i
  std::vector<double> w;      // grad g*(v)
  double epoch_count = 0.0;
  std::uint64_t updates_since_refresh = 0;

  std::span<double> alpha_col(std::size_t i, std::size_t k) {
    return std::span<double>(alpha).subspan(i * k, k);
  }
  std::span<const double> alpha_col(std::size_t i, std::size_t k) const {
    return std::span<const double>(alpha).subspan(i * k, k);
  }
};

struct TraceRow {
  double epoch;
  double primal;
  double dual;
  double gap;
  double wall_ms;
};

struct ConvergenceTrace {
  std::vector<TraceRow> rows;

  void add(double epoch, double primal, double dual, double wall_ms) {
    rows.push_back({epoch, primal, dual, primal - dual, wall_ms});
  }
  bool empty() const noexcept { return rows.empty(); }
};

// Full recomputation of v happens after this many incremental updates.
inline constexpr std::uint64_t kRefreshInterval = std::uint64_t{1} << 16;

double primal_value(const Problem &problem, std::span<const double> w);

/// D(alpha). Throws domain_error naming the first instance whose -alpha_i is
/// outside the domain of phi_i*.
double dual_value(const Problem &problem, std::span<const double> alpha);

/// (1/n) sum_i [phi_i(X_i^T w) + phi_i*(-alpha_i) + w^T X_i alpha_i], valid
/// when state.w = grad g*(state.v).
double duality_gap(const Problem &problem, const DualState &state);

/// P(w) - D(alpha) for an arbitrary pair.
double primal_dual_gap(const Problem &problem, std::span<const double> w,
                       std::span<const double> alpha);

DualState refresh_state(const Problem &problem, std::span<const double> alpha);
DualState zero_state(const Problem &problem);

/// v = (lambda n)^{-1} sum_i X_i alpha_i from scratch.
std::vector<double> compute_v(const Problem &problem, std::span<const double> alpha);

/// phi_i*(-alpha_i); +infinity outside the domain.
double conj_at_dual(const Problem &problem, std::size_t i, std::span<const double> alpha_i);

/// alpha_i += delta, with the matching incremental update of v and w on the
/// coordinates X_i touches. Every kRefreshInterval updates v is rebuilt.
void apply_delta(const Problem &problem, DualState &state, std::size_t i,
                 std::span<const double> delta);

/// Deterministic pairwise (cascade) summation.
double pairwise_sum(std::span<const double> terms);

}  // namespace sdca

#endif
