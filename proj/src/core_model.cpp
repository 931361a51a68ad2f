#include "sdca/core_model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "sdca/errors.hpp"

namespace sdca {

namespace {

bool is_max_of_hinge_family(LossId id) {
  return id == LossId::max_of_hinge || id == LossId::smooth_max_of_hinge ||
         id == LossId::soft_max_of_hinge;
}

}  // namespace

double pairwise_sum(std::span<const double> terms) {
  if (terms.size() <= 8) {
    double s = 0.0;
    for (double t : terms) s += t;
    return s;
  }
  const std::size_t half = terms.size() / 2;
  return pairwise_sum(terms.first(half)) + pairwise_sum(terms.subspan(half));
}

Problem make_problem(InstanceMatrix data, LossFamily loss, std::vector<double> params,
                     Regularizer reg, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("lambda must be finite and > 0");
  if (loss.k() != data.k())
    throw std::invalid_argument("loss dimension " + std::to_string(loss.k()) +
                                " does not match instance dimension " + std::to_string(data.k()));
  if (params.empty() && is_max_of_hinge_family(loss.id()) &&
      data.structure() == InstanceStructure::multiclass) {
    params.reserve(data.n() * data.k());
    for (std::size_t i = 0; i < data.n(); ++i) {
      const auto c = multiclass_cost(data.k(), data.label(i));
      params.insert(params.end(), c.begin(), c.end());
    }
  }
  if (params.size() != data.n() * loss.param_size())
    throw std::invalid_argument("expected " + std::to_string(data.n() * loss.param_size()) +
                                " loss parameters, got " + std::to_string(params.size()));
  if (reg.has_shift() && reg.shift().size() != data.dim())
    throw std::invalid_argument("regularizer shift has wrong dimension");
  if (data.dual_norm() != loss.dual_norm())
    throw std::invalid_argument("instance operator norms were computed for a different norm");
  return Problem{std::move(data), loss, std::move(params), std::move(reg), lambda};
}

double primal_value(const Problem &problem, std::span<const double> w) {
  const std::size_t n = problem.n(), k = problem.k();
  std::vector<double> terms(n), a(k);
  for (std::size_t i = 0; i < n; ++i) {
    problem.data.apply_transpose(i, w, a);
    terms[i] = loss_value(problem.loss, problem.param(i), a);
  }
  return pairwise_sum(terms) / static_cast<double>(n) + problem.lambda * problem.reg.value(w);
}

double conj_at_dual(const Problem &problem, std::size_t i, std::span<const double> alpha_i) {
  const std::size_t k = alpha_i.size();
  double buf[16];
  std::vector<double> heap;
  std::span<double> neg;
  if (k <= 16) {
    neg = std::span<double>(buf, k);
  } else {
    heap.resize(k);
    neg = heap;
  }
  for (std::size_t j = 0; j < k; ++j) neg[j] = -alpha_i[j];
  return loss_conj(problem.loss, problem.param(i), neg);
}

std::vector<double> compute_v(const Problem &problem, std::span<const double> alpha) {
  const std::size_t n = problem.n(), k = problem.k();
  if (alpha.size() != n * k) throw std::invalid_argument("alpha has wrong size");
  std::vector<double> v(problem.dim(), 0.0);
  const double scale = 1.0 / (problem.lambda * static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) problem.data.add_scaled(i, alpha.subspan(i * k, k), scale, v);
  return v;
}

double dual_value(const Problem &problem, std::span<const double> alpha) {
  const std::size_t n = problem.n(), k = problem.k();
  std::vector<double> terms(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = conj_at_dual(problem, i, alpha.subspan(i * k, k));
    if (!std::isfinite(c)) throw domain_error(i, "-alpha_i outside the conjugate domain");
    terms[i] = -c;
  }
  const auto v = compute_v(problem, alpha);
  return pairwise_sum(terms) / static_cast<double>(n) - problem.lambda * problem.reg.conj(v);
}

double primal_dual_gap(const Problem &problem, std::span<const double> w,
                       std::span<const double> alpha) {
  return primal_value(problem, w) - dual_value(problem, alpha);
}

double duality_gap(const Problem &problem, const DualState &state) {
  const std::size_t n = problem.n(), k = problem.k();
  std::vector<double> terms(n), a(k);
  for (std::size_t i = 0; i < n; ++i) {
    const auto alpha_i = state.alpha_col(i, k);
    const double c = conj_at_dual(problem, i, alpha_i);
    if (!std::isfinite(c)) throw domain_error(i, "-alpha_i outside the conjugate domain");
    problem.data.apply_transpose(i, state.w, a);
    double wxa = 0.0;
    for (std::size_t j = 0; j < k; ++j) wxa += a[j] * alpha_i[j];
    terms[i] = loss_value(problem.loss, problem.param(i), a) + c + wxa;
  }
  return pairwise_sum(terms) / static_cast<double>(n);
}

DualState refresh_state(const Problem &problem, std::span<const double> alpha) {
  const std::size_t n = problem.n(), k = problem.k();
  if (alpha.size() != n * k) throw std::invalid_argument("alpha has wrong size");
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(conj_at_dual(problem, i, alpha.subspan(i * k, k))))
      throw domain_error(i, "-alpha_i outside the conjugate domain");
  DualState s;
  s.alpha.assign(alpha.begin(), alpha.end());
  s.v = compute_v(problem, alpha);
  s.w.resize(s.v.size());
  problem.reg.conj_grad(s.v, s.w);
  return s;
}

DualState zero_state(const Problem &problem) {
  const std::vector<double> alpha(problem.n() * problem.k(), 0.0);
  return refresh_state(problem, alpha);
}

void apply_delta(const Problem &problem, DualState &state, std::size_t i,
                 std::span<const double> delta) {
  const std::size_t k = problem.k();
  auto col = state.alpha_col(i, k);
  for (std::size_t j = 0; j < k; ++j) col[j] += delta[j];
  const double scale = 1.0 / (problem.lambda * static_cast<double>(problem.n()));
  const Regularizer &reg = problem.reg;
  problem.data.for_each_image(i, delta, scale, [&](std::size_t j, double x) {
    state.v[j] += x;
    state.w[j] = reg.conj_grad_coord(j, state.v[j]);
  });
  if (++state.updates_since_refresh >= kRefreshInterval) {
    state.v = compute_v(problem, state.alpha);
    reg.conj_grad(state.v, state.w);
    state.updates_since_refresh = 0;
  }
}

}  // namespace sdca
