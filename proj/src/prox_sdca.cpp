#include "sdca/prox_sdca.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <string>

#include "sdca/errors.hpp"
#include "sdca/rng.hpp"
#include "sdca/simplex_ops.hpp"

namespace sdca {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double smoothness_or_zero(const LossFamily &f) { return f.is_smooth() ? f.gamma() : 0.0; }

// (X_i^T X_i b) for the implicit instance operator.
void gram_apply(const InstanceMatrix &data, std::size_t i, std::span<const double> b,
                std::span<double> out) {
  const double xn = data.feature_norm2(i);
  if (data.structure() == InstanceStructure::scalar) {
    out[0] = xn * b[0];
    return;
  }
  const std::size_t y = data.label(i);
  double sum = 0.0;
  for (std::size_t j = 0; j < b.size(); ++j)
    if (j != y) sum += b[j];
  for (std::size_t j = 0; j < b.size(); ++j) out[j] = j == y ? 0.0 : xn * (b[j] + sum);
}

}  // namespace

std::string_view to_string(StepOption opt) {
  switch (opt) {
    case StepOption::closed_form: return "closed_form";
    case StepOption::line_search: return "line_search";
    case StepOption::analytic_s: return "analytic_s";
    case StepOption::r_bound: return "r_bound";
    case StepOption::fixed_s: return "fixed_s";
  }
  return "?";
}

std::optional<StepOption> parse_step_option(std::string_view name) {
  const std::pair<std::string_view, StepOption> table[] = {
      {"closed_form", StepOption::closed_form}, {"I", StepOption::closed_form},
      {"line_search", StepOption::line_search}, {"II", StepOption::line_search},
      {"analytic_s", StepOption::analytic_s},   {"III", StepOption::analytic_s},
      {"r_bound", StepOption::r_bound},         {"IV", StepOption::r_bound},
      {"fixed_s", StepOption::fixed_s},         {"V", StepOption::fixed_s},
  };
  for (const auto &[key, opt] : table)
    if (key == name) return opt;
  return std::nullopt;
}

StoppingStrategy StoppingStrategy::final_iterate(double epsilon) {
  StoppingStrategy s;
  s.epsilon = epsilon;
  return s;
}

StoppingStrategy StoppingStrategy::averaged(double epsilon, std::optional<std::uint64_t> window) {
  StoppingStrategy s;
  s.kind = Kind::averaged;
  s.epsilon = epsilon;
  s.window = window;
  return s;
}

StoppingStrategy StoppingStrategy::random_sample(double epsilon, std::size_t m,
                                                 std::optional<std::uint64_t> window) {
  if (m < 1) throw std::invalid_argument("random_sample needs m >= 1");
  StoppingStrategy s;
  s.kind = Kind::random_sample;
  s.epsilon = epsilon;
  s.samples = m;
  s.window = window;
  return s;
}

bool has_closed_form(const Problem &problem) {
  const RegId r = problem.reg.id();
  if (r != RegId::l2 && r != RegId::l2_shift) return false;
  switch (problem.loss.id()) {
    case LossId::squared:
    case LossId::hinge:
    case LossId::smooth_hinge:
    case LossId::max_of_hinge:
    case LossId::smooth_max_of_hinge: return true;
    default: return false;
  }
}

double ridge_delta_alpha(double alpha_i, double p, double y_tilde, double xnorm2,
                         double lambda_n) {
  return -(alpha_i + p - y_tilde) / (1.0 + xnorm2 / lambda_n);
}

double smooth_hinge_delta_alpha(double alpha_i, double p, double gamma, double xnorm2,
                                double lambda_n) {
  if (alpha_i < -kDomainTolerance || alpha_i > 1.0 + kDomainTolerance)
    throw domain_error("smooth hinge dual variable " + std::to_string(alpha_i) +
                       " outside [0, 1]");
  const double num = 1.0 - p - gamma * alpha_i;
  const double den = xnorm2 / lambda_n + gamma;
  double step;
  if (den > 0.0) step = num / den;
  else step = num > 0.0 ? kInf : (num < 0.0 ? -kInf : 0.0);
  return std::max(-alpha_i, std::min(1.0 - alpha_i, step));
}

double logistic_step(double alpha_i, double p, double xnorm2, double lambda_n) {
  if (alpha_i < -1.0 - kDomainTolerance || alpha_i > kDomainTolerance)
    throw domain_error("logistic dual variable " + std::to_string(alpha_i) + " outside [-1, 0]");
  const LossFamily f = LossFamily::logistic();
  const double a[1] = {p};
  const double neg[1] = {-alpha_i};
  const double u = -1.0 / (1.0 + std::exp(-p));
  const double q = u - alpha_i;
  if (q == 0.0) return 0.0;
  const double gamma = f.gamma();
  const double num = loss_value(f, {}, a) + loss_conj(f, {}, neg) + p * alpha_i +
                     0.5 * gamma * q * q;
  const double den = q * q * (gamma + xnorm2 / lambda_n);
  const double s = std::clamp(num / den, 0.0, 1.0);
  return s * q;
}

std::vector<double> multiclass_delta_alpha(std::span<const double> alpha_i,
                                           std::span<const double> w_hat_products,
                                           std::span<const double> cost, double gamma,
                                           double xnorm2, double lambda_n, bool scalar) {
  const std::size_t k = alpha_i.size();
  if (w_hat_products.size() != k || cost.size() != k)
    throw std::invalid_argument("multiclass_delta_alpha: dimension mismatch");
  std::vector<double> lin(k);
  for (std::size_t j = 0; j < k; ++j) lin[j] = cost[j] + w_hat_products[j];
  const double curv = gamma + xnorm2 / lambda_n;
  std::vector<double> a(k, 0.0);
  if (curv > 0.0) {
    std::vector<double> mu(k);
    for (std::size_t j = 0; j < k; ++j) mu[j] = lin[j] / curv;
    if (scalar) project(mu, a);
    else optimize_dual(mu, (xnorm2 / lambda_n) / curv, a);
  } else {
    // Linear objective over the capped simplex: all mass on the best positive entry.
    const auto best = std::max_element(lin.begin(), lin.end());
    if (*best > 0.0) a[static_cast<std::size_t>(best - lin.begin())] = 1.0;
  }
  for (double &x : a) x = -x;
  return a;
}

CoordinateStepper::CoordinateStepper(const Problem &problem)
    : problem_(&problem),
      lambda_n_(problem.lambda * static_cast<double>(problem.n())),
      a_(problem.k()),
      u_(problem.k()),
      q_(problem.k()),
      delta_(problem.k()),
      scratch_(problem.k()) {}

double CoordinateStepper::scaled_dual_change(const DualState &state, std::size_t i,
                                             std::span<const double> delta) {
  const Problem &pb = *problem_;
  const std::size_t k = pb.k();
  const auto alpha_i = state.alpha_col(i, k);
  for (std::size_t j = 0; j < k; ++j) scratch_[j] = -alpha_i[j];
  const double old_conj = loss_conj(pb.loss, pb.param(i), scratch_);
  for (std::size_t j = 0; j < k; ++j) scratch_[j] = -(alpha_i[j] + delta[j]);
  const double new_conj = loss_conj(pb.loss, pb.param(i), scratch_);
  if (!std::isfinite(new_conj)) return -kInf;
  double g_change = 0.0;
  const Regularizer &reg = pb.reg;
  pb.data.for_each_image(i, delta, 1.0 / lambda_n_, [&](std::size_t j, double x) {
    g_change += reg.conj_coord(j, state.v[j] + x) - reg.conj_coord(j, state.v[j]);
  });
  return old_conj - new_conj - lambda_n_ * g_change;
}

void CoordinateStepper::closed_form(const DualState &state, std::size_t i) {
  const Problem &pb = *problem_;
  if (!has_closed_form(pb))
    throw unsupported_operation(std::string("no closed-form step for loss ") +
                                std::string(pb.loss.name()) + " with regularizer " +
                                std::string(to_string(pb.reg.id())));
  const std::size_t k = pb.k();
  const auto alpha_i = state.alpha_col(i, k);
  pb.data.apply_transpose(i, state.w, a_);
  const double xn = pb.data.feature_norm2(i);
  switch (pb.loss.id()) {
    case LossId::squared:
      delta_[0] = ridge_delta_alpha(alpha_i[0], a_[0], pb.param(i)[0], xn, lambda_n_);
      return;
    case LossId::hinge:
    case LossId::smooth_hinge:
      if (alpha_i[0] < -kDomainTolerance || alpha_i[0] > 1.0 + kDomainTolerance)
        throw domain_error(i, "hinge dual variable outside [0, 1]");
      delta_[0] = smooth_hinge_delta_alpha(alpha_i[0], a_[0], smoothness_or_zero(pb.loss), xn,
                                           lambda_n_);
      return;
    default: break;
  }
  // (smooth) max-of-hinge: remove instance i's own contribution from w.
  gram_apply(pb.data, i, alpha_i, scratch_);
  for (std::size_t j = 0; j < k; ++j) a_[j] -= scratch_[j] / lambda_n_;
  const bool scalar = pb.data.structure() == InstanceStructure::scalar;
  const auto next = multiclass_delta_alpha(alpha_i, a_, pb.param(i), smoothness_or_zero(pb.loss),
                                           xn, lambda_n_, scalar);
  for (std::size_t j = 0; j < k; ++j) delta_[j] = next[j] - alpha_i[j];
  if (!scalar) delta_[pb.data.label(i)] = 0.0;
}

void CoordinateStepper::direction(const DualState &state, std::size_t i) {
  const Problem &pb = *problem_;
  const std::size_t k = pb.k();
  const auto alpha_i = state.alpha_col(i, k);
  pb.data.apply_transpose(i, state.w, a_);
  loss_grad(pb.loss, pb.param(i), a_, u_);
  for (std::size_t j = 0; j < k; ++j) {
    u_[j] = -u_[j];
    q_[j] = u_[j] - alpha_i[j];
  }
}

double CoordinateStepper::q_norm2() const {
  if (problem_->loss.dual_norm() == NormKind::l1) {
    double s = 0.0;
    for (double x : q_) s += std::abs(x);
    return s * s;
  }
  double s = 0.0;
  for (double x : q_) s += x * x;
  return s;
}

double CoordinateStepper::analytic_s(std::size_t i, std::span<const double> alpha_i,
                                     double xnorm2) {
  const Problem &pb = *problem_;
  const std::size_t k = pb.k();
  const double qn = q_norm2();
  if (!(qn > 0.0)) return 0.0;
  for (std::size_t j = 0; j < k; ++j) scratch_[j] = -alpha_i[j];
  const double conj = loss_conj(pb.loss, pb.param(i), scratch_);
  if (!std::isfinite(conj)) throw domain_error(i, "-alpha_i outside the conjugate domain");
  double wxa = 0.0;
  for (std::size_t j = 0; j < k; ++j) wxa += a_[j] * alpha_i[j];
  const double gamma = pb.loss.gamma();
  const double num = loss_value(pb.loss, pb.param(i), a_) + conj + wxa + 0.5 * gamma * qn;
  const double den = qn * (gamma + xnorm2 / lambda_n_);
  return std::clamp(num / den, 0.0, 1.0);
}

double CoordinateStepper::line_search_s(std::size_t i, std::span<const double> alpha_i) {
  const Problem &pb = *problem_;
  const std::size_t k = pb.k();
  double wxq = 0.0;
  for (std::size_t j = 0; j < k; ++j) wxq += a_[j] * q_[j];
  const double quad = pb.data.image_norm2(i, q_) / (2.0 * lambda_n_);
  auto h = [&](double s) {
    for (std::size_t j = 0; j < k; ++j) scratch_[j] = -(alpha_i[j] + s * q_[j]);
    return -loss_conj(pb.loss, pb.param(i), scratch_) - s * wxq - s * s * quad;
  };
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0, hi = 1.0;
  double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
  double f1 = h(x1), f2 = h(x2);
  while (hi - lo > 1e-10) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = h(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = h(x1);
    }
  }
  double best_s = 0.5 * (lo + hi), best = h(best_s);
  for (double s : {0.0, 1.0}) {
    const double v = h(s);
    if (v > best) {
      best = v;
      best_s = s;
    }
  }
  return best_s;
}

std::span<const double> CoordinateStepper::step_with_s(const DualState &state, std::size_t i,
                                                       double s) {
  direction(state, i);
  for (std::size_t j = 0; j < q_.size(); ++j) delta_[j] = s * q_[j];
  last_s_ = s;
  last_rejected_ = false;
  return delta_;
}

std::span<const double> CoordinateStepper::step(const DualState &state, std::size_t i,
                                                StepOption opt, bool safeguard) {
  const Problem &pb = *problem_;
  if (i >= pb.n()) throw std::out_of_range("coordinate index out of range");
  const std::size_t k = pb.k();
  last_rejected_ = false;
  if (opt == StepOption::closed_form) {
    closed_form(state, i);
    last_s_ = 1.0;
  } else {
    if (!pb.loss.is_smooth())
      throw unsupported_operation(std::string(pb.loss.name()) +
                                  " is not smooth; only the closed-form step applies");
    direction(state, i);
    const auto alpha_i = state.alpha_col(i, k);
    double s = 0.0;
    switch (opt) {
      case StepOption::line_search: s = line_search_s(i, alpha_i); break;
      case StepOption::analytic_s: s = analytic_s(i, alpha_i, pb.data.norm2(i)); break;
      case StepOption::r_bound: s = analytic_s(i, alpha_i, pb.data.r2()); break;
      case StepOption::fixed_s: {
        const double lg = lambda_n_ * pb.loss.gamma();
        s = lg / (pb.data.r2() + lg);
        break;
      }
      default: break;
    }
    for (std::size_t j = 0; j < k; ++j) delta_[j] = s * q_[j];
    last_s_ = s;
  }
  if (safeguard) {
    bool nonzero = false;
    for (double x : delta_) nonzero = nonzero || x != 0.0;
    if (nonzero && scaled_dual_change(state, i, delta_) < 0.0) {
      std::fill(delta_.begin(), delta_.end(), 0.0);
      last_s_ = 0.0;
      last_rejected_ = true;
    }
  }
  return delta_;
}

std::vector<double> coordinate_step(const Problem &problem, const DualState &state,
                                    std::size_t i, StepOption opt, bool safeguard) {
  CoordinateStepper stepper(problem);
  const auto d = stepper.step(state, i, opt, safeguard);
  return {d.begin(), d.end()};
}

namespace {

struct Evaluation {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
};

// Single pass over the data for a pair with w = grad g*(v(alpha)); the gap
// is summed per instance, which avoids cancelling P against D.
Evaluation evaluate_consistent(const Problem &pb, std::span<const double> w,
                               std::span<const double> alpha) {
  const std::size_t n = pb.n(), k = pb.k();
  std::vector<double> loss_terms(n), gap_terms(n), a(k), neg(k);
  for (std::size_t i = 0; i < n; ++i) {
    pb.data.apply_transpose(i, w, a);
    const auto alpha_i = alpha.subspan(i * k, k);
    for (std::size_t j = 0; j < k; ++j) neg[j] = -alpha_i[j];
    const double c = loss_conj(pb.loss, pb.param(i), neg);
    if (!std::isfinite(c)) throw domain_error(i, "-alpha_i outside the conjugate domain");
    const double l = loss_value(pb.loss, pb.param(i), a);
    double wxa = 0.0;
    for (std::size_t j = 0; j < k; ++j) wxa += a[j] * alpha_i[j];
    loss_terms[i] = l;
    gap_terms[i] = l + c + wxa;
  }
  Evaluation e;
  const double inv_n = 1.0 / static_cast<double>(n);
  e.primal = pairwise_sum(loss_terms) * inv_n + pb.lambda * pb.reg.value(w);
  e.gap = pairwise_sum(gap_terms) * inv_n;
  e.dual = e.primal - e.gap;
  return e;
}

Evaluation evaluate_pair(const Problem &pb, std::span<const double> w,
                         std::span<const double> alpha) {
  Evaluation e;
  e.primal = primal_value(pb, w);
  e.dual = dual_value(pb, alpha);
  e.gap = e.primal - e.dual;
  return e;
}

// Running sums of iterates, maintained lazily: entry j holds the sum up to
// the last time it changed, plus value * elapsed steps.
class LazySum {
 public:
  explicit LazySum(std::size_t size) : acc_(size, 0.0), last_(size, 0) {}

  void before_change(std::size_t j, double value, std::uint64_t step) {
    acc_[j] += value * static_cast<double>(step - last_[j]);
    last_[j] = step;
  }

  std::vector<double> materialize(std::span<const double> values, std::uint64_t now) const {
    std::vector<double> out(acc_.size());
    for (std::size_t j = 0; j < out.size(); ++j)
      out[j] = acc_[j] + values[j] * static_cast<double>(now - last_[j]);
    return out;
  }

 private:
  std::vector<double> acc_;
  std::vector<std::uint64_t> last_;
};

struct PrefixSnapshot {
  std::uint64_t time;
  std::vector<double> alpha;
  std::vector<double> w;
};

// Older prefix snapshots are dropped beyond this count, which only shortens
// the averaging window.
constexpr std::size_t kMaxSnapshots = 64;

struct IterateSnapshot {
  std::vector<double> alpha;
  std::vector<double> w;
};

}  // namespace

SolveOutcome solve(const Problem &problem, const StoppingStrategy &stop,
                   std::span<const double> alpha0, const SolverOptions &options) {
  if (!(stop.epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  const std::size_t n = problem.n(), k = problem.k();
  if (n == 0) throw std::invalid_argument("problem has no instances");
  using clock = std::chrono::steady_clock;
  const auto started = clock::now();
  auto elapsed_ms = [&] {
    if (!options.measure_time) return 0.0;
    return std::chrono::duration<double, std::milli>(clock::now() - started).count();
  };

  DualState state = alpha0.empty() ? zero_state(problem) : refresh_state(problem, alpha0);
  CoordinateStepper stepper(problem);
  counter_rng rng(options.seed);
  counter_rng sample_rng(options.seed ^ 0xa0761d6478bd642fULL);

  const std::uint64_t total =
      options.max_iterations ? *options.max_iterations
                             : static_cast<std::uint64_t>(options.max_epochs) * n;
  std::uint64_t window = n;
  if (stop.window) {
    window = std::max<std::uint64_t>(1, *stop.window);
  } else if (problem.loss.is_smooth()) {
    window = n + static_cast<std::uint64_t>(std::ceil(
                     problem.data.r2() / (problem.lambda * problem.loss.gamma())));
  }

  const bool averaging = stop.kind == StoppingStrategy::Kind::averaged;
  const bool sampling = stop.kind == StoppingStrategy::Kind::random_sample;
  std::optional<LazySum> sum_alpha, sum_w;
  std::deque<PrefixSnapshot> prefixes;
  if (averaging) {
    sum_alpha.emplace(n * k);
    sum_w.emplace(problem.dim());
    prefixes.push_back({0, std::vector<double>(n * k, 0.0), std::vector<double>(problem.dim(), 0.0)});
  }
  std::vector<std::uint64_t> planned;
  std::size_t next_planned = 0;
  std::vector<IterateSnapshot> samples;
  auto plan_samples = [&](std::uint64_t from) {
    planned.clear();
    samples.clear();
    next_planned = 0;
    for (std::size_t m = 0; m < stop.samples; ++m) planned.push_back(from + 1 + sample_rng.uniform_index(n));
    std::sort(planned.begin(), planned.end());
  };

  SolveOutcome out;
  auto record = [&](std::uint64_t tau, const Evaluation &e) {
    out.trace.rows.push_back({static_cast<double>(tau) / static_cast<double>(n), e.primal, e.dual,
                              e.gap, elapsed_ms()});
    out.gap = e.gap;
    out.primal = e.primal;
    out.dual = e.dual;
  };

  // Evaluates the strategy's pair at time tau; returns true when it passes.
  auto check = [&](std::uint64_t tau) -> bool {
    if (averaging) {
      auto pa = sum_alpha->materialize(state.alpha, tau);
      auto pw = sum_w->materialize(state.w, tau);
      const std::uint64_t target = tau >= window ? tau - window : 0;
      std::size_t chosen = 0;
      for (std::size_t s = 0; s < prefixes.size(); ++s)
        if (prefixes[s].time <= target) chosen = s;
      for (std::size_t s = 0; s < chosen; ++s) prefixes.pop_front();
      const PrefixSnapshot &base = prefixes.front();
      const double len = static_cast<double>(tau - base.time);
      std::vector<double> abar(n * k), wbar(problem.dim());
      for (std::size_t j = 0; j < abar.size(); ++j) abar[j] = (pa[j] - base.alpha[j]) / len;
      for (std::size_t j = 0; j < wbar.size(); ++j) wbar[j] = (pw[j] - base.w[j]) / len;
      prefixes.push_back({tau, std::move(pa), std::move(pw)});
      if (prefixes.size() > kMaxSnapshots) prefixes.pop_front();
      const Evaluation e = evaluate_pair(problem, wbar, abar);
      record(tau, e);
      out.w_bar = std::move(wbar);
      out.alpha_bar = std::move(abar);
      return e.gap <= stop.epsilon;
    }
    if (sampling && !samples.empty()) {
      std::size_t best = 0;
      Evaluation best_e;
      for (std::size_t s = 0; s < samples.size(); ++s) {
        const Evaluation e = evaluate_consistent(problem, samples[s].w, samples[s].alpha);
        if (s == 0 || e.gap < best_e.gap) {
          best = s;
          best_e = e;
        }
      }
      record(tau, best_e);
      out.w_bar = samples[best].w;
      out.alpha_bar = samples[best].alpha;
      plan_samples(tau);
      return best_e.gap <= stop.epsilon;
    }
    const Evaluation e = evaluate_consistent(problem, state.w, state.alpha);
    record(tau, e);
    out.w_bar = state.w;
    out.alpha_bar = state.alpha;
    if (sampling) plan_samples(tau);
    return e.gap <= stop.epsilon;
  };

  std::uint64_t tau = 0;
  bool converged = false;
  if (averaging) {
    const Evaluation e = evaluate_consistent(problem, state.w, state.alpha);
    record(0, e);
    out.w_bar = state.w;
    out.alpha_bar = state.alpha;
  } else {
    converged = check(0);
  }

  while (!converged && tau < total) {
    const std::size_t i = static_cast<std::size_t>(rng.uniform_index(n));
    const auto delta = stepper.step(state, i, options.step, options.safeguard);
    bool nonzero = false;
    for (double x : delta) nonzero = nonzero || x != 0.0;
    if (nonzero) {
      if (averaging) {
        for (std::size_t j = 0; j < k; ++j) sum_alpha->before_change(i * k + j, state.alpha[i * k + j], tau + 1);
        problem.data.for_each_image(i, delta, 1.0, [&](std::size_t j, double) {
          sum_w->before_change(j, state.w[j], tau + 1);
        });
      }
      apply_delta(problem, state, i, delta);
    }
    ++tau;
    while (sampling && next_planned < planned.size() && planned[next_planned] == tau) {
      samples.push_back({state.alpha, state.w});
      ++next_planned;
    }
    if (tau % n == 0 || tau == total) converged = check(tau);
  }

  state.epoch_count += static_cast<double>(tau) / static_cast<double>(n);
  out.iterations = tau;
  out.epochs = static_cast<double>(tau) / static_cast<double>(n);
  out.converged = converged;
  return out;
}

std::uint64_t iteration_budget(const Problem &problem, double gap0, double epsilon) {
  const double m = static_cast<double>(problem.n()) +
                   problem.data.r2() / (problem.lambda * problem.loss.gamma());
  const double t = m * std::log(m * std::max(gap0, 0.0) / epsilon);
  if (!(t > 1.0)) return 1;
  return static_cast<std::uint64_t>(std::ceil(t));
}

AmplifiedOutcome restart_amplify(const Problem &problem, double epsilon, double delta,
                                 const SolverOptions &options, BudgetFn budget) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  const DualState zero = zero_state(problem);
  const double gap0 = duality_gap(problem, zero);
  const std::uint64_t iters =
      budget ? budget(problem, gap0, epsilon / 2.0) : iteration_budget(problem, gap0, epsilon / 2.0);
  const std::size_t attempts =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::log2(1.0 / delta) - 1e-12)));
  AmplifiedOutcome result;
  for (std::size_t a = 0; a < attempts; ++a) {
    SolverOptions opt = options;
    opt.seed = options.seed + 0x9e3779b97f4a7c15ULL * a;
    opt.max_iterations = iters;
    result.outcome = solve(problem, StoppingStrategy::final_iterate(epsilon), {}, opt);
    result.attempts = a + 1;
    if (result.outcome.converged) break;
  }
  return result;
}

}  // namespace sdca
