#include "sdca/losses.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "sdca/errors.hpp"
#include "sdca/simplex_ops.hpp"

namespace sdca {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// log(1 + e^a) without overflow.
double log1pexp(double a) {
  if (a > 0.0) return a + std::log1p(std::exp(-a));
  return std::log1p(std::exp(a));
}

double sigmoid(double a) {
  if (a >= 0.0) return 1.0 / (1.0 + std::exp(-a));
  const double e = std::exp(a);
  return e / (1.0 + e);
}

void check_dims(const LossFamily &f, std::span<const double> param, std::span<const double> a) {
  if (a.size() != f.k())
    throw std::invalid_argument(std::string(f.name()) + ": argument has dimension " +
                                std::to_string(a.size()) + ", expected " +
                                std::to_string(f.k()));
  if (param.size() < f.param_size())
    throw std::invalid_argument(std::string(f.name()) + ": missing per-instance parameter");
}

// Returns sum(b) with b clipped to the capped simplex, or -1 if b lies
// outside it by more than the tolerance.
double capped_simplex_mass(std::span<const double> b) {
  double sum = 0.0;
  for (double v : b) {
    if (v < -kDomainTolerance) return -1.0;
    sum += std::max(v, 0.0);
  }
  if (sum > 1.0 + kDomainTolerance) return -1.0;
  return std::min(sum, 1.0);
}

}  // namespace

std::string_view to_string(LossId id) {
  switch (id) {
    case LossId::squared: return "squared";
    case LossId::logistic: return "logistic";
    case LossId::hinge: return "hinge";
    case LossId::smooth_hinge: return "smooth_hinge";
    case LossId::max_of_hinge: return "max_of_hinge";
    case LossId::smooth_max_of_hinge: return "smooth_max_of_hinge";
    case LossId::soft_max_of_hinge: return "soft_max_of_hinge";
  }
  return "unknown";
}

std::optional<LossId> parse_loss_id(std::string_view name) {
  for (LossId id : {LossId::squared, LossId::logistic, LossId::hinge, LossId::smooth_hinge,
                    LossId::max_of_hinge, LossId::smooth_max_of_hinge,
                    LossId::soft_max_of_hinge})
    if (to_string(id) == name) return id;
  return std::nullopt;
}

LossFamily::LossFamily(LossId id, std::size_t k, std::optional<double> gamma,
                       std::optional<double> lipschitz)
    : id_(id), k_(k), gamma_(gamma), lipschitz_(lipschitz) {
  if (k_ == 0) throw std::invalid_argument("loss output dimension must be positive");
  if (gamma_ && !(*gamma_ > 0.0)) throw std::invalid_argument("smoothness gamma must be > 0");
}

LossFamily LossFamily::squared() { return {LossId::squared, 1, 1.0, std::nullopt}; }
// phi'' <= 1/4, i.e. (1/gamma)-smooth with gamma = 4.
LossFamily LossFamily::logistic() { return {LossId::logistic, 1, 4.0, std::nullopt}; }
LossFamily LossFamily::hinge() { return {LossId::hinge, 1, std::nullopt, 1.0}; }
LossFamily LossFamily::smooth_hinge(double gamma) {
  return {LossId::smooth_hinge, 1, gamma, std::nullopt};
}
LossFamily LossFamily::max_of_hinge(std::size_t k) {
  return {LossId::max_of_hinge, k, std::nullopt, 1.0};
}
LossFamily LossFamily::smooth_max_of_hinge(std::size_t k, double gamma) {
  return {LossId::smooth_max_of_hinge, k, gamma, std::nullopt};
}
LossFamily LossFamily::soft_max_of_hinge(std::size_t k, double gamma) {
  return {LossId::soft_max_of_hinge, k, gamma, std::nullopt};
}

double LossFamily::gamma() const {
  if (!gamma_)
    throw unsupported_operation(std::string(name()) + " is not smooth; smooth it first");
  return *gamma_;
}

NormKind LossFamily::dual_norm() const noexcept {
  return id_ == LossId::soft_max_of_hinge ? NormKind::l1 : NormKind::l2;
}

std::size_t LossFamily::param_size() const noexcept {
  switch (id_) {
    case LossId::squared: return 1;
    case LossId::max_of_hinge:
    case LossId::smooth_max_of_hinge:
    case LossId::soft_max_of_hinge: return k_;
    default: return 0;
  }
}

double loss_value(const LossFamily &f, std::span<const double> param, std::span<const double> a) {
  check_dims(f, param, a);
  switch (f.id()) {
    case LossId::squared: return 0.5 * (a[0] - param[0]) * (a[0] - param[0]);
    case LossId::logistic: return log1pexp(a[0]);
    case LossId::hinge: return std::max(0.0, 1.0 - a[0]);
    case LossId::smooth_hinge: {
      const double g = f.gamma();
      if (a[0] >= 1.0) return 0.0;
      if (a[0] <= 1.0 - g) return 1.0 - a[0] - 0.5 * g;
      return (1.0 - a[0]) * (1.0 - a[0]) / (2.0 * g);
    }
    case LossId::max_of_hinge: {
      double m = 0.0;
      for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, param[j] + a[j]);
      return m;
    }
    case LossId::smooth_max_of_hinge: {
      const double g = f.gamma();
      std::vector<double> t(a.size()), b(a.size());
      for (std::size_t j = 0; j < a.size(); ++j) t[j] = (a[j] + param[j]) / g;
      project(t, b);
      // value of the inner maximization at its maximizer b
      double lin = 0.0, sq = 0.0;
      for (std::size_t j = 0; j < t.size(); ++j) {
        lin += b[j] * (a[j] + param[j]);
        sq += b[j] * b[j];
      }
      return std::max(0.0, lin - 0.5 * g * sq);
    }
    case LossId::soft_max_of_hinge: {
      const double g = f.gamma();
      double top = 0.0;  // the implicit "1 +" term has exponent 0
      for (std::size_t j = 0; j < a.size(); ++j) top = std::max(top, (param[j] + a[j]) / g);
      double s = std::exp(-top);
      for (std::size_t j = 0; j < a.size(); ++j) s += std::exp((param[j] + a[j]) / g - top);
      return g * (top + std::log(s));
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

void loss_grad(const LossFamily &f, std::span<const double> param, std::span<const double> a,
               std::span<double> out) {
  check_dims(f, param, a);
  assert(out.size() == a.size());
  switch (f.id()) {
    case LossId::hinge:
    case LossId::max_of_hinge:
      throw unsupported_operation(std::string(f.name()) + " is not differentiable");
    case LossId::squared: out[0] = a[0] - param[0]; return;
    case LossId::logistic: out[0] = sigmoid(a[0]); return;
    case LossId::smooth_hinge: {
      const double g = f.gamma();
      if (a[0] >= 1.0) out[0] = 0.0;
      else if (a[0] <= 1.0 - g) out[0] = -1.0;
      else out[0] = -(1.0 - a[0]) / g;
      return;
    }
    case LossId::smooth_max_of_hinge: {
      const double g = f.gamma();
      std::vector<double> t(a.size());
      for (std::size_t j = 0; j < a.size(); ++j) t[j] = (a[j] + param[j]) / g;
      project(t, out);
      return;
    }
    case LossId::soft_max_of_hinge: {
      const double g = f.gamma();
      double top = 0.0;
      for (std::size_t j = 0; j < a.size(); ++j) top = std::max(top, (param[j] + a[j]) / g);
      double s = std::exp(-top);
      for (std::size_t j = 0; j < a.size(); ++j) {
        out[j] = std::exp((param[j] + a[j]) / g - top);
        s += out[j];
      }
      for (double &v : out) v /= s;
      return;
    }
  }
}

std::vector<double> loss_grad(const LossFamily &f, std::span<const double> param,
                              std::span<const double> a) {
  std::vector<double> out(a.size());
  loss_grad(f, param, a, out);
  return out;
}

double loss_conj(const LossFamily &f, std::span<const double> param, std::span<const double> b) {
  check_dims(f, param, b);
  switch (f.id()) {
    case LossId::squared: return 0.5 * b[0] * b[0] + param[0] * b[0];
    case LossId::logistic: {
      if (b[0] < -kDomainTolerance || b[0] > 1.0 + kDomainTolerance) return kInf;
      const double x = std::clamp(b[0], 0.0, 1.0);
      return xlogx(x) + xlogx(1.0 - x);
    }
    case LossId::hinge:
    case LossId::smooth_hinge: {
      if (b[0] < -1.0 - kDomainTolerance || b[0] > kDomainTolerance) return kInf;
      const double x = std::clamp(b[0], -1.0, 0.0);
      return f.id() == LossId::hinge ? x : x + 0.5 * f.gamma() * x * x;
    }
    case LossId::max_of_hinge:
    case LossId::smooth_max_of_hinge:
    case LossId::soft_max_of_hinge: {
      const double mass = capped_simplex_mass(b);
      if (mass < 0.0) return kInf;
      double lin = 0.0, sq = 0.0, ent = 0.0;
      for (std::size_t j = 0; j < b.size(); ++j) {
        const double x = std::max(b[j], 0.0);
        lin -= param[j] * x;
        sq += x * x;
        ent += xlogx(x);
      }
      if (f.id() == LossId::max_of_hinge) return lin;
      if (f.id() == LossId::smooth_max_of_hinge) return lin + 0.5 * f.gamma() * sq;
      return lin + f.gamma() * (xlogx(1.0 - mass) + ent);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

LossFamily smooth_lipschitz(const LossFamily &f, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("smoothing gamma must be > 0");
  switch (f.id()) {
    case LossId::hinge: return LossFamily::smooth_hinge(gamma);
    case LossId::max_of_hinge: return LossFamily::smooth_max_of_hinge(f.k(), gamma);
    default:
      throw unsupported_operation(std::string("smoothing applies to Lipschitz families only, got ") +
                                  std::string(f.name()));
  }
}

std::vector<double> multiclass_cost(std::size_t k, std::size_t label) {
  if (label >= k) throw std::out_of_range("class label out of range");
  std::vector<double> c(k, 1.0);
  c[label] = 0.0;
  return c;
}

}  // namespace sdca
