#include "sdca/regularizers.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace sdca {

std::string_view to_string(RegId id) {
  switch (id) {
    case RegId::l2: return "l2";
    case RegId::l2_shift: return "l2_shift";
    case RegId::elastic: return "elastic";
    case RegId::elastic_shift: return "elastic_shift";
  }
  return "unknown";
}

std::optional<RegId> parse_reg_id(std::string_view name) {
  for (RegId id : {RegId::l2, RegId::l2_shift, RegId::elastic, RegId::elastic_shift})
    if (to_string(id) == name) return id;
  return std::nullopt;
}

Regularizer::Regularizer(RegId id, double sigma_prime, std::vector<double> z)
    : id_(id), sigma_prime_(sigma_prime), z_(std::move(z)) {
  if (!(sigma_prime_ >= 0.0) || !std::isfinite(sigma_prime_))
    throw std::invalid_argument("sigma' must be finite and non-negative");
}

Regularizer Regularizer::l2() { return {RegId::l2, 0.0, {}}; }
Regularizer Regularizer::l2_shift(std::vector<double> z) {
  return {RegId::l2_shift, 0.0, std::move(z)};
}
Regularizer Regularizer::elastic(double sigma_prime) { return {RegId::elastic, sigma_prime, {}}; }
Regularizer Regularizer::elastic_shift(double sigma_prime, std::vector<double> z) {
  return {RegId::elastic_shift, sigma_prime, std::move(z)};
}

double Regularizer::value(std::span<const double> w) const {
  assert(z_.empty() || z_.size() == w.size());
  double sq = 0.0, l1 = 0.0, lin = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    sq += w[j] * w[j];
    l1 += std::abs(w[j]);
    lin += w[j] * shift_at(j);
  }
  return 0.5 * sq + sigma_prime_ * l1 - lin;
}

double Regularizer::conj(std::span<const double> v) const {
  assert(z_.empty() || z_.size() == v.size());
  double s = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) s += conj_coord(j, v[j]);
  return s;
}

void Regularizer::conj_grad(std::span<const double> v, std::span<double> out) const {
  assert(out.size() == v.size());
  for (std::size_t j = 0; j < v.size(); ++j) out[j] = conj_grad_coord(j, v[j]);
}

double reg_value(const Regularizer &r, std::span<const double> w) { return r.value(w); }
double reg_conj(const Regularizer &r, std::span<const double> v) { return r.conj(v); }
std::vector<double> reg_conj_grad(const Regularizer &r, std::span<const double> v) {
  std::vector<double> out(v.size());
  r.conj_grad(v, out);
  return out;
}

}  // namespace sdca
