#ifndef SDCA_REGULARIZERS_HPP
#define SDCA_REGULARIZERS_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace sdca {

enum class RegId { l2, l2_shift, elastic, elastic_shift };

std::string_view to_string(RegId id);
std::optional<RegId> parse_reg_id(std::string_view name);

/// 1-strongly convex regularizer g(w) = 0.5||w||^2 + sigma'||w||_1 - z'w,
/// with sigma' = 0 for the l2 variants and z = 0 for the unshifted ones.
/// All four variants are separable over coordinates, which the solvers use
/// to update w = grad g*(v) only where v changed.
class Regularizer {
 public:
  static Regularizer l2();
  static Regularizer l2_shift(std::vector<double> z);
  static Regularizer elastic(double sigma_prime);
  static Regularizer elastic_shift(double sigma_prime, std::vector<double> z);

  RegId id() const noexcept { return id_; }
  double sigma_prime() const noexcept { return sigma_prime_; }
  // Empty for unshifted variants.
  std::span<const double> shift() const noexcept { return z_; }
  bool has_shift() const noexcept { return !z_.empty(); }

  double value(std::span<const double> w) const;
  double conj(std::span<const double> v) const;
  void conj_grad(std::span<const double> v, std::span<double> out) const;

  // Per-coordinate pieces of g* and grad g*.
  double conj_coord(std::size_t j, double vj) const noexcept {
    const double t = excess(vj + shift_at(j));
    return 0.5 * t * t;
  }
  double conj_grad_coord(std::size_t j, double vj) const noexcept {
    const double u = vj + shift_at(j);
    const double t = excess(u);
    return u < 0.0 ? -t : t;
  }

 private:
  Regularizer(RegId id, double sigma_prime, std::vector<double> z);
  double shift_at(std::size_t j) const noexcept { return z_.empty() ? 0.0 : z_[j]; }
  // [|u| - sigma']_+ ; a tie |u| == sigma' gives exactly 0.
  double excess(double u) const noexcept {
    const double t = (u < 0.0 ? -u : u) - sigma_prime_;
    return t > 0.0 ? t : 0.0;
  }

  RegId id_;
  double sigma_prime_;
  std::vector<double> z_;
};

double reg_value(const Regularizer &r, std::span<const double> w);
double reg_conj(const Regularizer &r, std::span<const double> v);
std::vector<double> reg_conj_grad(const Regularizer &r, std::span<const double> v);

}  // namespace sdca

#endif
