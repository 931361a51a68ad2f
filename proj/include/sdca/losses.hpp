#ifndef SDCA_LOSSES_HPP
#define SDCA_LOSSES_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace sdca {

enum class LossId {
  squared,
  logistic,
  hinge,
  smooth_hinge,
  max_of_hinge,
  smooth_max_of_hinge,
  soft_max_of_hinge
};

// Norm in which a loss conjugate is strongly convex (dual norm of the
// smoothness norm). Soft-max-of-hinge is the only l1 family.
enum class NormKind { l2, l1 };

std::string_view to_string(LossId id);
std::optional<LossId> parse_loss_id(std::string_view name);

/// Immutable loss descriptor. Per-instance data (label y for the squared
/// loss, cost vector c for the max-of-hinge families) is passed separately
/// as `param`; the logistic and hinge families take labels folded into the
/// instances and ignore it.
class LossFamily {
 public:
  static LossFamily squared();
  static LossFamily logistic();
  static LossFamily hinge();
  static LossFamily smooth_hinge(double gamma);
  static LossFamily max_of_hinge(std::size_t k);
  static LossFamily smooth_max_of_hinge(std::size_t k, double gamma);
  static LossFamily soft_max_of_hinge(std::size_t k, double gamma);

  LossId id() const noexcept { return id_; }
  std::size_t k() const noexcept { return k_; }
  bool is_smooth() const noexcept { return gamma_.has_value(); }
  // Smoothness parameter: the loss is (1/gamma)-smooth. Throws for
  // Lipschitz-only families.
  double gamma() const;
  std::optional<double> lipschitz() const noexcept { return lipschitz_; }
  NormKind dual_norm() const noexcept;
  // Length of the per-instance parameter vector.
  std::size_t param_size() const noexcept;
  std::string_view name() const noexcept { return to_string(id_); }

 private:
  LossFamily(LossId id, std::size_t k, std::optional<double> gamma,
             std::optional<double> lipschitz);

  LossId id_;
  std::size_t k_;
  std::optional<double> gamma_;
  std::optional<double> lipschitz_;
};

double loss_value(const LossFamily &f, std::span<const double> param,
                  std::span<const double> a);

/// Gradient of a smooth loss. Throws unsupported_operation for hinge and
/// max-of-hinge.
void loss_grad(const LossFamily &f, std::span<const double> param,
               std::span<const double> a, std::span<double> out);
std::vector<double> loss_grad(const LossFamily &f, std::span<const double> param,
                              std::span<const double> a);

/// Fenchel conjugate; +infinity outside its domain.
double loss_conj(const LossFamily &f, std::span<const double> param,
                 std::span<const double> b);

/// Smooths a Lipschitz family by adding (gamma/2)||b||^2 to its conjugate:
/// hinge -> smooth_hinge, max_of_hinge -> smooth_max_of_hinge.
LossFamily smooth_lipschitz(const LossFamily &f, double gamma);

/// Cost vector 1 - e_y of the multiclass hinge construction.
std::vector<double> multiclass_cost(std::size_t k, std::size_t label);

// Boundary slack accepted by conjugate domains before returning +infinity.
inline constexpr double kDomainTolerance = 1e-12;

}  // namespace sdca

#endif
