#ifndef SDCA_INSTANCE_MATRIX_HPP
#define SDCA_INSTANCE_MATRIX_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sdca/losses.hpp"

namespace sdca {

struct SparseVector {
  std::vector<std::uint32_t> index;
  std::vector<double> value;

  std::size_t nnz() const noexcept { return index.size(); }
  double squared_norm() const noexcept;
};

enum class InstanceStructure {
  scalar,      // X_i = x_i, k = 1
  multiclass,  // X_i has columns vec(x_i (e_j - e_{y_i})^T), k classes
};

/// The n instances X_1..X_n. Scalar instances are feature vectors; multiclass
/// instances are stored as (x_i, y_i) and the d*k-by-k matrix X_i is applied
/// implicitly. Weight vectors for multiclass problems are vec(W) with W
/// d-by-k, column-major (class j occupies [j*d, (j+1)*d)).
class InstanceMatrix {
 public:
  InstanceMatrix() = default;

  static InstanceMatrix scalar(std::size_t d, std::vector<SparseVector> rows,
                               NormKind dual_norm = NormKind::l2);
  static InstanceMatrix multiclass(std::size_t d, std::size_t k, std::vector<SparseVector> rows,
                                   std::vector<std::size_t> labels,
                                   NormKind dual_norm = NormKind::l2);

  std::size_t n() const noexcept { return rows_.size(); }
  std::size_t d() const noexcept { return d_; }
  std::size_t k() const noexcept { return k_; }
  // Length of the weight vector.
  std::size_t dim() const noexcept { return d_ * (structure_ == InstanceStructure::scalar ? 1 : k_); }
  InstanceStructure structure() const noexcept { return structure_; }
  NormKind dual_norm() const noexcept { return dual_norm_; }

  // Squared operator norm ||X_i||^2_{D -> 2}.
  double norm2(std::size_t i) const noexcept { return norms_[i]; }
  double r2() const noexcept { return r2_; }
  // ||x_i||_2^2 of the underlying feature vector.
  double feature_norm2(std::size_t i) const noexcept { return feature_norms_[i]; }
  std::size_t label(std::size_t i) const { return labels_.at(i); }
  bool is_dense_row(std::size_t i) const noexcept { return dense_[i]; }

  // x_i^T u for a d-vector u.
  double feature_dot(std::size_t i, std::span<const double> u, std::size_t offset = 0) const;

  /// out = X_i^T w (k entries).
  void apply_transpose(std::size_t i, std::span<const double> w, std::span<double> out) const;

  /// v += scale * X_i * coeffs.
  void add_scaled(std::size_t i, std::span<const double> coeffs, double scale,
                  std::span<double> v) const;

  /// ||X_i coeffs||_2^2.
  double image_norm2(std::size_t i, std::span<const double> coeffs) const;

  /// Calls f(coordinate, value) for every entry of scale * X_i * coeffs
  /// that X_i can touch.
  template <typename F>
  void for_each_image(std::size_t i, std::span<const double> coeffs, double scale, F &&f) const {
    if (structure_ == InstanceStructure::scalar) {
      const double c = scale * coeffs[0];
      for_each_feature(i, [&](std::size_t j, double x) { f(j, c * x); });
      return;
    }
    const std::size_t y = labels_[i];
    double off = 0.0;
    for (std::size_t j = 0; j < k_; ++j)
      if (j != y) off += coeffs[j];
    for (std::size_t j = 0; j < k_; ++j) {
      const double c = scale * (j == y ? -off : coeffs[j]);
      const std::size_t base = j * d_;
      for_each_feature(i, [&](std::size_t f_idx, double x) { f(base + f_idx, c * x); });
    }
  }

  template <typename F>
  void for_each_feature(std::size_t i, F &&f) const {
    const SparseVector &r = rows_[i];
    if (dense_[i]) {
      for (std::size_t j = 0; j < r.value.size(); ++j) f(j, r.value[j]);
    } else {
      for (std::size_t p = 0; p < r.index.size(); ++p) f(r.index[p], r.value[p]);
    }
  }

  // Row i as sparse (index, value) pairs, regardless of storage.
  SparseVector row(std::size_t i) const;
  std::size_t total_nnz() const noexcept;

  // Rows denser than this fraction are stored densely.
  static constexpr double kDenseThreshold = 0.5;

 private:
  void finalize();

  std::size_t d_ = 0;
  std::size_t k_ = 1;
  InstanceStructure structure_ = InstanceStructure::scalar;
  NormKind dual_norm_ = NormKind::l2;
  std::vector<SparseVector> rows_;
  std::vector<bool> dense_;
  std::vector<std::size_t> labels_;
  std::vector<double> feature_norms_;
  std::vector<double> norms_;
  double r2_ = 0.0;
};

}  // namespace sdca

#endif
