#include "sdca/instance_matrix.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <stdexcept>
#include <string>

namespace sdca {

double SparseVector::squared_norm() const noexcept {
  double s = 0.0;
  for (double v : value) s += v * v;
  return s;
}

InstanceMatrix InstanceMatrix::scalar(std::size_t d, std::vector<SparseVector> rows,
                                      NormKind dual_norm) {
  InstanceMatrix m;
  m.d_ = d;
  m.k_ = 1;
  m.structure_ = InstanceStructure::scalar;
  m.dual_norm_ = dual_norm;
  m.rows_ = std::move(rows);
  m.finalize();
  return m;
}

InstanceMatrix InstanceMatrix::multiclass(std::size_t d, std::size_t k,
                                          std::vector<SparseVector> rows,
                                          std::vector<std::size_t> labels, NormKind dual_norm) {
  if (k < 2) throw std::invalid_argument("multiclass instances need at least two classes");
  if (labels.size() != rows.size())
    throw std::invalid_argument("multiclass instances: one label per row required");
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] >= k)
      throw std::out_of_range("instance " + std::to_string(i) + ": label out of range");
  InstanceMatrix m;
  m.d_ = d;
  m.k_ = k;
  m.structure_ = InstanceStructure::multiclass;
  m.dual_norm_ = dual_norm;
  m.rows_ = std::move(rows);
  m.labels_ = std::move(labels);
  m.finalize();
  return m;
}

namespace {

// Sorts a row by index and merges repeated indices by summing their values.
void canonicalize(SparseVector &r) {
  if (std::is_sorted(r.index.begin(), r.index.end()) &&
      std::adjacent_find(r.index.begin(), r.index.end()) == r.index.end())
    return;
  std::vector<std::size_t> order(r.index.size());
  for (std::size_t p = 0; p < order.size(); ++p) order[p] = p;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return r.index[a] < r.index[b]; });
  SparseVector out;
  for (std::size_t p : order) {
    if (!out.index.empty() && out.index.back() == r.index[p]) {
      out.value.back() += r.value[p];
    } else {
      out.index.push_back(r.index[p]);
      out.value.push_back(r.value[p]);
    }
  }
  r = std::move(out);
}

}  // namespace

void InstanceMatrix::finalize() {
  const std::size_t n = rows_.size();
  dense_.assign(n, false);
  feature_norms_.resize(n);
  norms_.resize(n);
  r2_ = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    SparseVector &r = rows_[i];
    if (r.index.size() != r.value.size())
      throw std::invalid_argument("instance " + std::to_string(i) + ": index/value size mismatch");
    for (auto j : r.index)
      if (j >= d_)
        throw std::out_of_range("instance " + std::to_string(i) + ": feature index " +
                                std::to_string(j) + " >= d = " + std::to_string(d_));
    canonicalize(r);
    feature_norms_[i] = r.squared_norm();
    if (d_ > 0 && static_cast<double>(r.nnz()) > kDenseThreshold * static_cast<double>(d_)) {
      std::vector<double> dense(d_, 0.0);
      for (std::size_t p = 0; p < r.nnz(); ++p) dense[r.index[p]] += r.value[p];
      r.index.clear();
      r.value = std::move(dense);
      dense_[i] = true;
    }
    double op = feature_norms_[i];
    if (structure_ == InstanceStructure::multiclass)
      op *= dual_norm_ == NormKind::l2 ? static_cast<double>(k_) : 2.0;
    norms_[i] = op;
    r2_ = std::max(r2_, op);
  }
}

double InstanceMatrix::feature_dot(std::size_t i, std::span<const double> u,
                                   std::size_t offset) const {
  double s = 0.0;
  for_each_feature(i, [&](std::size_t j, double x) { s += x * u[offset + j]; });
  return s;
}

void InstanceMatrix::apply_transpose(std::size_t i, std::span<const double> w,
                                     std::span<double> out) const {
  assert(w.size() == dim() && out.size() == k_);
  if (structure_ == InstanceStructure::scalar) {
    out[0] = feature_dot(i, w);
    return;
  }
  const std::size_t y = labels_[i];
  const double base = feature_dot(i, w, y * d_);
  for (std::size_t j = 0; j < k_; ++j) out[j] = j == y ? 0.0 : feature_dot(i, w, j * d_) - base;
}

void InstanceMatrix::add_scaled(std::size_t i, std::span<const double> coeffs, double scale,
                                std::span<double> v) const {
  assert(coeffs.size() == k_ && v.size() == dim());
  for_each_image(i, coeffs, scale, [&](std::size_t j, double x) { v[j] += x; });
}

double InstanceMatrix::image_norm2(std::size_t i, std::span<const double> coeffs) const {
  if (structure_ == InstanceStructure::scalar) return coeffs[0] * coeffs[0] * feature_norms_[i];
  const std::size_t y = labels_[i];
  double sq = 0.0, sum = 0.0;
  for (std::size_t j = 0; j < k_; ++j) {
    if (j == y) continue;
    sq += coeffs[j] * coeffs[j];
    sum += coeffs[j];
  }
  return feature_norms_[i] * (sq + sum * sum);
}

SparseVector InstanceMatrix::row(std::size_t i) const {
  SparseVector out;
  for_each_feature(i, [&](std::size_t j, double x) {
    if (x != 0.0 || !dense_[i]) {
      out.index.push_back(static_cast<std::uint32_t>(j));
      out.value.push_back(x);
    }
  });
  return out;
}

std::size_t InstanceMatrix::total_nnz() const noexcept {
  std::size_t s = 0;
  for (const auto &r : rows_) s += r.index.empty() ? r.value.size() : r.index.size();
  return s;
}

}  // namespace sdca
