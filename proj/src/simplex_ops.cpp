#include "sdca/simplex_ops.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sdca {

namespace {

constexpr double kIntervalTol = 1e-12;

// Indices ordering values in non-increasing order; ties keep index order.
std::vector<std::size_t> descending_order(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  return order;
}

}  // namespace

void project(std::span<const double> mu, std::span<double> out) {
  assert(out.size() == mu.size());
  const std::size_t k = mu.size();
  double clipped_sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    out[i] = std::max(0.0, mu[i]);
    clipped_sum += out[i];
  }
  if (clipped_sum <= 1.0) return;

  const auto order = descending_order(mu);
  std::size_t j_star = 1;
  double prefix = 0.0, theta = 0.0;
  for (std::size_t j = 1; j <= k; ++j) {
    const double m = std::max(0.0, mu[order[j - 1]]);
    prefix += m;
    if (static_cast<double>(j) * m + 1.0 - prefix > 0.0) {
      j_star = j;
      theta = prefix - 1.0;
    }
  }
  const double shift = theta / static_cast<double>(j_star);
  for (std::size_t i = 0; i < k; ++i) out[i] = std::max(mu[i] - shift, 0.0);
}

std::vector<double> project(std::span<const double> mu) {
  std::vector<double> out(mu.size());
  project(mu, out);
  return out;
}

double optimize_dual_objective(std::span<const double> mu, double C,
                               std::span<const double> a) {
  double dist = 0.0, beta = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    dist += (a[i] - mu[i]) * (a[i] - mu[i]);
    beta += a[i];
  }
  return dist + C * beta * beta;
}

void optimize_dual(std::span<const double> mu, double C, std::span<double> out) {
  assert(out.size() == mu.size());
  if (C < 0.0) throw std::invalid_argument("optimize_dual: C must be non-negative");
  const std::size_t m = mu.size();
  std::fill(out.begin(), out.end(), 0.0);
  if (m == 0) return;

  const auto order = descending_order(mu);
  // sorted clipped values, cumulative sums and breakpoints (1-based as in the
  // derivation; index 0 unused)
  std::vector<double> hat(m + 1, 0.0), cum(m + 1, 0.0), z(m + 2, 1.0);
  for (std::size_t j = 1; j <= m; ++j) {
    hat[j] = std::max(0.0, mu[order[j - 1]]);
    cum[j] = cum[j - 1] + hat[j];
  }
  if (cum[m] <= 0.0) return;
  for (std::size_t j = 1; j <= m; ++j)
    z[j] = std::min(cum[j] - static_cast<double>(j) * hat[j], 1.0);
  // beyond the last breakpoint the support cannot grow; the l1 mass is at
  // most the clipped sum
  z[m + 1] = std::min(cum[m], 1.0);

  auto fill = [&](std::size_t j, double beta) {
    const double shift = (cum[j] - beta) / static_cast<double>(j);
    for (std::size_t i = 0; i < m; ++i) out[i] = std::max(0.0, mu[i] - shift);
  };

  for (std::size_t j = 1; j <= m; ++j) {
    const double cand = cum[j] / (1.0 + static_cast<double>(j) * C);
    if (cand >= z[j] - kIntervalTol && cand <= z[j + 1] + kIntervalTol) {
      fill(j, std::min(cand, 1.0));
      return;
    }
  }

  // No stationary point with beta <= 1: compare the beta = 1 boundary with a = 0.
  // The boundary segment is the one whose right breakpoint first reaches 1.
  std::size_t j = 1;
  while (j < m && z[j + 1] < 1.0) ++j;
  fill(j, 1.0);
  double dist = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    dist += (out[i] - mu[i]) * (out[i] - mu[i]);
    norm += mu[i] * mu[i];
  }
  if (!(dist + C <= norm)) std::fill(out.begin(), out.end(), 0.0);
}

std::vector<double> optimize_dual(std::span<const double> mu, double C) {
  std::vector<double> out(mu.size());
  optimize_dual(mu, C, out);
  return out;
}

}  // namespace sdca
