#ifndef SDCA_SIMPLEX_OPS_HPP
#define SDCA_SIMPLEX_OPS_HPP

#include <span>
#include <vector>

namespace sdca {

/// Euclidean projection of mu onto the capped simplex
/// S = {b >= 0 : sum(b) <= 1}. Sort-based, O(k log k).
std::vector<double> project(std::span<const double> mu);
void project(std::span<const double> mu, std::span<double> out);

/// Solves  min_{a >= 0, beta}  ||a - mu||^2 + C beta^2  s.t.  ||a||_1 = beta <= 1.
/// This is the per-instance subproblem of multiclass coordinate ascent.
std::vector<double> optimize_dual(std::span<const double> mu, double C);
void optimize_dual(std::span<const double> mu, double C, std::span<double> out);

/// Objective of optimize_dual at a (with beta = ||a||_1).
double optimize_dual_objective(std::span<const double> mu, double C,
                               std::span<const double> a);

}  // namespace sdca

#endif
