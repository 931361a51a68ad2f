#include <doctest.h>

#include <random>
#include <vector>

#include "oracles.hpp"
#include "sdca/simplex_ops.hpp"

using namespace sdca;

namespace {

void check_vec(const std::vector<double> &got, const std::vector<double> &want, double tol) {
  REQUIRE(got.size() == want.size());
  for (std::size_t j = 0; j < got.size(); ++j) CHECK(got[j] == doctest::Approx(want[j]).epsilon(tol).scale(1.0));
}

}  // namespace

TEST_CASE("projection examples") {
  check_vec(project(std::vector<double>{0.2, 0.3}), {0.2, 0.3}, 1e-15);
  check_vec(project(std::vector<double>{2.0, 0.0}), {1.0, 0.0}, 1e-15);
  check_vec(project(std::vector<double>{1.0, 1.0}), {0.5, 0.5}, 1e-15);
  check_vec(project(std::vector<double>{-1.0, -2.0}), {0.0, 0.0}, 1e-15);
}

TEST_CASE("projection agrees with support enumeration") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int t = 0; t < 300; ++t) {
    const std::size_t k = 1 + t % 5;
    std::vector<double> mu(k);
    for (double &x : mu) x = u(gen);
    check_vec(project(mu), oracle::project_by_enumeration(mu), 1e-12);
  }
}

TEST_CASE("optimize_dual examples") {
  check_vec(optimize_dual(std::vector<double>{0.4}, 1.0), {0.2}, 1e-15);
  check_vec(optimize_dual(std::vector<double>{2.0}, 1.0), {1.0}, 1e-15);
  check_vec(optimize_dual(std::vector<double>{-0.3, -1.0, -0.1}, 2.0), {0.0, 0.0, 0.0}, 1e-15);
  const std::vector<double> mu{0.4};
  CHECK(optimize_dual_objective(mu, 1.0, std::vector<double>{0.2}) == doctest::Approx(0.08));
}

TEST_CASE("optimize_dual is never worse than the search oracle") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-1.0, 2.0), uc(0.0, 3.0);
  for (int t = 0; t < 100; ++t) {
    const std::size_t k = 1 + t % 3;
    std::vector<double> mu(k);
    for (double &x : mu) x = u(gen);
    const double C = uc(gen);
    const auto a = optimize_dual(mu, C);
    double sum = 0.0;
    for (double x : a) {
      CHECK(x >= 0.0);
      sum += x;
    }
    CHECK(sum <= 1.0 + 1e-12);
    const double mine = optimize_dual_objective(mu, C, a);
    const double ref = oracle::optimize_dual_value(mu, C, oracle::optimize_dual_by_search(mu, C));
    CHECK(mine <= ref + 1e-9);
  }
}
