#include "revmine/optim.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <doctest.h>

#include "revmine/errors.hpp"

using namespace revmine;

TEST_CASE("quadratic bowl converges to its exact minimum") {
  const std::vector<double> target = {3.0, -1.0, 0.5, 8.0};
  Objective f = [&](const std::vector<double>& x, std::vector<double>& g) {
    double value = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - target[i];
      value += d * d;
      g[i] = 2.0 * d;
    }
    return value;
  };
  LbfgsResult result = lbfgs_minimize(std::vector<double>(4, 0.0), f);
  CHECK(result.converged);
  CHECK(result.objective < 1e-9);
  for (std::size_t i = 0; i < target.size(); ++i) {
    CHECK(std::abs(result.x[i] - target[i]) < 1e-5);
  }
}

TEST_CASE("banana-valley function reaches (1, 1)") {
  Objective f = [](const std::vector<double>& x, std::vector<double>& g) {
    const double a = 1.0 - x[0];
    const double b = x[1] - x[0] * x[0];
    g[0] = -2.0 * a - 400.0 * x[0] * b;
    g[1] = 200.0 * b;
    return a * a + 100.0 * b * b;
  };
  LbfgsOptions options;
  options.max_iterations = 1000;
  options.tol = 1e-14;
  LbfgsResult result = lbfgs_minimize({-1.2, 1.0}, f, options);
  CHECK(result.objective < 1e-8);
  CHECK(std::abs(result.x[0] - 1.0) < 1e-3);
  CHECK(std::abs(result.x[1] - 1.0) < 1e-3);
}

TEST_CASE("zero iteration budget returns the start point untouched") {
  Objective f = [](const std::vector<double>& x, std::vector<double>& g) {
    g.assign(x.size(), 1.0);
    double sum = 0.0;
    for (double v : x) sum += v;
    return sum;
  };
  LbfgsOptions options;
  options.max_iterations = 0;
  LbfgsResult result = lbfgs_minimize({5.0, 6.0}, f, options);
  CHECK(result.iterations == 0);
  CHECK(result.x == std::vector<double>{5.0, 6.0});
  CHECK(result.objective == 11.0);
}

TEST_CASE("identical runs produce identical iterates") {
  Objective f = [](const std::vector<double>& x, std::vector<double>& g) {
    double value = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      value += std::cosh(x[i] - static_cast<double>(i));
      g[i] = std::sinh(x[i] - static_cast<double>(i));
    }
    return value;
  };
  LbfgsResult a = lbfgs_minimize({2.0, -3.0, 0.5}, f);
  LbfgsResult b = lbfgs_minimize({2.0, -3.0, 0.5}, f);
  CHECK(a.x == b.x);
  CHECK(a.objective == b.objective);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("non-finite objective raises a data error") {
  Objective f = [](const std::vector<double>& x, std::vector<double>& g) {
    g.assign(x.size(), 0.0);
    return std::numeric_limits<double>::quiet_NaN();
  };
  CHECK_THROWS_AS(lbfgs_minimize({1.0}, f), DataError);
}
