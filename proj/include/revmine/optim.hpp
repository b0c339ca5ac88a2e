#ifndef REVMINE_OPTIM_HPP
#define REVMINE_OPTIM_HPP

#include <functional>
#include <vector>

namespace revmine {

/// Objective callback: fills `gradient` (same size as x) and returns f(x).
using Objective =
    std::function<double(const std::vector<double>& x, std::vector<double>& gradient)>;

struct LbfgsOptions {
  int max_iterations = 200;
  double tol = 1e-5;           // relative objective change counted as converged
  double grad_tol = 1e-8;      // max-norm of the gradient counted as converged
  int history = 6;             // stored curvature pairs
  double armijo_c1 = 1e-4;     // sufficient-decrease constant
  int max_backtracks = 60;
};

struct LbfgsResult {
  std::vector<double> x;
  double objective = 0.0;
  int iterations = 0;    // accepted steps taken
  bool converged = false;
};

/// Deterministic limited-memory BFGS with Armijo backtracking line search.
/// Accepted steps never increase the objective. Single-threaded; identical
/// inputs give identical iterates. Throws DataError when the objective or
/// gradient turns non-finite.
LbfgsResult lbfgs_minimize(std::vector<double> x0, const Objective& objective,
                           const LbfgsOptions& options = {});

}  // namespace revmine

#endif  // REVMINE_OPTIM_HPP
