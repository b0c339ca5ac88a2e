#include "revmine/optim.hpp"

#include <cmath>
#include <cstddef>
#include <deque>
#include <string>

#include "revmine/errors.hpp"
#include "revmine/log.hpp"

namespace revmine {
namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

struct CurvaturePair {
  std::vector<double> s;  // x_{k+1} - x_k
  std::vector<double> y;  // g_{k+1} - g_k
  double rho;             // 1 / (y . s)
};

/// Two-loop recursion: d = -H g with H built from the stored pairs and the
/// usual (s.y / y.y) scaling of the initial Hessian estimate.
std::vector<double> search_direction(const std::vector<double>& g,
                                     const std::deque<CurvaturePair>& pairs) {
  std::vector<double> d = g;
  std::vector<double> alpha(pairs.size());
  for (std::size_t i = pairs.size(); i-- > 0;) {
    alpha[i] = pairs[i].rho * dot(pairs[i].s, d);
    for (std::size_t j = 0; j < d.size(); ++j) d[j] -= alpha[i] * pairs[i].y[j];
  }
  if (!pairs.empty()) {
    const CurvaturePair& last = pairs.back();
    const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
    for (double& x : d) x *= gamma;
  }
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double beta = pairs[i].rho * dot(pairs[i].y, d);
    for (std::size_t j = 0; j < d.size(); ++j) {
      d[j] += (alpha[i] - beta) * pairs[i].s[j];
    }
  }
  for (double& x : d) x = -x;
  return d;
}

void check_finite(double f, const std::vector<double>& g) {
  if (!std::isfinite(f)) throw DataError("objective is not finite");
  for (double x : g) {
    if (!std::isfinite(x)) throw DataError("gradient is not finite");
  }
}

}  // namespace

LbfgsResult lbfgs_minimize(std::vector<double> x0, const Objective& objective,
                           const LbfgsOptions& opt) {
  const std::size_t n = x0.size();
  LbfgsResult result;
  result.x = std::move(x0);

  std::vector<double> g(n, 0.0);
  double f = objective(result.x, g);
  check_finite(f, g);

  std::deque<CurvaturePair> pairs;
  std::vector<double> x_new(n), g_new(n, 0.0);

  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    if (inf_norm(g) <= opt.grad_tol) {
      result.converged = true;
      break;
    }

    std::vector<double> d = search_direction(g, pairs);
    double dg = dot(d, g);
    if (!(dg < 0.0)) {  // not a descent direction; fall back to steepest descent
      d = g;
      for (double& v : d) v = -v;
      dg = -dot(g, g);
      pairs.clear();
    }

    // First step has no curvature information, so scale to unit step length.
    double step = 1.0;
    if (pairs.empty()) {
      const double d_norm = std::sqrt(dot(d, d));
      if (d_norm > 1.0) step = 1.0 / d_norm;
    }

    double f_new = f;
    bool accepted = false;
    for (int bt = 0; bt < opt.max_backtracks; ++bt) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = result.x[i] + step * d[i];
      f_new = objective(x_new, g_new);
      check_finite(f_new, g_new);
      if (f_new <= f + opt.armijo_c1 * step * dg) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // No decrease at the smallest step: treat the current point as final.
      log_debug("line search stalled after " + std::to_string(result.iterations) +
                " steps");
      result.converged = true;
      break;
    }

    CurvaturePair pair;
    pair.s.resize(n);
    pair.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      pair.s[i] = x_new[i] - result.x[i];
      pair.y[i] = g_new[i] - g[i];
    }
    const double sy = dot(pair.s, pair.y);
    if (sy > 1e-10) {  // skip pairs that would break positive definiteness
      pair.rho = 1.0 / sy;
      pairs.push_back(std::move(pair));
      if (static_cast<int>(pairs.size()) > opt.history) pairs.pop_front();
    }

    const bool small_change = std::abs(f - f_new) <= opt.tol * std::max(1.0, std::abs(f));
    result.x.swap(x_new);
    g.swap(g_new);
    f = f_new;
    ++result.iterations;
    if (small_change) {
      result.converged = true;
      break;
    }
  }

  result.objective = f;
  return result;
}

}  // namespace revmine
