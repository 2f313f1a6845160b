#pragma once
// Multi-restart projected gradient ascent over a product of unit spheres.
// Parameters live in one flat vector split into consecutive blocks; each
// block is kept at unit Euclidean norm.

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "qnet/field.hpp"

namespace qnet {

using Objective = std::function<double(const std::vector<double>&)>;
using Gradient = std::function<std::vector<double>(const std::vector<double>&)>;

struct OptimizeOptions {
  int restarts = 64;
  int max_iters = 2000;
  double tol = 1e-10;      // relative improvement cutoff
  double fd_step = 1e-6;   // central difference step when no gradient is given
  std::uint64_t seed = 0;
  // Used as starting points before random restarts; normalized on entry.
  std::vector<std::vector<double>> warm_starts;
};

struct OptimizeResult {
  double value = 0.0;
  std::vector<double> params;
  int best_restart = -1;
};

namespace detail {

inline void normalize_blocks(std::vector<double>& x, const std::vector<int>& blocks) {
  int off = 0;
  for (int b : blocks) {
    double norm = 0.0;
    for (int i = 0; i < b; ++i) norm += x[off + i] * x[off + i];
    norm = std::sqrt(norm);
    if (norm == 0.0) {
      x[off] = 1.0;
      norm = 1.0;
    }
    for (int i = 0; i < b; ++i) x[off + i] /= norm;
    off += b;
  }
}

inline void project_tangent(std::vector<double>& g, const std::vector<double>& x,
                            const std::vector<int>& blocks) {
  int off = 0;
  for (int b : blocks) {
    double dot = 0.0;
    for (int i = 0; i < b; ++i) dot += g[off + i] * x[off + i];
    for (int i = 0; i < b; ++i) g[off + i] -= dot * x[off + i];
    off += b;
  }
}

}  // namespace detail

inline OptimizeResult maximize_on_spheres(const Objective& f, const std::vector<int>& blocks,
                                          const OptimizeOptions& opt = {}, const Gradient& grad = {}) {
  int total = 0;
  for (int b : blocks) {
    if (b < 1) throw std::invalid_argument("sphere blocks must be nonempty");
    total += b;
  }
  OptimizeResult best;
  best.value = -std::numeric_limits<double>::infinity();

  int warm = static_cast<int>(opt.warm_starts.size());
  for (int restart = 0; restart < opt.restarts + warm; ++restart) {
    std::vector<double> x(total);
    if (restart < warm) {
      if (static_cast<int>(opt.warm_starts[restart].size()) != total)
        throw std::invalid_argument("warm start has the wrong length");
      x = opt.warm_starts[restart];
    } else {
      std::mt19937_64 rng(opt.seed + static_cast<std::uint64_t>(restart - warm));
      std::normal_distribution<double> n01;
      for (double& v : x) v = n01(rng);
    }
    detail::normalize_blocks(x, blocks);

    double fx = f(x);
    double step = 0.1;
    for (int iter = 0; iter < opt.max_iters; ++iter) {
      std::vector<double> g(total);
      if (grad) {
        g = grad(x);
      } else {
        std::vector<double> probe = x;
        for (int i = 0; i < total; ++i) {
          double keep = probe[i];
          probe[i] = keep + opt.fd_step;
          std::vector<double> plus = probe;
          detail::normalize_blocks(plus, blocks);
          probe[i] = keep - opt.fd_step;
          std::vector<double> minus = probe;
          detail::normalize_blocks(minus, blocks);
          probe[i] = keep;
          g[i] = (f(plus) - f(minus)) / (2.0 * opt.fd_step);
        }
      }
      detail::project_tangent(g, x, blocks);

      bool advanced = false;
      while (step > 1e-14) {
        std::vector<double> y = x;
        for (int i = 0; i < total; ++i) y[i] += step * g[i];
        detail::normalize_blocks(y, blocks);
        double fy = f(y);
        if (fy > fx) {
          double rel = (fy - fx) / std::max(1e-300, std::abs(fx));
          x = std::move(y);
          fx = fy;
          step *= 1.25;
          advanced = rel >= opt.tol;
          break;
        }
        step *= 0.5;
      }
      if (!advanced) break;
    }
    if (fx > best.value) {
      best.value = fx;
      best.params = x;
      best.best_restart = restart;
    }
  }
  return best;
}

}  // namespace qnet
