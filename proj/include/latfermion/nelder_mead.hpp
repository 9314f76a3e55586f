#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "latfermion/error.hpp"

namespace latfermion {

struct NelderMeadOptions {
  double initial_step = 0.5;
  double tol_value = 1e-10;  // on the spread of simplex values, relative to max(1, |f|)
  double tol_step = 1e-8;    // on the simplex diameter (∞-norm)
  int max_evals = 20000;
  int max_restarts = 20;
  std::vector<double> lower;  // per-coordinate box; empty means unbounded
  std::vector<double> upper;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evals = 0;
  bool converged = false;
};

/// Box-constrained Nelder–Mead with restarts. Trial points are clamped onto
/// the box. After the simplex collapses, a fresh simplex is built around the
/// best point; the run stops once a restart no longer improves the value by
/// more than tol_value. Never returns a value above f(x0).
template <class Objective>
NelderMeadResult nelder_mead(Objective&& f, std::vector<double> x0, const NelderMeadOptions& opt) {
  const std::size_t dim = x0.size();
  if (dim == 0) throw InputError("nelder_mead needs at least one variable");
  const bool boxed = !opt.lower.empty();
  if (boxed && (opt.lower.size() != dim || opt.upper.size() != dim)) {
    throw InputError("nelder_mead box has wrong dimension");
  }

  auto clamp = [&](std::vector<double>& x) {
    if (!boxed) return;
    for (std::size_t i = 0; i < dim; ++i) x[i] = std::clamp(x[i], opt.lower[i], opt.upper[i]);
  };

  NelderMeadResult result;
  auto eval = [&](std::vector<double>& x) {
    clamp(x);
    ++result.evals;
    return f(static_cast<const std::vector<double>&>(x));
  };
  auto scaled_tol = [&](double value) {
    return opt.tol_value * std::max(1.0, std::abs(value));
  };

  result.x = std::move(x0);
  result.value = eval(result.x);

  std::vector<std::vector<double>> simplex(dim + 1, std::vector<double>(dim));
  std::vector<double> values(dim + 1);
  std::vector<std::size_t> order(dim + 1);
  std::vector<double> centroid(dim), trial(dim), trial2(dim);

  for (int restart = 0; restart <= opt.max_restarts; ++restart) {
    const double value_at_restart = result.value;
    simplex[0] = result.x;
    values[0] = result.value;
    for (std::size_t i = 0; i < dim; ++i) {
      auto& v = simplex[i + 1];
      v = result.x;
      double step = opt.initial_step;
      if (boxed && v[i] + step > opt.upper[i]) step = -step;
      v[i] += step;
      values[i + 1] = eval(v);
    }

    bool collapsed = false;
    while (result.evals < opt.max_evals) {
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(),
                [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
      const std::size_t best = order.front();
      const std::size_t worst = order.back();
      const std::size_t second_worst = order[dim - 1];

      double diameter = 0.0;
      for (std::size_t v = 0; v <= dim; ++v) {
        for (std::size_t i = 0; i < dim; ++i) {
          diameter = std::max(diameter, std::abs(simplex[v][i] - simplex[best][i]));
        }
      }
      if (values[worst] - values[best] <= scaled_tol(values[best]) && diameter <= opt.tol_step) {
        collapsed = true;
        break;
      }

      std::fill(centroid.begin(), centroid.end(), 0.0);
      for (std::size_t v = 0; v <= dim; ++v) {
        if (v == worst) continue;
        for (std::size_t i = 0; i < dim; ++i) centroid[i] += simplex[v][i];
      }
      for (auto& c : centroid) c /= static_cast<double>(dim);

      for (std::size_t i = 0; i < dim; ++i) trial[i] = centroid[i] + (centroid[i] - simplex[worst][i]);
      const double f_reflect = eval(trial);

      if (f_reflect < values[best]) {
        for (std::size_t i = 0; i < dim; ++i) trial2[i] = centroid[i] + 2.0 * (centroid[i] - simplex[worst][i]);
        const double f_expand = eval(trial2);
        if (f_expand < f_reflect) {
          simplex[worst] = trial2;
          values[worst] = f_expand;
        } else {
          simplex[worst] = trial;
          values[worst] = f_reflect;
        }
        continue;
      }
      if (f_reflect < values[second_worst]) {
        simplex[worst] = trial;
        values[worst] = f_reflect;
        continue;
      }

      const bool outside = f_reflect < values[worst];
      for (std::size_t i = 0; i < dim; ++i) {
        trial2[i] = outside ? centroid[i] + 0.5 * (trial[i] - centroid[i])
                            : centroid[i] + 0.5 * (simplex[worst][i] - centroid[i]);
      }
      const double f_contract = eval(trial2);
      if (f_contract < std::min(f_reflect, values[worst])) {
        simplex[worst] = trial2;
        values[worst] = f_contract;
        continue;
      }

      // Shrink towards the best vertex.
      for (std::size_t v = 0; v <= dim; ++v) {
        if (v == best) continue;
        for (std::size_t i = 0; i < dim; ++i) {
          simplex[v][i] = simplex[best][i] + 0.5 * (simplex[v][i] - simplex[best][i]);
        }
        values[v] = eval(simplex[v]);
      }
    }

    const auto best_it = std::min_element(values.begin(), values.end());
    const std::size_t best = static_cast<std::size_t>(best_it - values.begin());
    if (values[best] < result.value) {
      result.value = values[best];
      result.x = simplex[best];
    }
    if (!collapsed) {
      result.converged = false;
      return result;
    }
    if (value_at_restart - result.value <= scaled_tol(result.value) && restart > 0) {
      result.converged = true;
      return result;
    }
  }
  result.converged = true;
  return result;
}

}  // namespace latfermion
