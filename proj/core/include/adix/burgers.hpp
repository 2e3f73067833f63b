#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "adix/identifier.hpp"
#include "adix/stats.hpp"

namespace adix::burgers {

/// Coupled 2D Burgers' equations on the unit square,
///   u_t + u u_x + v u_y = (u_xx + u_yy) / R
///   v_t + u v_x + v v_y = (v_xx + v_yy) / R,
/// explicit in time, donor-cell upwinding for convection, central
/// differences for diffusion. Boundaries follow the exact solution.
struct BurgersConfig {
  int grid_n = 61;
  int iterations = 32;
  double reynolds = 100.0;
  ManagerKind manager = ManagerKind::linear;
  std::size_t vector_dim = 1;
  std::size_t block_size = 256;
  bool zero_adjoint_on_reverse = true;
  /// Swap fields by element-wise copy assignment instead of swapping buffers.
  bool copy_heavy = false;
  bool fd_check = true;
  double fd_epsilon = 1e-6;
  int fd_samples = 16;
  int repetitions = 10;

  double dx() const { return 1.0 / (grid_n - 1); }
  double dt() const { return 0.125 * std::min(dx() * dx() * reynolds, dx()); }
  std::size_t points() const { return static_cast<std::size_t>(grid_n) * static_cast<std::size_t>(grid_n); }
  std::size_t interior_points() const {
    return static_cast<std::size_t>(grid_n - 2) * static_cast<std::size_t>(grid_n - 2);
  }
  /// Interior u and v values of the initial field.
  std::size_t input_count() const { return 2 * interior_points(); }

  /// Throws std::invalid_argument when the configuration is unusable.
  void validate() const;
};

/// Exact solution (u, v) at (x, y, t). Singular where 1 - 2 t^2 = 0.
inline std::pair<double, double> exact_solution(double x, double y, double t) {
  const double denominator = 1.0 - 2.0 * t * t;
  if (std::abs(denominator) < 1e-12) {
    throw std::domain_error("burgers: exact solution is singular at t = 1/sqrt(2)");
  }
  return {(x + y - 2.0 * x * t) / denominator, (x - y - 2.0 * y * t) / denominator};
}

inline double primal_value(double x) { return x; }
template <class Real>
double primal_value(const Real& x) {
  return x.value();
}

/// Row-major n x n field, index = j * n + i with x = i dx, y = j dx.
template <class Real>
struct SolutionField {
  int n = 0;
  std::vector<Real> u;
  std::vector<Real> v;

  explicit SolutionField(int grid_n = 0)
      : n(grid_n), u(static_cast<std::size_t>(grid_n) * grid_n), v(static_cast<std::size_t>(grid_n) * grid_n) {}

  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * n + i; }
};

/// Interior indices in input order: all interior u first, then all interior v
/// in the same order.
std::vector<std::size_t> interior_indices(int grid_n);

SolutionField<double> initial_field(const BurgersConfig& cfg);

/// Sets every boundary value of `field` from the exact solution at time t.
template <class Real>
void pin_boundary(SolutionField<Real>& field, double t) {
  const int n = field.n;
  const double dx = 1.0 / (n - 1);
  auto pin = [&](int i, int j) {
    const auto [ue, ve] = exact_solution(i * dx, j * dx, t);
    field.u[field.index(i, j)] = ue;
    field.v[field.index(i, j)] = ve;
  };
  for (int i = 0; i < n; ++i) {
    pin(i, 0);
    pin(i, n - 1);
  }
  for (int j = 1; j < n - 1; ++j) {
    pin(0, j);
    pin(n - 1, j);
  }
}

/// One explicit step from `current` into `next`, which ends at time t_next.
/// Every interior value is a single assignment.
template <class Real>
void time_step(const SolutionField<Real>& current, SolutionField<Real>& next, double t_next, const BurgersConfig& cfg) {
  const int n = current.n;
  const double dx = cfg.dx();
  const double dt = cfg.dt();
  const double diffusion = dt / (cfg.reynolds * dx * dx);
  const auto& u = current.u;
  const auto& v = current.v;
  const std::size_t row = static_cast<std::size_t>(n);

  for (int j = 1; j < n - 1; ++j) {
    for (int i = 1; i < n - 1; ++i) {
      const std::size_t c = current.index(i, j);
      // Upwind neighbours follow the sign of the local velocity; the one-sided
      // difference is sign * (w[c] - w[upwind]) / dx.
      const bool u_positive = primal_value(u[c]) > 0.0;
      const bool v_positive = primal_value(v[c]) > 0.0;
      const std::size_t up_x = u_positive ? c - 1 : c + 1;
      const std::size_t up_y = v_positive ? c - row : c + row;
      const double sx = (u_positive ? 1.0 : -1.0) * dt / dx;
      const double sy = (v_positive ? 1.0 : -1.0) * dt / dx;

      next.u[c] = u[c] - (sx * u[c] * (u[c] - u[up_x]) + sy * v[c] * (u[c] - u[up_y])) +
                  diffusion * (u[c + 1] + u[c - 1] + u[c + row] + u[c - row] - 4.0 * u[c]);
      next.v[c] = v[c] - (sx * u[c] * (v[c] - v[up_x]) + sy * v[c] * (v[c] - v[up_y])) +
                  diffusion * (v[c + 1] + v[c - 1] + v[c + row] + v[c - row] - 4.0 * v[c]);
    }
  }
  pin_boundary(next, t_next);
}

/// Plain discrete 2-norm over the interior u and v values.
template <class Real>
Real objective(const SolutionField<Real>& field) {
  Real sum = 0.0;
  const int n = field.n;
  for (int j = 1; j < n - 1; ++j) {
    for (int i = 1; i < n - 1; ++i) {
      const std::size_t c = field.index(i, j);
      sum = sum + field.u[c] * field.u[c] + field.v[c] * field.v[c];
    }
  }
  using std::sqrt;
  return sqrt(sum);
}

/// Runs cfg.iterations steps starting from `field` (which holds the state at
/// t = 0) and leaves the final state in `field`.
template <class Real>
void solve(SolutionField<Real>& field, const BurgersConfig& cfg) {
  SolutionField<Real> next(field.n);
  const double dt = cfg.dt();
  for (int step = 1; step <= cfg.iterations; ++step) {
    time_step(field, next, step * dt, cfg);
    if (cfg.copy_heavy) {
      for (std::size_t k = 0; k < field.u.size(); ++k) {
        field.u[k] = next.u[k];
        field.v[k] = next.v[k];
      }
    } else {
      std::swap(field.u, next.u);
      std::swap(field.v, next.v);
    }
  }
}

/// Objective of the passive solver for a perturbed initial state.
double passive_objective(const BurgersConfig& cfg, const SolutionField<double>& initial);

struct GradientSample {
  std::size_t input = 0;
  double adjoint = 0.0;
  double finite_difference = 0.0;
  double relative_error = 0.0;
};

struct GradientCheck {
  std::vector<GradientSample> samples;
  double max_relative_error = 0.0;
  bool passed = false;
};

/// Input positions (into the gradient vector) used for the finite-difference
/// comparison: evenly spread, skipping points within a band of the boundary
/// and v inputs near the diagonal x = y, where gradient entries are too small
/// for central differences to resolve.
std::vector<std::size_t> gradient_sample_inputs(const BurgersConfig& cfg);

/// Central differences with cfg.fd_epsilon at the sample inputs.
GradientCheck check_gradient(const BurgersConfig& cfg, const std::vector<double>& gradient, double tolerance = 1e-5);

struct BenchmarkResult {
  TapeReport report;
  std::vector<double> gradient;
  double objective_value = 0.0;
};

/// Records and reverses the solver with cfg.manager, one warm-up run plus
/// cfg.repetitions timed runs. The report holds averaged timings and the
/// tape statistics of the last run.
BenchmarkResult run_benchmark(const BurgersConfig& cfg);

/// Relative difference used for gradient comparisons: |a - b| / max(|a|, |b|),
/// zero when both vanish.
double relative_difference(double a, double b);

/// Statement-count law of the manager used for the report.
bool statement_law_holds(const TapeReport& report);

}  // namespace adix::burgers
