#include "adix/burgers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "adix/active_real.hpp"
#include "adix/jacobian_tape.hpp"

namespace adix::burgers {

void BurgersConfig::validate() const {
  if (grid_n < 3) {
    throw std::invalid_argument("burgers: grid must have at least 3 points per side");
  }
  if (iterations < 1) {
    throw std::invalid_argument("burgers: at least one iteration is required");
  }
  if (!(reynolds > 0.0)) {
    throw std::invalid_argument("burgers: Reynolds number must be positive");
  }
  if (vector_dim < 1) {
    throw std::invalid_argument("burgers: vector dimension must be positive");
  }
  if (block_size < 1) {
    throw std::invalid_argument("burgers: block size must be positive");
  }
  if (!zero_adjoint_on_reverse && manager != ManagerKind::linear) {
    throw std::invalid_argument("burgers: --zero-adjoint-reverse off requires the linear manager");
  }
  if (!(fd_epsilon > 0.0)) {
    throw std::invalid_argument("burgers: finite-difference step must be positive");
  }
  if (repetitions < 1) {
    throw std::invalid_argument("burgers: at least one repetition is required");
  }
  const double t_end = iterations * dt();
  if (std::abs(1.0 - 2.0 * t_end * t_end) < 1e-12 || t_end >= 1.0 / std::sqrt(2.0)) {
    throw std::invalid_argument("burgers: the simulated time reaches the singularity of the exact solution");
  }
}

std::vector<std::size_t> interior_indices(int grid_n) {
  std::vector<std::size_t> indices;
  indices.reserve(static_cast<std::size_t>(grid_n - 2) * (grid_n - 2));
  for (int j = 1; j < grid_n - 1; ++j) {
    for (int i = 1; i < grid_n - 1; ++i) {
      indices.push_back(static_cast<std::size_t>(j) * grid_n + i);
    }
  }
  return indices;
}

SolutionField<double> initial_field(const BurgersConfig& cfg) {
  SolutionField<double> field(cfg.grid_n);
  const double dx = cfg.dx();
  for (int j = 0; j < cfg.grid_n; ++j) {
    for (int i = 0; i < cfg.grid_n; ++i) {
      const auto [u, v] = exact_solution(i * dx, j * dx, 0.0);
      field.u[field.index(i, j)] = u;
      field.v[field.index(i, j)] = v;
    }
  }
  return field;
}

double passive_objective(const BurgersConfig& cfg, const SolutionField<double>& initial) {
  SolutionField<double> field = initial;
  solve(field, cfg);
  return objective(field);
}

std::vector<std::size_t> gradient_sample_inputs(const BurgersConfig& cfg) {
  const std::size_t interior = cfg.interior_points();
  const std::size_t side = static_cast<std::size_t>(cfg.grid_n - 2);
  // Entries next to the pinned boundary, and v entries near the line x = y
  // where v is antisymmetric, shrink towards zero; central differences there
  // resolve mostly round-off.
  const std::size_t band = std::max<std::size_t>(1, side / 8);
  auto near_edge = [&](std::size_t c) { return c < band || c + band >= side; };
  std::vector<std::size_t> candidates;
  candidates.reserve(2 * interior);
  for (std::size_t k = 0; k < 2 * interior; ++k) {
    const std::size_t point = k % interior;
    const std::size_t i = point % side;
    const std::size_t j = point / side;
    const std::size_t distance = i > j ? i - j : j - i;
    if (near_edge(i) || near_edge(j) || (k >= interior && distance < band)) {
      continue;
    }
    candidates.push_back(k);
  }
  const std::size_t wanted = std::min<std::size_t>(static_cast<std::size_t>(std::max(cfg.fd_samples, 0)),
                                                   candidates.size());
  std::vector<std::size_t> samples;
  samples.reserve(wanted);
  for (std::size_t s = 0; s < wanted; ++s) {
    // Offset by half a stride so the samples stay off the first/last rows.
    const std::size_t pos = (2 * s + 1) * candidates.size() / (2 * wanted);
    samples.push_back(candidates[pos]);
  }
  return samples;
}

double relative_difference(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0.0) {
    return 0.0;
  }
  return std::abs(a - b) / scale;
}

GradientCheck check_gradient(const BurgersConfig& cfg, const std::vector<double>& gradient, double tolerance) {
  const SolutionField<double> initial = initial_field(cfg);
  const std::vector<std::size_t> interior = interior_indices(cfg.grid_n);
  GradientCheck check;
  check.passed = true;
  for (std::size_t input : gradient_sample_inputs(cfg)) {
    const bool is_u = input < interior.size();
    const std::size_t point = interior[is_u ? input : input - interior.size()];
    SolutionField<double> plus = initial;
    SolutionField<double> minus = initial;
    (is_u ? plus.u : plus.v)[point] += cfg.fd_epsilon;
    (is_u ? minus.u : minus.v)[point] -= cfg.fd_epsilon;
    const double fd = (passive_objective(cfg, plus) - passive_objective(cfg, minus)) / (2.0 * cfg.fd_epsilon);

    GradientSample sample{.input = input, .adjoint = gradient.at(input), .finite_difference = fd};
    sample.relative_error = relative_difference(sample.adjoint, fd);
    check.max_relative_error = std::max(check.max_relative_error, sample.relative_error);
    if (!(sample.relative_error <= tolerance)) {
      check.passed = false;
    }
    check.samples.push_back(sample);
  }
  if (check.samples.empty()) {
    check.passed = false;
  }
  return check;
}

bool statement_law_holds(const TapeReport& r) {
  switch (r.manager) {
    case ManagerKind::linear:
      return r.statement_entries == r.s_a + r.s_i;
    case ManagerKind::reuse:
      return r.statement_entries == r.s_a + r.s_c;
    case ManagerKind::use_count:
      return r.statement_entries == r.s_a + r.s_o;
  }
  return false;
}

namespace {

using Clock = std::chrono::steady_clock;

template <class Manager>
Manager make_manager(const BurgersConfig& cfg) {
  if constexpr (Manager::kKind == ManagerKind::linear) {
    return Manager{};
  } else {
    return Manager{cfg.block_size};
  }
}

template <class Manager>
BenchmarkResult run_with(const BurgersConfig& cfg) {
  using Tape = JacobianTape<Manager>;
  using Real = ActiveReal<Tape>;

  Tape tape(TapeOptions{.zero_adjoint_on_reverse = cfg.zero_adjoint_on_reverse, .vector_dim = cfg.vector_dim},
            make_manager<Manager>(cfg));
  const SolutionField<double> initial = initial_field(cfg);
  const std::vector<std::size_t> interior = interior_indices(cfg.grid_n);

  BenchmarkResult result;
  std::vector<Identifier> input_ids(cfg.input_count());
  double record_total = 0.0;
  double reverse_total = 0.0;

  for (int run = 0; run <= cfg.repetitions; ++run) {
    // Run 0 is the warm-up; it also sizes the tape storage for the timed runs.
    const auto record_start = Clock::now();
    tape.reset_tape();
    tape.start_recording();
    Identifier output_id = kPassiveIdentifier;
    {
      SolutionField<Real> field(cfg.grid_n);
      for (std::size_t k = 0; k < field.u.size(); ++k) {
        field.u[k] = initial.u[k];
        field.v[k] = initial.v[k];
      }
      for (std::size_t k = 0; k < interior.size(); ++k) {
        register_input(field.u[interior[k]]);
        input_ids[k] = field.u[interior[k]].identifier();
      }
      for (std::size_t k = 0; k < interior.size(); ++k) {
        register_input(field.v[interior[k]]);
        input_ids[interior.size() + k] = field.v[interior[k]].identifier();
      }
      solve(field, cfg);
      Real y = objective(field);
      register_output(y);
      output_id = y.identifier();
      result.objective_value = y.value();
      tape.stop_recording();
      const auto record_end = Clock::now();

      for (std::size_t lane = 0; lane < cfg.vector_dim; ++lane) {
        tape.set_adjoint(output_id, lane, 1.0);
      }
      const auto reverse_start = Clock::now();
      tape.evaluate_reverse();
      const auto reverse_end = Clock::now();

      if (run > 0) {
        record_total += std::chrono::duration<double>(record_end - record_start).count();
        reverse_total += std::chrono::duration<double>(reverse_end - reverse_start).count();
      }
      if (run == cfg.repetitions) {
        result.report = measure_tape(tape);
        result.gradient.resize(input_ids.size());
        for (std::size_t k = 0; k < input_ids.size(); ++k) {
          result.gradient[k] = tape.get_adjoint(input_ids[k], 0);
        }
      }
    }
  }
  result.report.record_seconds = record_total / cfg.repetitions;
  result.report.reverse_seconds = reverse_total / cfg.repetitions;
  return result;
}

}  // namespace

BenchmarkResult run_benchmark(const BurgersConfig& cfg) {
  cfg.validate();
  switch (cfg.manager) {
    case ManagerKind::linear:
      return run_with<LinearIndexManager>(cfg);
    case ManagerKind::reuse:
      return run_with<ReuseIndexManager>(cfg);
    case ManagerKind::use_count:
      return run_with<UseCountIndexManager>(cfg);
  }
  throw std::invalid_argument("burgers: unknown manager");
}

}  // namespace adix::burgers
