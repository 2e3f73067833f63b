#pragma once

// Random straight-line programs over a handful of variable slots, an
// interpreter that runs them on any ActiveReal tape, and an independent
// forward-mode oracle for their gradients.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "adix/active_real.hpp"

namespace adix::testing {

enum class OpKind {
  input,     // slot = c, registered as input
  unary,     // slot = f(a, c)
  binary,    // slot = g(a, b)
  constant,  // slot = c (passive overwrite)
  copy,      // slot = a (copy assignment, a == dst allowed)
  release,   // explicit release, value kept
  destroy,   // end of the slot's lifetime
  reset,     // tape reset; recording continues
};

inline constexpr int kUnaryFunctions = 8;
inline constexpr int kBinaryFunctions = 6;

struct Op {
  OpKind kind = OpKind::constant;
  int dst = 0;
  int a = 0;
  int b = 0;
  int fn = 0;
  double c = 0.0;
};

struct Program {
  int slots = 0;
  std::vector<Op> ops;
  int output = 0;
};

struct ProgramShape {
  int slots = 6;
  int max_ops = 50;
  bool allow_reset = true;
};

/// How surviving variables cross a tape reset.
enum class ResetPolicy {
  passivate,  // every live slot keeps its value but drops its identifier
  keep,       // live slots keep their identifiers (reuse schemes only)
};

namespace detail {

// Both tables hand the right-hand side to `sink` unevaluated, so an active
// destination may appear among its own operands.
template <class T, class Sink>
void apply_unary(int fn, const T& a, double c, Sink&& sink) {
  using std::cos;
  using std::exp;
  using std::log;
  using std::sin;
  using std::sqrt;
  using std::tanh;
  switch (fn) {
    case 0:
      return sink(sin(a));
    case 1:
      return sink(cos(a) * c);
    case 2:
      return sink(tanh(a) + c);
    case 3:
      return sink(c - a);
    case 4:
      return sink(a / c);
    case 5:
      return sink(sqrt(a * a + 1.0));
    case 6:
      return sink(exp(-a * a));
    default:
      return sink(log(a * a + c * c + 1.0));
  }
}

template <class T, class Sink>
void apply_binary(int fn, const T& a, const T& b, Sink&& sink) {
  using std::sin;
  using std::tanh;
  switch (fn) {
    case 0:
      return sink(a + b);
    case 1:
      return sink(a - b);
    case 2:
      return sink(a * b);
    case 3:
      return sink(a / (b * b + 1.0));
    case 4:
      return sink(sin(a) * b + a);
    default:
      return sink(tanh(a * b) - 2.0 * a);
  }
}

}  // namespace detail

/// Plain double evaluation; used to reject programs that overflow.
inline std::optional<double> passive_value(const Program& p) {
  std::vector<std::optional<double>> s(static_cast<std::size_t>(p.slots));
  for (const Op& op : p.ops) {
    auto& dst = s[static_cast<std::size_t>(op.dst)];
    switch (op.kind) {
      case OpKind::input:
      case OpKind::constant:
        dst = op.c;
        break;
      case OpKind::unary:
        detail::apply_unary(op.fn, *s[static_cast<std::size_t>(op.a)], op.c, [&](double v) { dst = v; });
        break;
      case OpKind::binary:
        detail::apply_binary(op.fn, *s[static_cast<std::size_t>(op.a)], *s[static_cast<std::size_t>(op.b)],
                             [&](double v) { dst = v; });
        break;
      case OpKind::copy:
        dst = *s[static_cast<std::size_t>(op.a)];
        break;
      case OpKind::release:
      case OpKind::reset:
        break;
      case OpKind::destroy:
        dst.reset();
        break;
    }
    if (dst && (!std::isfinite(*dst) || std::abs(*dst) > 1e6)) {
      return std::nullopt;
    }
  }
  return s[static_cast<std::size_t>(p.output)];
}

/// Draws programs until one evaluates to finite, moderate values. The first
/// op is always an input and the output slot is live at the end.
inline Program random_program(std::mt19937_64& rng, const ProgramShape& shape = {}) {
  std::uniform_int_distribution<int> slot_dist(0, shape.slots - 1);
  std::uniform_int_distribution<int> length_dist(2, shape.max_ops);
  std::uniform_int_distribution<int> kind_dist(0, 99);
  std::uniform_int_distribution<int> unary_dist(0, kUnaryFunctions - 1);
  std::uniform_int_distribution<int> binary_dist(0, kBinaryFunctions - 1);
  std::uniform_real_distribution<double> value_dist(-1.5, 1.5);
  std::uniform_real_distribution<double> constant_dist(0.5, 2.0);

  while (true) {
    Program p;
    p.slots = shape.slots;
    std::vector<bool> live(static_cast<std::size_t>(shape.slots), false);
    auto pick_live = [&]() {
      std::vector<int> candidates;
      for (int k = 0; k < shape.slots; ++k) {
        if (live[static_cast<std::size_t>(k)]) {
          candidates.push_back(k);
        }
      }
      return candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng)];
    };

    const int length = length_dist(rng);
    for (int step = 0; step < length - 1; ++step) {
      Op op;
      op.dst = slot_dist(rng);
      const int roll = step == 0 ? 0 : kind_dist(rng);
      if (roll < 14) {
        op.kind = OpKind::input;
        op.c = value_dist(rng);
      } else if (roll < 36) {
        op.kind = OpKind::unary;
        op.a = pick_live();
        op.fn = unary_dist(rng);
        op.c = constant_dist(rng);
      } else if (roll < 64) {
        op.kind = OpKind::binary;
        op.a = pick_live();
        op.b = pick_live();
        op.fn = binary_dist(rng);
      } else if (roll < 68) {
        op.kind = OpKind::constant;
        op.c = value_dist(rng);
      } else if (roll < 84) {
        op.kind = OpKind::copy;
        op.a = pick_live();
      } else if (roll < 90) {
        op.kind = OpKind::release;
        op.dst = pick_live();
      } else if (roll < 97 || !shape.allow_reset) {
        op.kind = OpKind::destroy;
        op.dst = pick_live();
      } else {
        op.kind = OpKind::reset;
      }
      if (op.kind == OpKind::destroy) {
        live[static_cast<std::size_t>(op.dst)] = false;
        // Keep at least one value around for the operands of later ops.
        if (std::none_of(live.begin(), live.end(), [](bool b) { return b; })) {
          op.kind = OpKind::release;
          live[static_cast<std::size_t>(op.dst)] = true;
        }
      } else if (op.kind != OpKind::release && op.kind != OpKind::reset) {
        live[static_cast<std::size_t>(op.dst)] = true;
      }
      p.ops.push_back(op);
    }
    // Final assignment into the output slot.
    Op last;
    last.kind = OpKind::binary;
    last.a = pick_live();
    last.b = pick_live();
    last.fn = binary_dist(rng);
    last.dst = slot_dist(rng);
    p.ops.push_back(last);
    p.output = last.dst;

    if (passive_value(p)) {
      return p;
    }
  }
}

/// Register a, reset, register b, then let both go: surviving identifiers
/// must not enter a pool twice.
inline Program reset_hazard_program() {
  Program p;
  p.slots = 3;
  p.ops = {
      {.kind = OpKind::input, .dst = 0, .c = 2.0},
      {.kind = OpKind::reset},
      {.kind = OpKind::input, .dst = 1, .c = 3.0},
      {.kind = OpKind::binary, .dst = 2, .a = 0, .b = 1, .fn = 2},
      {.kind = OpKind::destroy, .dst = 0},
      {.kind = OpKind::destroy, .dst = 1},
  };
  p.output = 2;
  return p;
}

/// t = x0 * x0; y0 = t + x0; t dies; x1 is registered; y1 = y0 * x1.
/// At x = (2, 3): dy1/dx0 = (2 x0 + 1) x1 = 15, dy1/dx1 = x0^2 + x0 = 6.
inline Program mid_recording_input_program() {
  Program p;
  p.slots = 5;
  p.ops = {
      {.kind = OpKind::input, .dst = 0, .c = 2.0},
      {.kind = OpKind::binary, .dst = 2, .a = 0, .b = 0, .fn = 2},
      {.kind = OpKind::binary, .dst = 3, .a = 2, .b = 0, .fn = 0},
      {.kind = OpKind::destroy, .dst = 2},
      {.kind = OpKind::input, .dst = 1, .c = 3.0},
      {.kind = OpKind::binary, .dst = 4, .a = 3, .b = 1, .fn = 2},
  };
  p.output = 4;
  return p;
}

/// Inputs registered after the last reset, in registration order.
inline std::size_t final_segment_inputs(const Program& p) {
  std::size_t count = 0;
  for (const Op& op : p.ops) {
    if (op.kind == OpKind::reset) {
      count = 0;
    } else if (op.kind == OpKind::input) {
      count += 1;
    }
  }
  return count;
}

template <class Tape>
struct ProgramRun {
  double output_value = 0.0;
  bool output_active = false;
  /// d(output)/d(input) for the inputs of the final recording segment.
  std::vector<double> gradient;
  RecordingCounters counters;
  std::size_t statements = 0;
};

/// Runs `p` on `tape` (which must be the current tape of its type), seeds the
/// output with 1 and reverses. `after_op(slots, tape)` runs after every op,
/// while all slots are still alive.
template <class Tape, class AfterOp>
ProgramRun<Tape> run_program(const Program& p, Tape& tape, ResetPolicy policy, AfterOp&& after_op) {
  using Real = ActiveReal<Tape>;
  ProgramRun<Tape> run;
  tape.reset_tape();
  tape.start_recording();
  std::vector<Identifier> input_ids;
  {
    std::vector<std::optional<Real>> slots(static_cast<std::size_t>(p.slots));
    auto slot = [&](int k) -> std::optional<Real>& { return slots[static_cast<std::size_t>(k)]; };
    auto assign_to = [](std::optional<Real>& dst) {
      return [&dst](const auto& expr) {
        if (dst) {
          *dst = expr;
        } else {
          dst.emplace(expr);
        }
      };
    };
    for (const Op& op : p.ops) {
      auto& dst = slot(op.dst);
      switch (op.kind) {
        case OpKind::input:
          if (!dst) {
            dst.emplace();
          }
          *dst = op.c;
          register_input(*dst);
          input_ids.push_back(dst->identifier());
          break;
        case OpKind::unary:
          detail::apply_unary(op.fn, *slot(op.a), op.c, assign_to(dst));
          break;
        case OpKind::binary:
          detail::apply_binary(op.fn, *slot(op.a), *slot(op.b), assign_to(dst));
          break;
        case OpKind::constant:
          if (!dst) {
            dst.emplace();
          }
          *dst = op.c;
          break;
        case OpKind::copy:
          if (dst) {
            *dst = *slot(op.a);
          } else {
            dst.emplace(*slot(op.a));
          }
          break;
        case OpKind::release:
          dst->release();
          break;
        case OpKind::destroy:
          dst.reset();
          break;
        case OpKind::reset:
          tape.reset_tape();
          input_ids.clear();
          if (policy == ResetPolicy::passivate) {
            for (auto& s : slots) {
              if (s) {
                *s = s->value();
              }
            }
          }
          break;
      }
      after_op(slots, tape);
    }

    Real& y = *slot(p.output);
    register_output(y);
    after_op(slots, tape);
    tape.stop_recording();
    run.output_value = y.value();
    run.output_active = y.is_active();
    run.counters = tape.counters();
    run.statements = tape.statement_count();
    if (y.is_active()) {
      tape.set_adjoint(y.identifier(), 0, 1.0);
    }
    tape.evaluate_reverse();
    for (Identifier id : input_ids) {
      run.gradient.push_back(tape.get_adjoint(id, 0));
    }
  }
  return run;
}

template <class Tape>
ProgramRun<Tape> run_program(const Program& p, Tape& tape, ResetPolicy policy = ResetPolicy::passivate) {
  return run_program(p, tape, policy, [](const auto&, const auto&) {});
}

/// Forward-mode value with a dense gradient over the final-segment inputs.
struct Dual {
  double v = 0.0;
  std::vector<double> d;
};

/// Gradient of the program output by forward propagation of dual numbers,
/// with every derivative rule written out by hand.
inline Dual oracle_gradient(const Program& p) {
  const std::size_t n = final_segment_inputs(p);
  std::size_t inputs_before_final = 0;
  {
    std::size_t total = 0;
    for (const Op& op : p.ops) {
      total += op.kind == OpKind::input ? 1 : 0;
    }
    inputs_before_final = total - n;
  }

  std::vector<std::optional<Dual>> s(static_cast<std::size_t>(p.slots));
  auto constant = [&](double v) { return Dual{v, std::vector<double>(n, 0.0)}; };
  auto scaled = [&](const Dual& x, double k) {
    std::vector<double> d(n);
    for (std::size_t j = 0; j < n; ++j) {
      d[j] = k * x.d[j];
    }
    return d;
  };
  auto combine = [&](const Dual& x, double kx, const Dual& y, double ky) {
    std::vector<double> d(n);
    for (std::size_t j = 0; j < n; ++j) {
      d[j] = kx * x.d[j] + ky * y.d[j];
    }
    return d;
  };

  std::size_t seen_inputs = 0;
  for (const Op& op : p.ops) {
    auto& dst = s[static_cast<std::size_t>(op.dst)];
    switch (op.kind) {
      case OpKind::input: {
        Dual x = constant(op.c);
        if (seen_inputs >= inputs_before_final) {
          x.d[seen_inputs - inputs_before_final] = 1.0;
        }
        seen_inputs += 1;
        dst = std::move(x);
        break;
      }
      case OpKind::unary: {
        const Dual a = *s[static_cast<std::size_t>(op.a)];
        const double x = a.v;
        const double c = op.c;
        double v = 0.0;
        double dv = 0.0;
        switch (op.fn) {
          case 0:
            v = std::sin(x);
            dv = std::cos(x);
            break;
          case 1:
            v = std::cos(x) * c;
            dv = -std::sin(x) * c;
            break;
          case 2:
            v = std::tanh(x) + c;
            dv = 1.0 - std::tanh(x) * std::tanh(x);
            break;
          case 3:
            v = c - x;
            dv = -1.0;
            break;
          case 4:
            v = x / c;
            dv = 1.0 / c;
            break;
          case 5:
            v = std::sqrt(x * x + 1.0);
            dv = x / v;
            break;
          case 6:
            v = std::exp(-x * x);
            dv = -2.0 * x * v;
            break;
          default:
            v = std::log(x * x + c * c + 1.0);
            dv = 2.0 * x / (x * x + c * c + 1.0);
            break;
        }
        dst = Dual{v, scaled(a, dv)};
        break;
      }
      case OpKind::binary: {
        const Dual a = *s[static_cast<std::size_t>(op.a)];
        const Dual b = *s[static_cast<std::size_t>(op.b)];
        const double x = a.v;
        const double y = b.v;
        switch (op.fn) {
          case 0:
            dst = Dual{x + y, combine(a, 1.0, b, 1.0)};
            break;
          case 1:
            dst = Dual{x - y, combine(a, 1.0, b, -1.0)};
            break;
          case 2:
            dst = Dual{x * y, combine(a, y, b, x)};
            break;
          case 3: {
            const double q = y * y + 1.0;
            dst = Dual{x / q, combine(a, 1.0 / q, b, -2.0 * x * y / (q * q))};
            break;
          }
          case 4:
            dst = Dual{std::sin(x) * y + x, combine(a, std::cos(x) * y + 1.0, b, std::sin(x))};
            break;
          default: {
            const double t = std::tanh(x * y);
            const double sech2 = 1.0 - t * t;
            dst = Dual{t - 2.0 * x, combine(a, sech2 * y - 2.0, b, sech2 * x)};
            break;
          }
        }
        break;
      }
      case OpKind::constant:
        dst = constant(op.c);
        break;
      case OpKind::copy:
        dst = *s[static_cast<std::size_t>(op.a)];
        break;
      case OpKind::release:
        dst->d.assign(n, 0.0);
        break;
      case OpKind::destroy:
        dst.reset();
        break;
      case OpKind::reset:
        for (auto& x : s) {
          if (x) {
            x->d.assign(n, 0.0);
          }
        }
        break;
    }
  }
  return *s[static_cast<std::size_t>(p.output)];
}

}  // namespace adix::testing
