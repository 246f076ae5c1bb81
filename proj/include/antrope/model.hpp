#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>

#include "antrope/distributions.hpp"
#include "antrope/kahan.hpp"

namespace antrope {

// One instant of the process: after t whole seconds the ant sits at
// `position` on a rope of current `length`, having accumulated `fraction`
// of the journey. The compensated accumulator rides along inside the state
// so the correction term survives across advances; the per-second fraction
// increments shrink like 1/n and would otherwise be absorbed into rounding.
struct RopeState {
  std::uint64_t t = 0;
  double position = 0.0;
  double length = 1.0;
  KahanAccumulator<double> fraction{};
  bool terminal = false;
};

struct ProcessSpec {
  double initial_length;
  DistributionSpec step_dist;
  DistributionSpec stretch_dist;

  ProcessSpec(double initial_length_, DistributionSpec step, DistributionSpec stretch)
      : initial_length(initial_length_),
        step_dist(std::move(step)),
        stretch_dist(std::move(stretch)) {
    if (!std::isfinite(initial_length) || initial_length <= 0.0) {
      throw std::domain_error("process spec requires initial length > 0");
    }
  }

  RopeState initial_state() const {
    RopeState s;
    s.length = initial_length;
    return s;
  }
};

namespace detail {
inline void require_positive_finite(double value, const char* what) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw std::domain_error(std::string("advance: ") + what + " must be positive and finite");
  }
}
}  // namespace detail

// One second of evolution: the ant moves `step` units, then the rope
// stretches by `stretch` units, carrying the ant proportionally. The
// end-of-rope check sits between the two sub-steps, so a move that reaches
// the end wins before any stretch happens; that state is marked terminal
// and no stretch is applied. The fraction increment divides by the
// pre-stretch length.
inline RopeState advance(const RopeState& state, double step, double stretch) {
  if (state.terminal) {
    throw std::logic_error("advance: process already reached the end of the rope");
  }
  detail::require_positive_finite(step, "step");
  detail::require_positive_finite(stretch, "stretch");
  if (!std::isfinite(state.length) || state.length <= 0.0 ||
      !std::isfinite(state.position) || state.position < 0.0) {
    throw std::domain_error("advance: state is not a valid rope state");
  }

  RopeState next = state;
  next.t = state.t + 1;
  next.fraction += step / state.length;

  const double moved = state.position + step;
  if (moved >= state.length) {
    next.position = moved;
    next.terminal = true;
    return next;
  }

  // (moved / length) * (length + stretch) rather than moved * (1 + s/l):
  // the explicit ratio keeps position/length invariant across the stretch
  // to within a couple of ulps.
  next.position = (moved / state.length) * (state.length + stretch);
  next.length = state.length + stretch;
  return next;
}

// Partial sum x_0/d_0 + x_1/d_1 + ... + x_{m-1}/d_{m-1} where
// d_i = l0 + stretches[0] + ... + stretches[i-1]. Denominators accumulate
// with plain addition, matching how advance grows the rope length, so this
// closed form and the iterated simulation see bitwise-identical divisors.
inline double progress_fraction(std::span<const double> steps, double initial_length,
                                std::span<const double> stretches) {
  if (steps.empty() || stretches.size() != steps.size() - 1) {
    throw std::invalid_argument(
        "progress_fraction: need m steps and exactly m-1 stretches, m >= 1");
  }
  if (!std::isfinite(initial_length) || initial_length <= 0.0) {
    throw std::domain_error("progress_fraction: initial length must be positive and finite");
  }
  for (double x : steps) detail::require_positive_finite(x, "step");
  for (double l : stretches) detail::require_positive_finite(l, "stretch");

  KahanAccumulator<double> sum;
  double denom = initial_length;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    sum += steps[i] / denom;
    if (i + 1 < steps.size()) denom += stretches[i];
  }
  return sum.value();
}

}  // namespace antrope
