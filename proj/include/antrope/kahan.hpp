#pragma once

namespace antrope {

// Compensated (Kahan) summation. Tracks the rounding error of each addition
// and feeds it back into the next one, so long sums of shrinking terms keep
// nearly full double precision.
template <typename T = double>
struct KahanAccumulator {
  T sum{0};
  T compensation{0};

  KahanAccumulator() = default;
  explicit KahanAccumulator(T initial) : sum(initial) {}

  KahanAccumulator& operator+=(T value) {
    const T y = value - compensation;
    const T t = sum + y;
    compensation = (t - sum) - y;
    sum = t;
    return *this;
  }

  T value() const { return sum; }
  operator T() const { return sum; }
};

}  // namespace antrope
