#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>

#include "antrope/kahan.hpp"

namespace antrope {

inline constexpr double euler_gamma = 0.5772156649015328606065120900824024;
inline constexpr long double euler_gamma_long = 0.577215664901532860606512090082402431042L;

// Digamma via upward recurrence into the asymptotic regime. With the
// argument shifted to >= 10 the truncated Bernoulli series below is
// accurate to well under 1e-15 relative.
inline double digamma(double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw std::domain_error("digamma: argument must be positive and finite");
  }
  double result = 0.0;
  while (x < 10.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double z = inv * inv;
  const double series =
      ((((((-3617.0 / 8160.0 * z + 1.0 / 12.0) * z - 691.0 / 32760.0) * z + 1.0 / 132.0) * z -
         1.0 / 240.0) *
            z +
        1.0 / 252.0) *
           z -
       1.0 / 120.0) *
          z +
      1.0 / 12.0;
  return result + std::log(x) - 0.5 * inv - z * series;
}

// H_m = 1 + 1/2 + ... + 1/m. Compensated direct summation up to 10^7
// terms; beyond that the asymptotic expansion around ln m is already far
// more accurate than the 1e-12 target.
inline double harmonic_number(std::uint64_t m) {
  if (m == 0) throw std::domain_error("harmonic_number: m must be >= 1");
  if (m <= 10'000'000ull) {
    KahanAccumulator<double> sum;
    for (std::uint64_t i = 1; i <= m; ++i) sum += 1.0 / static_cast<double>(i);
    return sum.value();
  }
  const double md = static_cast<double>(m);
  const double z = 1.0 / (md * md);
  return std::log(md) + euler_gamma + 0.5 / md -
         z * (1.0 / 12.0 - z * (1.0 / 120.0 - z * (1.0 / 252.0 - z / 240.0)));
}

namespace detail {

// Long-double harmonic number for crossing searches: exact-ish direct sums
// when small, asymptotic otherwise. Error stays a few orders of magnitude
// below the gap 1/m between consecutive values across the searchable range.
inline long double harmonic_number_long(std::uint64_t m) {
  if (m == 0) return 0.0L;
  if (m <= 65536) {
    long double sum = 0.0L;
    for (std::uint64_t i = m; i >= 1; --i) sum += 1.0L / static_cast<long double>(i);
    return sum;
  }
  const long double md = static_cast<long double>(m);
  const long double z = 1.0L / (md * md);
  return logl(md) + euler_gamma_long + 0.5L / md -
         z * (1.0L / 12.0L -
              z * (1.0L / 120.0L - z * (1.0L / 252.0L - z * (1.0L / 240.0L - z / 132.0L))));
}

}  // namespace detail

// Result of inverting m -> H_m. When the minimal index fits the searchable
// integer range the answer is bracketed exactly and `m` is set; otherwise
// only the logarithm is meaningful and carries an explicit error bound.
struct HarmonicInversion {
  std::optional<std::uint64_t> m;
  double log10_m = 0.0;
  double log10_error = 0.0;
  bool exact = false;
};

// Minimal m with H_m >= c. The asymptotic inverse exp(c - gamma) - 1/2
// lands within a step or two of the crossing; a short walk with the
// long-double harmonic evaluator pins it down. Above c = 34 the gap
// 1/m between consecutive harmonic numbers approaches the evaluator's own
// error, so the result degrades to log form by design.
inline HarmonicInversion invert_harmonic(double c) {
  if (!std::isfinite(c) || c < 0.0) {
    throw std::domain_error("invert_harmonic: c must be finite and >= 0");
  }
  if (c <= 1.0) {
    return HarmonicInversion{1, 0.0, 0.0, true};
  }

  if (c <= 34.0) {
    const long double target = static_cast<long double>(c);
    const long double guess = expl(target - euler_gamma_long) - 0.5L;
    std::uint64_t m = guess < 1.0L ? 1 : static_cast<std::uint64_t>(guess);
    for (int i = 0; i < 128 && detail::harmonic_number_long(m) < target; ++i) ++m;
    for (int i = 0; i < 128 && m > 1 && detail::harmonic_number_long(m - 1) >= target; ++i) --m;
    const double log10_m = std::log10(static_cast<double>(m));
    return HarmonicInversion{m, log10_m,
                             std::numeric_limits<double>::epsilon() * std::abs(log10_m), true};
  }

  // ln m = c - gamma - 1/(2m) + O(m^-2); the 1/(2m) correction is below
  // double resolution for every c that reaches this branch, so the error
  // bound is dominated by the rounding of c itself.
  constexpr double ln10 = 2.302585092994045684;
  const double log10_m = (c - euler_gamma) / ln10;
  const double rounding = (std::nextafter(c, std::numeric_limits<double>::infinity()) - c) +
                          4.0 * std::numeric_limits<double>::epsilon() * std::abs(log10_m);
  const double truncation = 0.5 * std::exp(euler_gamma - c);
  return HarmonicInversion{std::nullopt, log10_m, (rounding + truncation) / ln10, false};
}

// Sum_{i=0}^{m-1} 1/(r + i), the generalized harmonic block behind the
// constant-parameter solver, by compensated direct summation.
inline double generalized_harmonic_direct(std::uint64_t m, double r) {
  if (!std::isfinite(r) || r <= 0.0) {
    throw std::domain_error("generalized_harmonic_direct: r must be positive and finite");
  }
  KahanAccumulator<double> sum;
  for (std::uint64_t i = 0; i < m; ++i) sum += 1.0 / (r + static_cast<double>(i));
  return sum.value();
}

// Same sum via the digamma telescoping identity; valid for any m >= 0
// representable as a double, including values far beyond direct reach.
inline double generalized_harmonic_digamma(double m, double r) {
  if (!std::isfinite(r) || r <= 0.0) {
    throw std::domain_error("generalized_harmonic_digamma: r must be positive and finite");
  }
  if (!std::isfinite(m) || m < 0.0) {
    throw std::domain_error("generalized_harmonic_digamma: m must be finite and >= 0");
  }
  return digamma(r + m) - digamma(r);
}

}  // namespace antrope
