#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "antrope/harmonic.hpp"
#include "antrope/model.hpp"
#include "antrope/rational.hpp"
#include "antrope/rng.hpp"

namespace antrope {

inline constexpr std::uint64_t kDefaultCap = 10'000'000ull;

// Outcome of one simulated trajectory. An empty hitting_time means the
// trajectory was censored: it ran exactly `cap` seconds without the
// accumulated fraction reaching 1.
struct TrajectoryRecord {
  std::uint64_t substream_id = 0;
  std::optional<std::uint64_t> hitting_time;
  std::uint64_t cap = 0;
  double final_fraction = 0.0;

  bool censored() const { return !hitting_time.has_value(); }
};

// Runs one trajectory on the substream derived from (master_seed,
// substream_id). Each simulated second consumes exactly two raw draws,
// step then stretch, including the final second (the stretch variate drawn
// alongside a terminal step is discarded by the model). That keeps the
// draw schedule a pure function of the second index.
inline TrajectoryRecord simulate_trajectory(const ProcessSpec& spec, std::uint64_t substream_id,
                                            std::uint64_t master_seed, std::uint64_t cap) {
  if (cap == 0) {
    throw std::invalid_argument("simulate_trajectory: cap must be >= 1");
  }
  Substream stream(master_seed, substream_id);
  RopeState state = spec.initial_state();
  while (state.t < cap) {
    const double step = spec.step_dist.sample(stream);
    const double stretch = spec.stretch_dist.sample(stream);
    state = advance(state, step, stretch);
    if (state.terminal || state.fraction.value() >= 1.0) {
      double final_fraction = state.fraction.value();
      if (state.terminal) {
        // position >= length here, so the ratio is >= 1 even when the
        // rounded fraction sum lands a hair below it.
        final_fraction = std::max(final_fraction, state.position / state.length);
      }
      return TrajectoryRecord{substream_id, state.t, cap, final_fraction};
    }
  }
  return TrajectoryRecord{substream_id, std::nullopt, cap, state.fraction.value()};
}

// Trajectories for substreams 0..n-1, in substream order. Workers pull
// indices from a shared counter and write into preallocated slots, so the
// result is identical for every parallelism_hint.
inline std::vector<TrajectoryRecord> run_batch(const ProcessSpec& spec,
                                               std::uint64_t n_trajectories,
                                               std::uint64_t master_seed, std::uint64_t cap,
                                               unsigned parallelism_hint = 1) {
  if (n_trajectories == 0) {
    throw std::invalid_argument("run_batch: n_trajectories must be >= 1");
  }
  if (cap == 0) {
    throw std::invalid_argument("run_batch: cap must be >= 1");
  }
  std::vector<TrajectoryRecord> records(n_trajectories);

  const unsigned workers = static_cast<unsigned>(
      std::min<std::uint64_t>(std::max(1u, parallelism_hint), n_trajectories));
  if (workers == 1) {
    for (std::uint64_t i = 0; i < n_trajectories; ++i) {
      records[i] = simulate_trajectory(spec, i, master_seed, cap);
    }
    return records;
  }

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        try {
          for (std::uint64_t i = next.fetch_add(1); i < n_trajectories;
               i = next.fetch_add(1)) {
            records[i] = simulate_trajectory(spec, i, master_seed, cap);
          }
        } catch (...) {
          std::scoped_lock lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next.store(n_trajectories);
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

enum class SolveMethod { ExactRational, CompensatedSum, DigammaAsymptotic };

inline const char* to_string(SolveMethod m) {
  switch (m) {
    case SolveMethod::ExactRational:
      return "exact";
    case SolveMethod::CompensatedSum:
      return "compensated";
    case SolveMethod::DigammaAsymptotic:
      return "asymptotic";
  }
  return "unknown";
}

// Answer of the constant-parameter solver. hitting_time saturates to
// +infinity once T exceeds double range; log10_hitting_time always holds.
// error_bound is a conservative enclosure width on the progress fraction
// evaluated at the reported time (0 for the exact route).
struct SolveReport {
  double hitting_time = 0.0;
  double log10_hitting_time = 0.0;
  SolveMethod method = SolveMethod::ExactRational;
  double error_bound = 0.0;
};

// Exact value of the partial sum x_0/l0 + x_1/(l0+l_1) + ... over
// rationals. Ground truth for everything the floating-point paths compute;
// denominators grow roughly like the lcm of the running lengths, so keep m
// at desk scale (~10^4).
inline Rational exact_fraction(std::span<const Rational> steps, const Rational& initial_length,
                               std::span<const Rational> stretches) {
  if (steps.empty() || stretches.size() != steps.size() - 1) {
    throw std::invalid_argument("exact_fraction: need m steps and exactly m-1 stretches, m >= 1");
  }
  if (initial_length.sign() <= 0) {
    throw std::domain_error("exact_fraction: initial length must be positive");
  }
  for (const auto& x : steps) {
    if (x.sign() <= 0) throw std::domain_error("exact_fraction: steps must be positive");
  }
  for (const auto& l : stretches) {
    if (l.sign() <= 0) throw std::domain_error("exact_fraction: stretches must be positive");
  }

  Rational sum;
  Rational denom = initial_length;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    sum += steps[i] / denom;
    if (i + 1 < steps.size()) denom += stretches[i];
  }
  return sum;
}

namespace detail {

// Fraction after m seconds of the constant-parameter process, by digamma
// telescoping: (x/L) * (psi(r+m) - psi(r)) with r = l0/L.
inline double constant_fraction_digamma(double m, double l0, double x, double L) {
  const double r = l0 / L;
  return (x / L) * (digamma(r + m) - digamma(r));
}

struct ExactScan {
  std::optional<std::uint64_t> hitting_time;
  bool completed = false;  // false: bit-size budget exhausted, result unusable
};

// Exact-rational crossing scan with a growth budget. Doubles are dyadic
// rationals, so arbitrary inputs are legal here, but unfriendly mantissas
// make the running denominator balloon; the budget turns that into a clean
// fallback instead of a multi-minute stall.
inline ExactScan exact_constant_scan(double l0, double x, double L, std::uint64_t limit) {
  const Rational xr = Rational::from_double(x);
  const Rational lr = Rational::from_double(L);
  Rational denom = Rational::from_double(l0);
  Rational sum;
  const Rational one(1);

  // Integer-like inputs stay far below this; mantissa-soup inputs trip it
  // within a few hundred terms.
  const std::size_t budget_bits = 200'000;

  for (std::uint64_t m = 1; m <= limit; ++m) {
    sum += xr / denom;
    if (sum >= one) return ExactScan{m, true};
    denom += lr;
    if ((m & 255u) == 0 && sum.bit_size() > budget_bits) {
      return ExactScan{std::nullopt, false};
    }
  }
  return ExactScan{std::nullopt, true};
}

}  // namespace detail

// Minimal m with x/l0 + x/(l0+L) + ... + x/(l0+(m-1)L) >= 1, i.e. the
// hitting time of the deterministic process with constant step x and
// constant stretch L. Ties (fraction exactly 1) count as reaching the end.
//
// Route selection: a digamma bracket first locates the scale, then the
// answer is recomputed by exact rationals (small m), by a compensated
// scan (m up to 10^7), or reported from the digamma/asymptotic inverse
// alone (astronomical m, log10 form).
inline SolveReport deterministic_hitting_time(double l0, double x, double L) {
  for (double v : {l0, x, L}) {
    if (!std::isfinite(v) || v <= 0.0) {
      throw std::domain_error("deterministic_hitting_time: inputs must be positive and finite");
    }
  }
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  constexpr double ln10 = 2.302585092994045684;

  // Upper range where binary search over digamma still resolves integers.
  constexpr double kSearchCeiling = 4.0e15;

  const auto fraction_at = [&](double m) { return detail::constant_fraction_digamma(m, l0, x, L); };

  std::optional<std::uint64_t> m_scale;
  if (fraction_at(kSearchCeiling) >= 1.0) {
    double lo = 0.0, hi = kSearchCeiling;  // invariant: f(lo) < 1 <= f(hi)
    if (fraction_at(1.0) >= 1.0) {
      m_scale = 1;
    } else {
      lo = 1.0;
      while (hi - lo > 0.5) {
        const double mid = std::floor(lo + (hi - lo) / 2.0);
        if (mid <= lo || mid >= hi) break;
        (fraction_at(mid) >= 1.0 ? hi : lo) = mid;
      }
      m_scale = static_cast<std::uint64_t>(hi);
    }
  }

  if (m_scale && *m_scale <= 20'000) {
    const auto scan = detail::exact_constant_scan(l0, x, L, *m_scale + 4);
    if (scan.completed && scan.hitting_time) {
      const double m = static_cast<double>(*scan.hitting_time);
      return SolveReport{m, std::log10(m), SolveMethod::ExactRational, 0.0};
    }
    // fall through to the compensated route on budget exhaustion
  }

  if (m_scale && *m_scale <= 10'000'000ull) {
    KahanAccumulator<double> sum;
    double denom = l0;
    const std::uint64_t limit = *m_scale + 4;
    for (std::uint64_t m = 1; m <= limit; ++m) {
      sum += x / denom;
      if (sum.value() >= 1.0) {
        const double md = static_cast<double>(m);
        return SolveReport{md, std::log10(md), SolveMethod::CompensatedSum,
                           8.0 * kEps * sum.value()};
      }
      denom += L;
    }
    // digamma scale estimate and direct scan disagree beyond slack; fall
    // through and report the asymptotic answer with its error bound
  }

  const double r = l0 / L;
  const double psi_r = digamma(r);
  if (m_scale) {
    const double m = static_cast<double>(*m_scale);
    const double psi_top = digamma(r + m);
    const double bound = (x / L) * (4.0 * kEps * (std::abs(psi_top) + std::abs(psi_r)) + 1e-14);
    return SolveReport{m, std::log10(m), SolveMethod::DigammaAsymptotic, bound};
  }

  // Beyond the searchable range: solve psi(r+m) = psi(r) + L/x in log
  // space. At this scale psi(r+m) = ln(m) to far below double resolution.
  const double t_ln = psi_r + L / x;
  const double log10_t = t_ln / ln10;
  const double bound = (x / L) * (4.0 * kEps * (std::abs(psi_r) + t_ln) + 1e-14);
  return SolveReport{std::exp(t_ln), log10_t, SolveMethod::DigammaAsymptotic, bound};
}

}  // namespace antrope
