#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "antrope/engines.hpp"
#include "antrope/harmonic.hpp"
#include "antrope/kahan.hpp"
#include "antrope/normal.hpp"
#include "antrope/rng.hpp"

namespace antrope {

// Empirical estimate of P(T > n) for n = 0..horizon. Censored trajectories
// ran their full cap, and horizon never exceeds any cap, so they count as
// "still going" at every n in range.
struct SurvivalCurve {
  std::uint64_t horizon = 0;
  std::vector<double> values;  // size horizon + 1
  std::uint64_t n_trajectories = 0;
  std::uint64_t n_censored = 0;
};

inline SurvivalCurve survival_curve(std::span<const TrajectoryRecord> records,
                                    std::uint64_t horizon) {
  if (records.empty()) {
    throw std::invalid_argument("survival_curve: records must be nonempty");
  }
  if (horizon == 0) {
    throw std::invalid_argument("survival_curve: horizon must be >= 1");
  }
  for (const auto& r : records) {
    if (horizon > r.cap) {
      throw std::invalid_argument("survival_curve: horizon exceeds a record's censoring cap");
    }
  }

  // counts[j] = #records with T = j for j <= horizon; the last bucket pools
  // T > horizon together with censored records.
  std::vector<std::uint64_t> counts(horizon + 2, 0);
  std::uint64_t censored = 0;
  for (const auto& r : records) {
    if (r.censored()) {
      ++censored;
      ++counts[horizon + 1];
    } else {
      ++counts[std::min<std::uint64_t>(*r.hitting_time, horizon + 1)];
    }
  }

  SurvivalCurve curve;
  curve.horizon = horizon;
  curve.n_trajectories = records.size();
  curve.n_censored = censored;
  curve.values.resize(horizon + 1);
  std::uint64_t still_running = records.size();
  const double total = static_cast<double>(records.size());
  for (std::uint64_t n = 0; n <= horizon; ++n) {
    still_running -= counts[n];  // records with T = n stop counting at n
    curve.values[n] = static_cast<double>(still_running) / total;
  }
  return curve;
}

// Sample mean of the non-censored hitting times with a normal-approximation
// confidence interval. Censoring biases the mean low, hence the warning;
// with every record censored there is nothing to average and the estimate
// is reported undefined.
struct MeanHittingTime {
  double mean = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::uint64_t n_used = 0;
  bool censored_warning = false;
  bool defined = false;
};

inline MeanHittingTime mean_hitting_time(std::span<const TrajectoryRecord> records,
                                         double confidence = 0.95) {
  if (records.empty()) {
    throw std::invalid_argument("mean_hitting_time: records must be nonempty");
  }
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw std::invalid_argument("mean_hitting_time: confidence must lie in (0,1)");
  }

  MeanHittingTime result;
  KahanAccumulator<double> sum;
  for (const auto& r : records) {
    if (r.censored()) {
      result.censored_warning = true;
    } else {
      sum += static_cast<double>(*r.hitting_time);
      ++result.n_used;
    }
  }
  if (result.n_used == 0) return result;

  const double n = static_cast<double>(result.n_used);
  result.defined = true;
  result.mean = sum.value() / n;

  double sd = 0.0;
  if (result.n_used > 1) {
    KahanAccumulator<double> sq;
    for (const auto& r : records) {
      if (r.censored()) continue;
      const double d = static_cast<double>(*r.hitting_time) - result.mean;
      sq += d * d;
    }
    sd = std::sqrt(sq.value() / (n - 1.0));
  }
  const double z = inverse_normal_cdf(0.5 + confidence / 2.0);
  const double half_width = z * sd / std::sqrt(n);
  result.lo = result.mean - half_width;
  result.hi = result.mean + half_width;
  return result;
}

// Running means and their deviations from a declared mean, for n = 1..len.
// The incremental mean update keeps constant sequences at deviation
// exactly 0 at every n, which a sum-then-divide evaluation cannot promise.
struct LlnPoint {
  std::uint64_t n = 0;
  double running_mean = 0.0;
  double deviation = 0.0;
};

inline std::vector<LlnPoint> lln_diagnostic(std::span<const double> draws, double declared_mean) {
  if (draws.empty()) {
    throw std::invalid_argument("lln_diagnostic: draws must be nonempty");
  }
  if (!std::isfinite(declared_mean)) {
    throw std::domain_error("lln_diagnostic: declared mean must be finite");
  }
  std::vector<LlnPoint> points;
  points.reserve(draws.size());
  double mean = 0.0;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    mean += (draws[i] - mean) / static_cast<double>(i + 1);
    points.push_back(LlnPoint{i + 1, mean, std::abs(mean - declared_mean)});
  }
  return points;
}

namespace detail {

// Deviations of the two running means at each n (1-based): steps against
// mu_x, and stretches with the initial length folded in against mu_l.
inline void running_deviations(std::span<const double> draws_x, std::span<const double> draws_l,
                               double initial_length, double mu_x, double mu_l,
                               std::vector<double>& dev_x, std::vector<double>& dev_l) {
  const std::size_t len = draws_x.size();
  dev_x.resize(len);
  dev_l.resize(len);
  double mean_x = 0.0;
  double mean_l = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    const double n = static_cast<double>(i + 1);
    mean_x += (draws_x[i] - mean_x) / n;
    mean_l += (draws_l[i] - mean_l) / n;
    dev_x[i] = std::abs(mean_x - mu_x);
    dev_l[i] = std::abs(mean_l + initial_length / n - mu_l);
  }
}

}  // namespace detail

// Smallest N such that for every n in [N, len] both running-mean deviations
// stay strictly below epsilon; empty if even n = len violates one. The
// stretch-side mean includes the initial length, mirroring how the rope's
// total length at time n is l0 plus the stretches so far.
inline std::optional<std::uint64_t> choose_block_length(std::span<const double> draws_x,
                                                        std::span<const double> draws_l,
                                                        double initial_length, double mu_x,
                                                        double mu_l, double epsilon) {
  if (draws_x.empty() || draws_x.size() != draws_l.size()) {
    throw std::invalid_argument(
        "choose_block_length: need equally many step and stretch draws, at least one each");
  }
  if (!std::isfinite(mu_x) || !std::isfinite(mu_l)) {
    throw std::domain_error("choose_block_length: declared means must be finite");
  }
  if (!std::isfinite(epsilon) || epsilon <= 0.0) {
    throw std::domain_error("choose_block_length: epsilon must be positive");
  }

  std::vector<double> dev_x, dev_l;
  detail::running_deviations(draws_x, draws_l, initial_length, mu_x, mu_l, dev_x, dev_l);

  std::size_t last_bad = 0;  // 1-based index of the last violating n, 0 if none
  for (std::size_t i = 0; i < dev_x.size(); ++i) {
    if (!(dev_x[i] < epsilon) || !(dev_l[i] < epsilon)) last_bad = i + 1;
  }
  if (last_bad == dev_x.size()) return std::nullopt;
  return last_bad + 1;
}

// Parameters of the blockwise bound: block length N, number of blocks m,
// and the SLLN tolerance epsilon they were chosen for.
struct BlockBoundParams {
  double epsilon = 0.0;
  std::uint64_t block_length = 0;
  std::uint64_t n_blocks = 0;
};

inline void validate(const BlockBoundParams& params, const char* where) {
  if (!std::isfinite(params.epsilon) || params.epsilon < 0.0) {
    throw std::domain_error(std::string(where) + ": epsilon must be finite and >= 0");
  }
  if (params.block_length == 0 || params.n_blocks == 0) {
    throw std::invalid_argument(std::string(where) + ": block length and count must be >= 1");
  }
}

// Partial sums B_1..B_m of the epsilon-degraded harmonic chain, each term
// (1/k) * (mu_x - (2k-1) eps) / (mu_l + eps). Terms whose numerator is
// not positive are kept as-is (the chain stays a valid lower bound); the
// first such block index is reported so callers can flag the vacuous tail.
struct BlockBound {
  std::vector<double> partial_sums;
  std::optional<std::uint64_t> first_vacuous_block;  // 1-based
};

inline BlockBound block_lower_bound(const BlockBoundParams& params, double mu_x, double mu_l) {
  validate(params, "block_lower_bound");
  if (!std::isfinite(mu_x) || !std::isfinite(mu_l)) {
    throw std::domain_error("block_lower_bound: means must be finite");
  }
  if (mu_l + params.epsilon <= 0.0) {
    throw std::domain_error("block_lower_bound: mu_l + epsilon must be positive");
  }

  BlockBound bound;
  bound.partial_sums.reserve(params.n_blocks);
  KahanAccumulator<double> sum;
  const double denom = mu_l + params.epsilon;
  for (std::uint64_t k = 1; k <= params.n_blocks; ++k) {
    const double numer = mu_x - static_cast<double>(2 * k - 1) * params.epsilon;
    if (numer <= 0.0 && !bound.first_vacuous_block) bound.first_vacuous_block = k;
    sum += numer / (static_cast<double>(k) * denom);
    bound.partial_sums.push_back(sum.value());
  }
  return bound;
}

// Outcome of checking the proof chain on one realized draw sequence.
// observed >= block_bound is pure algebra (each term's denominator only
// grows within a block); block_bound >= epsilon_bound additionally needs
// the SLLN deviations to be within epsilon at every block boundary, which
// is what a valid N certifies. holds demands the full chain.
struct BlockBoundReport {
  bool holds = false;
  double observed = 0.0;       // Eq. (2)-style partial sum over the mN draws
  double block_bound = 0.0;    // blockwise middle line with realized sums
  double epsilon_bound = 0.0;  // B_m from block_lower_bound
  bool precondition_ok = false;
};

inline BlockBoundReport verify_block_bound(std::span<const double> draws_x,
                                           std::span<const double> draws_l, double initial_length,
                                           const BlockBoundParams& params, double mu_x,
                                           double mu_l) {
  validate(params, "verify_block_bound");
  if (!std::isfinite(params.epsilon) || params.epsilon <= 0.0) {
    throw std::domain_error("verify_block_bound: epsilon must be positive");
  }
  const std::uint64_t needed = params.block_length * params.n_blocks;
  if (draws_x.size() < needed || draws_l.size() < needed) {
    throw std::invalid_argument("verify_block_bound: need at least block_length * n_blocks draws");
  }

  // The chain drops the x_0/l0 term: draws_x[i] plays X_{i+1}, and the
  // denominator after i+1 stretches is l0 + L_1 + ... + L_{i+1}.
  KahanAccumulator<long double> observed;
  KahanAccumulator<long double> block_bound;
  long double denom = initial_length;
  long double block_x = 0.0L;
  for (std::uint64_t i = 0; i < needed; ++i) {
    denom += draws_l[i];
    observed += static_cast<long double>(draws_x[i]) / denom;
    block_x += draws_x[i];
    if ((i + 1) % params.block_length == 0) {
      block_bound += block_x / denom;
      block_x = 0.0L;
    }
  }

  BlockBoundReport report;
  report.observed = static_cast<double>(observed.value());
  report.block_bound = static_cast<double>(block_bound.value());
  report.epsilon_bound = block_lower_bound(params, mu_x, mu_l).partial_sums.back();

  std::vector<double> dev_x, dev_l;
  detail::running_deviations(draws_x.first(needed), draws_l.first(needed), initial_length, mu_x,
                             mu_l, dev_x, dev_l);
  report.precondition_ok = true;
  for (std::uint64_t n = params.block_length; n <= needed; ++n) {
    if (!(dev_x[n - 1] < params.epsilon) || !(dev_l[n - 1] < params.epsilon)) {
      report.precondition_ok = false;
      break;
    }
  }

  report.holds = observed.value() >= block_bound.value() &&
                 report.block_bound >= report.epsilon_bound;
  return report;
}

// Convenience form: realizes the draws itself, steps from substream 0 and
// stretches from substream 1 under the given master seed, and declares the
// spec's analytic means. Deterministic, so a prior choose_block_length run
// on the same (spec, seed) saw a prefix-consistent sequence.
inline BlockBoundReport verify_block_bound(const ProcessSpec& spec, std::uint64_t master_seed,
                                           const BlockBoundParams& params) {
  validate(params, "verify_block_bound");
  if (!spec.step_dist.has_finite_mean() || !spec.stretch_dist.has_finite_mean()) {
    throw std::domain_error("verify_block_bound: both distributions need finite means");
  }
  const std::uint64_t needed = params.block_length * params.n_blocks;
  std::vector<double> draws_x(needed), draws_l(needed);
  Substream xs(master_seed, 0);
  Substream ls(master_seed, 1);
  for (auto& v : draws_x) v = spec.step_dist.sample(xs);
  for (auto& v : draws_l) v = spec.stretch_dist.sample(ls);
  return verify_block_bound(draws_x, draws_l, spec.initial_length, params,
                            spec.step_dist.mean(), spec.stretch_dist.mean());
}

}  // namespace antrope
