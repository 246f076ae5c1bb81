#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>

#include "antrope/format.hpp"
#include "antrope/normal.hpp"
#include "antrope/rng.hpp"

namespace antrope {

// Positive-support distribution families for step and stretch increments.
// Every family consumes exactly one raw 64-bit draw per variate, so a
// trajectory's draw count is independent of which distributions it mixes.

struct Constant {
  double value;
};

struct Uniform {
  double lo;
  double hi;
};

struct Exponential {
  double mean;
};

struct LogNormal {
  double log_mean;
  double log_sd;
};

struct Pareto {
  double scale;
  double shape;
};

class DistributionSpec {
 public:
  using Family = std::variant<Constant, Uniform, Exponential, LogNormal, Pareto>;

  explicit DistributionSpec(Family family) : family_(family) { validate(); }

  DistributionSpec(const DistributionSpec&) = default;
  DistributionSpec& operator=(const DistributionSpec&) = default;

  // Inverse-transform sampling from one uniform draw. unit_open never
  // returns 0 or 1, so logs and powers below stay finite and every variate
  // is strictly positive.
  double sample(Substream& stream) const {
    const double u = stream.next_unit();
    return std::visit(
        [u](const auto& f) -> double {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, Constant>) {
            return f.value;  // draw consumed anyway, keeping streams aligned
          } else if constexpr (std::is_same_v<F, Uniform>) {
            return f.lo + (f.hi - f.lo) * u;
          } else if constexpr (std::is_same_v<F, Exponential>) {
            return -f.mean * std::log(u);
          } else if constexpr (std::is_same_v<F, LogNormal>) {
            return std::exp(f.log_mean + f.log_sd * inverse_normal_cdf(u));
          } else {
            return f.scale * std::pow(u, -1.0 / f.shape);
          }
        },
        family_);
  }

  // Analytic mean; +infinity marks the heavy-tailed case without a mean.
  double mean() const {
    return std::visit(
        [](const auto& f) -> double {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, Constant>) {
            return f.value;
          } else if constexpr (std::is_same_v<F, Uniform>) {
            return 0.5 * (f.lo + f.hi);
          } else if constexpr (std::is_same_v<F, Exponential>) {
            return f.mean;
          } else if constexpr (std::is_same_v<F, LogNormal>) {
            return std::exp(f.log_mean + 0.5 * f.log_sd * f.log_sd);
          } else {
            if (f.shape > 1.0) return f.shape * f.scale / (f.shape - 1.0);
            return std::numeric_limits<double>::infinity();
          }
        },
        family_);
  }

  bool has_finite_mean() const { return std::isfinite(mean()); }

  const Family& family() const { return family_; }

  // Grammar: "kind:key=value,key=value". Kinds and keys:
  //   constant:c=V           uniform:a=A,b=B        exponential:mean=M
  //   lognormal:log_mean=M,log_sd=S                 pareto:scale=S,shape=A
  static DistributionSpec parse(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos || colon == 0) {
      throw std::invalid_argument("distribution grammar: expected 'kind:key=value,...', got '" +
                                  text + "'");
    }
    const std::string kind = text.substr(0, colon);

    std::map<std::string, double> kv;
    std::size_t pos = colon + 1;
    while (pos < text.size()) {
      auto comma = text.find(',', pos);
      if (comma == std::string::npos) comma = text.size();
      const std::string pair = text.substr(pos, comma - pos);
      const auto eq = pair.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == pair.size()) {
        throw std::invalid_argument("distribution grammar: bad parameter '" + pair + "'");
      }
      const std::string key = pair.substr(0, eq);
      double value;
      try {
        std::size_t consumed = 0;
        value = std::stod(pair.substr(eq + 1), &consumed);
        if (consumed != pair.size() - eq - 1) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw std::invalid_argument("distribution grammar: bad number in '" + pair + "'");
      }
      if (!kv.emplace(key, value).second) {
        throw std::invalid_argument("distribution grammar: duplicate key '" + key + "'");
      }
      pos = comma + 1;
    }

    auto need = [&](const char* key) {
      auto it = kv.find(key);
      if (it == kv.end()) {
        throw std::invalid_argument("distribution grammar: " + kind + " requires key '" + key +
                                    "'");
      }
      const double value = it->second;
      kv.erase(it);
      return value;
    };
    auto done = [&] {
      if (!kv.empty()) {
        throw std::invalid_argument("distribution grammar: unknown key '" + kv.begin()->first +
                                    "' for kind '" + kind + "'");
      }
    };

    Family family;
    if (kind == "constant") {
      family = Constant{need("c")};
    } else if (kind == "uniform") {
      const double a = need("a");
      family = Uniform{a, need("b")};
    } else if (kind == "exponential") {
      family = Exponential{need("mean")};
    } else if (kind == "lognormal") {
      const double m = need("log_mean");
      family = LogNormal{m, need("log_sd")};
    } else if (kind == "pareto") {
      const double s = need("scale");
      family = Pareto{s, need("shape")};
    } else {
      throw std::invalid_argument("distribution grammar: unknown kind '" + kind + "'");
    }
    done();
    return DistributionSpec(family);
  }

  std::string to_string() const {
    return std::visit(
        [](const auto& f) -> std::string {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, Constant>) {
            return "constant:c=" + format_double(f.value);
          } else if constexpr (std::is_same_v<F, Uniform>) {
            return "uniform:a=" + format_double(f.lo) + ",b=" + format_double(f.hi);
          } else if constexpr (std::is_same_v<F, Exponential>) {
            return "exponential:mean=" + format_double(f.mean);
          } else if constexpr (std::is_same_v<F, LogNormal>) {
            return "lognormal:log_mean=" + format_double(f.log_mean) +
                   ",log_sd=" + format_double(f.log_sd);
          } else {
            return "pareto:scale=" + format_double(f.scale) + ",shape=" + format_double(f.shape);
          }
        },
        family_);
  }

 private:
  void validate() const {
    std::visit(
        [](const auto& f) {
          using F = std::decay_t<decltype(f)>;
          auto finite = [](double x) { return std::isfinite(x); };
          if constexpr (std::is_same_v<F, Constant>) {
            if (!finite(f.value) || f.value <= 0.0) {
              throw std::domain_error("constant distribution requires c > 0");
            }
          } else if constexpr (std::is_same_v<F, Uniform>) {
            if (!finite(f.lo) || !finite(f.hi) || !(0.0 < f.lo && f.lo < f.hi)) {
              throw std::domain_error("uniform distribution requires 0 < a < b");
            }
          } else if constexpr (std::is_same_v<F, Exponential>) {
            if (!finite(f.mean) || f.mean <= 0.0) {
              throw std::domain_error("exponential distribution requires mean > 0");
            }
          } else if constexpr (std::is_same_v<F, LogNormal>) {
            if (!finite(f.log_mean) || !finite(f.log_sd) || f.log_sd <= 0.0) {
              throw std::domain_error("lognormal distribution requires finite log_mean and log_sd > 0");
            }
          } else {
            if (!finite(f.scale) || !finite(f.shape) || f.scale <= 0.0 || f.shape <= 0.0) {
              throw std::domain_error("pareto distribution requires scale > 0 and shape > 0");
            }
          }
        },
        family_);
  }

  Family family_;
};

}  // namespace antrope
