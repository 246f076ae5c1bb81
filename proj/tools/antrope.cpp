// Command-line front end: presets, batch simulation, deterministic solving,
// parameter sweeps, and proof-machinery diagnostics.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "antrope/antrope.hpp"

namespace {

using antrope::DistributionSpec;
using antrope::ExperimentConfig;
using antrope::format_double;
using antrope::ProcessSpec;
using antrope::Rational;

constexpr double kClassicLength = 100000.0;

int cmd_classic(const std::vector<std::uint64_t>& m_values) {
  std::cout << "m,fraction,exact\n";
  for (std::uint64_t m : m_values) {
    if (m == 0) throw std::invalid_argument("classic: m values must be >= 1");
    const std::vector<double> steps(m, 1.0);
    const std::vector<double> stretches(m - 1, kClassicLength);
    const double fraction = antrope::progress_fraction(steps, kClassicLength, stretches);

    const std::vector<Rational> steps_r(m, Rational(1));
    const std::vector<Rational> stretches_r(m - 1, Rational(100000));
    const Rational exact = antrope::exact_fraction(steps_r, Rational(100000), stretches_r);

    std::cout << m << ',' << format_double(fraction) << ',' << exact.to_string() << '\n';
  }
  const auto report = antrope::deterministic_hitting_time(kClassicLength, 1.0, kClassicLength);
  std::cout << "# log10(T) = " << format_double(report.log10_hitting_time) << '\n';
  return 0;
}

int cmd_solve(double l0, double x, double L) {
  const auto report = antrope::deterministic_hitting_time(l0, x, L);
  const char* method = antrope::to_string(report.method);
  if (std::isfinite(report.hitting_time) && report.hitting_time <= 0x1p53) {
    std::cout << "T = " << format_double(report.hitting_time) << " (" << method << ")\n";
  } else {
    std::cout << "log10(T) ≈ " << format_double(report.log10_hitting_time) << " (" << method
              << ")\n";
  }
  if (report.method != antrope::SolveMethod::ExactRational) {
    std::cout << "fraction error bound = " << format_double(report.error_bound) << '\n';
  }
  return 0;
}

int cmd_simulate(const ExperimentConfig& config) {
  const auto result = antrope::run_experiment(config);
  antrope::write_text_file(config.output_path, antrope::render_output(result, config));
  const std::uint64_t censored = result.survival.n_censored;
  std::cout << "wrote " << result.records.size() << " records to " << config.output_path
            << " (n_censored=" << censored << ")\n";
  if (censored > 0) {
    if (config.strict) {
      std::cerr << "error: " << censored << " trajectories censored at cap "
                << config.cap << " under --strict\n";
      return 1;
    }
    std::cerr << "warning: " << censored << " trajectories censored at cap " << config.cap
              << "; raise --cap or pass --strict to fail on this\n";
  }
  return 0;
}

struct SweepArgs {
  std::vector<double> l0_values;
  std::vector<std::string> step_specs;
  std::vector<std::string> stretch_specs;
  std::uint64_t n = 1000;
  std::uint64_t seed = 0;
  std::uint64_t cap = antrope::kDefaultCap;
  unsigned threads = 1;
  bool strict = false;
  bool exploration = false;
  std::string out;
};

// JSON config mirrors the flags; explicitly passed flags win.
void merge_sweep_config(const std::string& path, SweepArgs& args, const CLI::App& cmd) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("config file " + path + ": " + e.what());
  }
  const auto absent = [&](const char* flag) { return cmd.count(flag) == 0; };
  if (j.contains("l0") && absent("--l0")) args.l0_values = j["l0"].get<std::vector<double>>();
  if (j.contains("step") && absent("--step"))
    args.step_specs = j["step"].get<std::vector<std::string>>();
  if (j.contains("stretch") && absent("--stretch"))
    args.stretch_specs = j["stretch"].get<std::vector<std::string>>();
  if (j.contains("n") && absent("--n")) args.n = j["n"].get<std::uint64_t>();
  if (j.contains("seed") && absent("--seed")) args.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("cap") && absent("--cap")) args.cap = j["cap"].get<std::uint64_t>();
  if (j.contains("threads") && absent("--threads")) args.threads = j["threads"].get<unsigned>();
  if (j.contains("strict") && absent("--strict")) args.strict = j["strict"].get<bool>();
  if (j.contains("explore") && absent("--explore"))
    args.exploration = j["explore"].get<bool>();
  if (j.contains("out") && absent("--out")) args.out = j["out"].get<std::string>();
}

int cmd_sweep(const SweepArgs& args) {
  if (args.l0_values.empty() || args.step_specs.empty() || args.stretch_specs.empty()) {
    throw std::invalid_argument("sweep: grid must be nonempty (need --l0, --step, --stretch)");
  }
  if (args.out.empty()) {
    throw std::invalid_argument("sweep: --out is required");
  }

  std::string csv = "grid_index,l0,step,stretch,mean,ci_lo,ci_hi,n_censored\n";
  std::uint64_t grid_index = 0;
  bool any_censored = false;
  for (double l0 : args.l0_values) {
    for (const auto& step_text : args.step_specs) {
      for (const auto& stretch_text : args.stretch_specs) {
        const DistributionSpec step = DistributionSpec::parse(step_text);
        const DistributionSpec stretch = DistributionSpec::parse(stretch_text);
        ExperimentConfig config{ProcessSpec(l0, step, stretch)};
        config.n_trajectories = args.n;
        // one independent seed per grid point, derived so that reordering
        // or extending the grid never reuses a point's randomness
        config.master_seed = antrope::derive_key(args.seed, grid_index);
        config.cap = args.cap;
        config.horizon = std::min<std::uint64_t>(100, args.cap);
        config.parallelism = args.threads;
        config.exploration = args.exploration;
        config.validate();

        const auto records = antrope::run_batch(config.spec, config.n_trajectories,
                                                config.master_seed, config.cap,
                                                config.parallelism);
        const auto mean = antrope::mean_hitting_time(records, 0.95);
        std::uint64_t censored = 0;
        for (const auto& r : records) censored += r.censored() ? 1 : 0;
        any_censored = any_censored || censored > 0;

        const auto stat = [&](double v) {
          return mean.defined ? format_double(v) : std::string("nan");
        };
        csv += std::to_string(grid_index) + ',' + format_double(l0) + ',' + step.to_string() +
               ',' + stretch.to_string() + ',' + stat(mean.mean) + ',' + stat(mean.lo) + ',' +
               stat(mean.hi) + ',' + std::to_string(censored) + '\n';
        ++grid_index;
      }
    }
  }
  antrope::write_text_file(args.out, csv);
  std::cout << "wrote " << grid_index << " grid points to " << args.out << '\n';
  if (any_censored && args.strict) {
    std::cerr << "error: censored trajectories under --strict\n";
    return 1;
  }
  return 0;
}

struct DiagnoseArgs {
  double l0 = 1.0;
  std::string step_text;
  std::string stretch_text;
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  std::uint64_t m_blocks = 10;
  std::uint64_t sample_len = 100000;
  std::string lln_out;
};

int cmd_diagnose(const DiagnoseArgs& args) {
  const DistributionSpec step = DistributionSpec::parse(args.step_text);
  const DistributionSpec stretch = DistributionSpec::parse(args.stretch_text);
  const ProcessSpec spec(args.l0, step, stretch);
  if (!step.has_finite_mean() || !stretch.has_finite_mean()) {
    throw std::domain_error("diagnose: both distributions need finite means");
  }
  if (!(args.epsilon > 0.0)) {
    throw std::invalid_argument("diagnose: --epsilon must be > 0");
  }
  if (args.m_blocks == 0 || args.sample_len == 0) {
    throw std::invalid_argument("diagnose: --m-blocks and --sample-len must be >= 1");
  }

  const double mu_x = step.mean();
  const double mu_l = stretch.mean();
  std::cout << "mu_x = " << format_double(mu_x) << ", mu_l = " << format_double(mu_l) << '\n';

  // Substreams 0 and 1 are the diagnostic step / stretch sequences; the
  // verification below regenerates a prefix of exactly these draws.
  antrope::Substream xs(args.seed, 0);
  antrope::Substream ls(args.seed, 1);
  std::vector<double> draws_x(args.sample_len), draws_l(args.sample_len);
  for (auto& v : draws_x) v = step.sample(xs);
  for (auto& v : draws_l) v = stretch.sample(ls);

  const auto lln_x = antrope::lln_diagnostic(draws_x, mu_x);
  const auto lln_l = antrope::lln_diagnostic(draws_l, mu_l);
  std::cout << "running-mean deviation at n=" << args.sample_len << ": steps "
            << format_double(lln_x.back().deviation) << ", stretches "
            << format_double(lln_l.back().deviation) << '\n';
  if (!args.lln_out.empty()) {
    std::string csv = "n,running_mean_x,deviation_x,running_mean_l,deviation_l\n";
    for (std::size_t i = 0; i < lln_x.size(); ++i) {
      csv += std::to_string(lln_x[i].n) + ',' + format_double(lln_x[i].running_mean) + ',' +
             format_double(lln_x[i].deviation) + ',' + format_double(lln_l[i].running_mean) +
             ',' + format_double(lln_l[i].deviation) + '\n';
    }
    antrope::write_text_file(args.lln_out, csv);
    std::cout << "wrote running means to " << args.lln_out << '\n';
  }

  const auto block_length = antrope::choose_block_length(draws_x, draws_l, args.l0, mu_x, mu_l,
                                                         args.epsilon);
  if (!block_length) {
    std::cout << "warning: no block length N keeps both running-mean deviations below epsilon="
              << format_double(args.epsilon) << " through n=" << args.sample_len
              << "; increase --sample-len or --epsilon\n";
    return 0;
  }
  std::cout << "N = " << *block_length << " (block length)\n";

  if (args.m_blocks > args.sample_len / *block_length) {
    throw std::invalid_argument(
        "diagnose: insufficient draws: m-blocks * N exceeds --sample-len; increase "
        "--sample-len or lower --m-blocks");
  }

  const antrope::BlockBoundParams params{args.epsilon, *block_length, args.m_blocks};
  const auto chain = antrope::block_lower_bound(params, mu_x, mu_l);
  std::cout << "bound partial sums:";
  for (double b : chain.partial_sums) std::cout << ' ' << format_double(b);
  std::cout << '\n';
  if (chain.first_vacuous_block) {
    std::cout << "note: bound terms vacuous from block " << *chain.first_vacuous_block
              << " on (mu_x - (2k-1)*epsilon <= 0)\n";
  }

  const auto report = antrope::verify_block_bound(spec, args.seed, params);
  std::cout << "observed = " << format_double(report.observed)
            << ", block bound = " << format_double(report.block_bound)
            << ", epsilon bound = " << format_double(report.epsilon_bound) << '\n';
  std::cout << "precondition (deviations < epsilon over [N, mN]): "
            << (report.precondition_ok ? "ok" : "VIOLATED") << '\n';
  std::cout << "bound holds: " << (report.holds ? "yes" : "no") << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ant-on-a-rubber-rope simulation and analysis toolkit"};
  app.require_subcommand(1);

  // classic
  auto* classic = app.add_subcommand("classic", "progress fractions of the classic 1 cm/s ant "
                                                "on the 1 km rope stretching 1 km/s");
  std::vector<std::uint64_t> m_values{1, 2, 3, 10, 100, 1000};
  classic->add_option("--m", m_values, "checkpoints m to tabulate")
      ->delimiter(',')
      ->capture_default_str();

  // solve
  auto* solve = app.add_subcommand(
      "solve", "deterministic hitting time for constant step x and constant stretch L");
  double solve_l0 = 1.0, solve_x = 1.0, solve_L = 1.0;
  solve->add_option("--l0", solve_l0, "initial rope length")->required();
  solve->add_option("--x", solve_x, "step per second")->required();
  solve->add_option("--L", solve_L, "stretch per second")->required();

  // simulate
  auto* simulate = app.add_subcommand("simulate", "run a batch of stochastic trajectories");
  double sim_l0 = 1.0;
  std::string sim_step, sim_stretch, sim_out, sim_format = "csv";
  std::uint64_t sim_n = 1000, sim_seed = 0, sim_cap = antrope::kDefaultCap;
  std::optional<std::uint64_t> sim_horizon;
  unsigned sim_threads = 1;
  bool sim_strict = false, sim_explore = false;
  simulate->add_option("--l0", sim_l0, "initial rope length")->capture_default_str();
  simulate->add_option("--step", sim_step, "step distribution, e.g. exponential:mean=1.0")
      ->required();
  simulate->add_option("--stretch", sim_stretch, "stretch distribution, e.g. uniform:a=0.5,b=1.5")
      ->required();
  simulate->add_option("--n", sim_n, "number of trajectories")->capture_default_str();
  simulate->add_option("--seed", sim_seed, "master seed")->capture_default_str();
  simulate->add_option("--cap", sim_cap, "censoring cap in seconds")->capture_default_str();
  simulate->add_option("--horizon", sim_horizon,
                       "survival curve horizon (default min(100, cap))");
  simulate->add_option("--threads", sim_threads, "worker threads")->capture_default_str();
  simulate->add_option("--out", sim_out, "output file path")->required();
  simulate->add_option("--format", sim_format, "output format: csv or json")
      ->capture_default_str();
  simulate->add_flag("--strict", sim_strict, "exit nonzero if any trajectory is censored");
  simulate->add_flag("--explore", sim_explore,
                     "allow infinite-mean distributions (tags output as exploratory)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "grid of simulate runs, one CSV row per point");
  SweepArgs sweep_args;
  std::string sweep_config;
  sweep->add_option("--l0", sweep_args.l0_values, "initial lengths")->delimiter(',');
  sweep->add_option("--step", sweep_args.step_specs,
                    "step distributions, ';'-separated grammars")
      ->delimiter(';');
  sweep->add_option("--stretch", sweep_args.stretch_specs,
                    "stretch distributions, ';'-separated grammars")
      ->delimiter(';');
  sweep->add_option("--n", sweep_args.n, "trajectories per grid point")->capture_default_str();
  sweep->add_option("--seed", sweep_args.seed, "master seed")->capture_default_str();
  sweep->add_option("--cap", sweep_args.cap, "censoring cap")->capture_default_str();
  sweep->add_option("--threads", sweep_args.threads, "worker threads")->capture_default_str();
  sweep->add_option("--out", sweep_args.out, "output CSV path");
  sweep->add_option("--config", sweep_config, "JSON config file mirroring the flags");
  sweep->add_flag("--strict", sweep_args.strict, "exit nonzero on any censoring");
  sweep->add_flag("--explore", sweep_args.exploration, "allow infinite-mean distributions");

  // diagnose
  auto* diagnose = app.add_subcommand(
      "diagnose", "running-mean convergence and the blockwise lower-bound chain");
  DiagnoseArgs diag;
  diagnose->add_option("--l0", diag.l0, "initial rope length")->capture_default_str();
  diagnose->add_option("--step", diag.step_text, "step distribution")->required();
  diagnose->add_option("--stretch", diag.stretch_text, "stretch distribution")->required();
  diagnose->add_option("--seed", diag.seed, "master seed")->capture_default_str();
  diagnose->add_option("--epsilon", diag.epsilon, "SLLN tolerance epsilon")->required();
  diagnose->add_option("--m-blocks", diag.m_blocks, "number of blocks m")->capture_default_str();
  diagnose->add_option("--sample-len", diag.sample_len, "diagnostic sample length")
      ->capture_default_str();
  diagnose->add_option("--lln-out", diag.lln_out, "write running means to this CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help and friends
    }
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (classic->parsed()) return cmd_classic(m_values);
    if (solve->parsed()) return cmd_solve(solve_l0, solve_x, solve_L);
    if (simulate->parsed()) {
      ExperimentConfig config{ProcessSpec(sim_l0, DistributionSpec::parse(sim_step),
                                          DistributionSpec::parse(sim_stretch))};
      config.n_trajectories = sim_n;
      config.master_seed = sim_seed;
      config.cap = sim_cap;
      config.horizon = sim_horizon.value_or(std::min<std::uint64_t>(100, sim_cap));
      config.output_path = sim_out;
      config.format = antrope::parse_output_format(sim_format);
      config.parallelism = sim_threads;
      config.strict = sim_strict;
      config.exploration = sim_explore;
      return cmd_simulate(config);
    }
    if (sweep->parsed()) {
      if (!sweep_config.empty()) merge_sweep_config(sweep_config, sweep_args, *sweep);
      return cmd_sweep(sweep_args);
    }
    if (diagnose->parsed()) return cmd_diagnose(diag);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
