#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "antrope/format.hpp"
#include "antrope/io.hpp"

using namespace antrope;

namespace {

ExperimentConfig base_config() {
  ExperimentConfig config{ProcessSpec(2.0, DistributionSpec::parse("constant:c=1"),
                                      DistributionSpec::parse("constant:c=2"))};
  config.n_trajectories = 5;
  config.master_seed = 7;
  config.cap = 100;
  config.horizon = 10;
  return config;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("config validation catches contradictions", "[io]") {
  auto config = base_config();
  CHECK_NOTHROW(config.validate());

  auto bad = config;
  bad.n_trajectories = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = config;
  bad.horizon = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = config;
  bad.horizon = bad.cap + 1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = config;
  bad.cap = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("infinite-mean stretches require exploration mode", "[io]") {
  ExperimentConfig config{ProcessSpec(1.0, DistributionSpec::parse("constant:c=1"),
                                      DistributionSpec::parse("pareto:scale=1,shape=0.8"))};
  config.horizon = 10;
  config.cap = 100;
  CHECK_THROWS_AS(config.validate(), std::domain_error);
  CHECK_THROWS_WITH(config.validate(), Catch::Matchers::ContainsSubstring("--explore"));
  config.exploration = true;
  CHECK_NOTHROW(config.validate());
}

TEST_CASE("a deterministic experiment yields identical rows", "[io]") {
  const auto result = run_experiment(base_config());
  REQUIRE(result.records.size() == 5);
  for (const auto& r : result.records) {
    REQUIRE(r.hitting_time.has_value());
    CHECK(*r.hitting_time == 4);  // fractions 1/2 + 1/4 + 1/6 + 1/8 cross 1
  }
  CHECK(result.mean.defined);
  CHECK(result.mean.mean == 4.0);
  CHECK(result.survival.n_censored == 0);
  CHECK(result.survival.values[3] == 1.0);
  CHECK(result.survival.values[4] == 0.0);
}

TEST_CASE("csv output carries rows then a comment summary", "[io]") {
  const auto config = base_config();
  const auto result = run_experiment(config);
  const auto lines = lines_of(records_csv(result, false));

  REQUIRE(lines.size() == 1 + 5 + 5);
  CHECK(lines[0] == "substream_id,hitting_time,censored,final_fraction");
  CHECK(lines[1].starts_with("0,4,false,"));
  CHECK(lines[5].starts_with("4,4,false,"));
  CHECK(lines[6] == "# mean = 4");
  CHECK(lines[7] == "# ci_lo = 4");
  CHECK(lines[8] == "# ci_hi = 4");
  CHECK(lines[9] == "# n_censored = 0");
  CHECK(lines[10].starts_with("# survival = 1 1 1 1 0"));
}

TEST_CASE("censored rows carry the cap and the flag", "[io]") {
  ExperimentResult result;
  result.records = {TrajectoryRecord{0, std::nullopt, 50, 0.25}};
  result.mean = mean_hitting_time(result.records);
  result.survival = survival_curve(result.records, 3);
  const auto lines = lines_of(records_csv(result, true));

  CHECK(lines[1] == "0,50,true,0.25");
  CHECK(lines[2] == "# mean = nan");
  CHECK(lines[3] == "# ci_lo = nan");
  CHECK(lines[4] == "# ci_hi = nan");
  CHECK(lines[5] == "# n_censored = 1");
  CHECK(lines[6] == "# survival = 1 1 1 1");
  CHECK(lines[7] == "# exploration = true");
}

TEST_CASE("json output follows the documented schema", "[io]") {
  const auto config = base_config();
  const auto result = run_experiment(config);
  const auto doc = experiment_json(result, false);

  REQUIRE(doc.contains("records"));
  REQUIRE(doc.contains("summary"));
  REQUIRE(doc["records"].is_array());
  REQUIRE(doc["records"].size() == 5);
  const auto& row = doc["records"][0];
  CHECK(row["substream_id"] == 0);
  CHECK(row["hitting_time"] == 4);
  CHECK(row["censored"] == false);
  CHECK(row["final_fraction"].is_number());

  const auto& summary = doc["summary"];
  CHECK(summary["mean"] == 4.0);
  CHECK(summary["ci_lo"] == 4.0);
  CHECK(summary["ci_hi"] == 4.0);
  CHECK(summary["n_censored"] == 0);
  CHECK(summary["survival"].is_array());
  CHECK(summary["survival"].size() == 11);
  CHECK_FALSE(summary.contains("exploration"));
}

TEST_CASE("json marks censored rows and undefined summaries with null", "[io]") {
  ExperimentResult result;
  result.records = {TrajectoryRecord{3, std::nullopt, 50, 0.25}};
  result.mean = mean_hitting_time(result.records);
  result.survival = survival_curve(result.records, 3);
  const auto doc = experiment_json(result, true);

  CHECK(doc["records"][0]["hitting_time"].is_null());
  CHECK(doc["records"][0]["censored"] == true);
  CHECK(doc["summary"]["mean"].is_null());
  CHECK(doc["summary"]["ci_lo"].is_null());
  CHECK(doc["summary"]["ci_hi"].is_null());
  CHECK(doc["summary"]["exploration"] == true);
}

TEST_CASE("rendered output is byte-identical across thread counts", "[io]") {
  auto config = base_config();
  config.spec = ProcessSpec(3.0, DistributionSpec::parse("uniform:a=0.5,b=1.5"),
                            DistributionSpec::parse("exponential:mean=1"));
  config.n_trajectories = 200;
  config.cap = 100'000;
  config.horizon = 50;

  auto threaded = config;
  threaded.parallelism = 8;

  for (auto format : {OutputFormat::Csv, OutputFormat::Json}) {
    config.format = format;
    threaded.format = format;
    const auto a = render_output(run_experiment(config), config);
    const auto b = render_output(run_experiment(threaded), threaded);
    CHECK(a == b);
  }
}

TEST_CASE("doubles render at shortest round-trip precision", "[io]") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e-05) == "1e-05");
  CHECK(format_double(4.0) == "4");
  CHECK(format_double(25.0 / 24.0) == "1.0416666666666667");
  CHECK(std::stod(format_double(25.0 / 24.0)) == 25.0 / 24.0);
}

TEST_CASE("output format names are strict", "[io]") {
  CHECK(parse_output_format("csv") == OutputFormat::Csv);
  CHECK(parse_output_format("json") == OutputFormat::Json);
  CHECK_THROWS_AS(parse_output_format("yaml"), std::invalid_argument);
  CHECK_THROWS_AS(parse_output_format("CSV"), std::invalid_argument);
}

TEST_CASE("file writing round-trips and reports unwritable paths", "[io]") {
  const std::string path = "antrope_io_test.tmp";
  write_text_file(path, "a,b\n1,2\n");
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  CHECK(buffer.str() == "a,b\n1,2\n");
  std::remove(path.c_str());

  CHECK_THROWS_AS(write_text_file("no_such_dir/antrope.csv", "x"), std::runtime_error);
}
