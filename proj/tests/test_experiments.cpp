#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "doekit/experiments.hpp"

using namespace doekit;

namespace {

AnnealConfig light_anneal() {
  AnnealConfig config;
  config.temperature_steps = 15;
  config.iterations_per_temperature = 10;
  return config;
}

FitOptions light_fit() {
  FitOptions options;
  options.starts = 3;
  options.max_evals_per_start = 120;
  return options;
}

FitComparisonConfig tiny_fit_comparison() {
  FitComparisonConfig config;
  config.function = "cosin2";
  config.design_kinds = {"lhs", "wlhs"};
  config.sizes = {8, 10};
  config.repetitions = 2;
  config.test_size = 200;
  config.seed = 42;
  config.fit = light_fit();
  config.anneal = light_anneal();
  config.threads = 2;
  return config;
}

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("doekit-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("fit comparison produces the full record grid deterministically") {
  const FitComparisonConfig config = tiny_fit_comparison();
  const StudyResult a = run_fit_comparison(config);
  REQUIRE(a.records.size() == 2 * 2 * 2);  // kinds x sizes x repetitions
  for (const StudyRecord& r : a.records) {
    REQUIRE(r.metric == "q2");
    REQUIRE(std::isfinite(r.value));
    REQUIRE(r.value <= 1.0);
  }
  const StudyResult b = run_fit_comparison(config);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    REQUIRE(a.records[i].kind == b.records[i].kind);
    REQUIRE(a.records[i].value == b.records[i].value);
  }
}

TEST_CASE("fit comparison is independent of the thread count") {
  FitComparisonConfig config = tiny_fit_comparison();
  config.threads = 1;
  const StudyResult serial = run_fit_comparison(config);
  config.threads = 4;
  const StudyResult parallel = run_fit_comparison(config);
  REQUIRE(detail::records_to_csv(serial.records) == detail::records_to_csv(parallel.records));
}

TEST_CASE("studies resume from partial results") {
  const auto dir = fresh_dir("resume");
  const FitComparisonConfig config = tiny_fit_comparison();
  run_fit_comparison(config, &dir);
  const std::string full = io::read_file(dir / "results.csv");

  // Keep the header and the first three records only, then rerun.
  std::istringstream in(full);
  std::string line, partial;
  for (int i = 0; i < 4 && std::getline(in, line); ++i) partial += line + "\n";
  io::write_file_atomic(dir / "results.csv", partial);

  run_fit_comparison(config, &dir);
  REQUIRE(io::read_file(dir / "results.csv") == full);
  REQUIRE(std::filesystem::exists(dir / "summary.csv"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("projection study grid and d=2 identity") {
  ProjectionConfig config;
  config.n = 12;
  config.dims = {2, 3};
  config.design_kinds = {"maximin-lhs", "wlhs"};
  config.repetitions = 2;
  config.seed = 7;
  config.anneal = light_anneal();
  config.threads = 2;
  const StudyResult result = run_projection_degradation(config);
  REQUIRE(result.records.size() == 2 * 2 * 2 * 3);

  for (const StudyRecord& r : result.records) REQUIRE(std::isfinite(r.value));
  // At d = 2 the single projection is the design itself.
  for (const StudyRecord& r : result.records) {
    if (r.size != 2 || r.metric != "full") continue;
    for (const StudyRecord& other : result.records) {
      if (other.size == 2 && other.kind == r.kind && other.replicate == r.replicate &&
          other.metric != "full")
        REQUIRE(other.value == r.value);
    }
  }
}

TEST_CASE("validation study emits the rectangular record grid") {
  ValidationComparisonConfig config;
  config.function = "cosin2";
  config.learning_sizes = {8, 10};
  config.test_sizes = {4, 6};
  config.test_kinds = {"mc", "lhs"};
  config.repetitions = 2;
  config.reference_samples = 2;
  config.reference_size = 50;
  config.pool_size = 100;
  config.augment_pool_size = 200;
  config.seed = 11;
  config.fit = light_fit();
  config.anneal = light_anneal();
  config.test_anneal = light_anneal();
  config.threads = 2;
  const StudyResult result = run_validation_comparison(config);
  // repetitions x learning sizes x kinds x test sizes
  REQUIRE(result.records.size() == 2 * 2 * 5 * 2);

  // Deterministic kinds repeat the same value across replicates.
  for (const StudyRecord& r : result.records) {
    if (r.kind != "reference" && r.kind != "loo" && r.kind != "sequential") continue;
    for (const StudyRecord& other : result.records)
      if (other.kind == r.kind && other.size == r.size && other.metric == r.metric)
        REQUIRE(other.value == r.value);
  }

  // The same study rerun with more threads is bit-identical.
  ValidationComparisonConfig threaded = config;
  threaded.threads = 4;
  const StudyResult again = run_validation_comparison(threaded);
  REQUIRE(detail::records_to_csv(result.records) == detail::records_to_csv(again.records));
}

TEST_CASE("study configs parse from json") {
  const io::json j = io::json::parse(R"({
    "function": "gsobol5",
    "design_kinds": ["lhs"],
    "sizes": [12, 14],
    "repetitions": 3,
    "test_size": 500,
    "seed": 99,
    "fit": {"starts": 2, "fixed_exponent": 2.0},
    "anneal": {"criterion": "wraparound", "temperature_steps": 10}
  })");
  const FitComparisonConfig config = fit_comparison_config_from_json(j);
  REQUIRE(config.function == "gsobol5");
  REQUIRE(config.sizes == std::vector<Eigen::Index>{12, 14});
  REQUIRE(config.repetitions == 3);
  REQUIRE(config.fit.starts == 2);
  REQUIRE(config.fit.fixed_exponent == 2.0);
  REQUIRE(config.anneal.temperature_steps == 10);
  REQUIRE(config.anneal.criterion == CriterionKind::WrapAroundL2);

  AnnealConfig round = anneal_config_from_json(anneal_config_to_json(config.anneal));
  REQUIRE(round.temperature_steps == config.anneal.temperature_steps);
  REQUIRE_FALSE(round.initial_temperature.has_value());
}

TEST_CASE("invalid study configs are rejected") {
  FitComparisonConfig config = tiny_fit_comparison();
  config.sizes = {10, 10};
  REQUIRE_THROWS_AS(run_fit_comparison(config), ArgumentError);
  config = tiny_fit_comparison();
  config.repetitions = 0;
  REQUIRE_THROWS_AS(run_fit_comparison(config), ArgumentError);
  config = tiny_fit_comparison();
  config.design_kinds = {"mystery"};
  const StudyResult result = run_fit_comparison(config);
  // Unknown kinds surface as NaN records with diagnostics, not aborts.
  for (const StudyRecord& r : result.records) {
    REQUIRE(std::isnan(r.value));
    REQUIRE_FALSE(r.note.empty());
  }
}
