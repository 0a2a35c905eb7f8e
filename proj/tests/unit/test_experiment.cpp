#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "phlab/common/error.hpp"
#include "phlab/experiment/config.hpp"
#include "phlab/experiment/report.hpp"
#include "phlab/experiment/runner.hpp"
#include "phlab/oracles/suite.hpp"
#include "small_configs.hpp"

using namespace phlab;
namespace fs = std::filesystem;

namespace {
std::string validation_field(const ExperimentConfig& c) {
  try {
    validate(c);
  } catch (const ValidationError& e) {
    return e.field();
  }
  return "";
}
}  // namespace

TEST_CASE("config json round trip and hash") {
  for (auto kind : testing::all_kinds()) {
    const auto c = testing::small_config(kind);
    const auto back = config_from_json(config_to_json(c));
    CHECK(back == c);
    CHECK(config_hash(back) == config_hash(c));
  }
  const auto base = testing::small_config(ExperimentKind::kEvents);
  const auto h = config_hash(base);
  auto c = base;
  c.seed += 1;
  CHECK(config_hash(c) != h);
  c = base;
  c.alpha = 2.6;
  CHECK(config_hash(c) != h);
  c = base;
  c.n_list.push_back(800);
  CHECK(config_hash(c) != h);
  c = base;
  c.density.kind = "uniform_ball";
  CHECK(config_hash(c) != h);
  CHECK(hex64(0x1234) == "0000000000001234");
}

TEST_CASE("config parsing errors") {
  try {
    config_from_json(R"({"experiment": "events", "n_list": [10], "bogus": 1})");
    FAIL("expected a ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.field() == "bogus");
  }
  CHECK_THROWS_AS(config_from_json(R"({"experiment": "events", "trials": "many"})"), ValidationError);
  CHECK_THROWS_AS(config_from_json(R"({"experiment": "nope"})"), ValidationError);
  CHECK_THROWS_AS(config_from_json("{not json"), ValidationError);
  const auto k = config_from_json(R"({"experiment": "eta-moments", "n_list": [100], "kappa": -1})");
  CHECK(k.kappa == std::vector<double>{-1.0});
  CHECK_THROWS_AS(load_config("/nonexistent/phlab.json"), IoError);
}

TEST_CASE("validation") {
  auto c = testing::small_config(ExperimentKind::kEvents);
  CHECK(validation_field(c).empty());
  c.trials = 0;
  try {
    validate(c);
    FAIL("expected a ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.field() == "trials");
    CHECK(std::string(e.what()).find("trials ≥ 30") != std::string::npos);
  }
  c = testing::small_config(ExperimentKind::kEvents);
  c.n_list = {100, 100};
  CHECK(validation_field(c) == "n_list");
  c.n_list = {};
  CHECK(validation_field(c) == "n_list");
  c = testing::small_config(ExperimentKind::kEvents);
  c.alpha = 1.0;
  CHECK(validation_field(c) == "alpha");
  c = testing::small_config(ExperimentKind::kEvents);
  c.lambda = 1.0;
  CHECK(validation_field(c) == "lambda");
  c = testing::small_config(ExperimentKind::kEtaMoments);
  c.kappa = {-3.0};
  CHECK(validation_field(c) == "kappa");
  c = testing::small_config(ExperimentKind::kW2Rates);
  c.n_list = {16, 32, 4096};
  CHECK_FALSE(validation_field(c).empty());
  c = testing::small_config(ExperimentKind::kCorrector);
  c.particle_radius = 0.3;
  CHECK(validation_field(c) == "particle_radius");
  c = testing::small_config(ExperimentKind::kResistance);
  c.mesh_level = 7;
  CHECK(validation_field(c) == "mesh_level");
  c = testing::small_config(ExperimentKind::kHneg1);
  c.box.side = 1.2;
  CHECK_FALSE(validation_field(c).empty());
  CHECK_THROWS_AS(run_experiment(c), ValidationError);
}

TEST_CASE("report formatting and recompute") {
  const auto r = run_experiment(testing::small_config(ExperimentKind::kW2Rates), 2);
  CHECK(r.rows.size() == 6);
  CHECK(r.experiment == "w2-rates");
  const std::string tsv = format_tsv(r);
  CHECK(tsv.find("# provenance config_hash=" + r.config_hash) != std::string::npos);
  CHECK(tsv.find("# check") != std::string::npos);

  const fs::path dir = fs::temp_directory_path() / "phlab_report_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path path = dir / "r.tsv";
  append_tsv(r, path);
  append_tsv(r, path);
  std::ifstream in(path);
  std::string line;
  int headers = 0;
  while (std::getline(in, line)) headers += line == kReportColumns ? 1 : 0;
  CHECK(headers == 1);

  const auto again = recompute_reports(path);
  REQUIRE(again.size() == 1);
  CHECK(again[0].rows.size() == 2 * r.rows.size());
  const auto f0 = r.fit("E[W2^2]", "N");
  const auto f1 = again[0].fit("E[W2^2]", "N");
  REQUIRE(f0.has_value());
  REQUIRE(f1.has_value());
  CHECK(f1->fit.slope == doctest::Approx(f0->fit.slope).epsilon(1e-12));

  write_sidecar(r, dir / "r.json");
  CHECK(fs::file_size(dir / "r.json") > 0);
  fs::remove_all(dir);
}

TEST_CASE("reports do not depend on the thread count") {
  for (auto kind : testing::all_kinds()) {
    CAPTURE(to_string(kind));
    const auto c = testing::small_config(kind);
    const auto a = run_experiment(c, 1);
    const auto b = run_experiment(c, 4);
    CHECK(format_tsv(a) == format_tsv(b));
    CHECK(format_sidecar(a) == format_sidecar(b));
  }
}

TEST_CASE("oracle suite passes on small configs") {
  for (auto kind : testing::all_kinds()) {
    CAPTURE(to_string(kind));
    auto c = testing::small_config(kind);
    const auto r = run_oracles(c, 2);
    for (const auto& ch : r.checks) {
      CAPTURE(ch.name);
      CAPTURE(ch.detail);
      CHECK(ch.passed);
    }
  }
}
