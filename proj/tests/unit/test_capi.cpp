#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "doctest.h"
#include "phlab/phlab.h"

TEST_CASE("version and status names") {
  CHECK(std::string(phlab_version()) == "1.0.0");
  CHECK(std::string(phlab_status_name(PHLAB_OK)) == "ok");
  CHECK(std::string(phlab_status_name(PHLAB_E_VALIDATION)).size() > 0);
}

TEST_CASE("null and domain errors set the last error") {
  phlab_density* d = nullptr;
  CHECK(phlab_density_uniform_box(nullptr, nullptr, &d) == PHLAB_E_INVALID_ARGUMENT);
  CHECK(std::string(phlab_last_error()).size() > 0);
  const double c[3] = {0, 0, 0};
  CHECK(phlab_density_uniform_ball(c, -1.0, &d) != PHLAB_OK);
  CHECK(d == nullptr);
  CHECK(phlab_sphere_stokes_eval(1.0, 0, c, nullptr) == PHLAB_E_INVALID_ARGUMENT);
  phlab_stokes_value v;
  CHECK(phlab_sphere_stokes_eval(1.0, 0, c, &v) == PHLAB_E_DOMAIN);
}

TEST_CASE("density, sampling and transport through the C API") {
  const double lo[3] = {0, 0, 0}, hi[3] = {1, 1, 1};
  phlab_density* d = nullptr;
  REQUIRE(phlab_density_uniform_box(lo, hi, &d) == PHLAB_OK);
  double sup = 0;
  CHECK(phlab_density_sup_norm(d, &sup) == PHLAB_OK);
  CHECK(sup == doctest::Approx(1.0));

  phlab_configuration* cfg = nullptr;
  REQUIRE(phlab_configuration_sample(d, 64, 3, 2.5, &cfg) == PHLAB_OK);
  CHECK(phlab_configuration_size(cfg) == 64);
  CHECK(phlab_configuration_eps(cfg) == doctest::Approx(0.25));
  std::vector<double> xyz(3 * 64), nn(64);
  CHECK(phlab_configuration_centers(cfg, xyz.data()) == PHLAB_OK);
  CHECK(phlab_configuration_nn_distances(cfg, nn.data()) == PHLAB_OK);
  for (double v : nn) CHECK(v > 0.0);

  double w = -1;
  CHECK(phlab_w2(xyz.data(), nullptr, 64, xyz.data(), nullptr, 64, &w) == PHLAB_OK);
  CHECK(w == doctest::Approx(0.0).scale(1e-12));
  double emp = -1;
  CHECK(phlab_w2_empirical_vs_density(d, cfg, 64, 3, &emp) == PHLAB_OK);
  CHECK(emp == doctest::Approx(0.0).scale(1e-12));
  CHECK(phlab_w2_empirical_vs_density(d, cfg, 10, 3, &emp) == PHLAB_E_INVALID_ARGUMENT);

  double plan = 0, bound = 0;
  CHECK(phlab_w2_plan_cost_smeared(cfg, 0.3, &plan, &bound) == PHLAB_OK);
  CHECK(plan <= bound);

  phlab_event_estimate e;
  CHECK(phlab_estimate_event(d, PHLAB_EVENT_B, 100, 30, 1, 2.5, 0.3, 1, &e) == PHLAB_OK);
  CHECK(e.trials == 30);
  CHECK(phlab_estimate_event(d, PHLAB_EVENT_B, 100, 5, 1, 2.5, 0.3, 1, &e) != PHLAB_OK);

  phlab_eta_moment m;
  CHECK(phlab_eta_moment_estimate(d, 100, 1.0, 1.0, 0.0, 30, PHLAB_ETA_LAYER_CAKE, 1, 1, &m) == PHLAB_OK);
  CHECK(m.value == 1.0);
  CHECK(phlab_eta_moment_estimate(d, 100, 1.0, 1.0, -4.0, 30, PHLAB_ETA_MONTE_CARLO, 1, 1, &m) == PHLAB_E_DOMAIN);

  phlab_configuration_free(cfg);
  phlab_density_free(d);
}

TEST_CASE("power law fit through the C API") {
  const double x[4] = {1, 2, 4, 8}, y[4] = {1, 4, 16, 64};
  phlab_rate_fit f;
  REQUIRE(phlab_fit_power_law(x, y, 4, &f) == PHLAB_OK);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.points == 4);
  CHECK(phlab_fit_power_law(x, y, 2, &f) == PHLAB_E_INVALID_ARGUMENT);
}

TEST_CASE("config errors, buffers and a small run") {
  phlab_config* c = nullptr;
  CHECK(phlab_config_parse(R"({"experiment": "events", "n_list": [100], "colour": 3})", &c) == PHLAB_E_VALIDATION);
  CHECK(std::string(phlab_last_error_field()) == "colour");

  REQUIRE(phlab_config_parse(R"({"experiment": "events", "n_list": [100], "trials": 0})", &c) == PHLAB_OK);
  CHECK(phlab_config_validate(c) == PHLAB_E_VALIDATION);
  CHECK(std::string(phlab_last_error_field()) == "trials");
  CHECK(std::string(phlab_last_error()).find("trials ≥ 30") != std::string::npos);
  phlab_report* r = nullptr;
  CHECK(phlab_run(c, 1, &r) == PHLAB_E_VALIDATION);
  CHECK(r == nullptr);
  phlab_config_free(c);

  REQUIRE(phlab_config_parse(R"({"experiment": "w2-rates", "n_list": [16, 32, 64], "trials": 3, "ref_factor": 4})", &c) == PHLAB_OK);
  CHECK(phlab_config_validate(c) == PHLAB_OK);
  size_t needed = 0;
  char small[4];
  CHECK(phlab_config_to_json(c, small, sizeof small, &needed) == PHLAB_E_BUFFER_TOO_SMALL);
  CHECK(needed > sizeof small);
  std::string buf(needed, '\0');
  CHECK(phlab_config_to_json(c, buf.data(), buf.size(), &needed) == PHLAB_OK);
  CHECK(buf.find("w2-rates") != std::string::npos);

  REQUIRE(phlab_run(c, 2, &r) == PHLAB_OK);
  CHECK(phlab_report_row_count(r) == 6);
  CHECK(phlab_report_fit_count(r) >= 1);
  for (size_t i = 0; i < phlab_report_check_count(r); ++i) {
    const char *name = nullptr, *detail = nullptr;
    int passed = 0;
    CHECK(phlab_report_check(r, i, &name, &passed, &detail) == PHLAB_OK);
    CHECK(name != nullptr);
  }
  const char *stat = nullptr, *absc = nullptr;
  phlab_rate_fit f;
  CHECK(phlab_report_fit(r, 0, &stat, &absc, &f) == PHLAB_OK);
  CHECK(phlab_report_fit(r, 99, &stat, &absc, &f) == PHLAB_E_INVALID_ARGUMENT);

  const std::string path = "phlab_capi_test.tsv";
  std::remove(path.c_str());
  CHECK(phlab_report_write(r, path.c_str()) == PHLAB_OK);
  phlab_report* again = nullptr;
  REQUIRE(phlab_report_recompute(path.c_str(), &again) == PHLAB_OK);
  CHECK(phlab_report_row_count(again) == 6);
  phlab_report_free(again);
  std::remove(path.c_str());
  std::remove((path + ".json").c_str());

  phlab_report_free(r);
  phlab_config_free(c);
  CHECK(phlab_report_recompute("/nonexistent/x.tsv", &again) == PHLAB_E_IO);
}
