// Copyright 2026 The fracsed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "fracsed/fracsed.h"

namespace {

fracsed_config* small_config() {
  fracsed_config* cfg = nullptr;
  REQUIRE(fracsed_config_parse("problem = ar\niterations = 200\nmu0 = 0.1\n", &cfg) == FRACSED_OK);
  return cfg;
}

}  // namespace

TEST_CASE("version and status strings") {
  CHECK(std::strlen(fracsed_version()) > 0);
  CHECK(std::string(fracsed_status_string(FRACSED_OK)) != "");
  CHECK(std::string(fracsed_status_string(FRACSED_ERR_DIVERGENCE)) !=
        std::string(fracsed_status_string(FRACSED_ERR_IO)));
}

TEST_CASE("config handle") {
  fracsed_config* cfg = nullptr;
  REQUIRE(fracsed_config_new(&cfg) == FRACSED_OK);
  CHECK(fracsed_config_set(cfg, "mu0", "0.25") == FRACSED_OK);
  char buf[64];
  size_t needed = 0;
  CHECK(fracsed_config_get(cfg, "mu0", buf, sizeof buf, &needed) == FRACSED_OK);
  CHECK(std::string(buf) == "0.25");
  CHECK(needed == 5);
  char tiny[3];
  CHECK(fracsed_config_get(cfg, "mu0", tiny, sizeof tiny, &needed) == FRACSED_OK);
  CHECK(std::string(tiny) == "0.");

  CHECK(fracsed_config_set(cfg, "warp", "9") == FRACSED_ERR_VALIDATION);
  CHECK(std::string(fracsed_last_error()).find("warp") != std::string::npos);
  CHECK(fracsed_config_set(cfg, "zeta", "0.2") == FRACSED_OK);
  CHECK(fracsed_config_validate(cfg) == FRACSED_ERR_VALIDATION);

  size_t len = 0;
  CHECK(fracsed_config_to_text(cfg, nullptr, 0, &len) == FRACSED_OK);
  std::vector<char> text(len);
  CHECK(fracsed_config_to_text(cfg, text.data(), text.size(), nullptr) == FRACSED_OK);
  fracsed_config* copy = nullptr;
  CHECK(fracsed_config_parse(text.data(), &copy) == FRACSED_ERR_VALIDATION);
  CHECK(copy == nullptr);

  CHECK(fracsed_config_set(cfg, "zeta", "0.75") == FRACSED_OK);
  CHECK(fracsed_config_to_text(cfg, nullptr, 0, &len) == FRACSED_OK);
  text.resize(len);
  CHECK(fracsed_config_to_text(cfg, text.data(), text.size(), nullptr) == FRACSED_OK);
  REQUIRE(fracsed_config_parse(text.data(), &copy) == FRACSED_OK);
  CHECK(fracsed_config_get(copy, "mu0", buf, sizeof buf, nullptr) == FRACSED_OK);
  CHECK(std::string(buf) == "0.25");
  fracsed_config_free(copy);
  fracsed_config_free(cfg);

  CHECK(fracsed_config_load("/nonexistent/file.cfg", &cfg) == FRACSED_ERR_IO);
  CHECK(fracsed_config_new(nullptr) == FRACSED_ERR_ARGUMENT);
}

TEST_CASE("run handle") {
  fracsed_config* cfg = small_config();
  fracsed_result* res = nullptr;
  REQUIRE(fracsed_run(cfg, nullptr, &res) == FRACSED_OK);
  CHECK(fracsed_result_trace_length(res) == 200);
  CHECK(fracsed_result_column_count(res) > 4);
  CHECK(std::string(fracsed_result_column_name(res, 0)) == "t");
  const double* loss = nullptr;
  size_t n = 0;
  CHECK(fracsed_result_trace_column(res, "loss", &loss, &n) == FRACSED_OK);
  CHECK(n == 200);
  CHECK(fracsed_result_trace_column(res, "nope", &loss, &n) == FRACSED_ERR_ARGUMENT);
  double v = 0.0;
  CHECK(fracsed_result_value(res, "final_loss", &v) == FRACSED_OK);
  CHECK(std::isfinite(v));
  CHECK(fracsed_result_key_count(res) > 3);
  CHECK(fracsed_result_param_layers(res) == 1);
  const double* p = nullptr;
  CHECK(fracsed_result_params(res, 0, &p, &n) == FRACSED_OK);
  CHECK(n == 2);
  CHECK(fracsed_result_params(res, 1, &p, &n) == FRACSED_ERR_ARGUMENT);
  fracsed_result_free(res);

  fracsed_config* boom = nullptr;
  REQUIRE(fracsed_config_parse("problem = quadratic\noptimizer = sgd\nmu0 = 1000\n"
                               "quad_diag = 1, 1000\niterations = 200\n",
                               &boom) == FRACSED_OK);
  res = nullptr;
  CHECK(fracsed_run(boom, nullptr, &res) == FRACSED_ERR_DIVERGENCE);
  CHECK(res == nullptr);
  fracsed_config_free(boom);
  fracsed_config_free(cfg);
}

TEST_CASE("sweep handle") {
  fracsed_config* cfg = small_config();
  fracsed_sweep* sw = nullptr;
  REQUIRE(fracsed_sweep_run(cfg, 3, 2, "loss", &sw) == FRACSED_OK);
  CHECK(fracsed_sweep_seed_count(sw) == 3);
  CHECK(fracsed_sweep_failures(sw) == 0);
  uint64_t seed = 0;
  int ok = 0;
  CHECK(fracsed_sweep_seed(sw, 1, &seed, &ok) == FRACSED_OK);
  CHECK(ok == 1);
  CHECK(std::string(fracsed_sweep_seed_error(sw, 1)).empty());
  CHECK(fracsed_sweep_seed_error(sw, 9) == nullptr);
  fracsed_aggregate agg{};
  CHECK(fracsed_sweep_aggregate(sw, "final_loss", &agg) == FRACSED_OK);
  CHECK(agg.count == 3);
  CHECK(fracsed_sweep_aggregate_count(sw) > 0);
  const double* mean = nullptr;
  size_t n = 0;
  CHECK(fracsed_sweep_tracked_mean(sw, &mean, &n) == FRACSED_OK);
  CHECK(n == 200);
  fracsed_rate_fit_result fit{};
  CHECK(fracsed_sweep_rate_fit(sw, &fit) == FRACSED_OK);
  CHECK(std::isfinite(fit.slope));
  fracsed_sweep_free(sw);
  fracsed_config_free(cfg);
}

TEST_CASE("rate fit entry point") {
  std::vector<double> s(400);
  for (size_t t = 1; t <= s.size(); ++t) s[t - 1] = 1.0 / std::sqrt(static_cast<double>(t));
  fracsed_rate_fit_result fit{};
  REQUIRE(fracsed_rate_fit(s.data(), s.size(), 1, &fit) == FRACSED_OK);
  CHECK(fit.slope == doctest::Approx(-0.5).epsilon(1e-9));
  CHECK(fracsed_rate_fit(s.data(), 10, 0, &fit) == FRACSED_ERR_VALIDATION);
  CHECK(fracsed_rate_fit(nullptr, 10, 0, &fit) == FRACSED_ERR_ARGUMENT);
  CHECK(fracsed_rate_fit_csv("/nonexistent.csv", "gap", 1, &fit) == FRACSED_ERR_IO);
}
