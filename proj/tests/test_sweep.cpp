#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "optomech/sweep.hpp"

using namespace optomech;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

SweepConfig small_config() {
  SweepConfig cfg;
  cfg.variable = "t_prime";
  cfg.start = 0.0;
  cfg.stop = kTwoPi;
  cfg.count = 11;
  cfg.r = 1.5;
  cfg.n_bar = 1.0;
  cfg.quantities = {"coeff_a", "fidelity_traced", "upsilon3"};
  return cfg;
}

std::filesystem::path temp_dir(const char* tag) {
  auto p = std::filesystem::temp_directory_path() /
           (std::string("optomech_test_") + tag);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("the quantity registry covers every published quantity") {
  const auto& names = quantity_names();
  for (const char* expected :
       {"coeff_a", "coeff_b", "coeff_c", "coeff_d", "coeff_e", "coeff_f", "eta1",
        "eta2", "eta_b", "upsilon1", "upsilon2", "upsilon3", "fidelity_traced",
        "fidelity_het", "info_gain", "n_eff", "log_neg_b", "log_neg_b_flag"}) {
    CHECK(std::find(names.begin(), names.end(), expected) != names.end());
  }
  const ScaledParams s(1.0, 1.5, 1.0);
  for (const auto& name : names) {
    CHECK(std::isfinite(evaluate_quantity(name, s, -16.0)));
  }
}

TEST_CASE("sweep shape and errors") {
  const Table t = run_sweep(small_config());
  CHECK(t.columns.size() == 4);
  CHECK(t.columns[0] == "t_prime");
  CHECK(t.rows.size() == 11);
  CHECK(t.rows.front()[0] == 0.0);
  CHECK(t.rows.back()[0] == doctest::Approx(kTwoPi));
  for (const auto& row : t.rows) CHECK(row.size() == t.columns.size());

  SweepConfig cfg = small_config();
  cfg.count = 2;
  CHECK(run_sweep(cfg).rows.size() == 2);

  cfg = small_config();
  cfg.quantities = {"no_such_quantity"};
  CHECK_THROWS_AS(run_sweep(cfg), std::invalid_argument);
  cfg = small_config();
  cfg.count = 1;
  CHECK_THROWS_AS(run_sweep(cfg), std::invalid_argument);
  cfg = small_config();
  cfg.stop = cfg.start;
  CHECK_THROWS_AS(run_sweep(cfg), std::invalid_argument);
  cfg = small_config();
  cfg.variable = "bogus";
  CHECK_THROWS_AS(run_sweep(cfg), std::invalid_argument);
}

TEST_CASE("sweeping n_bar and r") {
  SweepConfig cfg;
  cfg.variable = "n_bar";
  cfg.start = 0.0;
  cfg.stop = 10.0;
  cfg.count = 3;
  cfg.t_prime = kTwoPi;  // period boundary: F = 1/(2+n)
  cfg.quantities = {"fidelity_traced"};
  const Table t = run_sweep(cfg);
  CHECK(t.rows[0][1] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(t.rows[2][1] == doctest::Approx(1.0 / 12.0).epsilon(1e-14));

  cfg.variable = "r";
  cfg.start = 1.2;
  cfg.stop = 3.0;
  cfg.count = 4;
  cfg.t_prime = 1.0;
  cfg.n_bar = 0.0;
  CHECK(run_sweep(cfg).rows.size() == 4);
}

TEST_CASE("csv output is deterministic and lossless") {
  const Table t = run_sweep(small_config());
  std::ostringstream a, b;
  write_csv(t, a);
  write_csv(run_sweep(small_config()), b);
  CHECK(a.str() == b.str());
  CHECK(a.str().find("t_prime,coeff_a,fidelity_traced,upsilon3\n") == 0);
  CHECK(a.str().find("\r") == std::string::npos);

  // every CSV number parses back to the exact double
  std::istringstream in(a.str());
  std::string line;
  std::getline(in, line);  // header
  std::size_t row = 0;
  while (std::getline(in, line)) {
    std::stringstream fields(line);
    std::string field;
    std::size_t col = 0;
    while (std::getline(fields, field, ',')) {
      CHECK(std::strtod(field.c_str(), nullptr) == t.rows[row][col]);
      ++col;
    }
    CHECK(col == t.columns.size());
    ++row;
  }
  CHECK(row == t.rows.size());
}

TEST_CASE("json output round-trips through the declared schema") {
  const SweepConfig cfg = small_config();
  const Table t = run_sweep(cfg);
  std::ostringstream os;
  write_json(t, cfg, os);
  const auto j = nlohmann::json::parse(os.str());
  CHECK(j["schema"] == "optomech.sweep.v1");
  CHECK(j["variable"] == "t_prime");
  CHECK(j["fixed"]["r"] == 1.5);
  CHECK(j["columns"].size() == 4);
  CHECK(j["rows"].size() == 11);
  CHECK(j["rows"][3].size() == 4);
  CHECK(j["rows"][0][0].get<double>() == t.rows[0][0]);
}

TEST_CASE("log-negativity rows clamp with a flag where there is nothing to report") {
  SweepConfig cfg;
  cfg.variable = "t_prime";
  cfg.start = 0.0;
  cfg.stop = 1.0;
  cfg.count = 2;
  cfg.r = 1.0 + 2.5e-7;
  cfg.n_bar = 0.0;
  cfg.quantities = {"log_neg_b", "log_neg_b_flag"};
  cfg.clamp_log = -16.0;
  const Table t = run_sweep(cfg);
  CHECK(t.rows[0][1] == -16.0);  // separable start
  CHECK(t.rows[0][2] == 1.0);
  CHECK(t.rows[1][1] > -16.0);  // entangled interior point
  CHECK(t.rows[1][2] == 0.0);
}

TEST_CASE("figure presets") {
  CHECK(figure_ids().size() == 7);
  CHECK_THROWS_AS(write_figure("nope", "."), std::invalid_argument);

  const auto dir = temp_dir("figures");
  write_figure("fid_het", dir.string());
  const auto manifest_path = dir / "fid_het_manifest.json";
  REQUIRE(std::filesystem::exists(manifest_path));
  std::ifstream mf(manifest_path);
  const auto manifest = nlohmann::json::parse(mf);
  CHECK(manifest["figure"] == "fid_het");
  CHECK(manifest["r"].get<double>() == 1.0 + 2.5e-7);
  REQUIRE(manifest["curves"].size() == 4);
  for (const auto& curve : manifest["curves"]) {
    CHECK(std::abs(curve["fidelity_max"].get<double>() - 0.85) < 0.02);
    CHECK(std::filesystem::exists(dir / curve["file"].get<std::string>()));
  }

  write_figure("upsilon2_zoom", dir.string());
  std::ifstream zf(dir / "upsilon2_zoom_manifest.json");
  const auto zoom = nlohmann::json::parse(zf);
  CHECK(zoom["curves"].size() == 1);
  CHECK(zoom["curves"][0]["n_bar"].get<double>() == 1e3);
  CHECK(zoom["t_prime_range"][0].get<double>() == doctest::Approx(kTwoPi - 0.1));
  // the zoomed marker window really dips negative at n = 1e3
  CHECK(zoom["curves"][0]["grid_peak_value"].get<double>() < 0.0);

  write_figure("negativity", dir.string());
  std::ifstream nf(dir / "negativity_manifest.json");
  const auto neg = nlohmann::json::parse(nf);
  REQUIRE(neg["curves"].size() == 4);
  CHECK(neg["curves"][0]["n_bar"].get<double>() == 0.0);
  CHECK(neg["curves"][1]["n_bar"].get<double>() == 0.1);
  CHECK(neg["curves"][2]["n_bar"].get<double>() == 1.0);
  CHECK(neg["curves"][3]["n_bar"].get<double>() == 1e7);

  std::filesystem::remove_all(dir);
}
