#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>

#include "cubiclab/errors.hpp"
#include "cubiclab/experiment.hpp"
#include "cubiclab/io.hpp"
#include "support.hpp"

using namespace cubiclab;
using namespace testing;

namespace {

const std::string kData = CUBICLAB_DATA_DIR;

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("cubiclab_test_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)) + "_" +
            std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string write(const std::string& name, const Json& doc) const {
    auto p = path / name;
    std::ofstream(p) << doc.dump(2);
    return p.string();
  }
};

Json base_config() {
  return {{"form", kData + "/taxicab.json"},
          {"linsys", kData + "/taxicab_linsys.json"},
          {"decomposition", kData + "/taxicab_decomp.json"},
          {"tau", {0.3}},
          {"eta", 0.05},
          {"P_grid", {10, 20}},
          {"seed", 7},
          {"series", {{"Q", 6}}},
          {"singular_integral", {{"schedule", {2, 4, 8}}, {"samples", 20000}}},
          {"enumeration", {{"strategy", "mim"}}}};
}

bool mentions(const std::vector<std::string>& diags, const std::string& needle) {
  for (const auto& d : diags)
    if (d.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("form documents round-trip") {
  auto loaded = form_from_json(load_json_file(kData + "/taxicab.json"));
  CHECK(loaded.scale == 1);
  CHECK(loaded.form.terms().size() == 4);
  auto again = form_from_json(form_to_json(loaded.form));
  CHECK(again.form.terms().size() == loaded.form.terms().size());
  for (std::size_t i = 0; i < again.form.terms().size(); ++i) CHECK(again.form.terms()[i].c == loaded.form.terms()[i].c);
}

TEST_CASE("rational coefficients are cleared and the scale recorded") {
  auto half = form_from_json(load_json_file(kData + "/half_taxicab.json"));
  CHECK(half.scale == 2);
  CHECK(half.form.coeff(0, 0, 0) == 1);
  CHECK(half.form.coeff(3, 3, 3) == -1);
  // A witness for the document form is restated for the scaled form.
  HDecomposition D = taxicab_decomposition();
  for (auto& p : D.pairs)
    for (auto& c : p.a) c /= 2;
  CHECK(verify_h_decomposition(half.form, rescale_decomposition(D, half.scale)));
}

TEST_CASE("form diagnostics") {
  Json bad_order = {{"n", 3}, {"monomials", {{{"i", 2}, {"j", 1}, {"k", 3}, {"c", "1"}}}}};
  CHECK(mentions(diagnose_form(bad_order, "form"), "index order"));
  Json zeros = {{"n", 2}, {"monomials", {{{"i", 1}, {"j", 1}, {"k", 1}, {"c", "0"}}}}};
  CHECK(mentions(diagnose_form(zeros, "form"), "all coefficients are zero"));
  Json range = {{"n", 2}, {"monomials", {{{"i", 1}, {"j", 1}, {"k", 3}, {"c", 1}}}}};
  CHECK(mentions(diagnose_form(range, "form"), "out of range"));
  CHECK_THROWS_AS(form_from_json(bad_order), ConfigError);
  CHECK(diagnose_form(load_json_file(kData + "/fermat3.json"), "form").empty());
}

TEST_CASE("linear system documents") {
  auto L = linsys_from_json(load_json_file(kData + "/taxicab_linsys.json"));
  CHECK(L.r() == 1);
  CHECK(L.n() == 4);
  CHECK(L.assume_irrational());
  Json rational = {{"r", 1}, {"n", 2}, {"rows", Json::array({Json::array({"1/2", "1/3"})})}, {"assume_irrational", false}};
  auto R = linsys_from_json(rational);
  CHECK(R.row(0).is_rational());
  CHECK(R.row(0).rational_coeffs()[1] == Rational(1, 3));
  Json dependent = {{"r", 2}, {"n", 3}, {"rows", {{1, 2, 3}, {2, 4, 6}}}};
  CHECK_THROWS_AS(linsys_from_json(dependent), ConfigError);
  Json ragged = {{"r", 1}, {"n", 3}, {"rows", {{1, 2}}}};
  CHECK_FALSE(diagnose_linsys(ragged, "linsys").empty());
}

TEST_CASE("decomposition documents") {
  auto D = decomposition_from_json(load_json_file(kData + "/taxicab_decomp.json"));
  CHECK(D.h() == 2);
  CHECK(verify_h_decomposition(taxicab(), D));
  auto back = decomposition_from_json(decomposition_to_json(D));
  CHECK(verify_h_decomposition(taxicab(), back));
}

TEST_CASE("validate_config on the examples") {
  TempDir tmp;
  CHECK(validate_config(tmp.write("ok.json", base_config())).empty());
  CHECK(validate_config(kData + "/taxicab_experiment.json").empty());

  auto zero_eta = base_config();
  zero_eta["eta"] = 0;
  CHECK(mentions(validate_config(tmp.write("eta.json", zero_eta)), "eta must be positive"));

  Json bad_form = {{"n", 3}, {"monomials", {{{"i", 2}, {"j", 1}, {"k", 3}, {"c", "1"}}}}};
  auto cfg = base_config();
  cfg["form"] = tmp.write("bad_form.json", bad_form);
  CHECK(mentions(validate_config(tmp.write("order.json", cfg)), "index order"));

  auto tau = base_config();
  tau["tau"] = {0.1, 0.2};
  CHECK(mentions(validate_config(tmp.write("tau.json", tau)), "config.tau"));

  auto sched = base_config();
  sched["singular_integral"]["schedule"] = {4, 2, 8};
  CHECK(mentions(validate_config(tmp.write("sched.json", sched)), "increasing"));

  auto missing = base_config();
  missing["form"] = "does_not_exist.json";
  CHECK(mentions(validate_config(tmp.write("missing.json", missing)), "cannot open"));

  CHECK_THROWS_AS(load_config(tmp.write("eta2.json", zero_eta)), ConfigError);
  CHECK_FALSE(validate_config(tmp.path.string() + "/nothing.json").empty());
}

TEST_CASE("threshold_status") {
  CHECK(threshold_status(2, 2, 24) == "false");
  CHECK(threshold_status(30, 40, 24) == "true");
  CHECK(threshold_status(20, 30, 24) == "undetermined");
}

TEST_CASE("asymptotic experiment on the taxicab form") {
  TempDir tmp;
  auto cfg = load_config(tmp.write("taxicab.json", base_config()));
  auto report = run_asymptotic_experiment(cfg);
  CHECK(report["hypotheses"]["theorem1_h_gt_16_plus_8r"] == "false");
  CHECK(report["hypotheses"]["theorem2_n_gt_16_plus_9r"] == "false");
  CHECK(report["hypotheses"]["theorem3_h_gt_16"] == "false");
  CHECK(report["h_bounds"]["lower"] == 2);
  CHECK(report["h_bounds"]["upper"] == 2);
  REQUIRE(report["counts"].size() == 2);
  for (const auto& row : report["counts"]) {
    CHECK(row.contains("ratio"));
    CHECK(row["N_w"].contains("error"));
  }
  CHECK(report["config"] == base_config());
  CHECK(report["seed"] == 7);
  CHECK(report["tool"].contains("version"));
  CHECK_FALSE(report.contains("timings_ms"));

  // Bit-for-bit reproducible.
  CHECK(run_asymptotic_experiment(cfg).dump() == report.dump());
}

TEST_CASE("asymptotic experiment without linear constraints") {
  TempDir tmp;
  auto doc = base_config();
  doc.erase("linsys");
  doc.erase("decomposition");
  doc["tau"] = Json::array();
  auto cfg = load_config(tmp.write("r0.json", doc));
  auto report = run_asymptotic_experiment(cfg);
  CHECK(report["form"]["r"] == 0);
  const auto& chi = report["chi_w"];
  double chi_value = chi["converged"].get<bool>() ? chi["value"].get<double>()
                                                  : chi["provisional_last_IL"]["value"].get<double>();
  double series = report["singular_series"]["partial_sum"]["value"];
  for (const auto& row : report["counts"]) {
    double P = row["P"];
    double expected = row["N_w"]["value"].get<double>() / (series * chi_value * std::pow(P, 4 - 3));
    CHECK(row["ratio"].get<double>() == doctest::Approx(expected).epsilon(1e-12));
  }
}
