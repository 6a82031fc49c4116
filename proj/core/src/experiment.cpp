#include "cubiclab/experiment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "cubiclab/errors.hpp"
#include "cubiclab/singular_integral.hpp"
#include "cubiclab/singular_series.hpp"

#ifndef CUBICLAB_VERSION
#define CUBICLAB_VERSION "0.0.0"
#endif

namespace cubiclab {

namespace {

std::string resolve(const std::string& base_dir, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_absolute() || base_dir.empty()) return path.string();
  return (std::filesystem::path(base_dir) / path).string();
}

bool is_number_array(const Json& v) {
  return v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_number(); });
}

template <class F>
void check_document(std::vector<std::string>& out, const std::string& path, const std::string& where, F diagnose) {
  try {
    auto doc = load_json_file(path);
    auto d = diagnose(doc, where);
    out.insert(out.end(), d.begin(), d.end());
  } catch (const ConfigError& e) {
    out.push_back(where + ": " + e.what());
  }
}

Json quantity(double value, double error) { return {{"value", value}, {"error", error}}; }
Json exact_quantity(double value) { return {{"value", value}, {"exact", true}}; }

}  // namespace

std::vector<std::string> validate_config_json(const Json& doc, const std::string& base_dir) {
  std::vector<std::string> out;
  if (!doc.is_object()) return {"config: must be a JSON object"};
  if (!doc.contains("form") || !doc["form"].is_string()) {
    out.push_back("config.form: required path string");
  } else {
    check_document(out, resolve(base_dir, doc["form"]), "form", diagnose_form);
  }
  int r = 0;
  if (doc.contains("linsys")) {
    if (!doc["linsys"].is_string()) {
      out.push_back("config.linsys: must be a path string");
    } else {
      const auto path = resolve(base_dir, doc["linsys"]);
      check_document(out, path, "linsys", diagnose_linsys);
      try {
        auto ls = load_json_file(path);
        if (ls.contains("r") && ls["r"].is_number_integer()) r = ls["r"].get<int>();
      } catch (const ConfigError&) {
      }
    }
  }
  if (doc.contains("decomposition")) {
    if (!doc["decomposition"].is_string()) out.push_back("config.decomposition: must be a path string");
    else check_document(out, resolve(base_dir, doc["decomposition"]), "decomposition", diagnose_decomposition);
  }
  if (!doc.contains("eta") || !doc["eta"].is_number()) out.push_back("config.eta: required number");
  else if (!(doc["eta"].get<double>() > 0)) out.push_back("config.eta: eta must be positive");
  if (doc.contains("tau")) {
    if (!is_number_array(doc["tau"])) out.push_back("config.tau: must be an array of numbers");
    else if (static_cast<int>(doc["tau"].size()) != r)
      out.push_back("config.tau: expected " + std::to_string(r) + " entries (one per linear form)");
  } else if (r > 0) {
    out.push_back("config.tau: required when a linear system is given");
  }
  if (!doc.contains("P_grid") || !is_number_array(doc["P_grid"]) || doc["P_grid"].empty()) {
    out.push_back("config.P_grid: required nonempty array of numbers");
  } else {
    for (std::size_t i = 0; i < doc["P_grid"].size(); ++i)
      if (!(doc["P_grid"][i].get<double>() >= 1)) out.push_back("config.P_grid[" + std::to_string(i) + "]: P must be at least 1");
  }
  if (doc.contains("seed") && !doc["seed"].is_number_unsigned()) out.push_back("config.seed: must be a nonnegative integer");
  if (doc.contains("series")) {
    const auto& s = doc["series"];
    if (!s.is_object() || (s.contains("Q") && !(s["Q"].is_number_integer() && s["Q"].get<int>() >= 1)))
      out.push_back("config.series.Q: must be a positive integer");
  }
  if (doc.contains("singular_integral")) {
    const auto& s = doc["singular_integral"];
    if (!s.is_object()) {
      out.push_back("config.singular_integral: must be an object");
    } else {
      if (s.contains("schedule")) {
        if (!is_number_array(s["schedule"]) || s["schedule"].size() < 3)
          out.push_back("config.singular_integral.schedule: need at least 3 numbers");
        else
          for (std::size_t i = 1; i < s["schedule"].size(); ++i)
            if (!(s["schedule"][i].get<double>() > s["schedule"][i - 1].get<double>()))
              out.push_back("config.singular_integral.schedule: must be increasing");
      }
      if (s.contains("samples") && !(s["samples"].is_number_integer() && s["samples"].get<std::int64_t>() >= 1000))
        out.push_back("config.singular_integral.samples: at least 1000 required");
    }
  }
  if (doc.contains("enumeration")) {
    const auto& e = doc["enumeration"];
    if (!e.is_object()) {
      out.push_back("config.enumeration: must be an object");
    } else if (e.contains("strategy")) {
      try {
        parse_strategy(e["strategy"].get<std::string>());
      } catch (const std::exception& ex) {
        out.push_back(std::string("config.enumeration.strategy: ") + ex.what());
      }
    }
  }
  if (doc.contains("kernel")) {
    const auto& k = doc["kernel"];
    if (k.contains("policy")) try {
        parse_tpolicy(k["policy"].get<std::string>());
      } catch (const std::exception& ex) {
        out.push_back(std::string("config.kernel.policy: ") + ex.what());
      }
    if (k.contains("theta") && !(k["theta"].is_number() && k["theta"].get<double>() > 0 && k["theta"].get<double>() <= 1))
      out.push_back("config.kernel.theta: must lie in (0, 1]");
  }
  return out;
}

std::vector<std::string> validate_config(const std::string& path) {
  Json doc;
  try {
    doc = load_json_file(path);
  } catch (const ConfigError& e) {
    return {e.what()};
  }
  return validate_config_json(doc, std::filesystem::path(path).parent_path().string());
}

ExperimentConfig load_config(const std::string& path) {
  auto diags = validate_config(path);
  if (!diags.empty()) {
    std::string msg;
    for (const auto& d : diags) msg += (msg.empty() ? "" : "; ") + d;
    throw ConfigError(msg);
  }
  const auto doc = load_json_file(path);
  const std::string base = std::filesystem::path(path).parent_path().string();
  ExperimentConfig cfg;
  cfg.source = doc;
  cfg.form_path = resolve(base, doc["form"]);
  if (doc.contains("linsys")) cfg.linsys_path = resolve(base, doc["linsys"]);
  if (doc.contains("decomposition")) cfg.decomp_path = resolve(base, doc["decomposition"]);
  cfg.tau = doc.value("tau", std::vector<double>{});
  cfg.eta = doc["eta"].get<double>();
  cfg.P_grid = doc["P_grid"].get<std::vector<double>>();
  cfg.seed = doc.value("seed", std::uint64_t{1});
  if (doc.contains("series")) cfg.series_Q = doc["series"].value("Q", cfg.series_Q);
  if (doc.contains("singular_integral")) {
    const auto& s = doc["singular_integral"];
    cfg.schedule = s.value("schedule", cfg.schedule);
    cfg.samples = s.value("samples", cfg.samples);
  }
  if (doc.contains("enumeration")) {
    const auto& e = doc["enumeration"];
    if (e.contains("strategy")) cfg.enumeration.strategy = parse_strategy(e["strategy"].get<std::string>());
    cfg.enumeration.mim_memory_cap = e.value("memory_cap_bytes", cfg.enumeration.mim_memory_cap);
    cfg.enumeration.point_budget = e.value("point_budget", cfg.enumeration.point_budget);
  }
  if (doc.contains("kernel")) {
    const auto& k = doc["kernel"];
    if (k.contains("policy")) cfg.kernel_policy = parse_tpolicy(k["policy"].get<std::string>());
    cfg.kernel_theta = k.value("theta", cfg.kernel_theta);
  }
  if (doc.contains("h_search")) cfg.h_height = doc["h_search"].value("height", cfg.h_height);
  cfg.timings = doc.value("timings", false);
  return cfg;
}

std::string threshold_status(int lower, int upper, int threshold) {
  if (lower > threshold) return "true";
  if (upper <= threshold) return "false";
  return "undetermined";
}

Json run_asymptotic_experiment(const ExperimentConfig& cfg) {
  using Clock = std::chrono::steady_clock;
  Json timings = Json::object();
  auto stage = [&](const char* name, auto&& fn) {
    auto t0 = Clock::now();
    fn();
    timings[name] = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  };

  const auto loaded = form_from_json(load_json_file(cfg.form_path));
  const CubicForm& C = loaded.form;
  std::optional<LinearSystem> L;
  if (cfg.linsys_path) L = linsys_from_json(load_json_file(*cfg.linsys_path));
  std::optional<HDecomposition> D;
  if (cfg.decomp_path) D = decomposition_from_json(load_json_file(*cfg.decomp_path));
  const int n = C.n();
  const int r = L ? L->r() : 0;
  if (L && L->n() != n) throw ConfigError("linear system and form have different n");
  if (static_cast<int>(cfg.tau.size()) != r) throw ConfigError("tau length differs from r");
  if (D) D = rescale_decomposition(*D, loaded.scale);

  Json report;
  report["tool"] = {{"name", "cubiclab"}, {"version", CUBICLAB_VERSION}};
  report["config"] = cfg.source;
  report["seed"] = cfg.seed;
  report["form"] = {{"n", n}, {"r", r}, {"rescaling_factor", to_string(loaded.scale)}};

  HBounds hb;
  stage("h_bounds", [&] {
    HSearch search;
    search.height = cfg.h_height;
    hb = h_bounds(C, D, search);
  });
  Json hjson = {{"lower", hb.lower}, {"upper", hb.upper}, {"exact", hb.exact()}};
  if (hb.space) hjson["space"] = *hb.space;
  if (hb.exclusion) hjson["exclusion"] = {{"p", hb.exclusion->p}, {"d", hb.exclusion->d}};
  report["h_bounds"] = hjson;
  report["hypotheses"] = {
      {"theorem1_h_gt_16_plus_8r", threshold_status(hb.lower, hb.upper, 16 + 8 * r)},
      {"theorem2_n_gt_16_plus_9r", n > 16 + 9 * r ? "true" : "false"},
      {"theorem3_h_gt_16", threshold_status(hb.lower, hb.upper, 16)},
      {"note", "hypothesis flags never gate computation"}};

  TruncatedSeries series;
  PositivityReport pos;
  stage("singular_series", [&] {
    PositivityOptions po;
    po.Q = cfg.series_Q;
    po.sbound_qmax = std::min<std::int64_t>(cfg.series_Q, 20);
    pos = positivity_report(C, po);
    series = pos.series;
  });
  Json sjson = {{"Q", cfg.series_Q}, {"partial_sum", exact_quantity(series.value)}, {"partial_sum_rational", to_string(series.exact)}};
  if (pos.tail_heuristic) sjson["truncation_error"] = *pos.tail_heuristic;
  else sjson["truncation_error"] = "unquantified";
  sjson["truncation_note"] = pos.tail_note;
  report["singular_series"] = sjson;

  Json chi;
  double chi_value = 0;
  bool chi_converged = false;
  stage("singular_integral", [&] {
    std::vector<ScheduleRow> table;
    try {
      auto est = chi_w_estimate(C, L, cfg.schedule, cfg.samples, cfg.seed);
      chi_value = est.value;
      chi_converged = true;
      chi["value"] = est.value;
      chi["error"] = est.error_bar;
      table = est.table;
    } catch (const ScheduleNotConverged& e) {
      table = e.table();
      chi_value = table.back().IL;
      chi["value"] = nullptr;
      chi["provisional_last_IL"] = quantity(table.back().IL, table.back().std_error);
      chi["status"] = "not_converged";
      chi["message"] = e.what();
    }
    Json t = Json::array();
    for (const auto& row : table) t.push_back({{"L", row.L}, {"IL", row.IL}, {"stderr", row.std_error}});
    chi["table"] = t;
    chi["converged"] = chi_converged;
    chi["criterion"] = "successive differences along the L schedule must decrease";
  });
  report["chi_w"] = chi;

  Json rows = Json::array();
  stage("counts", [&] {
    for (double P : cfg.P_grid) {
      CountQuery q(C);
      q.lsys = L;
      q.tau = cfg.tau;
      q.eta = cfg.eta;
      q.P = P;
      q.weighted = true;
      q.options = cfg.enumeration;
      auto res = count(q);
      const double main = std::pow(2.0 * cfg.eta, r) * series.value * chi_value * std::pow(P, n - r - 3);
      const double T = choose_T(P, cfg.kernel_policy, cfg.kernel_theta);
      Json row = {{"P", P},
                  {"N_w", quantity(res.value, 1e-15 * std::max(1.0, res.value) * static_cast<double>(res.solutions_found + 1))},
                  {"solutions", exact_quantity(static_cast<double>(res.solutions_found))},
                  {"strategy", to_string(res.used)},
                  {"main_term", main},
                  {"ratio", main != 0 ? Json(res.value / main) : Json(nullptr)},
                  {"ratio_basis", chi_converged ? "converged chi_w" : "provisional chi_w (last I_L)"},
                  {"kernel", {{"T", T}, {"LP", std::max(1.0, std::log(T))}, {"rho", cfg.eta / std::max(1.0, std::log(T))}}}};
      rows.push_back(row);
    }
  });
  report["counts"] = rows;
  report["kernel_policy"] = {{"policy", to_string(cfg.kernel_policy)}, {"theta", cfg.kernel_theta}};
  if (cfg.timings) report["timings_ms"] = timings;
  return report;
}

}  // namespace cubiclab
