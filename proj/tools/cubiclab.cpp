// cubiclab: command line front end. Every subcommand parses its arguments,
// calls one library operation and prints the result as JSON (or CSV).

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cubiclab/concurrency.hpp"
#include "cubiclab/equidist.hpp"
#include "cubiclab/errors.hpp"
#include "cubiclab/exp_sums.hpp"
#include "cubiclab/experiment.hpp"
#include "cubiclab/io.hpp"
#include "cubiclab/kernels.hpp"
#include "cubiclab/lattice_enum.hpp"
#include "cubiclab/linear_construction.hpp"
#include "cubiclab/singular_integral.hpp"
#include "cubiclab/singular_series.hpp"

using namespace cubiclab;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitBudget = 3;
constexpr int kExitConvergence = 4;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  for (const auto& s : split(text, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(s, &used));
      if (used != s.size()) throw std::invalid_argument(s);
    } catch (const std::exception&) {
      throw ConfigError("not a real number: '" + s + "'");
    }
  }
  return out;
}

IntVec parse_ints(const std::string& text) {
  IntVec out;
  for (const auto& s : split(text, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(s, &used));
      if (used != s.size()) throw std::invalid_argument(s);
    } catch (const std::exception&) {
      throw ConfigError("not an integer: '" + s + "'");
    }
  }
  return out;
}

LoadedForm load_form(const std::string& path) { return form_from_json(load_json_file(path)); }

std::optional<LinearSystem> load_linsys(const std::string& path) {
  if (path.empty()) return std::nullopt;
  return linsys_from_json(load_json_file(path));
}

void print(const Json& j) { std::cout << j.dump(2) << '\n'; }

Json complex_json(const ExpSumValue& v) {
  return {{"re", v.value.real()}, {"im", v.value.imag()}, {"abs_error", v.abs_error}};
}

Json rows_json(const std::vector<ScheduleRow>& table) {
  Json t = Json::array();
  for (const auto& row : table) t.push_back({{"L", row.L}, {"IL", row.IL}, {"stderr", row.std_error}});
  return t;
}

Json sandwich_row_json(const SandwichRow& r) {
  return {{"t", r.t},           {"numeric_minus", r.numeric_minus}, {"numeric_plus", r.numeric_plus},
          {"hat_minus", r.hat_minus}, {"hat_plus", r.hat_plus},     {"indicator", r.indicator},
          {"transform_ok", r.transform_ok}, {"chain_ok", r.chain_ok}};
}

using Clock = std::chrono::steady_clock;
double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cubiclab: integer zeros of cubic forms under linear-form inequalities"};
  app.require_subcommand(1);
  int workers = 0;
  app.add_option("--workers", workers, "worker threads (default: $CUBICLAB_WORKERS or all cores)")
      ->check(CLI::NonNegativeNumber)
      ->each([](const std::string& w) { set_worker_count(std::stoi(w)); });
  int exit_code = 0;

  // count ------------------------------------------------------------------
  struct {
    std::string form, linsys, tau, strategy = "direct", dump;
    double eta = 1.0, P = 1.0;
    bool weighted = false, timings = false;
  } cnt;
  auto* count_cmd = app.add_subcommand("count", "weighted or unweighted count of constrained zeros");
  count_cmd->add_option("--form", cnt.form, "cubic form JSON")->required();
  count_cmd->add_option("--linsys", cnt.linsys, "linear system JSON (omit for r = 0)");
  count_cmd->add_option("--tau", cnt.tau, "comma-separated targets, one per linear form");
  count_cmd->add_option("--eta", cnt.eta, "half-width of the constraint window");
  count_cmd->add_option("--P", cnt.P, "box scale")->required();
  count_cmd->add_flag("--weighted", cnt.weighted, "sum w(x/P) instead of counting");
  count_cmd->add_option("--strategy", cnt.strategy, "direct | mim");
  count_cmd->add_option("--dump-solutions", cnt.dump, "write every counted zero to this CSV file");
  count_cmd->add_flag("--timings", cnt.timings, "include wall_ms");
  count_cmd->callback([&] {
    auto t0 = Clock::now();
    CountQuery q(load_form(cnt.form).form);
    q.lsys = load_linsys(cnt.linsys);
    q.tau = parse_reals(cnt.tau);
    q.eta = cnt.eta;
    q.P = cnt.P;
    q.weighted = cnt.weighted;
    q.options.strategy = parse_strategy(cnt.strategy);
    if (!cnt.dump.empty()) q.sample_limit = std::numeric_limits<std::size_t>::max();
    auto res = count(q);
    Json out = {{"value", res.value},
                {"solutions", res.solutions_found},
                {"points_examined", res.points_examined},
                {"strategy", to_string(res.used)}};
    if (!cnt.dump.empty()) {
      std::ofstream csv(cnt.dump);
      if (!csv) throw ConfigError("cannot write " + cnt.dump);
      for (const auto& x : res.solutions) {
        for (std::size_t i = 0; i < x.size(); ++i) csv << (i ? "," : "") << x[i];
        csv << '\n';
      }
    }
    if (cnt.timings) out["wall_ms"] = elapsed_ms(t0);
    print(out);
  });

  // expsum -----------------------------------------------------------------
  auto* expsum_cmd = app.add_subcommand("expsum", "complete sums S_{q,a,avec} and generating sums g");
  expsum_cmd->require_subcommand(1);
  struct {
    std::string form, avec;
    std::int64_t q = 1, a = 1;
    bool crt = false;
  } cs;
  auto* complete_cmd = expsum_cmd->add_subcommand("complete", "sum over y mod q of e_q(a C(y) + avec.y)");
  complete_cmd->add_option("--form", cs.form)->required();
  complete_cmd->add_option("--q", cs.q)->required()->check(CLI::PositiveNumber);
  complete_cmd->add_option("--a", cs.a);
  complete_cmd->add_option("--avec", cs.avec, "comma-separated integers (default 0)");
  complete_cmd->add_flag("--crt", cs.crt, "factor over prime powers");
  complete_cmd->callback([&] {
    auto C = load_form(cs.form).form;
    IntVec avec = cs.avec.empty() ? IntVec(C.n(), 0) : parse_ints(cs.avec);
    if (static_cast<int>(avec.size()) != C.n()) throw DimensionMismatch(C.n(), avec.size());
    print(complex_json(cs.crt ? complete_sum_crt(C, cs.q, cs.a, avec) : complete_sum(C, cs.q, cs.a, avec)));
  });
  struct {
    std::string form, lambda;
    double P = 1, alpha0 = 0;
    bool weighted = false;
  } gs;
  auto* g_cmd = expsum_cmd->add_subcommand("g", "sum over the box of (w(x/P)) e(alpha0 C(x) + lambda.x)");
  g_cmd->add_option("--form", gs.form)->required();
  g_cmd->add_option("--P", gs.P)->required();
  g_cmd->add_option("--alpha0", gs.alpha0);
  g_cmd->add_option("--lambda", gs.lambda, "comma-separated reals (default 0)");
  g_cmd->add_flag("--weighted", gs.weighted);
  g_cmd->callback([&] {
    auto C = load_form(gs.form).form;
    auto lambda = gs.lambda.empty() ? std::vector<double>(C.n(), 0.0) : parse_reals(gs.lambda);
    print(complex_json(sum_g(C, gs.P, gs.alpha0, lambda, gs.weighted)));
  });

  // sseries ----------------------------------------------------------------
  struct {
    std::string form;
    std::int64_t Q = 50, pmax = 13;
    int depth = 3;
    double psi = 0.25;
  } ss;
  auto* ss_cmd = app.add_subcommand("sseries", "truncated singular series, local densities, p-adic certificates");
  ss_cmd->add_option("--form", ss.form)->required();
  ss_cmd->add_option("--Q", ss.Q)->check(CLI::PositiveNumber);
  ss_cmd->add_option("--pmax", ss.pmax)->check(CLI::PositiveNumber);
  ss_cmd->add_option("--depth", ss.depth, "local density depth and p-adic modulus exponent")
      ->check(CLI::PositiveNumber);
  ss_cmd->add_option("--psi", ss.psi);
  ss_cmd->callback([&] {
    auto C = load_form(ss.form).form;
    PositivityOptions po;
    po.pmax = ss.pmax;
    po.m_max = ss.depth;
    po.Q = ss.Q;
    po.sbound_qmax = std::min<std::int64_t>(ss.Q, 20);
    po.psi = ss.psi;
    auto rep = positivity_report(C, po);
    Json per_q = Json::array();
    for (const auto& t : rep.series.terms)
      per_q.push_back({{"q", t.q}, {"value", t.value}, {"imag", t.imag}, {"exact", to_string(t.exact)}});
    Json local = Json::array();
    for (auto p : primes_up_to(ss.pmax))
      for (int k = 1; k <= ss.depth; ++k) {
        if (pow_budget(static_cast<double>(p), k * C.n()) > kLocalBudget) {
          local.push_back({{"p", p}, {"k", k}, {"sigma", nullptr}, {"note", "skipped: p^(kn) exceeds budget"}});
          continue;
        }
        auto d = local_density(C, p, k);
        local.push_back({{"p", p}, {"k", k}, {"sigma", to_string(d.sigma)}, {"solutions", d.solutions}});
      }
    Json certs = Json::array();
    for (const auto& e : rep.primes) {
      Json c = {{"p", e.p}, {"status", to_string(e.search.status)}, {"depth_reached", e.search.depth_reached}};
      if (e.search.certificate) {
        const auto& cert = *e.search.certificate;
        c["a"] = cert.a;
        c["m"] = cert.m;
        c["t"] = cert.t;
        c["slack"] = cert.slack;
      }
      certs.push_back(c);
    }
    Json out = {{"partial_sum", rep.series.value},
                {"partial_sum_exact", to_string(rep.series.exact)},
                {"Q", ss.Q},
                {"per_q", per_q},
                {"local", local},
                {"certificates", certs},
                {"h_lower", rep.h_lower},
                {"h_upper", rep.h_upper},
                {"observed_constant", rep.observed_constant},
                {"tail_heuristic", rep.tail_heuristic ? Json(*rep.tail_heuristic) : Json(nullptr)},
                {"tail_note", rep.tail_note}};
    print(out);
  });

  // sintegral --------------------------------------------------------------
  struct {
    std::string form, linsys, schedule = "4,8,16,32";
    std::size_t samples = 1'000'000;
    std::uint64_t seed = 1;
    bool oscillatory = false;
    double tol = 1e-6, box = 40;
  } si;
  auto* si_cmd = app.add_subcommand("sintegral", "singular integral chi_w along a tent-function schedule");
  si_cmd->add_option("--form", si.form)->required();
  si_cmd->add_option("--linsys", si.linsys);
  si_cmd->add_option("--schedule", si.schedule, "comma-separated increasing L values");
  si_cmd->add_option("--samples", si.samples);
  si_cmd->add_option("--seed", si.seed);
  si_cmd->add_flag("--oscillatory", si.oscillatory, "also evaluate the oscillatory form (n <= 3, r <= 1)");
  si_cmd->add_option("--tol", si.tol, "quadrature tolerance for --oscillatory");
  si_cmd->add_option("--box", si.box, "frequency truncation for --oscillatory");
  si_cmd->callback([&] {
    auto C = load_form(si.form).form;
    auto L = load_linsys(si.linsys);
    Json out;
    bool converged = true;
    try {
      auto est = chi_w_estimate(C, L, parse_reals(si.schedule), si.samples, si.seed);
      out = {{"value", est.value}, {"error_bar", est.error_bar}, {"table", rows_json(est.table)}};
    } catch (const ScheduleNotConverged& e) {
      converged = false;
      out = {{"value", nullptr}, {"error_bar", nullptr}, {"status", "not_converged"},
             {"message", e.what()}, {"table", rows_json(e.table())}};
    }
    out["seed"] = si.seed;
    out["samples"] = si.samples;
    out["criterion"] = "successive differences along the L schedule must decrease";
    if (si.oscillatory) {
      auto osc = chi_w_oscillatory(C, L, {si.box, si.box}, si.tol);
      out["oscillatory"] = {{"re", osc.value.value.real()}, {"im", osc.value.value.imag()},
                            {"abs_error", osc.value.abs_error}, {"quad_error", osc.quad_error},
                            {"tail_bound", osc.tail_bound}};
    }
    print(out);
    if (!converged) exit_code = kExitConvergence;
  });

  // kernel -----------------------------------------------------------------
  auto* kernel_cmd = app.add_subcommand("kernel", "Freeman kernels");
  kernel_cmd->require_subcommand(1);
  struct {
    double eta = 0.05, P = 100, theta = 0.01, tol = 1e-4;
    std::string policy = "log";
    std::size_t grid = 200;
  } kc;
  auto* check_cmd = kernel_cmd->add_subcommand("check", "trapezoid transforms against numerical Fourier integrals");
  check_cmd->add_option("--eta", kc.eta)->check(CLI::PositiveNumber);
  check_cmd->add_option("--P", kc.P);
  check_cmd->add_option("--policy", kc.policy, "log | pow");
  check_cmd->add_option("--theta", kc.theta, "exponent for --policy pow");
  check_cmd->add_option("--grid", kc.grid, "uniform t grid on [-2 eta, 2 eta]")->check(CLI::PositiveNumber);
  check_cmd->add_option("--tol", kc.tol)->check(CLI::PositiveNumber);
  check_cmd->callback([&] {
    auto kp = KernelParams::from_P(kc.eta, kc.P, parse_tpolicy(kc.policy), KernelSign::plus, kc.theta);
    std::vector<double> grid(kc.grid);
    for (std::size_t i = 0; i < kc.grid; ++i)
      grid[i] = kc.grid == 1 ? 0.0 : -2 * kc.eta + 4 * kc.eta * static_cast<double>(i) / static_cast<double>(kc.grid - 1);
    auto rep = sandwich_check(kp.eta, kp.rho, grid, kc.tol, /*report_only=*/true);
    Json rows = Json::array(), knots = Json::array();
    for (const auto& r : rep.rows) rows.push_back(sandwich_row_json(r));
    for (const auto& r : rep.knots) knots.push_back(sandwich_row_json(r));
    print({{"eta", rep.eta}, {"rho", rep.rho}, {"T", kp.T}, {"LP", kp.LP}, {"policy", kc.policy},
           {"alpha_cutoff", rep.alpha_cutoff}, {"tail_bound", rep.tail_bound}, {"quad_tol", rep.quad_tol},
           {"max_deviation", rep.max_deviation}, {"ok", rep.ok}, {"rows", rows}, {"knots", knots}});
    if (!rep.ok) throw SandwichViolation("kernel sandwich check failed; see rows");
  });
  struct {
    std::string linsys, alpha, Ps = "100,1000,10000";
  } kf;
  auto* f_cmd = kernel_cmd->add_subcommand("irrationality", "the functional F(alpha; P) for a list of P");
  f_cmd->add_option("--linsys", kf.linsys)->required();
  f_cmd->add_option("--alpha", kf.alpha, "comma-separated, one per linear form")->required();
  f_cmd->add_option("--P", kf.Ps, "comma-separated P values");
  f_cmd->callback([&] {
    auto L = *load_linsys(kf.linsys);
    auto alpha = parse_reals(kf.alpha);
    if (static_cast<int>(alpha.size()) != L.r()) throw DimensionMismatch(L.r(), alpha.size());
    Json rows = Json::array();
    for (double P : parse_reals(kf.Ps)) {
      auto v = irrationality_F(L, alpha, P);
      rows.push_back({{"P", P}, {"value", v.value}, {"q", v.q}, {"avec", v.avec}});
    }
    print({{"alpha", alpha}, {"rows", rows}});
  });

  // weyl -------------------------------------------------------------------
  struct {
    std::string form, linsys, k, strategy = "direct";
    double P = 1;
  } wy;
  auto* weyl_cmd = app.add_subcommand("weyl", "normalized Weyl sum over the zeros with |x| <= P");
  weyl_cmd->add_option("--form", wy.form)->required();
  weyl_cmd->add_option("--linsys", wy.linsys)->required();
  weyl_cmd->add_option("--k", wy.k, "comma-separated nonzero frequency vector")->required();
  weyl_cmd->add_option("--P", wy.P)->required();
  weyl_cmd->add_option("--strategy", wy.strategy, "direct | mim");
  weyl_cmd->callback([&] {
    auto C = load_form(wy.form).form;
    auto L = *load_linsys(wy.linsys);
    EnumOptions opts;
    opts.strategy = parse_strategy(wy.strategy);
    auto st = weyl_sum(C, L, parse_ints(wy.k), wy.P, opts);
    print({{"k", st.k}, {"P", st.P}, {"N", st.N},
           {"sum", {{"re", st.sum.real()}, {"im", st.sum.imag()}}},
           {"normalized", {{"re", st.normalized.real()}, {"im", st.normalized.imag()}}},
           {"abs_normalized", std::abs(st.normalized)}});
  });

  // equidist ---------------------------------------------------------------
  struct {
    std::string form, linsys, Pgrid = "20,40,80", kset = "1", strategy = "mim", out;
    std::size_t boxes = 500;
    std::uint64_t seed = 11;
  } eq;
  auto* eq_cmd = app.add_subcommand("equidist", "discrepancy and Weyl sums of L(Z) mod 1 along a P grid (CSV)");
  eq_cmd->add_option("--form", eq.form)->required();
  eq_cmd->add_option("--linsys", eq.linsys)->required();
  eq_cmd->add_option("--Pgrid", eq.Pgrid);
  eq_cmd->add_option("--kset", eq.kset, "frequency vectors separated by ';', entries by ','");
  eq_cmd->add_option("--boxes", eq.boxes)->check(CLI::PositiveNumber);
  eq_cmd->add_option("--seed", eq.seed);
  eq_cmd->add_option("--strategy", eq.strategy, "direct | mim");
  eq_cmd->add_option("--out", eq.out, "CSV path (default: stdout)");
  eq_cmd->callback([&] {
    auto C = load_form(eq.form).form;
    auto L = *load_linsys(eq.linsys);
    std::vector<IntVec> kset;
    for (const auto& k : split(eq.kset, ';')) kset.push_back(parse_ints(k));
    EnumOptions opts;
    opts.strategy = parse_strategy(eq.strategy);
    auto table = equidist_experiment(C, L, parse_reals(eq.Pgrid), kset, eq.boxes, eq.seed, opts);
    if (eq.out.empty()) {
      std::cout << table.to_csv();
    } else {
      std::ofstream csv(eq.out);
      if (!csv) throw ConfigError("cannot write " + eq.out);
      csv << table.to_csv();
    }
  });

  // construct --------------------------------------------------------------
  struct {
    std::string form, decomp, linsys, tau;
    double eta = 0.05;
    std::int64_t Y = 500;
  } cn;
  auto* cn_cmd = app.add_subcommand("construct", "search the kernel of the A-system for a constrained zero");
  cn_cmd->add_option("--form", cn.form)->required();
  cn_cmd->add_option("--decomp", cn.decomp)->required();
  cn_cmd->add_option("--linsys", cn.linsys)->required();
  cn_cmd->add_option("--tau", cn.tau)->required();
  cn_cmd->add_option("--eta", cn.eta)->check(CLI::PositiveNumber);
  cn_cmd->add_option("--Y", cn.Y)->check(CLI::NonNegativeNumber);
  cn_cmd->callback([&] {
    auto loaded = load_form(cn.form);
    auto D = rescale_decomposition(decomposition_from_json(load_json_file(cn.decomp)), loaded.scale);
    auto L = *load_linsys(cn.linsys);
    auto res = solve_system(loaded.form, D, L, parse_reals(cn.tau), cn.eta, cn.Y);
    Json basis = Json::array();
    for (const auto& v : res.basis.vectors) {
      Json row = Json::array();
      for (const auto& z : v) row.push_back(to_string(z));
      basis.push_back(row);
    }
    Json reduced = Json::array();
    for (const auto& row : res.reduced.rows) reduced.push_back(row.real_coeffs());
    Json out = {{"found", res.x.has_value()},
                {"kernel_basis", basis},
                {"kernel_index", to_string(res.basis.index)},
                {"reduced_system", reduced},
                {"shells_searched", res.shells_searched},
                {"assumption", "algebraic independence of the coefficients is not checked"}};
    if (res.x) {
      out["x"] = *res.x;
      out["y"] = *res.y;
      out["transcript"] = {{"C(x)", res.cubic_value}, {"L(x)", res.linear_values}};
    } else {
      out["message"] = "not found within bound";
    }
    print(out);
  });

  // asymptotic / validate --------------------------------------------------
  std::string asym_config;
  bool asym_timings = false;
  auto* asym_cmd = app.add_subcommand("asymptotic", "N_w(P) against the predicted main term along a P grid");
  asym_cmd->add_option("--config", asym_config)->required();
  asym_cmd->add_flag("--timings", asym_timings, "add per-stage wall times (makes the report non-reproducible)");
  asym_cmd->callback([&] {
    auto cfg = load_config(asym_config);
    cfg.timings = cfg.timings || asym_timings;
    print(run_asymptotic_experiment(cfg));
  });

  std::string val_config;
  auto* val_cmd = app.add_subcommand("validate", "check an experiment config and the files it references");
  val_cmd->add_option("config", val_config)->required();
  val_cmd->callback([&] {
    auto diags = validate_config(val_config);
    print({{"ok", diags.empty()}, {"diagnostics", diags}});
    if (!diags.empty()) exit_code = kExitConfig;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DimensionMismatch& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SplitUnavailable& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ResourceLimit& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kExitBudget;
  } catch (const NotConverged& e) {
    std::cerr << "not converged: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const ToleranceNotMet& e) {
    std::cerr << "not converged: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return exit_code;
}
