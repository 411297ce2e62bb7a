#include "bogo/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>

#include "bogo/gcmc.hpp"
#include "bogo/hierarchy.hpp"
#include "bogo/manifest.hpp"
#include "bogo/rng.hpp"
#include "bogo/sde.hpp"
#include "bogo/sha256.hpp"
#include "bogo/solver.hpp"
#include "bogo/verify.hpp"
#include "json.hpp"

namespace bogo {

namespace {

using nlohmann::json;

const json& require(const json& j, const char* field, const std::string& where) {
  if (!j.contains(field)) fail(Errc::parse, "config: missing field '" + where + field + "'");
  return j[field];
}

double num(const json& j, const char* field, const std::string& where) {
  const json& v = require(j, field, where);
  if (!v.is_number()) fail(Errc::parse, "config: field '" + where + field + "' must be a number");
  return v.get<double>();
}

double num_or(const json& j, const char* field, double dflt) {
  return j.contains(field) ? j[field].get<double>() : dflt;
}

long integer(const json& j, const char* field, const std::string& where) {
  const json& v = require(j, field, where);
  if (!v.is_number_integer()) fail(Errc::parse, "config: field '" + where + field + "' must be an integer");
  return v.get<long>();
}

std::string text(const json& j, const char* field, const std::string& where) {
  const json& v = require(j, field, where);
  if (!v.is_string()) fail(Errc::parse, "config: field '" + where + field + "' must be a string");
  return v.get<std::string>();
}

struct Ctx {
  std::string out_dir;
  std::uint64_t seed = 1;
  int jobs = 1;
  double tol_scale = 1.0;
  RunManifest manifest;
  json results;

  void save(const std::string& name, const std::string& content) {
    write_file_atomic(out_dir + "/" + name, content);
    manifest.outputs.push_back(name);
  }
};

SiteSpace parse_space(const json& j, const std::string& where) {
  int n = static_cast<int>(integer(j, "n", where));
  double spacing = num_or(j, "spacing", 0.5);
  SiteSpace space = SiteSpace::line(n, spacing, 1.0);
  if (j.contains("sigma")) {
    const json& s = j["sigma"];
    if (s.is_array()) {
      auto v = s.get<std::vector<double>>();
      if (static_cast<int>(v.size()) != n) fail(Errc::parse, "config: '" + where + "sigma' length mismatch");
      space.sigma = v;
    } else {
      space.sigma.assign(n, s.get<double>());
    }
  }
  space.validate();
  return space;
}

RadialPotential parse_radial(const json& pot_block, const std::string& where) {
  const json& v = require(pot_block, "V", where);
  if (pot_block.contains("cutoff") && !v.contains("cutoff")) {
    json patched = v;
    patched["cutoff"] = pot_block["cutoff"];
    return RadialPotential::from_json_obj(&patched);
  }
  return RadialPotential::from_json_obj(&v);
}

PairPotential parse_potential(const json& j, const SiteSpace& space, const std::string& where) {
  std::string kind = j.contains("kind") ? j["kind"].get<std::string>() : std::string("radial");
  double beta = num(j, "beta", where);
  if (kind == "matrix") {
    const json& phi_j = require(j, "phi", where);
    int n = space.size();
    std::vector<std::vector<ExtReal>> phi(n, std::vector<ExtReal>(n));
    if (static_cast<int>(phi_j.size()) != n) fail(Errc::parse, "config: '" + where + "phi' must be n x n");
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        const json& cell = phi_j[i][k];
        if (cell.is_string() && cell.get<std::string>() == "inf")
          phi[i][k] = ExtReal::infinite();
        else
          phi[i][k] = {cell.get<double>(), false};
      }
    return PairPotential::from_matrix(std::move(phi), beta);
  }
  if (kind == "radial") return PairPotential::from_radial(parse_radial(j, where), space, beta);
  fail(Errc::parse, "config: '" + where + "kind' must be 'radial' or 'matrix'");
}

std::string state_jsonl_line(const ParticleState& s, int dim) {
  std::string line = "[";
  for (int i = 0; i < s.count(); ++i) {
    if (i) line += ",";
    line += "[";
    for (int d = 0; d < dim; ++d) {
      if (d) line += ",";
      line += format_double(s.pts[i][d]);
    }
    line += "]";
  }
  line += "]";
  return line;
}

// ---------------------------------------------------------------- exact ---
void cmd_exact(Ctx& ctx, const json& block) {
  SiteSpace space = block.contains("space") ? parse_space(block["space"], "exact.space.")
                                            : SiteSpace::uniform(8, 0.6);
  PairPotential pot =
      block.contains("potential")
          ? parse_potential(block["potential"], space, "exact.potential.")
          : PairPotential::from_matrix(
                std::vector<std::vector<ExtReal>>(space.size(), std::vector<ExtReal>(space.size())), 1.0);
  Philox rng(ctx.seed, 1);
  double tol = 1e-12 * ctx.tol_scale;

  SetFunction mu = gibbs_measure(space, pot);
  SetFunction k = correlation_from_measure(mu, space);
  auto lam = sigma_products(space, mu.window());

  SetFunction G = SetFunction::full(space, Role::quasi_observable);
  for (Mask m = 0; m < G.table_size(); ++m) G[m] = cplx(rng.normal(), rng.normal());
  double roundtrip = 0;
  SetFunction back = k_inverse(k_transform_table(G));
  for (Mask m = 0; m < G.table_size(); ++m) roundtrip = std::max(roundtrip, std::abs(back[m] - G[m]));
  ctx.manifest.assert_le("exact.k_roundtrip", roundtrip, tol);

  SetFunction KG = k_transform_table(G);
  cplx lhs(0, 0), rhs(0, 0);
  for (Mask m = 0; m < G.table_size(); ++m) {
    lhs += G[m] * k[m] * lam[m];
    rhs += KG[m] * mu[m];
  }
  ctx.manifest.assert_le("exact.duality", std::abs(lhs - rhs), tol * std::max(1.0, std::abs(lhs)));

  SetFunction mu_back = measure_from_correlation(k, space);
  double m56 = 0;
  for (Mask m = 0; m < mu.table_size(); ++m) m56 = std::max(m56, std::abs(mu_back[m] - mu[m]));
  ctx.manifest.assert_le("exact.m5_m6_roundtrip", m56, tol);

  std::vector<cplx> a(space.size());
  for (auto& v : a) v = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
  SetFunction b = SetFunction::full(space, Role::quasi_observable);
  for (Mask m = 0; m < b.table_size(); ++m) b[m] = 0.5 * cplx(rng.normal(), rng.normal());
  double gnz = gnz_residual(mu, space, pot, [&](int x, Mask g) { return a[x] * b[g]; });
  ctx.manifest.assert_le("exact.gnz_residual", gnz, tol);

  Field theta = Field::zeros(space.size());
  for (auto& v : theta.value) v = 0.4 * cplx(rng.normal(), rng.normal());
  double form_i = bogoliubov_equation_residual(mu, space, pot, theta, BogoForm::i);
  ctx.manifest.assert_le("exact.bogoliubov_form_i", form_i, 1e-10 * ctx.tol_scale);

  ctx.results["c_beta"] = mayer_norm(pot, space);
  ctx.results["n_sites"] = space.size();
  ctx.save("measure.json", mu.to_json(space));
  ctx.save("correlation.json", k.to_json(space));
}

// ----------------------------------------------------------- fixedpoint ---
void cmd_fixedpoint(Ctx& ctx, const json& block) {
  SiteSpace space = parse_space(require(block, "space", "fixedpoint."), "fixedpoint.space.");
  PairPotential pot =
      parse_potential(require(block, "potential", "fixedpoint."), space, "fixedpoint.potential.");
  double tol = num_or(block, "tol", 1e-10);
  int max_iter = static_cast<int>(num_or(block, "max_iter", 2000));
  double alpha = num_or(block, "alpha", 0.0);

  auto [L, rep] = fixed_point_solve(space, pot, tol, max_iter, nullptr, alpha, ctx.jobs);

  json report;
  report["alpha"] = rep.alpha;
  report["c_beta"] = rep.c_beta;
  report["rate_bound"] = rep.rate_bound;
  report["iterations"] = rep.iterations;
  report["final_delta"] = rep.final_delta;
  report["wall_time_s"] = rep.wall_time_s;
  report["deltas"] = rep.deltas;
  ctx.save("solution.json", L.to_json(space));
  // wall time stays out of results.json so reruns stay byte-identical
  json results_report = report;
  results_report.erase("wall_time_s");
  ctx.results["report"] = results_report;
  ctx.save("report.json", report.dump(2) + "\n");

  ctx.manifest.assert_true("fixedpoint.converged", rep.converged);
  if (space.size() <= 12) {
    SetFunction k_exact = correlation_from_measure(gibbs_measure(space, pot), space);
    double gap = 0;
    for (Mask m = 0; m < L.table_size(); ++m) gap = std::max(gap, std::abs(L[m] - k_exact[m]));
    ctx.manifest.assert_le("fixedpoint.gibbs_gap", gap, std::max(1e-8, 100 * tol) * ctx.tol_scale);
  }
  Philox rng(ctx.seed, 2);
  Field theta = Field::zeros(space.size());
  for (auto& v : theta.value) v = 0.3 * cplx(rng.normal(), rng.normal());
  double resid = bogoliubov_equation_residual(L, space, pot, theta, BogoForm::i);
  ctx.manifest.assert_le("fixedpoint.equation_residual", resid, std::max(1e-8, 100 * tol) * ctx.tol_scale);
}

// ----------------------------------------------------------------- gcmc ---
void cmd_gcmc(Ctx& ctx, const json& block) {
  ChainConfig cfg;
  const json& box = require(block, "box", "gcmc.");
  cfg.box = {static_cast<int>(integer(box, "dim", "gcmc.box.")), num(box, "side", "gcmc.box.")};
  cfg.z = num(block, "z", "gcmc.");
  cfg.beta = num(block, "beta", "gcmc.");
  cfg.pot = parse_radial(require(block, "potential", "gcmc."), "gcmc.potential.");
  cfg.n_sweeps = integer(block, "n_sweeps", "gcmc.");
  cfg.burn_in = integer(block, "burn_in", "gcmc.");
  cfg.thinning = block.contains("thinning") ? block["thinning"].get<long>() : 1;
  cfg.seed = ctx.seed;

  auto samples = run_gcmc(cfg);

  std::string jsonl;
  for (const auto& s : samples) jsonl += state_jsonl_line(s, cfg.box.dim) + "\n";
  ctx.save("samples.jsonl", jsonl);

  const json& bins = require(block, "bins", "gcmc.");
  CorrelationEstimate est = estimate_correlations(samples, cfg.box, num(bins, "r_max", "gcmc.bins."),
                                                  static_cast<int>(integer(bins, "n", "gcmc.bins.")));
  CsvWriter csv({"bin_lo", "bin_hi", "g", "se"});
  for (std::size_t b = 0; b < est.g.size(); ++b)
    csv.row({est.bin_lo[b], est.bin_hi[b], est.g[b], est.g_se[b]});
  ctx.save("gofr.csv", csv.str());
  ctx.results["k1"] = est.k1;
  ctx.results["k1_se"] = est.k1_se;
  ctx.results["n_samples"] = est.n_samples;
  ctx.results["g"] = est.g;
  ctx.results["g_se"] = est.g_se;
  ctx.results["bin_lo"] = est.bin_lo;
  ctx.results["bin_hi"] = est.bin_hi;

  if (block.contains("assert_ideal_gas") && block["assert_ideal_gas"].get<bool>()) {
    double dev = std::abs(est.k1 * cfg.box.volume() - cfg.z * cfg.box.volume());
    ctx.manifest.assert_le("gcmc.ideal_gas_count_3se", dev, 3 * est.k1_se * cfg.box.volume());
  }
  if (block.contains("gnz_test") && block["gnz_test"].get<bool>()) {
    GnzTestReport rep = gnz_statistical_test(samples, cfg, default_gnz_family(cfg.box, cfg.pot.cutoff()));
    ctx.results["gnz_pass_fraction"] = rep.pass_fraction;
    ctx.manifest.assert_true("gcmc.gnz_statistical_test", rep.pass,
                             "fraction " + format_double(rep.pass_fraction));
  }
}

// ------------------------------------------------------------------ sde ---
void cmd_sde(Ctx& ctx, const json& block) {
  SdeConfig cfg;
  const json& box = require(block, "box", "sde.");
  cfg.box = {static_cast<int>(integer(box, "dim", "sde.box.")), num(box, "side", "sde.box.")};
  std::string start = block.contains("start") ? block["start"].get<std::string>() : "poisson";
  if (start == "poisson")
    cfg.start = SdeConfig::Start::poisson;
  else if (start == "cosine")
    cfg.start = SdeConfig::Start::cosine;
  else if (start == "fixed")
    cfg.start = SdeConfig::Start::fixed;
  else
    fail(Errc::parse, "config: field 'sde.start' must be poisson, cosine or fixed");
  if (cfg.start == SdeConfig::Start::fixed) {
    for (const auto& pt : require(block, "points", "sde.")) {
      Point p{0, 0, 0};
      for (int d = 0; d < cfg.box.dim; ++d) p[d] = pt[d].get<double>();
      cfg.fixed_start.push_back(p);
    }
  } else {
    cfg.z = num(block, "z", "sde.");
  }
  cfg.cosine_amp = num_or(block, "cosine_amp", 0.5);
  cfg.beta = num(block, "beta", "sde.");
  cfg.pot = parse_radial(require(block, "potential", "sde."), "sde.potential.");
  cfg.dt = num(block, "dt", "sde.");
  cfg.t_end = num(block, "t_end", "sde.");
  cfg.n_replicas = static_cast<int>(integer(block, "n_replicas", "sde."));
  cfg.force_cap = num(block, "force_cap", "sde.");
  cfg.noise_scale = num_or(block, "noise_scale", 1.0);
  cfg.seed = ctx.seed;
  for (const auto& t : require(block, "record_times", "sde.")) cfg.record_times.push_back(t.get<double>());

  auto trajs = simulate_sde(cfg, ctx.jobs);

  std::string jsonl;
  for (std::size_t r = 0; r < trajs.size(); ++r)
    for (std::size_t s = 0; s < trajs[r].times.size(); ++s)
      jsonl += "{\"replica\":" + std::to_string(r) + ",\"t\":" + format_double(trajs[r].times[s]) +
               ",\"points\":" + state_jsonl_line(trajs[r].states[s], cfg.box.dim) + "}\n";
  ctx.save("snapshots.jsonl", jsonl);

  if (block.contains("bins") && cfg.n_replicas >= 100) {
    const json& bins = block["bins"];
    double r_max = num(bins, "r_max", "sde.bins.");
    int n_bins = static_cast<int>(integer(bins, "n", "sde.bins."));
    json all;
    CsvWriter csv({"t", "bin_lo", "bin_hi", "k2", "k2_se"});
    for (double t : cfg.record_times) {
      CorrelationEstimate est = empirical_correlations(trajs, cfg.box, t, r_max, n_bins);
      json e;
      e["t"] = t;
      e["k1"] = est.k1;
      e["k1_se"] = est.k1_se;
      e["k2"] = est.k2;
      e["k2_se"] = est.k2_se;
      all.push_back(e);
      for (std::size_t b = 0; b < est.k2.size(); ++b)
        csv.row({t, est.bin_lo[b], est.bin_hi[b], est.k2[b], est.k2_se[b]});
    }
    ctx.results["correlations"] = all;
    ctx.save("correlations.csv", csv.str());
  }
}

// ------------------------------------------------------------ hierarchy ---
void cmd_hierarchy(Ctx& ctx, const json& block) {
  const json& grid_j = require(block, "grid", "hierarchy.");
  Grid1 grid{static_cast<int>(integer(grid_j, "n", "hierarchy.grid.")),
             num(grid_j, "length", "hierarchy.grid.")};
  std::string mode = block.contains("mode") ? block["mode"].get<std::string>() : "full";
  std::string closure_name = text(block, "closure", "hierarchy.");
  Closure closure;
  if (closure_name == "zero")
    closure = Closure::zero;
  else if (closure_name == "product")
    closure = Closure::product;
  else
    fail(Errc::parse, "config: field 'hierarchy.closure' must be 'zero' or 'product'");
  double z = num(block, "z", "hierarchy.");
  double beta = num(block, "beta", "hierarchy.");
  RadialPotential pot = parse_radial(require(block, "potential", "hierarchy."), "hierarchy.potential.");

  HierarchyState init = HierarchyState::poisson(grid, z, closure, mode == "invariant");
  if (block.contains("cosine_amp") && mode == "full") {
    double amp = block["cosine_amp"].get<double>();
    for (int i = 0; i < grid.n; ++i)
      init.k1[i] = z * (1 + amp * std::cos(2 * 3.14159265358979323846 * grid.x(i) / grid.length));
    for (int i = 0; i < grid.n; ++i)
      for (int j = 0; j < grid.n; ++j) init.k2[std::size_t(i) * grid.n + j] = init.k1[i] * init.k1[j];
  }

  HierarchySolveConfig cfg;
  cfg.t_end = num(block, "t_end", "hierarchy.");
  cfg.dt = num(block, "dt", "hierarchy.");
  cfg.record_every = num_or(block, "record_every", 0.0);
  HierarchyTimeline tl = hierarchy_solve(init, pot, beta, cfg);

  CsvWriter prof(mode == "invariant" ? std::vector<std::string>{"t", "sep", "k2", "k1"}
                                     : std::vector<std::string>{"t", "x", "k1"});
  for (std::size_t s = 0; s < tl.states.size(); ++s) {
    const HierarchyState& st = tl.states[s];
    for (int i = 0; i < grid.n; ++i) {
      if (mode == "invariant")
        prof.row({tl.times[s], grid.x(i) <= grid.length / 2 ? grid.x(i) : grid.x(i) - grid.length,
                  st.k2_sep[i], st.k1_value});
      else
        prof.row({tl.times[s], grid.x(i), st.k1[i]});
    }
  }
  ctx.save("timeline.csv", prof.str());

  json diags;
  for (std::size_t s = 0; s < tl.states.size(); ++s) {
    json d;
    d["t"] = tl.times[s];
    d["m1"] = tl.diagnostics[s].m1;
    d["m2"] = tl.diagnostics[s].m2;
    d["c_fit"] = tl.diagnostics[s].c_fit;
    d["alpha_fit"] = tl.diagnostics[s].alpha_fit;
    diags.push_back(d);
  }
  ctx.results["ruelle_diagnostics"] = diags;
  ctx.results["times"] = tl.times;

  if (block.contains("residual_at") && tl.times.size() >= 3) {
    double t = block["residual_at"].get<double>();
    std::vector<double> theta(grid.n);
    double amp = num_or(block, "theta_amp", 0.8);
    for (int i = 0; i < grid.n; ++i) {
      double u = (grid.x(i) - grid.length / 2) / (grid.length / 4);
      theta[i] = std::abs(u) < 1 ? amp * std::exp(4.0 - 1.0 / ((1 - u) * (1 + u))) / std::exp(3.0) : 0.0;
    }
    double res = functional_evolution_residual(tl, pot, theta, t);
    ctx.results["functional_residual"] = res;
    double limit = num_or(block, "residual_limit", 0.05);
    ctx.manifest.assert_le("hierarchy.functional_residual", res, limit * ctx.tol_scale);
  }
}

// --------------------------------------------------------------- verify ---
void cmd_verify(Ctx& ctx, const json& block) {
  std::string suite = text(block, "suite", "verify.");
  VerifyOptions vopt;
  vopt.seed = ctx.seed;
  vopt.jobs = ctx.jobs;
  vopt.tol_scale = ctx.tol_scale;
  vopt.out_dir = ctx.out_dir;
  for (Assertion& a : run_suite(suite, vopt)) ctx.manifest.add(std::move(a));
}

}  // namespace

int run_config_json(const std::string& config_text, const RunOptions& opt) {
  json cfg;
  Ctx ctx;
  try {
    try {
      cfg = json::parse(config_text);
    } catch (const std::exception& e) {
      fail(Errc::parse, std::string("config: ") + e.what());
    }
    static const std::vector<std::string> kSubcommands = {"exact",     "fixedpoint", "gcmc",
                                                          "sde",       "hierarchy",  "verify"};
    std::string chosen;
    for (const std::string& s : kSubcommands)
      if (cfg.contains(s)) {
        if (!chosen.empty())
          fail(Errc::parse, "config: exactly one subcommand block allowed, found '" + chosen + "' and '" +
                                s + "'");
        chosen = s;
      }
    if (chosen.empty())
      fail(Errc::parse,
           "config: missing subcommand block (one of exact, fixedpoint, gcmc, sde, hierarchy, verify)");

    ctx.seed = opt.seed ? *opt.seed : (cfg.contains("seed") ? cfg["seed"].get<std::uint64_t>() : 1);
    ctx.jobs = opt.jobs > 0 ? opt.jobs : default_jobs();
    ctx.tol_scale = opt.tolerance_scale;
    ctx.out_dir = !opt.out_dir.empty()
                      ? opt.out_dir
                      : (cfg.contains("output_dir") ? cfg["output_dir"].get<std::string>() : "out");
    ctx.manifest.subcommand = chosen;
    ctx.manifest.seed = ctx.seed;
    ctx.manifest.jobs = ctx.jobs;
    ctx.manifest.tolerance_scale = ctx.tol_scale;
    ctx.manifest.config_snapshot = cfg.dump();
    ctx.manifest.input_hashes.emplace_back("<config>", sha256_hex(config_text));

    double t0 = wall_time_s();
    if (chosen == "exact") cmd_exact(ctx, cfg["exact"]);
    else if (chosen == "fixedpoint") cmd_fixedpoint(ctx, cfg["fixedpoint"]);
    else if (chosen == "gcmc") cmd_gcmc(ctx, cfg["gcmc"]);
    else if (chosen == "sde") cmd_sde(ctx, cfg["sde"]);
    else if (chosen == "hierarchy") cmd_hierarchy(ctx, cfg["hierarchy"]);
    else if (chosen == "verify") cmd_verify(ctx, cfg["verify"]);
    ctx.manifest.stage_wall_s.emplace_back(chosen, wall_time_s() - t0);

    if (!ctx.results.is_null()) ctx.save("results.json", ctx.results.dump(2) + "\n");
    write_file_atomic(ctx.out_dir + "/manifest.json", ctx.manifest.to_json());
    return ctx.manifest.all_pass() ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.code() == Errc::parse || e.code() == Errc::invalid_argument) return 2;
    if (!ctx.out_dir.empty() && !ctx.manifest.subcommand.empty()) {
      ctx.manifest.assert_true("run.completed", false, e.what());
      try {
        write_file_atomic(ctx.out_dir + "/manifest.json", ctx.manifest.to_json());
      } catch (...) {
      }
    }
    if (e.code() == Errc::regime || e.code() == Errc::assertion || e.code() == Errc::no_convergence)
      return 1;
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

int run_config_file(const std::string& config_path, const RunOptions& opt) {
  std::string body;
  try {
    body = read_file(config_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return run_config_json(body, opt);
}

std::vector<std::string> plot_kinds() {
  return {"fixedpoint-convergence", "gcmc-gofr", "hierarchy-profiles"};
}

void emit_plotdata(const std::string& run_dir, const std::string& kind) {
  namespace fs = std::filesystem;
  auto known = plot_kinds();
  if (std::find(known.begin(), known.end(), kind) == known.end()) {
    std::string list;
    for (const auto& k : known) list += (list.empty() ? "" : ", ") + k;
    fail(Errc::invalid_argument, "unknown plot kind '" + kind + "'; supported: " + list);
  }

  if (kind == "fixedpoint-convergence") {
    std::string path = run_dir + "/report.json";
    if (!fs::exists(path)) fail(Errc::invalid_argument, "no solver report in " + run_dir);
    json rep = json::parse(read_file(path));
    auto deltas = rep["deltas"].get<std::vector<double>>();
    if (deltas.empty()) fail(Errc::invalid_argument, "solver report holds no iterations");
    double rate = rep["rate_bound"].get<double>();
    CsvWriter csv({"iteration", "delta", "bound_rate_pow"});
    double bound = deltas.front();
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      csv.row({static_cast<double>(i + 1), deltas[i], bound * std::pow(rate, static_cast<double>(i))});
    }
    write_file_atomic(run_dir + "/plot_convergence.csv", csv.str());
    return;
  }

  std::string results_path = run_dir + "/results.json";
  if (!fs::exists(results_path)) fail(Errc::invalid_argument, "no results.json in " + run_dir);
  json res = json::parse(read_file(results_path));

  if (kind == "gcmc-gofr") {
    if (!res.contains("g")) fail(Errc::invalid_argument, "results carry no pair-correlation estimate");
    auto g = res["g"].get<std::vector<double>>();
    auto se = res["g_se"].get<std::vector<double>>();
    auto lo = res["bin_lo"].get<std::vector<double>>();
    auto hi = res["bin_hi"].get<std::vector<double>>();
    CsvWriter csv({"r_mid", "g", "se"});
    for (std::size_t b = 0; b < g.size(); ++b) csv.row({0.5 * (lo[b] + hi[b]), g[b], se[b]});
    write_file_atomic(run_dir + "/plot_gofr.csv", csv.str());
    return;
  }

  // hierarchy-profiles: pass the timeline through with sanity checks
  std::string tpath = run_dir + "/timeline.csv";
  if (!fs::exists(tpath)) fail(Errc::invalid_argument, "no timeline.csv in " + run_dir);
  write_file_atomic(run_dir + "/plot_profiles.csv", read_file(tpath));
}

}  // namespace bogo
