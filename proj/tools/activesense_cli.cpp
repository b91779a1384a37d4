// activesense: run, sweep, gen-scene, oracle, replay.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "activesense/comparison.hpp"
#include "activesense/config.hpp"
#include "activesense/infogain.hpp"
#include "activesense/metrics.hpp"
#include "activesense/runner.hpp"
#include "activesense/scenario.hpp"
#include "activesense/scene_io.hpp"
#include "activesense/sweep.hpp"
#include "activesense/verify.hpp"

namespace as = activesense;
namespace fs = std::filesystem;

namespace {

nlohmann::json read_json_or_empty(const std::string& path) {
  if (path.empty()) {
    return nlohmann::json::object();
  }
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  return nlohmann::json::parse(in);
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    out.push_back(std::stod(tok));
  }
  return out;
}

// Shared by `run` and `sweep`: flags that map onto config fields.
struct CommonFlags {
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> policy;
  std::optional<std::size_t> n_actions;
  std::optional<std::size_t> threads;

  void add(CLI::App* app) {
    app->add_option("--set", sets, "Override any config field: dotted.path=value")
        ->take_all();
    app->add_option("--seed", seed, "Run seed");
    app->add_option("--policy", policy, "lawnmower | greedy | rollout");
    app->add_option("--n-actions", n_actions, "Number of pings");
    app->add_option("--threads", threads, "Rollout worker threads");
  }

  void apply(nlohmann::json& j) const {
    for (const auto& s : sets) as::apply_override(j, s);
    if (seed) j["seed"] = *seed;
    if (policy) j["policy"] = *policy;
    if (n_actions) j["n_actions"] = *n_actions;
    if (threads) j["rollout"]["threads"] = *threads;
  }
};

int cmd_run(const std::string& config_path, const CommonFlags& flags, const std::string& out) {
  nlohmann::json j = read_json_or_empty(config_path);
  if (!config_path.empty() && j.contains("scene_path") && j["scene_path"].is_string()) {
    const fs::path sp = j["scene_path"].get<std::string>();
    if (sp.is_relative()) j["scene_path"] = (fs::path(config_path).parent_path() / sp).string();
  }
  flags.apply(j);
  if (!out.empty()) j["output_dir"] = out;
  const as::ExperimentConfig cfg = as::config_from_json(j);
  std::cout << "run: policy=" << as::to_string(cfg.policy) << " seed=" << cfg.seed
            << " n_actions=" << cfg.n_actions << " -> " << cfg.output_dir.string() << std::endl;
  const as::RunOutcome o = as::run_to_directory(cfg, cfg.output_dir);
  if (!o.ok) {
    std::cerr << "run failed after " << o.steps_completed << " steps: " << o.error << '\n';
    return 1;
  }
  const auto& f = o.metrics.back();
  std::printf("done in %.2f s: pct_seen=%.4f rho_det=%.4f rho_class=%.4f sjsd_det=%.3f sjsd_class=%.3f\n",
              o.wall_seconds, f.pct_seen, f.rho_det, f.rho_class, f.sjsd_det, f.sjsd_class);
  return 0;
}

int cmd_sweep(const std::string& spec_path, const CommonFlags& flags,
              std::optional<std::size_t> n_seeds, const std::string& out) {
  as::SweepSpec spec = as::load_sweep(spec_path);
  flags.apply(spec.base);
  if (flags.seed) {
    // A base seed shifts the whole seed list.
    for (auto& s : spec.seeds) s += *flags.seed;
  }
  if (n_seeds) {
    const std::uint64_t first = spec.seeds.front();
    spec.seeds.clear();
    for (std::size_t i = 0; i < *n_seeds; ++i) spec.seeds.push_back(first + i);
  }
  const fs::path dir = out.empty() ? fs::path("out/sweep") : fs::path(out);
  const as::SweepResult r = as::run_sweep(spec, dir, &std::cerr);
  as::print_summary_table(std::cout, r);
  std::printf("total %.1f s; summary in %s\n", r.wall_seconds, (dir / "summary.csv").c_str());
  std::size_t failed = 0;
  for (const auto& s : r.summary) failed += s.failed;
  return failed ? 1 : 0;
}

int cmd_gen_scene(const std::string& spec_path, const std::vector<std::string>& sets,
                  std::optional<std::uint64_t> seed, const std::string& out) {
  nlohmann::json j = read_json_or_empty(spec_path);
  // A full run config is accepted too; its scenario block is used.
  if (j.contains("scenario") && j["scenario"].is_object()) j = j["scenario"];
  for (const auto& s : sets) as::apply_override(j, s);
  if (seed) j["seed"] = *seed;
  const as::ScenarioSpec spec = as::scenario_from_json(j);
  const as::Scene scene = as::generate_scenario(spec);
  if (out.empty() || out == "-") {
    std::cout << as::scene_to_json(scene).dump(2) << '\n';
  } else {
    as::save_scene(scene, out);
    std::cout << "wrote " << scene.objects().size() << " targets ("
              << scene.occupied_count() << " occupied cells, seed " << spec.seed << ") to " << out
              << '\n';
  }
  return 0;
}

int cmd_oracle_detection(std::size_t samples, std::uint64_t seed,
                         std::optional<std::vector<double>> point) {
  if (point) {
    if (point->size() != 3) throw std::invalid_argument("--at expects p,p_d,p_fa");
    const double p = (*point)[0], pd = (*point)[1], pfa = (*point)[2];
    const double a = as::detection_mi(p, pd, pfa);
    const double b = as::verify::detection_mi_enumerated(p, pd, pfa);
    std::printf("detection_mi(p=%g, p_d=%g, p_fa=%g)\n", p, pd, pfa);
    std::printf("  definitional   %.17g\n  enumerated     %.17g\n  difference     %.3e\n", a, b,
                a - b);
    std::printf("  log1p form     %.17g (gap %.3e)\n",
                as::comparison::detection_mi_log1p_form(p, pd, pfa),
                as::comparison::detection_mi_log1p_form(p, pd, pfa) - a);
    return 0;
  }
  const auto sw = as::verify::detection_sweep(samples, seed);
  std::printf("detection_mi vs enumeration over %zu triples: max |diff| = %.3e nats (%.3f s)\n",
              sw.samples, sw.max_abs_diff, sw.seconds);
  const auto gap = as::comparison::detection_form_gap(samples, seed);
  std::printf("log1p printed form vs definitional: max |gap| = %.6g nats, mean %.6g "
              "(worst at p=%.6g p_d=%.6g p_fa=%.6g)\n",
              gap.max_abs_gap, gap.mean_abs_gap, gap.worst_p, gap.worst_p_d, gap.worst_p_fa);
  return sw.max_abs_diff <= 1e-12 ? 0 : 1;
}

int cmd_oracle_classification(const std::vector<double>& alpha, std::size_t samples,
                              std::uint64_t seed) {
  as::RandomStream rng(seed);
  const double closed = as::classification_mi(alpha);
  const auto mc = as::verify::classification_mi_monte_carlo(alpha, samples, rng);
  std::printf("classification_mi(alpha=[");
  for (std::size_t i = 0; i < alpha.size(); ++i) std::printf(i ? ",%g" : "%g", alpha[i]);
  std::printf("])\n  closed form    %.12g\n  monte carlo    %.12g +- %.3g (n=%zu)\n"
              "  difference     %.3e (%.2f standard errors)\n",
              closed, mc.mean, mc.std_error, mc.samples, closed - mc.mean,
              std::abs(closed - mc.mean) / mc.std_error);
  return 0;
}

int cmd_replay(const std::string& dir, double tol) {
  const std::vector<as::MetricsRow> rows = as::replay_directory(dir);
  std::ifstream in(fs::path(dir) / "metrics.csv");
  const std::vector<as::MetricsRow> stored = as::read_metrics(in);
  double worst = 0.0;
  std::size_t mismatched = 0;
  if (rows.size() != stored.size()) {
    std::printf("replayed %zu steps, metrics.csv has %zu\n", rows.size(), stored.size());
  }
  const std::size_t n = std::min(rows.size(), stored.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = rows[i];
    const auto& b = stored[i];
    const double d = std::max({std::abs(a.pct_seen - b.pct_seen), std::abs(a.rho_det - b.rho_det),
                               std::abs(a.rho_class - b.rho_class),
                               std::abs(a.sjsd_det - b.sjsd_det),
                               std::abs(a.sjsd_class - b.sjsd_class)});
    worst = std::max(worst, d);
    if (d > tol || a.step != b.step) ++mismatched;
  }
  std::printf("replayed %zu steps: max |diff| = %.3e, %zu rows beyond %.1e\n", rows.size(), worst,
              mismatched, tol);
  return (mismatched == 0 && rows.size() == stored.size()) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Active perception workbench for side-looking sonar surveys"};
  app.set_version_flag("--version", as::code_version());
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run one experiment");
  std::string run_config, run_out;
  CommonFlags run_flags;
  run->add_option("-c,--config", run_config, "Experiment config (JSON)");
  run->add_option("-o,--output", run_out, "Output directory (overrides output_dir)");
  run_flags.add(run);

  auto* sweep = app.add_subcommand("sweep", "Run every variant for every seed");
  std::string sweep_spec, sweep_out;
  std::optional<std::size_t> sweep_n_seeds;
  CommonFlags sweep_flags;
  sweep->add_option("-s,--spec", sweep_spec, "Sweep spec (JSON)")->required();
  sweep->add_option("-o,--output", sweep_out, "Output directory");
  sweep->add_option("--n-seeds", sweep_n_seeds, "Use this many consecutive seeds");
  sweep_flags.add(sweep);

  auto* gen = app.add_subcommand("gen-scene", "Generate a clustered target scene");
  std::string gen_spec, gen_out;
  std::vector<std::string> gen_sets;
  std::optional<std::uint64_t> gen_seed;
  gen->add_option("-s,--spec", gen_spec, "Scenario spec (JSON); defaults when omitted");
  gen->add_option("-o,--output", gen_out, "Scene file to write ('-' for stdout)");
  gen->add_option("--set", gen_sets, "Override a scenario field: path=value")->take_all();
  gen->add_option("--seed", gen_seed, "Placement seed");

  auto* oracle = app.add_subcommand("oracle", "Cross-check the information-gain formulas");
  oracle->require_subcommand(1);
  auto* od = oracle->add_subcommand("detection", "detection_mi vs enumeration of the joint");
  std::size_t od_samples = 100000;
  std::uint64_t od_seed = 1;
  std::optional<std::vector<double>> od_at;
  od->add_option("-n,--samples", od_samples, "Random triples");
  od->add_option("--seed", od_seed, "Sweep seed");
  od->add_option("--at", od_at, "Single point p,p_d,p_fa")->delimiter(',')->expected(3);
  auto* oc = oracle->add_subcommand("classification", "classification_mi vs Monte Carlo");
  std::string oc_alpha = "1,1,1";
  std::size_t oc_samples = 1000000;
  std::uint64_t oc_seed = 1;
  oc->add_option("-a,--alpha", oc_alpha, "Comma-separated concentrations");
  oc->add_option("-n,--samples", oc_samples, "Monte-Carlo samples");
  oc->add_option("--seed", oc_seed, "Sampler seed");

  auto* rep = app.add_subcommand("replay", "Recompute metrics from a run's measurement log");
  std::string rep_dir;
  double rep_tol = 0.0;
  rep->add_option("dir", rep_dir, "Run directory")->required();
  rep->add_option("--tol", rep_tol, "Allowed absolute difference per metric");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_config, run_flags, run_out);
    if (*sweep) return cmd_sweep(sweep_spec, sweep_flags, sweep_n_seeds, sweep_out);
    if (*gen) return cmd_gen_scene(gen_spec, gen_sets, gen_seed, gen_out);
    if (*od) return cmd_oracle_detection(od_samples, od_seed, od_at);
    if (*oc) return cmd_oracle_classification(parse_list(oc_alpha), oc_samples, oc_seed);
    if (*rep) return cmd_replay(rep_dir, rep_tol);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
