#include "activesense/sweep.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "activesense/config.hpp"
#include "activesense/runner.hpp"

namespace activesense {

namespace fs = std::filesystem;

SweepSpec sweep_from_json(const nlohmann::json& j) {
  SweepSpec s;
  try {
    s.base = j.value("base", nlohmann::json::object());
    for (const auto& v : j.at("variants")) {
      s.variants.push_back({v.at("name").get<std::string>(),
                            v.value("overrides", nlohmann::json::object())});
    }
    if (j.at("seeds").is_number_integer()) {
      const auto n = j.at("seeds").get<std::uint64_t>();
      const auto first = j.value("first_seed", std::uint64_t{1});
      for (std::uint64_t i = 0; i < n; ++i) {
        s.seeds.push_back(first + i);
      }
    } else {
      s.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    }
    s.vary_scene = j.value("vary_scene", true);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("sweep: ") + e.what());
  }
  if (s.variants.empty() || s.seeds.empty()) {
    throw std::invalid_argument("sweep: needs at least one variant and one seed");
  }
  return s;
}

SweepSpec load_sweep(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("sweep: cannot open " + path.string());
  }
  SweepSpec s = sweep_from_json(nlohmann::json::parse(in));
  auto& sp = s.base["scene_path"];
  if (sp.is_string() && fs::path(sp.get<std::string>()).is_relative()) {
    sp = (path.parent_path() / sp.get<std::string>()).string();
  }
  return s;
}

nlohmann::json variant_config(const SweepSpec& spec, const SweepVariant& v, std::uint64_t seed) {
  nlohmann::json j = spec.base;
  j.merge_patch(v.overrides);
  j["seed"] = seed;
  if (spec.vary_scene) {
    j["scenario"]["seed"] = seed;
  }
  return j;
}

SweepResult run_sweep(const SweepSpec& spec, const std::optional<fs::path>& out_dir,
                      std::ostream* progress) {
  const auto t0 = std::chrono::steady_clock::now();
  SweepResult result;
  for (const SweepVariant& v : spec.variants) {
    SweepSummaryRow sum;
    sum.variant = v.name;
    for (std::uint64_t seed : spec.seeds) {
      SweepRun run;
      run.variant = v.name;
      run.seed = seed;
      const auto r0 = std::chrono::steady_clock::now();
      try {
        const ExperimentConfig cfg = config_from_json(variant_config(spec, v, seed));
        std::vector<MetricsRow> rows;
        if (out_dir) {
          RunOutcome o = run_to_directory(cfg, *out_dir / v.name / ("seed_" + std::to_string(seed)));
          if (!o.ok) {
            throw std::runtime_error(o.error);
          }
          rows = std::move(o.metrics);
        } else {
          rows = run_experiment(cfg, resolve_scene(cfg)).metrics;
        }
        run.final_row = rows.back();
        run.ok = true;
      } catch (const std::exception& e) {
        run.error = e.what();
      }
      run.wall_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - r0).count();
      if (progress) {
        *progress << v.name << " seed " << seed << ": "
                  << (run.ok ? "ok" : "FAILED (" + run.error + ")") << " in " << run.wall_seconds
                  << " s" << std::endl;
      }
      ++sum.runs;
      if (run.ok) {
        sum.mean.step = run.final_row.step;
        sum.mean.pct_seen += run.final_row.pct_seen;
        sum.mean.rho_det += run.final_row.rho_det;
        sum.mean.rho_class += run.final_row.rho_class;
        sum.mean.sjsd_det += run.final_row.sjsd_det;
        sum.mean.sjsd_class += run.final_row.sjsd_class;
      } else {
        ++sum.failed;
      }
      result.runs.push_back(std::move(run));
    }
    const std::size_t ok = sum.runs - sum.failed;
    if (ok) {
      const double n = static_cast<double>(ok);
      sum.mean.pct_seen /= n;
      sum.mean.rho_det /= n;
      sum.mean.rho_class /= n;
      sum.mean.sjsd_det /= n;
      sum.mean.sjsd_class /= n;
    }
    result.summary.push_back(sum);
  }
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (out_dir) {
    fs::create_directories(*out_dir);
    std::ofstream s(*out_dir / "summary.csv");
    write_summary_csv(s, result);
    std::ofstream r(*out_dir / "runs.csv");
    write_runs_csv(r, result);
  }
  return result;
}

namespace {

void row_fields(std::ostream& out, const MetricsRow& m) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g", m.pct_seen, m.sjsd_det,
                m.sjsd_class, m.rho_det, m.rho_class);
  out << buf;
}

}  // namespace

void write_summary_csv(std::ostream& out, const SweepResult& r) {
  out << "policy,runs,failed,pct_seen,sjsd_det,sjsd_class,rho_det,rho_class\n";
  for (const auto& s : r.summary) {
    out << s.variant << ',' << s.runs << ',' << s.failed << ',';
    row_fields(out, s.mean);
    out << '\n';
  }
}

void write_runs_csv(std::ostream& out, const SweepResult& r) {
  out << "policy,seed,ok,wall_seconds,pct_seen,sjsd_det,sjsd_class,rho_det,rho_class,error\n";
  for (const auto& run : r.runs) {
    out << run.variant << ',' << run.seed << ',' << (run.ok ? 1 : 0) << ',' << run.wall_seconds
        << ',';
    row_fields(out, run.final_row);
    std::string err = run.error;
    for (char& c : err) {
      if (c == ',' || c == '\n') c = ' ';
    }
    out << ',' << err << '\n';
  }
}

void print_summary_table(std::ostream& out, const SweepResult& r) {
  char buf[200];
  std::snprintf(buf, sizeof buf, "%-12s %6s %9s %9s %10s %8s %9s\n", "policy", "runs", "%seen",
                "SJSD det", "SJSD class", "rho det", "rho class");
  out << buf;
  for (const auto& s : r.summary) {
    std::snprintf(buf, sizeof buf, "%-12s %3zu/%-2zu %9.2f %9.3f %10.3f %8.4f %9.4f\n",
                  s.variant.c_str(), s.runs - s.failed, s.runs, s.mean.pct_seen, s.mean.sjsd_det,
                  s.mean.sjsd_class, s.mean.rho_det, s.mean.rho_class);
    out << buf;
  }
}

}  // namespace activesense
