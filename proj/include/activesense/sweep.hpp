#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "activesense/metrics.hpp"

namespace activesense {

struct SweepVariant {
  std::string name;
  nlohmann::json overrides;  // merged over the base config
};

struct SweepSpec {
  nlohmann::json base;
  std::vector<SweepVariant> variants;
  std::vector<std::uint64_t> seeds;
  // Each seed also reseeds the scenario generator (ignored with a scene file).
  bool vary_scene = true;
};

SweepSpec sweep_from_json(const nlohmann::json& j);
SweepSpec load_sweep(const std::filesystem::path& path);

struct SweepRun {
  std::string variant;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  double wall_seconds = 0.0;
  MetricsRow final_row;
};

struct SweepSummaryRow {
  std::string variant;
  std::size_t runs = 0;
  std::size_t failed = 0;
  MetricsRow mean;  // over successful runs; step holds the action count
};

struct SweepResult {
  std::vector<SweepRun> runs;
  std::vector<SweepSummaryRow> summary;
  double wall_seconds = 0.0;
};

nlohmann::json variant_config(const SweepSpec& spec, const SweepVariant& v, std::uint64_t seed);

// Every (variant, seed) pair runs; failures are kept in the result with
// their message. With an output directory each run writes its own folder
// and the sweep writes runs.csv and summary.csv next to them.
SweepResult run_sweep(const SweepSpec& spec,
                      const std::optional<std::filesystem::path>& out_dir = std::nullopt,
                      std::ostream* progress = nullptr);

void write_summary_csv(std::ostream& out, const SweepResult& r);
void write_runs_csv(std::ostream& out, const SweepResult& r);
// Fixed-width table in the column order % seen, SJSD det/class, rho det/class.
void print_summary_table(std::ostream& out, const SweepResult& r);

}  // namespace activesense
