#include "activesense/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "activesense/scene_io.hpp"
#include "activesense/sensor.hpp"

#ifndef ACTIVESENSE_VERSION
#define ACTIVESENSE_VERSION "unknown"
#endif

namespace activesense {

namespace fs = std::filesystem;

namespace {

// Stream ids under the run's root seed.
enum : std::uint64_t { kStartStream = 1, kMeasureStream = 2, kLabelStream = 3, kPlanStream = 4 };

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace

std::string code_version() { return ACTIVESENSE_VERSION; }

Scene resolve_scene(const ExperimentConfig& cfg) {
  return cfg.scene_path ? load_scene(*cfg.scene_path) : generate_scenario(cfg.scenario);
}

PolicyState initial_state(const ExperimentConfig& cfg, const Scene& scene, const Pose& start) {
  const GridGeometry& g = scene.geometry();
  OccupancyGrid grid = OccupancyGrid::uniform(g, cfg.prior_occupancy);
  IgWeights weights = cfg.weight_schedule == WeightSchedule::fixed
                          ? IgWeights::fixed(cfg.w_d)
                          : IgWeights::coverage_linked(grid);
  return PolicyState{std::move(grid),
                     ClassificationMap(g, static_cast<std::size_t>(scene.num_classes()),
                                       cfg.prior_alpha),
                     start, weights, 0};
}

Pose draw_start_pose(const ExperimentConfig& cfg, const GridGeometry& geometry,
                     RandomStream& rng) {
  if (cfg.start_pose) {
    return *cfg.start_pose;
  }
  const Point2 c = geometry.center(rng.uniform_index(geometry.size()));
  const double turn = cfg.turn_deg * kPi / 180.0;
  const double lattice = kTwoPi / turn;
  const auto n = static_cast<std::size_t>(std::llround(lattice));
  double heading = 0.0;
  if (n >= 1 && std::abs(lattice - static_cast<double>(n)) < 1e-9) {
    heading = static_cast<double>(rng.uniform_index(n)) * turn;
  } else {
    heading = rng.uniform(0.0, kTwoPi);
  }
  return Pose(c.x, c.y, heading);
}

std::vector<int> draw_bin_labels(const Scene& scene, const Measurement& meas,
                                 const ConfusionClassifier& classifier, RandomStream& rng) {
  std::vector<int> labels(meas.bins.size(), 0);
  for (std::size_t k = 0; k < meas.bins.size(); ++k) {
    if (!meas.bins[k]) {
      continue;
    }
    int cls = 0;
    for (std::size_t cell : meas.associations[k]) {
      if (scene.occupied(cell)) {
        cls = scene.class_of(cell);
        break;
      }
    }
    labels[k] = cls ? one_step_label(classifier, cls, rng) : no_target_label(classifier, rng);
  }
  return labels;
}

RunResult run_experiment(const ExperimentConfig& cfg, const Scene& scene, RunObserver* observer,
                         const std::vector<Pose>& forced_poses) {
  cfg.validate();
  if (!forced_poses.empty() && forced_poses.size() < cfg.n_actions) {
    throw std::invalid_argument("run_experiment: forced pose list shorter than n_actions");
  }
  const GridGeometry& g = scene.geometry();
  const SensingModel sensing = cfg.sensing();
  const ConfusionClassifier classifier = cfg.classifier(scene.num_classes());
  const DynamicsConfig dyn = cfg.dynamics(g);
  const RandomStream root(cfg.seed);

  std::vector<Pose> survey;
  if (forced_poses.empty() && cfg.policy == PolicyKind::lawnmower) {
    const double spacing = cfg.track_spacing > 0.0 ? cfg.track_spacing : sensing.footprint.swath();
    survey = lawnmower_path(g, spacing, cfg.sweep_corner, cfg.step_length,
                            cfg.standoff.value_or(0.5 * g.cell_size()));
  }

  RunResult result{initial_state(cfg, scene, Pose{}), Pose{}, {}, {}};
  if (!survey.empty()) {
    result.start = survey.front();
  } else {
    RandomStream start_rng = root.child(kStartStream);
    result.start = draw_start_pose(cfg, g, start_rng);
  }
  result.state.pose = result.start;
  result.metrics.reserve(cfg.n_actions);
  result.log.reserve(cfg.n_actions);

  for (std::size_t s = 1; s <= cfg.n_actions; ++s) {
    Pose next;
    if (!forced_poses.empty()) {
      next = forced_poses[s - 1];
    } else if (cfg.policy == PolicyKind::lawnmower) {
      // Past the end the survey starts over.
      next = survey[(s - 1) % survey.size()];
    } else if (cfg.policy == PolicyKind::greedy) {
      next = greedy_step(result.state, dyn, sensing).pose;
    } else {
      next = rollout_step(result.state, dyn, sensing, cfg.rollout, root.child({kPlanStream, s})).pose;
    }

    RandomStream measure_rng = root.child({kMeasureStream, s});
    RandomStream label_rng = root.child({kLabelStream, s});
    const Measurement meas =
        sample_measurement(scene, next, sensing.footprint, sensing.detector, measure_rng, s);
    std::vector<int> labels = draw_bin_labels(scene, meas, classifier, label_rng);
    apply_observation(result.state, meas, labels, sensing);

    result.metrics.push_back(evaluate(s, scene, result.state.grid, result.state.cmap));
    result.log.push_back(LoggedPing{s, next, meas.bins, std::move(labels)});
    if (observer) {
      observer->on_step(result.state, result.log.back(), result.metrics.back());
    }
  }
  return result;
}

std::vector<MetricsRow> replay(const ExperimentConfig& cfg, const Scene& scene, const Pose& start,
                               const std::vector<LoggedPing>& log) {
  const GridGeometry& g = scene.geometry();
  const SensingModel sensing = cfg.sensing();
  PolicyState state = initial_state(cfg, scene, start);
  std::vector<MetricsRow> rows;
  rows.reserve(log.size());
  for (const LoggedPing& ping : log) {
    if (ping.bins.size() != sensing.footprint.num_bins) {
      throw std::runtime_error("replay: step " + std::to_string(ping.step) +
                               " has the wrong number of bins");
    }
    Measurement meas;
    meas.time_index = ping.step;
    meas.pose = ping.pose;
    meas.bins = ping.bins;
    meas.associations = footprint_bins(g, ping.pose, sensing.footprint);
    apply_observation(state, meas, ping.labels, sensing);
    rows.push_back(evaluate(ping.step, scene, state.grid, state.cmap));
  }
  return rows;
}

void write_measurement_header(std::ostream& out) { out << "step,x,y,heading,bins,labels\n"; }

void write_measurement_row(std::ostream& out, const LoggedPing& p) {
  out << p.step << ',' << fmt17(p.pose.x) << ',' << fmt17(p.pose.y) << ','
      << fmt17(p.pose.heading) << ',';
  for (auto b : p.bins) {
    out << (b ? '1' : '0');
  }
  out << ',';
  for (std::size_t k = 0; k < p.labels.size(); ++k) {
    out << (k ? ";" : "") << p.labels[k];
  }
  out << '\n';
}

std::vector<LoggedPing> read_measurements(std::istream& in) {
  std::vector<LoggedPing> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#' || line.rfind("step,", 0) == 0) {
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) {
      fields.push_back(f);
    }
    if (fields.size() != 6) {
      throw std::runtime_error("measurements: line " + std::to_string(lineno) +
                               ": expected 6 fields");
    }
    LoggedPing p;
    try {
      p.step = std::stoull(fields[0]);
      p.pose = Pose(std::stod(fields[1]), std::stod(fields[2]), std::stod(fields[3]));
      for (char c : fields[4]) {
        if (c != '0' && c != '1') {
          throw std::invalid_argument("bad bin flag");
        }
        p.bins.push_back(c == '1' ? 1 : 0);
      }
      std::stringstream ls(fields[5]);
      std::string tok;
      while (std::getline(ls, tok, ';')) {
        p.labels.push_back(std::stoi(tok));
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("measurements: line " + std::to_string(lineno) + ": " + e.what());
    }
    if (p.labels.size() != p.bins.size()) {
      throw std::runtime_error("measurements: line " + std::to_string(lineno) +
                               ": label count does not match bin count");
    }
    out.push_back(std::move(p));
  }
  return out;
}

namespace {

void write_maps(const fs::path& dir, const std::string& stem, const PolicyState& state) {
  fs::create_directories(dir);
  const std::string tag = "step=" + std::to_string(state.step);
  {
    std::ofstream og(dir / (stem + "og.csv"));
    write_occupancy_csv(og, state.grid, tag);
  }
  for (int l = 1; l <= static_cast<int>(state.cmap.num_classes()); ++l) {
    std::ofstream cm(dir / (stem + "cm_class" + std::to_string(l) + ".csv"));
    write_classification_csv(cm, state.cmap, l, tag);
  }
  std::ofstream am(dir / (stem + "cm_argmax.csv"));
  write_argmax_csv(am, state.cmap, tag);
}

class FileSink : public RunObserver {
 public:
  FileSink(const fs::path& dir, const ExperimentConfig& cfg, const std::string& hash,
           std::size_t snapshot_every)
      : dir_(dir), every_(snapshot_every) {
    const std::string comment = "# seed=" + std::to_string(cfg.seed) + ",config_hash=" + hash +
                                ",manifest=manifest.json\n";
    metrics_.open(dir / "metrics.csv");
    meas_.open(dir / "measurements.csv");
    if (!metrics_ || !meas_) {
      throw std::runtime_error("cannot write into " + dir.string());
    }
    metrics_ << comment << kMetricsHeader << '\n';
    meas_ << comment;
    write_measurement_header(meas_);
    metrics_.flush();
    meas_.flush();
  }

  void on_step(const PolicyState& state, const LoggedPing& ping, const MetricsRow& row) override {
    write_metrics_row(metrics_, row);
    write_measurement_row(meas_, ping);
    metrics_.flush();
    meas_.flush();
    ++steps_;
    if (every_ && state.step % every_ == 0) {
      char stem[32];
      std::snprintf(stem, sizeof stem, "step%05zu_", state.step);
      write_maps(dir_ / "snapshots", stem, state);
    }
  }

  std::size_t steps() const { return steps_; }

 private:
  fs::path dir_;
  std::size_t every_;
  std::ofstream metrics_;
  std::ofstream meas_;
  std::size_t steps_ = 0;
};

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  out << j.dump(2) << '\n';
}

}  // namespace

RunOutcome run_to_directory(const ExperimentConfig& cfg, const fs::path& directory) {
  RunOutcome outcome;
  outcome.directory = directory;
  const auto t0 = std::chrono::steady_clock::now();
  const std::string hash = config_hash(cfg);

  nlohmann::json manifest;
  manifest["code_version"] = code_version();
  manifest["config_hash"] = hash;
  manifest["seed"] = cfg.seed;
  manifest["policy"] = to_string(cfg.policy);
  manifest["started_utc"] = utc_now();
  manifest["status"] = "running";

  auto finish = [&](const std::string& status, const std::string& error) {
    outcome.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    manifest["status"] = status;
    manifest["error"] = error.empty() ? nlohmann::json(nullptr) : nlohmann::json(error);
    manifest["steps_completed"] = outcome.steps_completed;
    manifest["wall_clock_seconds"] = outcome.wall_seconds;
    manifest["finished_utc"] = utc_now();
    try {
      write_json(directory / "manifest.json", manifest);
    } catch (...) {
      // Nothing left to report to.
    }
  };

  try {
    fs::create_directories(directory);
    write_json(directory / "config.json", config_to_json(cfg));
    write_json(directory / "manifest.json", manifest);
    const Scene scene = resolve_scene(cfg);
    save_scene(scene, directory / "scene.json");

    FileSink sink(directory, cfg, hash, cfg.snapshot_every);
    struct Counting : RunObserver {
      FileSink* sink;
      RunOutcome* outcome;
      void on_step(const PolicyState& s, const LoggedPing& p, const MetricsRow& r) override {
        sink->on_step(s, p, r);
        outcome->steps_completed = p.step;
      }
    } counting;
    counting.sink = &sink;
    counting.outcome = &outcome;

    // Start pose is recorded before the loop so partial runs can be replayed.
    RunResult result = [&] {
      ExperimentConfig probe = cfg;
      if (!cfg.start_pose && cfg.policy != PolicyKind::lawnmower) {
        RandomStream start_rng = RandomStream(cfg.seed).child(kStartStream);
        probe.start_pose = draw_start_pose(cfg, scene.geometry(), start_rng);
      }
      if (probe.start_pose) {
        const Pose& p = *probe.start_pose;
        manifest["start_pose"] = {p.x, p.y, p.heading};
        write_json(directory / "manifest.json", manifest);
      }
      RunResult r = run_experiment(cfg, scene, &counting);
      manifest["start_pose"] = {r.start.x, r.start.y, r.start.heading};
      return r;
    }();
    write_maps(directory / "final", "", result.state);
    outcome.metrics = std::move(result.metrics);
    outcome.ok = true;
    finish("ok", "");
  } catch (const std::exception& e) {
    outcome.ok = false;
    outcome.error = e.what();
    finish("error", e.what());
  }
  return outcome;
}

std::vector<MetricsRow> replay_directory(const fs::path& directory) {
  std::ifstream mf(directory / "manifest.json");
  std::ifstream cf(directory / "config.json");
  std::ifstream ms(directory / "measurements.csv");
  if (!mf || !cf || !ms) {
    throw std::runtime_error("replay: " + directory.string() +
                             " lacks manifest.json, config.json or measurements.csv");
  }
  const nlohmann::json manifest = nlohmann::json::parse(mf);
  nlohmann::json cj = nlohmann::json::parse(cf);
  cj["scene_path"] = nullptr;  // the run's own scene copy is authoritative
  const ExperimentConfig cfg = config_from_json(cj);
  const Scene scene = load_scene(directory / "scene.json");
  if (!manifest.contains("start_pose")) {
    throw std::runtime_error("replay: manifest has no start_pose");
  }
  const auto& sp = manifest.at("start_pose");
  const Pose start(sp.at(0).get<double>(), sp.at(1).get<double>(), sp.at(2).get<double>());
  return replay(cfg, scene, start, read_measurements(ms));
}

}  // namespace activesense
