#include "activesense/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace activesense {

PolicyKind policy_from_string(const std::string& s) {
  if (s == "lawnmower") return PolicyKind::lawnmower;
  if (s == "greedy") return PolicyKind::greedy;
  if (s == "rollout") return PolicyKind::rollout;
  throw std::invalid_argument("unknown policy '" + s + "'");
}

std::string to_string(PolicyKind p) {
  switch (p) {
    case PolicyKind::lawnmower:
      return "lawnmower";
    case PolicyKind::greedy:
      return "greedy";
    case PolicyKind::rollout:
      return "rollout";
  }
  return "unknown";
}

namespace {

constexpr double kDeg = kPi / 180.0;

std::string corner_name(SweepCorner c) {
  return c == SweepCorner::south_west ? "south_west" : "north_east";
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n_actions == 0) {
    throw std::invalid_argument("config: n_actions must be >= 1");
  }
  if (!scene_path) {
    scenario.validate();
  }
  rollout.validate();
  detector.validate();
  footprint().validate();
  if (!(step_length > 0.0)) {
    throw std::invalid_argument("config: dynamics.step_length must be > 0");
  }
  if (!(turn_deg > 0.0 && turn_deg <= 180.0)) {
    throw std::invalid_argument("config: dynamics.turn_deg must be in (0, 180]");
  }
  if (weight_schedule == WeightSchedule::fixed) {
    IgWeights::fixed(w_d);
  }
  if (!(prior_occupancy > 0.0 && prior_occupancy < 1.0)) {
    throw std::invalid_argument("config: prior_occupancy must be in (0, 1)");
  }
  if (!(prior_alpha > 0.0)) {
    throw std::invalid_argument("config: prior_alpha must be > 0");
  }
  if (standoff && *standoff < 0.0) {
    throw std::invalid_argument("config: lawnmower.standoff must be >= 0");
  }
  if (track_spacing < 0.0) {
    throw std::invalid_argument("config: lawnmower.track_spacing must be >= 0");
  }
}

SensorFootprint ExperimentConfig::footprint() const {
  return SensorFootprint::make(num_bins, bin_spacing, beamwidth_deg * kDeg);
}

SensingModel ExperimentConfig::sensing() const { return {footprint(), detector}; }

ConfusionClassifier ExperimentConfig::classifier(int num_classes) const {
  ConfusionClassifier c = confusion.empty()
                              ? ConfusionClassifier::symmetric(static_cast<std::size_t>(num_classes),
                                                               classifier_accuracy)
                              : ConfusionClassifier{confusion};
  c.no_target = no_target;
  c.no_target_fixed_label = no_target_label;
  c.validate();
  if (c.num_classes() != static_cast<std::size_t>(num_classes)) {
    throw std::invalid_argument("config: confusion matrix size does not match scene classes");
  }
  return c;
}

DynamicsConfig ExperimentConfig::dynamics(const GridGeometry& geometry) const {
  return DynamicsConfig::for_grid(geometry, step_length, turn_deg * kDeg);
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  try {
    if (j.contains("scene_path") && !j.at("scene_path").is_null()) {
      c.scene_path = j.at("scene_path").get<std::string>();
    }
    if (j.contains("scenario")) {
      c.scenario = scenario_from_json(j.at("scenario"));
    }
    c.policy = policy_from_string(j.value("policy", to_string(c.policy)));
    if (j.contains("rollout")) {
      const auto& r = j.at("rollout");
      c.rollout.horizon = r.value("horizon", c.rollout.horizon);
      c.rollout.rollouts_per_action = r.value("rollouts_per_action", c.rollout.rollouts_per_action);
      c.rollout.threads = r.value("threads", c.rollout.threads);
    }
    if (j.contains("detector")) {
      const auto& d = j.at("detector");
      c.detector.p_d = d.value("p_d", c.detector.p_d);
      c.detector.p_fa = d.value("p_fa", c.detector.p_fa);
      c.detector.atten_exponent = d.value("atten_exponent", c.detector.atten_exponent);
      c.detector.mode = attenuation_from_string(d.value("attenuation", to_string(c.detector.mode)));
    }
    if (j.contains("footprint")) {
      const auto& f = j.at("footprint");
      c.num_bins = f.value("num_bins", c.num_bins);
      c.bin_spacing = f.value("bin_spacing", c.bin_spacing);
      c.beamwidth_deg = f.value("beamwidth_deg", c.beamwidth_deg);
    }
    if (j.contains("dynamics")) {
      const auto& d = j.at("dynamics");
      c.step_length = d.value("step_length", c.step_length);
      c.turn_deg = d.value("turn_deg", c.turn_deg);
    }
    if (j.contains("weights")) {
      const auto& w = j.at("weights");
      c.weight_schedule = schedule_from_string(w.value("schedule", to_string(c.weight_schedule)));
      c.w_d = w.value("w_d", c.w_d);
    }
    if (j.contains("classifier")) {
      const auto& k = j.at("classifier");
      c.classifier_accuracy = k.value("accuracy", c.classifier_accuracy);
      if (k.contains("confusion")) {
        c.confusion = k.at("confusion").get<std::vector<std::vector<double>>>();
      }
      const std::string nt = k.value("no_target", std::string("uniform"));
      if (nt == "uniform") {
        c.no_target = NoTargetBehavior::uniform_label;
      } else if (nt == "fixed") {
        c.no_target = NoTargetBehavior::fixed_label;
      } else {
        throw std::invalid_argument("unknown classifier.no_target '" + nt + "'");
      }
      c.no_target_label = k.value("no_target_label", c.no_target_label);
    }
    if (j.contains("lawnmower")) {
      const auto& l = j.at("lawnmower");
      c.track_spacing = l.value("track_spacing", c.track_spacing);
      c.sweep_corner = corner_from_string(l.value("corner", corner_name(c.sweep_corner)));
      if (l.contains("standoff") && !l.at("standoff").is_null()) {
        c.standoff = l.at("standoff").get<double>();
      }
    }
    if (j.contains("start_pose") && !j.at("start_pose").is_null()) {
      const auto& s = j.at("start_pose");
      c.start_pose = Pose(s.at(0).get<double>(), s.at(1).get<double>(),
                          s.at(2).get<double>() * kDeg);
    }
    c.prior_occupancy = j.value("prior_occupancy", c.prior_occupancy);
    c.prior_alpha = j.value("prior_alpha", c.prior_alpha);
    c.n_actions = j.value("n_actions", c.n_actions);
    c.seed = j.value("seed", c.seed);
    c.snapshot_every = j.value("snapshot_every", c.snapshot_every);
    c.output_dir = j.value("output_dir", c.output_dir.string());
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["scene_path"] = c.scene_path ? nlohmann::json(c.scene_path->string()) : nlohmann::json(nullptr);
  j["scenario"] = scenario_to_json(c.scenario);
  j["policy"] = to_string(c.policy);
  j["rollout"] = {{"horizon", c.rollout.horizon},
                  {"rollouts_per_action", c.rollout.rollouts_per_action},
                  {"threads", c.rollout.threads}};
  j["detector"] = {{"p_d", c.detector.p_d},
                   {"p_fa", c.detector.p_fa},
                   {"atten_exponent", c.detector.atten_exponent},
                   {"attenuation", to_string(c.detector.mode)}};
  j["footprint"] = {
      {"num_bins", c.num_bins}, {"bin_spacing", c.bin_spacing}, {"beamwidth_deg", c.beamwidth_deg}};
  j["dynamics"] = {{"step_length", c.step_length}, {"turn_deg", c.turn_deg}};
  j["weights"] = {{"schedule", to_string(c.weight_schedule)}, {"w_d", c.w_d}};
  j["classifier"] = {{"accuracy", c.classifier_accuracy},
                     {"no_target", c.no_target == NoTargetBehavior::uniform_label ? "uniform" : "fixed"},
                     {"no_target_label", c.no_target_label}};
  if (!c.confusion.empty()) {
    j["classifier"]["confusion"] = c.confusion;
  }
  j["lawnmower"] = {{"track_spacing", c.track_spacing},
                    {"corner", corner_name(c.sweep_corner)},
                    {"standoff", c.standoff ? nlohmann::json(*c.standoff) : nlohmann::json(nullptr)}};
  j["start_pose"] = c.start_pose ? nlohmann::json{c.start_pose->x, c.start_pose->y,
                                                  c.start_pose->heading / kDeg}
                                 : nlohmann::json(nullptr);
  j["prior_occupancy"] = c.prior_occupancy;
  j["prior_alpha"] = c.prior_alpha;
  j["n_actions"] = c.n_actions;
  j["seed"] = c.seed;
  j["snapshot_every"] = c.snapshot_every;
  j["output_dir"] = c.output_dir.string();
  return j;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("config: cannot open " + path.string());
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("config: " + path.string() + ": " + e.what());
  }
  ExperimentConfig c = config_from_json(j);
  if (c.scene_path && c.scene_path->is_relative()) {
    c.scene_path = path.parent_path() / *c.scene_path;
  }
  return c;
}

std::string config_hash(const ExperimentConfig& cfg) {
  nlohmann::json j = config_to_json(cfg);
  // Where outputs go does not change what is computed.
  j.erase("output_dir");
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void apply_override(nlohmann::json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw std::invalid_argument("override must look like key.path=value: '" + assignment + "'");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  nlohmann::json value;
  try {
    value = nlohmann::json::parse(raw);
  } catch (const nlohmann::json::parse_error&) {
    value = raw;
  }
  nlohmann::json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) {
      throw std::invalid_argument("override has an empty path component: '" + key + "'");
    }
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    if (!node->is_object()) {
      *node = nlohmann::json::object();
    }
    start = dot + 1;
  }
}

}  // namespace activesense
