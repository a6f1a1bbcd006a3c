#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "plantsim/collision.hpp"
#include "plantsim/fracture.hpp"
#include "plantsim/plant.hpp"
#include "plantsim/solver.hpp"

#include <json.hpp>

namespace plantsim {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Addresses one graph node, either directly or as the node nearest to a
/// world position (ties go to the lower index).
struct NodeSelector {
  std::optional<int> node;
  std::optional<Vec3> at;
};

int resolve_node(const PlantGraph& graph, const NodeSelector& selector);

/// Raw organ request from the plant file; the node selector is resolved
/// against the compiled graph.
struct OrganSpec {
  NodeSelector where;
  OrganAttachment organ;  // node field filled at resolution time
};

/// A fully loaded and validated scene: plant curves, organs, leaf templates,
/// obstacles with trajectories, material, solver and fracture settings.
struct SceneConfig {
  std::filesystem::path scene_path;
  std::string plant_reference;  // as written in the scene file
  Material material;
  CompilerParams compiler;
  SolverParams solver;
  FractureThresholds fracture;
  bool pin_root{true};
  std::vector<NodeSelector> pins;
  Real duration{5.0};
  bool stop_at_quiescence{false};
  Real quiescence_ke{1e-6};  // J
  std::optional<NodeSelector> tip;
  int frame_stride{8};
  bool binary_frames{false};

  CurveSet curves;
  std::vector<OrganSpec> organs;
  std::map<std::string, LeafTemplate> templates;
  std::vector<RigidObstacle> obstacles;

  std::vector<std::string> warnings;
  nlohmann::json canonical;  // scene file with every default materialized

  std::string dump_canonical() const { return canonical.dump(2) + "\n"; }
};

/// Loads and validates a scene file plus everything it references. Unknown
/// keys, missing files and out-of-range parameters are errors; soft range
/// violations are collected as warnings.
SceneConfig load_scene(const std::filesystem::path& path);

/// Applies one sweepable parameter: sigma_distance, stiffness, density,
/// c_s_max or c_b_max.
void apply_sweep_value(SceneConfig& config, const std::string& parameter, Real value);

}  // namespace plantsim
