#include "plantsim/scene.hpp"

#include <fstream>
#include <limits>

#include "plantsim/io.hpp"

namespace plantsim {

using nlohmann::json;

namespace {

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void check_keys(const json& obj, const std::vector<std::string>& allowed,
                const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

Real get_real(const json& obj, const std::string& key, Real fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw ConfigError("'" + key + "' must be a number");
  return obj[key].get<Real>();
}

int get_int(const json& obj, const std::string& key, int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer()) throw ConfigError("'" + key + "' must be an integer");
  return obj[key].get<int>();
}

bool get_bool(const json& obj, const std::string& key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_boolean()) throw ConfigError("'" + key + "' must be a boolean");
  return obj[key].get<bool>();
}

Vec3 get_vec3(const json& value, const std::string& where) {
  if (!value.is_array() || value.size() != 3 || !value[0].is_number() || !value[1].is_number() ||
      !value[2].is_number())
    throw ConfigError(where + ": expected [x, y, z]");
  return Vec3(value[0].get<Real>(), value[1].get<Real>(), value[2].get<Real>());
}

json vec3_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

NodeSelector parse_selector(const json& value, const std::string& where,
                            bool exclusive_keys = true) {
  NodeSelector sel;
  if (value.is_number_integer()) {
    sel.node = value.get<int>();
    return sel;
  }
  if (exclusive_keys) check_keys(value, {"node", "at"}, where);
  if (value.contains("node")) sel.node = get_int(value, "node", 0);
  if (value.contains("at")) sel.at = get_vec3(value["at"], where + ".at");
  if (!sel.node && !sel.at) throw ConfigError(where + ": needs 'node' or 'at'");
  return sel;
}

json selector_json(const NodeSelector& sel) {
  json out = json::object();
  if (sel.node) out["node"] = *sel.node;
  if (sel.at) out["at"] = vec3_json(*sel.at);
  return out;
}

LeafTemplate load_leaf_template(const std::filesystem::path& path) {
  const json doc = read_json(path);
  check_keys(doc, {"nodes", "edges", "root"}, path.string());
  LeafTemplate tpl;
  if (!doc.contains("nodes") || !doc["nodes"].is_array() || doc["nodes"].size() < 2)
    throw ConfigError(path.string() + ": needs at least two nodes");
  for (const auto& node : doc["nodes"]) {
    check_keys(node, {"p", "r"}, path.string() + ".nodes[]");
    LeafTemplate::Node out;
    out.position = get_vec3(node.at("p"), path.string() + ".nodes[].p");
    out.radius = get_real(node, "r", 0.001);
    if (!(out.radius > 0.0)) throw ConfigError(path.string() + ": node radius must be positive");
    tpl.nodes.push_back(out);
  }
  if (!doc.contains("edges") || !doc["edges"].is_array())
    throw ConfigError(path.string() + ": needs edges");
  for (const auto& e : doc["edges"]) {
    if (!e.is_array() || e.size() != 2) throw ConfigError(path.string() + ": bad edge");
    const int a = e[0].get<int>(), b = e[1].get<int>();
    const int n = static_cast<int>(tpl.nodes.size());
    if (a < 0 || a >= n || b < 0 || b >= n || a == b)
      throw ConfigError(path.string() + ": edge out of range");
    tpl.edges.push_back({a, b});
  }
  if (tpl.edges.size() + 1 != tpl.nodes.size())
    throw ConfigError(path.string() + ": template must be a tree");
  tpl.root = get_int(doc, "root", 0);
  if (tpl.root < 0 || tpl.root >= static_cast<int>(tpl.nodes.size()))
    throw ConfigError(path.string() + ": root out of range");
  return tpl;
}

SdfPrimitive parse_primitive(const json& value, const std::string& where) {
  SdfPrimitive prim;
  if (!value.contains("type")) throw ConfigError(where + ": primitive needs a type");
  const std::string type = value["type"].get<std::string>();
  if (type == "sphere") {
    check_keys(value, {"type", "center", "radius"}, where);
    prim.type = SdfPrimitive::Type::Sphere;
    prim.a = get_vec3(value.at("center"), where + ".center");
    prim.radius = get_real(value, "radius", 0.0);
    if (!(prim.radius > 0.0)) throw ConfigError(where + ": sphere radius must be positive");
  } else if (type == "capsule") {
    check_keys(value, {"type", "a", "b", "radius"}, where);
    prim.type = SdfPrimitive::Type::Capsule;
    prim.a = get_vec3(value.at("a"), where + ".a");
    prim.b = get_vec3(value.at("b"), where + ".b");
    prim.radius = get_real(value, "radius", 0.0);
    if (!(prim.radius > 0.0)) throw ConfigError(where + ": capsule radius must be positive");
  } else if (type == "box") {
    check_keys(value, {"type", "center", "half_extents"}, where);
    prim.type = SdfPrimitive::Type::Box;
    prim.a = get_vec3(value.at("center"), where + ".center");
    prim.half_extents = get_vec3(value.at("half_extents"), where + ".half_extents");
    if (!(prim.half_extents.minCoeff() > 0.0))
      throw ConfigError(where + ": box half extents must be positive");
  } else {
    throw ConfigError(where + ": unknown primitive type '" + type + "'");
  }
  return prim;
}

json primitive_json(const SdfPrimitive& prim) {
  json out = json::object();
  switch (prim.type) {
    case SdfPrimitive::Type::Sphere:
      out["type"] = "sphere";
      out["center"] = vec3_json(prim.a);
      out["radius"] = prim.radius;
      break;
    case SdfPrimitive::Type::Capsule:
      out["type"] = "capsule";
      out["a"] = vec3_json(prim.a);
      out["b"] = vec3_json(prim.b);
      out["radius"] = prim.radius;
      break;
    case SdfPrimitive::Type::Box:
      out["type"] = "box";
      out["center"] = vec3_json(prim.a);
      out["half_extents"] = vec3_json(prim.half_extents);
      break;
  }
  return out;
}

void load_plant_file(SceneConfig& cfg, const std::filesystem::path& path,
                     const json& compiler_overrides) {
  const json doc = read_json(path);
  check_keys(doc,
             {"curves", "root", "step", "sigma_connect", "sigma_distance", "organs",
              "leaf_templates"},
             path.string());
  if (!doc.contains("curves") || !doc["curves"].is_array() || doc["curves"].empty())
    throw ConfigError(path.string() + ": plant needs at least one curve");

  for (const auto& curve : doc["curves"]) {
    check_keys(curve, {"points", "radii", "radius"}, path.string() + ".curves[]");
    Curve c;
    if (!curve.contains("points") || !curve["points"].is_array() || curve["points"].size() < 2)
      throw ConfigError(path.string() + ": each curve needs at least two points");
    for (const auto& p : curve["points"]) c.points.push_back(get_vec3(p, "curve point"));
    if (curve.contains("radii")) {
      for (const auto& r : curve["radii"]) c.radii.push_back(r.get<Real>());
      if (c.radii.size() != c.points.size())
        throw ConfigError(path.string() + ": radii must match points");
    } else {
      c.radii.assign(c.points.size(), get_real(curve, "radius", 0.003));
    }
    for (Real r : c.radii)
      if (!(r > 0.0)) throw ConfigError(path.string() + ": curve radii must be positive");
    cfg.curves.curves.push_back(std::move(c));
  }

  cfg.curves.root_curve = 0;
  cfg.curves.root_at_end = false;
  if (doc.contains("root")) {
    check_keys(doc["root"], {"curve", "end"}, path.string() + ".root");
    cfg.curves.root_curve = get_int(doc["root"], "curve", 0);
    const std::string end = doc["root"].value("end", "first");
    if (end != "first" && end != "last")
      throw ConfigError(path.string() + ": root.end must be 'first' or 'last'");
    cfg.curves.root_at_end = end == "last";
  }
  if (cfg.curves.root_curve < 0 ||
      cfg.curves.root_curve >= static_cast<int>(cfg.curves.curves.size()))
    throw ConfigError(path.string() + ": root curve out of range");

  // precedence: built-in defaults < plant file < scene compiler section
  cfg.compiler.step = get_real(doc, "step", cfg.compiler.step);
  cfg.compiler.sigma_connect = get_real(doc, "sigma_connect", cfg.compiler.sigma_connect);
  cfg.compiler.sigma_distance = get_real(doc, "sigma_distance", cfg.compiler.sigma_distance);
  cfg.compiler.step = get_real(compiler_overrides, "step", cfg.compiler.step);
  cfg.compiler.sigma_connect =
      get_real(compiler_overrides, "sigma_connect", cfg.compiler.sigma_connect);
  cfg.compiler.sigma_distance =
      get_real(compiler_overrides, "sigma_distance", cfg.compiler.sigma_distance);

  if (doc.contains("leaf_templates")) {
    if (!doc["leaf_templates"].is_object())
      throw ConfigError(path.string() + ": leaf_templates must map ids to paths");
    for (const auto& [id, rel] : doc["leaf_templates"].items()) {
      const std::filesystem::path tpl_path = path.parent_path() / rel.get<std::string>();
      if (!std::filesystem::exists(tpl_path))
        throw ConfigError(path.string() + ": leaf template file missing: " + tpl_path.string());
      cfg.templates[id] = load_leaf_template(tpl_path);
    }
  }

  if (doc.contains("organs")) {
    for (const auto& organ : doc["organs"]) {
      check_keys(organ,
                 {"kind", "node", "at", "radius", "mass", "pedicel_length", "pedicel_radius",
                  "pedicel_direction", "template", "scale"},
                 path.string() + ".organs[]");
      OrganSpec spec;
      spec.where = parse_selector(organ, path.string() + ".organs[]", false);
      const std::string kind = organ.value("kind", "fruit");
      if (kind == "fruit") {
        spec.organ.kind = OrganKind::Fruit;
        spec.organ.fruit_radius = get_real(organ, "radius", 0.015);
        spec.organ.fruit_mass = get_real(organ, "mass", 0.02);
        spec.organ.pedicel_length = get_real(organ, "pedicel_length", 0.03);
        spec.organ.pedicel_radius =
            get_real(organ, "pedicel_radius", 0.2 * spec.organ.fruit_radius);
        if (organ.contains("pedicel_direction")) {
          spec.organ.pedicel_direction =
              get_vec3(organ["pedicel_direction"], "organs[].pedicel_direction");
          if (spec.organ.pedicel_direction.norm() < 1e-9)
            throw ConfigError(path.string() + ": pedicel_direction must be nonzero");
        }
        if (!(spec.organ.fruit_radius > 0.0) || !(spec.organ.fruit_mass > 0.0) ||
            !(spec.organ.pedicel_length > 0.0) || !(spec.organ.pedicel_radius > 0.0))
          throw ConfigError(path.string() + ": fruit parameters must be positive");
      } else if (kind == "leaf") {
        spec.organ.kind = OrganKind::Leaf;
        if (!organ.contains("template"))
          throw ConfigError(path.string() + ": leaf organ needs a template id");
        spec.organ.leaf_template = organ["template"].get<std::string>();
        spec.organ.scale = get_real(organ, "scale", 1.0);
        if (!(spec.organ.scale > 0.0))
          throw ConfigError(path.string() + ": leaf scale must be positive");
        if (!cfg.templates.count(spec.organ.leaf_template))
          throw ConfigError(path.string() + ": unknown leaf template '" +
                            spec.organ.leaf_template + "'");
      } else {
        throw ConfigError(path.string() + ": organ kind must be 'fruit' or 'leaf'");
      }
      cfg.organs.push_back(std::move(spec));
    }
  }
}

}  // namespace

int resolve_node(const PlantGraph& graph, const NodeSelector& selector) {
  if (selector.node) {
    const int n = *selector.node;
    if (n < 0 || n >= static_cast<int>(graph.nodes.size()))
      throw ConfigError("node selector " + std::to_string(n) + " out of range (graph has " +
                        std::to_string(graph.nodes.size()) + " nodes)");
    return n;
  }
  int best = 0;
  Real best_d = std::numeric_limits<Real>::max();
  for (size_t i = 0; i < graph.nodes.size(); ++i) {
    const Real d = (graph.nodes[i].position - *selector.at).norm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

SceneConfig load_scene(const std::filesystem::path& path) {
  SceneConfig cfg;
  cfg.scene_path = std::filesystem::absolute(path);
  const json doc = read_json(path);
  check_keys(doc,
             {"plant", "material", "compiler", "solver", "collision", "fracture", "pins",
              "pin_root", "obstacles", "duration", "stop_at_quiescence", "quiescence_ke", "tip",
              "output"},
             path.string());

  if (!doc.contains("plant") || !doc["plant"].is_string())
    throw ConfigError(path.string() + ": 'plant' (path) is required");
  cfg.plant_reference = doc["plant"].get<std::string>();
  const std::filesystem::path plant_path = path.parent_path() / cfg.plant_reference;
  if (!std::filesystem::exists(plant_path))
    throw ConfigError(path.string() + ": plant file missing: " + plant_path.string());

  const json material = doc.value("material", json::object());
  check_keys(material, {"young_modulus", "poisson_ratio", "density"}, "material");
  cfg.material.young_modulus = get_real(material, "young_modulus", 2e7);
  cfg.material.poisson_ratio = get_real(material, "poisson_ratio", 0.3);
  cfg.material.density = get_real(material, "density", 300.0);
  if (cfg.material.young_modulus < 1e5 || cfg.material.young_modulus > 1e11)
    throw ConfigError("material.young_modulus out of range [1e5, 1e11] Pa");
  if (cfg.material.poisson_ratio < 0.0 || cfg.material.poisson_ratio >= 0.5)
    throw ConfigError("material.poisson_ratio out of range [0, 0.5)");
  if (cfg.material.density < 100.0 || cfg.material.density > 1500.0)
    throw ConfigError("material.density out of range [100, 1500] kg/m^3");
  if (cfg.material.density < 200.0 || cfg.material.density > 1000.0)
    cfg.warnings.push_back("material.density outside the typical 200-1000 kg/m^3 band");

  const json solver = doc.value("solver", json::object());
  check_keys(solver, {"dt", "substeps", "iterations", "gravity", "velocity_damping"}, "solver");
  cfg.solver.dt = get_real(solver, "dt", 1.0 / 120.0);
  cfg.solver.substeps = get_int(solver, "substeps", 8);
  cfg.solver.iterations = get_int(solver, "iterations", 20);
  if (solver.contains("gravity")) cfg.solver.gravity = get_vec3(solver["gravity"], "solver.gravity");
  cfg.solver.velocity_damping = get_real(solver, "velocity_damping", 0.1);
  if (!(cfg.solver.dt > 0.0)) throw ConfigError("solver.dt must be positive");
  if (cfg.solver.substeps < 1) throw ConfigError("solver.substeps must be >= 1");
  if (cfg.solver.iterations < 1) throw ConfigError("solver.iterations must be >= 1");
  if (cfg.solver.velocity_damping < 0.0) throw ConfigError("solver.velocity_damping must be >= 0");

  const json collision = doc.value("collision", json::object());
  check_keys(collision, {"self_collision", "contact_slack", "axis_sample_factor"}, "collision");
  cfg.solver.collision.self_collision = get_bool(collision, "self_collision", true);
  cfg.solver.collision.contact_slack = get_real(collision, "contact_slack", 1e-4);
  cfg.solver.collision.axis_sample_factor = get_real(collision, "axis_sample_factor", 0.5);
  if (!(cfg.solver.collision.axis_sample_factor > 0.0))
    throw ConfigError("collision.axis_sample_factor must be positive");

  const json fracture = doc.value("fracture", json::object());
  check_keys(fracture, {"c_s_max", "c_b_max", "structural_scale", "full_bend_magnitude"},
             "fracture");
  cfg.fracture.stretch_limit = get_real(fracture, "c_s_max", 0.1);
  cfg.fracture.bend_limit = get_real(fracture, "c_b_max", 0.31);
  cfg.fracture.structural_scale = get_real(fracture, "structural_scale", 10.0);
  cfg.fracture.full_bend_magnitude = get_bool(fracture, "full_bend_magnitude", true);
  if (!(cfg.fracture.stretch_limit > 0.0) || !(cfg.fracture.bend_limit > 0.0) ||
      !(cfg.fracture.structural_scale > 0.0))
    throw ConfigError("fracture thresholds must be positive");

  cfg.pin_root = get_bool(doc, "pin_root", true);
  if (doc.contains("pins")) {
    if (!doc["pins"].is_array()) throw ConfigError("'pins' must be an array");
    for (const auto& pin : doc["pins"]) cfg.pins.push_back(parse_selector(pin, "pins[]"));
  }

  cfg.duration = get_real(doc, "duration", 5.0);
  if (cfg.duration < 0.0) throw ConfigError("duration must be >= 0");
  cfg.stop_at_quiescence = get_bool(doc, "stop_at_quiescence", false);
  cfg.quiescence_ke = get_real(doc, "quiescence_ke", 1e-6);
  if (doc.contains("tip")) cfg.tip = parse_selector(doc["tip"], "tip");

  const json output = doc.value("output", json::object());
  check_keys(output, {"frame_stride", "binary_frames"}, "output");
  cfg.frame_stride = get_int(output, "frame_stride", 8);
  cfg.binary_frames = get_bool(output, "binary_frames", false);
  if (cfg.frame_stride < 1) throw ConfigError("output.frame_stride must be >= 1");

  if (doc.contains("obstacles")) {
    if (!doc["obstacles"].is_array()) throw ConfigError("'obstacles' must be an array");
    for (const auto& entry : doc["obstacles"]) {
      check_keys(entry, {"name", "primitives", "grid", "trajectory", "pose"}, "obstacles[]");
      RigidObstacle obstacle;
      obstacle.name = entry.value("name", "obstacle" + std::to_string(cfg.obstacles.size()));
      if (entry.contains("primitives")) {
        for (const auto& prim : entry["primitives"])
          obstacle.primitives.push_back(parse_primitive(prim, "obstacles[].primitives[]"));
      }
      if (entry.contains("grid")) {
        const std::filesystem::path grid_path =
            path.parent_path() / entry["grid"].get<std::string>();
        if (!std::filesystem::exists(grid_path))
          throw ConfigError("obstacle grid file missing: " + grid_path.string());
        obstacle.grid = load_grid_sdf(grid_path);
      }
      if (obstacle.primitives.empty() && !obstacle.grid)
        throw ConfigError("obstacle '" + obstacle.name + "' has no geometry");
      if (entry.contains("trajectory")) {
        const std::filesystem::path traj_path =
            path.parent_path() / entry["trajectory"].get<std::string>();
        if (!std::filesystem::exists(traj_path))
          throw ConfigError("obstacle trajectory file missing: " + traj_path.string());
        obstacle.trajectory = load_trajectory_csv(traj_path);
      } else if (entry.contains("pose")) {
        check_keys(entry["pose"], {"position", "rotation"}, "obstacles[].pose");
        PoseSample pose;
        pose.t = 0.0;
        if (entry["pose"].contains("position"))
          pose.position = get_vec3(entry["pose"]["position"], "pose.position");
        if (entry["pose"].contains("rotation")) {
          const auto& r = entry["pose"]["rotation"];
          if (!r.is_array() || r.size() != 4) throw ConfigError("pose.rotation must be [w,x,y,z]");
          pose.rotation = Quat(r[0].get<Real>(), r[1].get<Real>(), r[2].get<Real>(),
                               r[3].get<Real>()).normalized();
        }
        obstacle.trajectory.push_back(pose);
      } else {
        throw ConfigError("obstacle '" + obstacle.name + "' needs a trajectory or a pose");
      }
      cfg.obstacles.push_back(std::move(obstacle));
    }
  }

  load_plant_file(cfg, plant_path, doc.value("compiler", json::object()));
  if (doc.contains("compiler"))
    check_keys(doc["compiler"], {"step", "sigma_connect", "sigma_distance"}, "compiler");
  if (!(cfg.compiler.step > 0.0) || !(cfg.compiler.sigma_connect > 0.0) ||
      !(cfg.compiler.sigma_distance > 0.0))
    throw ConfigError("compiler step and thresholds must be positive");

  // canonical form: every default materialized, keys sorted
  json canon;
  canon["plant"] = cfg.plant_reference;
  canon["material"] = {{"young_modulus", cfg.material.young_modulus},
                       {"poisson_ratio", cfg.material.poisson_ratio},
                       {"density", cfg.material.density}};
  canon["compiler"] = {{"step", cfg.compiler.step},
                       {"sigma_connect", cfg.compiler.sigma_connect},
                       {"sigma_distance", cfg.compiler.sigma_distance}};
  canon["solver"] = {{"dt", cfg.solver.dt},
                     {"substeps", cfg.solver.substeps},
                     {"iterations", cfg.solver.iterations},
                     {"gravity", vec3_json(cfg.solver.gravity)},
                     {"velocity_damping", cfg.solver.velocity_damping}};
  canon["collision"] = {{"self_collision", cfg.solver.collision.self_collision},
                        {"contact_slack", cfg.solver.collision.contact_slack},
                        {"axis_sample_factor", cfg.solver.collision.axis_sample_factor}};
  canon["fracture"] = {{"c_s_max", cfg.fracture.stretch_limit},
                       {"c_b_max", cfg.fracture.bend_limit},
                       {"structural_scale", cfg.fracture.structural_scale},
                       {"full_bend_magnitude", cfg.fracture.full_bend_magnitude}};
  canon["pin_root"] = cfg.pin_root;
  canon["pins"] = json::array();
  for (const auto& pin : cfg.pins) canon["pins"].push_back(selector_json(pin));
  canon["duration"] = cfg.duration;
  canon["stop_at_quiescence"] = cfg.stop_at_quiescence;
  canon["quiescence_ke"] = cfg.quiescence_ke;
  if (cfg.tip) canon["tip"] = selector_json(*cfg.tip);
  canon["output"] = {{"frame_stride", cfg.frame_stride}, {"binary_frames", cfg.binary_frames}};
  canon["obstacles"] = json::array();
  if (doc.contains("obstacles")) {
    for (size_t i = 0; i < doc["obstacles"].size(); ++i) {
      const auto& entry = doc["obstacles"][i];
      json out = json::object();
      out["name"] = cfg.obstacles[i].name;
      if (entry.contains("primitives")) {
        out["primitives"] = json::array();
        for (const auto& prim : cfg.obstacles[i].primitives)
          out["primitives"].push_back(primitive_json(prim));
      }
      if (entry.contains("grid")) out["grid"] = entry["grid"];
      if (entry.contains("trajectory")) out["trajectory"] = entry["trajectory"];
      if (entry.contains("pose")) {
        const auto& pose = cfg.obstacles[i].trajectory.front();
        out["pose"] = {{"position", vec3_json(pose.position)},
                       {"rotation", json::array({pose.rotation.w(), pose.rotation.x(),
                                                 pose.rotation.y(), pose.rotation.z()})}};
      }
      canon["obstacles"].push_back(out);
    }
  }
  cfg.canonical = canon;
  return cfg;
}

void apply_sweep_value(SceneConfig& config, const std::string& parameter, Real value) {
  if (parameter == "sigma_distance") {
    if (!(value > 0.0)) throw ConfigError("sigma_distance must be positive");
    config.compiler.sigma_distance = value;
  } else if (parameter == "stiffness") {
    if (value < 1e5 || value > 1e11) throw ConfigError("stiffness out of range [1e5, 1e11] Pa");
    config.material.young_modulus = value;
  } else if (parameter == "density") {
    if (value < 100.0 || value > 1500.0)
      throw ConfigError("density out of range [100, 1500] kg/m^3");
    config.material.density = value;
  } else if (parameter == "c_s_max") {
    if (!(value > 0.0)) throw ConfigError("c_s_max must be positive");
    config.fracture.stretch_limit = value;
  } else if (parameter == "c_b_max") {
    if (!(value > 0.0)) throw ConfigError("c_b_max must be positive");
    config.fracture.bend_limit = value;
  } else {
    throw ConfigError("unknown sweep parameter '" + parameter +
                      "' (expected sigma_distance, stiffness, density, c_s_max or c_b_max)");
  }
}

}  // namespace plantsim
