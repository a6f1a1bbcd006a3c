#pragma once

#include <filesystem>
#include <random>

#include "plantsim/plant.hpp"
#include "plantsim/solver.hpp"

namespace test_support {

using namespace plantsim;

inline Quat random_unit_quat(std::mt19937& rng) {
  std::normal_distribution<Real> dist(0.0, 1.0);
  Quat q(dist(rng), dist(rng), dist(rng), dist(rng));
  while (q.norm() < 1e-6) q = Quat(dist(rng), dist(rng), dist(rng), dist(rng));
  q.normalize();
  return q;
}

inline Vec3 random_vec3(std::mt19937& rng, Real scale = 1.0) {
  std::uniform_real_distribution<Real> dist(-scale, scale);
  return Vec3(dist(rng), dist(rng), dist(rng));
}

inline Vec3 random_direction(std::mt19937& rng) {
  Vec3 v = random_vec3(rng);
  while (v.norm() < 0.1) v = random_vec3(rng);
  return v.normalized();
}

/// Straight chain of n_nodes along `direction` starting at `origin`.
inline PlantGraph chain_graph(int n_nodes, Real spacing, const Vec3& direction,
                              Real radius = 0.004, const Vec3& origin = Vec3::Zero()) {
  PlantGraph g;
  const Vec3 dir = direction.normalized();
  for (int i = 0; i < n_nodes; ++i) {
    PlantGraph::Node node;
    node.position = origin + i * spacing * dir;
    node.radius = radius;
    node.leaf = i == 0 || i == n_nodes - 1;
    g.nodes.push_back(node);
  }
  for (int i = 1; i < n_nodes; ++i) g.edges.push_back({i - 1, i});
  g.root = 0;
  return g;
}

inline SimState chain_state(int n_nodes, Real spacing, const Vec3& direction,
                            const Material& material, bool pin_root, Real radius = 0.004) {
  const PlantGraph g = chain_graph(n_nodes, spacing, direction, radius);
  std::set<int> pins;
  if (pin_root) pins.insert(0);
  return build_sim_state(g, material, pins);
}

inline std::filesystem::path test_dir(const std::string& name) {
  const std::filesystem::path dir = std::filesystem::path("test_tmp") / name;
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::filesystem::path source_dir() {
#ifdef PLANTSIM_SOURCE_DIR
  return std::filesystem::path(PLANTSIM_SOURCE_DIR);
#else
  return std::filesystem::current_path();
#endif
}

}  // namespace test_support
