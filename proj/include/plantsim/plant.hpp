#pragma once

#include <array>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "plantsim/state.hpp"

namespace plantsim {

/// A hand-drawn branch: polyline plus a radius profile sampled at its control
/// points (linearly interpolated along arc length).
struct Curve {
  std::vector<Vec3> points;
  std::vector<Real> radii;
};

struct CurveSet {
  std::vector<Curve> curves;
  int root_curve{0};
  bool root_at_end{false};  // false: root is the first point of the root curve
};

struct SamplePoint {
  Vec3 position{Vec3::Zero()};
  Real radius{0.003};
  int curve{-1};
  Real arc_length{0.0};
};

struct SampledCurves {
  std::vector<SamplePoint> samples;           // grouped by curve
  std::vector<std::pair<int, int>> curve_range;  // [first, last] sample per curve
  int root_sample{0};
  Real min_clearance{0.0};  // smallest distance between two distinct curves
  std::vector<std::string> warnings;
};

struct DenseTree {
  std::vector<SamplePoint> nodes;
  std::vector<int> parent;                 // -1 at root
  std::vector<std::vector<int>> children;  // ascending
  int root{0};

  int degree(int node) const {
    return static_cast<int>(children[node].size()) + (parent[node] >= 0 ? 1 : 0);
  }
};

struct PlantGraph {
  struct Node {
    Vec3 position{Vec3::Zero()};
    Real radius{0.003};
    bool junction{false};  // degree > 2
    bool leaf{false};      // degree == 1
    bool key() const { return junction || leaf; }
  };
  std::vector<Node> nodes;
  std::vector<std::array<int, 2>> edges;  // {parent, child} along root-oriented paths
  int root{0};
  std::vector<OrganAttachment> organs;
};

struct LeafTemplate {
  struct Node {
    Vec3 position{Vec3::Zero()};
    Real radius{0.001};
  };
  std::vector<Node> nodes;
  std::vector<std::array<int, 2>> edges;
  int root{0};
};

struct DisconnectedPlantError : std::runtime_error {
  std::vector<int> unreachable_curves;
  explicit DisconnectedPlantError(const std::string& msg, std::vector<int> curves)
      : std::runtime_error(msg), unreachable_curves(std::move(curves)) {}
};

/// Resamples every curve at arc-length intervals <= step (endpoints always
/// kept). Warns when the step is not smaller than the closest distance
/// between any two curves.
SampledCurves sample_curves(const CurveSet& cs, Real step);

/// Joins the per-curve chains into a single tree: every sample may link to
/// the nearest endpoint of another curve within sigma_connect, and a
/// breadth-first search from the root keeps the tree edges. Throws
/// DisconnectedPlantError when a curve stays unreachable.
DenseTree connect_branches(const SampledCurves& sampled, Real sigma_connect);

/// Drops nodes closer than sigma_distance to their nearest preserved
/// ancestor. Junctions and leaves (key nodes) always survive; a preserved
/// non-key node is dropped again when a key node lands within
/// 0.5 * sigma_distance of it.
PlantGraph simplify(const DenseTree& tree, Real sigma_distance);

/// Instantiates the rod network: a particle per node, a segment plus material
/// frame per edge, a bend/twist pair per parent/child edge couple, organs
/// expanded (fruit = sphere particle on a pedicel segment, leaf = rod
/// sub-graph from its template).
SimState build_sim_state(const PlantGraph& graph, const Material& material,
                         const std::set<int>& pins,
                         const std::map<std::string, LeafTemplate>& templates = {});

struct CompilerParams {
  Real step{0.005};
  Real sigma_connect{0.02};
  Real sigma_distance{0.02};
};

struct CompiledPlant {
  PlantGraph graph;
  int dense_node_count{0};
  std::vector<std::string> warnings;
};

CompiledPlant compile_plant(const CurveSet& cs, const CompilerParams& params);

}  // namespace plantsim
