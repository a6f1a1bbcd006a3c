#include "plantsim/plant.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "plantsim/collision.hpp"
#include "plantsim/rod.hpp"

namespace plantsim {

namespace {

Real polyline_length(const Curve& c) {
  Real total = 0.0;
  for (size_t i = 1; i < c.points.size(); ++i) total += (c.points[i] - c.points[i - 1]).norm();
  return total;
}

// position and radius at arc length s along the control polyline
SamplePoint interpolate_curve(const Curve& c, Real s, int curve_index) {
  SamplePoint out;
  out.curve = curve_index;
  out.arc_length = s;
  Real acc = 0.0;
  for (size_t i = 1; i < c.points.size(); ++i) {
    const Real seg = (c.points[i] - c.points[i - 1]).norm();
    if (s <= acc + seg || i + 1 == c.points.size()) {
      const Real u = seg > 0.0 ? std::clamp((s - acc) / seg, 0.0, 1.0) : 0.0;
      out.position = (1.0 - u) * c.points[i - 1] + u * c.points[i];
      out.radius = (1.0 - u) * c.radii[i - 1] + u * c.radii[i];
      return out;
    }
    acc += seg;
  }
  out.position = c.points.back();
  out.radius = c.radii.back();
  return out;
}

Real curve_pair_clearance(const Curve& a, const Curve& b) {
  Real best = std::numeric_limits<Real>::max();
  Real s, t;
  Vec3 ca, cb;
  for (size_t i = 1; i < a.points.size(); ++i)
    for (size_t j = 1; j < b.points.size(); ++j) {
      const Real d2 = closest_point_segment_segment(a.points[i - 1], a.points[i], b.points[j - 1],
                                                    b.points[j], s, t, ca, cb);
      best = std::min(best, std::sqrt(d2));
    }
  return best;
}

}  // namespace

SampledCurves sample_curves(const CurveSet& cs, Real step) {
  if (!(step > 0.0)) throw std::invalid_argument("sample_curves: step must be positive");
  if (cs.curves.empty()) throw std::invalid_argument("sample_curves: empty curve set");

  SampledCurves out;
  for (size_t ci = 0; ci < cs.curves.size(); ++ci) {
    const Curve& c = cs.curves[ci];
    if (c.points.size() < 2)
      throw std::invalid_argument("sample_curves: curve " + std::to_string(ci) +
                                  " needs at least two points");
    if (c.radii.size() != c.points.size())
      throw std::invalid_argument("sample_curves: curve " + std::to_string(ci) +
                                  " radius profile does not match its points");
    const Real length = polyline_length(c);
    if (!(length > 0.0))
      throw std::invalid_argument("sample_curves: curve " + std::to_string(ci) +
                                  " has zero length");
    const int intervals = std::max(1, static_cast<int>(std::ceil(length / step)));
    const int first = static_cast<int>(out.samples.size());
    for (int i = 0; i <= intervals; ++i) {
      const Real s = (i == intervals) ? length : length * i / intervals;
      out.samples.push_back(interpolate_curve(c, s, static_cast<int>(ci)));
    }
    out.curve_range.emplace_back(first, static_cast<int>(out.samples.size()) - 1);
  }

  out.min_clearance = std::numeric_limits<Real>::max();
  for (size_t i = 0; i < cs.curves.size(); ++i)
    for (size_t j = i + 1; j < cs.curves.size(); ++j)
      out.min_clearance = std::min(out.min_clearance, curve_pair_clearance(cs.curves[i], cs.curves[j]));
  if (cs.curves.size() > 1 && step >= out.min_clearance) {
    out.warnings.push_back("sample step " + std::to_string(step) +
                           " is not smaller than the closest distance between two curves (" +
                           std::to_string(out.min_clearance) + ")");
  }

  const auto& range = out.curve_range[cs.root_curve];
  out.root_sample = cs.root_at_end ? range.second : range.first;
  return out;
}

DenseTree connect_branches(const SampledCurves& sampled, Real sigma_connect) {
  if (!(sigma_connect > 0.0))
    throw std::invalid_argument("connect_branches: sigma_connect must be positive");
  const int n = static_cast<int>(sampled.samples.size());
  std::vector<std::vector<int>> adjacency(n);

  // chains along each curve
  for (const auto& [first, last] : sampled.curve_range) {
    for (int i = first; i < last; ++i) {
      adjacency[i].push_back(i + 1);
      adjacency[i + 1].push_back(i);
    }
  }

  // candidate links: each node to the single nearest endpoint of another
  // curve within the threshold (ties: lower curve, then lower arc length)
  for (int u = 0; u < n; ++u) {
    const auto& su = sampled.samples[u];
    int best = -1;
    Real best_d = sigma_connect;
    for (size_t ci = 0; ci < sampled.curve_range.size(); ++ci) {
      if (static_cast<int>(ci) == su.curve) continue;
      for (const int e : {sampled.curve_range[ci].first, sampled.curve_range[ci].second}) {
        const Real d = (sampled.samples[e].position - su.position).norm();
        if (d < best_d) {
          best_d = d;
          best = e;
        }
      }
    }
    if (best >= 0) {
      adjacency[u].push_back(best);
      adjacency[best].push_back(u);
    }
  }
  for (auto& list : adjacency) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }

  DenseTree tree;
  tree.nodes = sampled.samples;
  tree.parent.assign(n, -1);
  tree.children.resize(n);
  tree.root = sampled.root_sample;

  std::vector<bool> seen(n, false);
  std::deque<int> queue;
  seen[tree.root] = true;
  queue.push_back(tree.root);
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : adjacency[u]) {
      if (seen[v]) continue;
      seen[v] = true;
      tree.parent[v] = u;
      tree.children[u].push_back(v);
      queue.push_back(v);
    }
  }

  std::vector<int> unreachable;
  for (size_t ci = 0; ci < sampled.curve_range.size(); ++ci) {
    for (int i = sampled.curve_range[ci].first; i <= sampled.curve_range[ci].second; ++i) {
      if (!seen[i]) {
        unreachable.push_back(static_cast<int>(ci));
        break;
      }
    }
  }
  if (!unreachable.empty()) {
    std::string msg = "connect_branches: curves unreachable from the root under sigma_connect:";
    for (int ci : unreachable) msg += " " + std::to_string(ci);
    throw DisconnectedPlantError(msg, unreachable);
  }
  return tree;
}

PlantGraph simplify(const DenseTree& tree, Real sigma_distance) {
  if (!(sigma_distance > 0.0))
    throw std::invalid_argument("simplify: sigma_distance must be positive");

  struct OutNode {
    int dense{-1};
    int parent{-1};  // index into the out list
    bool key{false};
    bool dropped{false};
  };
  std::vector<OutNode> out;
  const auto is_key = [&](int u) {
    const int d = tree.degree(u);
    return d == 1 || d > 2;
  };

  out.push_back({tree.root, -1, is_key(tree.root), false});

  // DFS carrying the nearest preserved ancestor
  struct Item {
    int node;
    int ancestor;  // out index
  };
  std::vector<Item> stack;
  const auto push_children = [&](int node, int ancestor) {
    const auto& kids = tree.children[node];
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back({*it, ancestor});
  };
  push_children(tree.root, 0);

  // squared comparisons with a relative tolerance keep boundary cases (d
  // exactly at the threshold) on the preserved side
  const Real keep_d2 = sigma_distance * sigma_distance * (1.0 - 1e-9);
  const Real crowd_d2 = 0.25 * sigma_distance * sigma_distance * (1.0 - 1e-9);
  while (!stack.empty()) {
    const Item item = stack.back();
    stack.pop_back();
    const int u = item.node;
    int anc = item.ancestor;
    const bool key = is_key(u);
    const Real d2 = (tree.nodes[u].position - tree.nodes[out[anc].dense].position).squaredNorm();

    if (!key && d2 < keep_d2) {
      push_children(u, anc);
      continue;
    }
    // u is preserved; a key node crowding a preserved non-key ancestor evicts it
    if (key && d2 < crowd_d2 && !out[anc].key && out[anc].parent >= 0) {
      out[anc].dropped = true;
      anc = out[anc].parent;
    }
    out.push_back({u, anc, key, false});
    push_children(u, static_cast<int>(out.size()) - 1);
  }

  PlantGraph graph;
  std::vector<int> remap(out.size(), -1);
  for (size_t i = 0; i < out.size(); ++i) {
    if (out[i].dropped) continue;
    remap[i] = static_cast<int>(graph.nodes.size());
    PlantGraph::Node node;
    node.position = tree.nodes[out[i].dense].position;
    node.radius = tree.nodes[out[i].dense].radius;
    graph.nodes.push_back(node);
  }
  graph.root = remap[0];
  for (size_t i = 1; i < out.size(); ++i) {
    if (out[i].dropped) continue;
    int p = out[i].parent;
    while (out[p].dropped) p = out[p].parent;  // splices may chain through drops
    graph.edges.push_back({remap[p], remap[i]});
  }

  std::vector<int> degree(graph.nodes.size(), 0);
  for (const auto& e : graph.edges) {
    ++degree[e[0]];
    ++degree[e[1]];
  }
  for (size_t i = 0; i < graph.nodes.size(); ++i) {
    graph.nodes[i].junction = degree[i] > 2;
    graph.nodes[i].leaf = degree[i] == 1;
  }
  return graph;
}

namespace {

Quat scratch_frame(const Vec3& d3) {
  int least = 0;
  Real best = std::abs(d3.x());
  for (int k = 1; k < 3; ++k) {
    const Real a = std::abs(d3[k]);
    if (a < best) {
      best = a;
      least = k;
    }
  }
  Vec3 ref = Vec3::Zero();
  ref[least] = 1.0;
  const Vec3 d1 = (ref - ref.dot(d3) * d3).normalized();
  const Vec3 d2 = d3.cross(d1);
  Mat3 frame;
  frame.col(0) = d1;
  frame.col(1) = d2;
  frame.col(2) = d3;
  return Quat(frame).normalized();
}

struct Builder {
  SimState state;
  const Material& material;
  std::vector<int> edge_into;       // particle -> segment arriving from the root
  std::vector<int> first_outgoing;  // particle -> lowest outgoing segment
  std::vector<int> parent_segment;  // segment -> its parent segment (-1 at root edges)

  explicit Builder(const Material& m) : material(m) {}

  void ensure_particle_tables() {
    edge_into.resize(state.particles.size(), -1);
    first_outgoing.resize(state.particles.size(), -1);
  }

  int add_segment(int pa, int pb, Real radius, bool pedicel) {
    const Vec3 delta = state.particles[pb].position - state.particles[pa].position;
    const Real length = delta.norm();
    if (!(length > 0.0)) throw std::invalid_argument("build_sim_state: degenerate edge");
    const Vec3 d3 = delta / length;

    const int parent = edge_into[pa] >= 0 ? edge_into[pa] : first_outgoing[pa];
    OrientationElement oe;
    if (parent >= 0) {
      const Quat& qp = state.orientations[state.segments[parent].orientation].rotation;
      const Vec3 d3p = qp * Vec3::UnitZ();
      // straight continuations reuse the parent frame bit-for-bit, so straight
      // plants get exactly zero rest curvature
      oe.rotation = d3p.dot(d3) > 1.0 - 1e-12
                        ? qp
                        : Quat((Quat::FromTwoVectors(d3p, d3) * qp).normalized());
    } else {
      oe.rotation = scratch_frame(d3);
    }
    state.orientations.push_back(oe);

    RodSegment seg;
    seg.particle_a = pa;
    seg.particle_b = pb;
    seg.orientation = static_cast<int>(state.orientations.size()) - 1;
    seg.rest_length = length;
    seg.radius = radius;
    seg.material = material;
    seg.pedicel = pedicel;
    state.segments.push_back(seg);
    const int index = static_cast<int>(state.segments.size()) - 1;

    parent_segment.push_back(parent);
    edge_into[pb] = index;
    if (first_outgoing[pa] < 0) first_outgoing[pa] = index;
    return index;
  }

  int add_particle(const Vec3& position, Real radius) {
    Particle p;
    p.position = position;
    p.radius = radius;
    state.particles.push_back(p);
    edge_into.push_back(-1);
    first_outgoing.push_back(-1);
    return static_cast<int>(state.particles.size()) - 1;
  }
};

}  // namespace

SimState build_sim_state(const PlantGraph& graph, const Material& material,
                         const std::set<int>& pins,
                         const std::map<std::string, LeafTemplate>& templates) {
  Builder b(material);
  b.state.particles.reserve(graph.nodes.size());
  for (const auto& node : graph.nodes) {
    Particle p;
    p.position = node.position;
    p.radius = node.radius;
    b.state.particles.push_back(p);
  }
  b.ensure_particle_tables();

  for (const auto& e : graph.edges) {
    const Real radius = 0.5 * (graph.nodes[e[0]].radius + graph.nodes[e[1]].radius);
    b.add_segment(e[0], e[1], radius, false);
  }

  // organs
  for (const auto& organ : graph.organs) {
    OrganAttachment placed = organ;
    if (organ.kind == OrganKind::Fruit) {
      const Vec3 center = graph.nodes[organ.node].position +
                          organ.pedicel_length * organ.pedicel_direction.normalized();
      placed.particle = b.add_particle(center, organ.fruit_radius);
      placed.pedicel_segment = b.add_segment(organ.node, placed.particle, organ.pedicel_radius, true);
      placed.first_segment = placed.pedicel_segment;
      placed.segment_count = 1;
    } else {
      const auto it = templates.find(organ.leaf_template);
      if (it == templates.end())
        throw std::invalid_argument("build_sim_state: unknown leaf template '" +
                                    organ.leaf_template + "'");
      const LeafTemplate& tpl = it->second;
      const int attach_parent = b.edge_into[organ.node] >= 0 ? b.edge_into[organ.node]
                                                             : b.first_outgoing[organ.node];
      const Quat frame = attach_parent >= 0
                             ? b.state.orientations[b.state.segments[attach_parent].orientation].rotation
                             : Quat::Identity();
      std::vector<int> mapping(tpl.nodes.size(), -1);
      mapping[tpl.root] = organ.node;
      for (size_t i = 0; i < tpl.nodes.size(); ++i) {
        if (static_cast<int>(i) == tpl.root) continue;
        const Vec3 world =
            graph.nodes[organ.node].position + frame * (organ.scale * tpl.nodes[i].position);
        mapping[i] = b.add_particle(world, tpl.nodes[i].radius * organ.scale);
      }
      // orient template edges away from the template root
      std::vector<std::vector<int>> adj(tpl.nodes.size());
      for (const auto& e : tpl.edges) {
        adj[e[0]].push_back(e[1]);
        adj[e[1]].push_back(e[0]);
      }
      for (auto& list : adj) std::sort(list.begin(), list.end());
      std::vector<bool> seen(tpl.nodes.size(), false);
      std::deque<int> queue{tpl.root};
      seen[tpl.root] = true;
      placed.first_segment = static_cast<int>(b.state.segments.size());
      while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int v : adj[u]) {
          if (seen[v]) continue;
          seen[v] = true;
          const Real radius =
              0.5 * organ.scale * (tpl.nodes[u].radius + tpl.nodes[v].radius);
          b.add_segment(mapping[u], mapping[v], radius, false);
          queue.push_back(v);
        }
      }
      placed.segment_count = static_cast<int>(b.state.segments.size()) - placed.first_segment;
      placed.particle = mapping[tpl.root];
    }
    b.state.attachments.push_back(placed);
  }

  // bend/twist pair for every segment that has a parent segment
  for (size_t i = 0; i < b.state.segments.size(); ++i) {
    const int parent = b.parent_segment[i];
    if (parent < 0) continue;
    BendTwistPair pair;
    pair.segment_a = parent;
    pair.segment_b = static_cast<int>(i);
    pair.mean_length =
        0.5 * (b.state.segments[parent].rest_length + b.state.segments[i].rest_length);
    pair.rest_darboux = compute_darboux(
        b.state.orientations[b.state.segments[parent].orientation].rotation,
        b.state.orientations[b.state.segments[i].orientation].rotation, pair.mean_length);
    b.state.bend_pairs.push_back(pair);
  }

  // mass lumping: half of each segment to both endpoints, cylinder inertia
  std::vector<Real> mass(b.state.particles.size(), 0.0);
  for (const auto& seg : b.state.segments) {
    const Real m = material.density * M_PI * seg.radius * seg.radius * seg.rest_length;
    mass[seg.particle_a] += 0.5 * m;
    mass[seg.particle_b] += 0.5 * m;
    auto& oe = b.state.orientations[seg.orientation];
    const Real bend_inertia =
        m * (3.0 * seg.radius * seg.radius + seg.rest_length * seg.rest_length) / 12.0;
    const Real spin_inertia = 0.5 * m * seg.radius * seg.radius;
    oe.inverse_inertia = Vec3(1.0 / bend_inertia, 1.0 / bend_inertia, 1.0 / spin_inertia);
  }
  for (const auto& organ : b.state.attachments) {
    if (organ.kind == OrganKind::Fruit && organ.particle >= 0)
      mass[organ.particle] += organ.fruit_mass;
  }
  for (size_t i = 0; i < b.state.particles.size(); ++i) {
    b.state.particles[i].inverse_mass = mass[i] > 0.0 ? 1.0 / mass[i] : 0.0;
  }
  for (int pin : pins) {
    if (pin < 0 || pin >= static_cast<int>(graph.nodes.size()))
      throw std::invalid_argument("build_sim_state: pinned node " + std::to_string(pin) +
                                  " does not exist");
    b.state.particles[pin].inverse_mass = 0.0;
  }
  if (pins.count(graph.root) && b.first_outgoing[graph.root] >= 0) {
    auto& root_oe =
        b.state.orientations[b.state.segments[b.first_outgoing[graph.root]].orientation];
    root_oe.inverse_inertia = Vec3::Zero();
  }
  return b.state;
}

CompiledPlant compile_plant(const CurveSet& cs, const CompilerParams& params) {
  CompiledPlant out;
  SampledCurves sampled = sample_curves(cs, params.step);
  out.warnings = sampled.warnings;
  out.dense_node_count = static_cast<int>(sampled.samples.size());
  const DenseTree tree = connect_branches(sampled, params.sigma_connect);
  out.graph = simplify(tree, params.sigma_distance);
  return out;
}

}  // namespace plantsim
