#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "plantsim/state.hpp"

namespace plantsim {

enum class ContactKind { CapsuleCapsule, CapsuleSphere, SphereSphere, PlantObstacle };

const char* to_string(ContactKind kind);

/// One positional contact. The normal points from the obstacle (or the other
/// body) toward the body that gets pushed; depth is the overlap along it.
struct Contact {
  ContactKind kind{ContactKind::SphereSphere};
  Vec3 point{Vec3::Zero()};
  Vec3 normal{Vec3::UnitZ()};
  Real depth{0.0};
  int body_a{-1};  // primitive index (pushed body)
  int body_b{-1};  // primitive index, or obstacle index for PlantObstacle
  Real bary_a{0.0};
  Real bary_b{0.0};
};

/// Collision proxy of one plant element: a capsule around a live segment or a
/// sphere around a fruit particle.
struct CollisionPrimitive {
  bool is_capsule{false};
  Vec3 a{Vec3::Zero()};
  Vec3 b{Vec3::Zero()};
  Real radius{0.0};
  int particle_a{-1};
  int particle_b{-1};  // -1 for spheres
  int segment{-1};     // source segment, -1 for spheres
};

struct ClosestPair {
  Vec3 point_a{Vec3::Zero()};
  Vec3 point_b{Vec3::Zero()};
  Real distance{0.0};
  Real t_a{0.0};  // parameter along a's core
  Real t_b{0.0};
};

/// Squared distance between segments [a1,b1] and [a2,b2]; also reports the
/// closest points and their parameters. Ericson's clamped line-line scheme.
Real closest_point_segment_segment(const Vec3& a1, const Vec3& b1, const Vec3& a2,
                                   const Vec3& b2, Real& s, Real& t, Vec3& c1, Vec3& c2);

/// Closest points between the cores of two primitives. Penetration holds when
/// distance < r_a + r_b. Exactly coincident cores fall back to a fixed axis.
ClosestPair closest_point_pair(const CollisionPrimitive& a, const CollisionPrimitive& b);

// -------------------------------------------------------------------------
// Rigid obstacle: analytic primitive union and/or sampled grid, posed along a
// time-parameterized trajectory. One-way: it pushes the plant, never reacts.

struct SdfPrimitive {
  enum class Type { Sphere, Capsule, Box };
  Type type{Type::Sphere};
  Vec3 a{Vec3::Zero()};             // sphere/box center, capsule end
  Vec3 b{Vec3::Zero()};             // capsule other end
  Vec3 half_extents{Vec3::Zero()};  // box only
  Real radius{0.0};                 // sphere/capsule only
};

struct GridSdf {
  Vec3 origin{Vec3::Zero()};
  Real spacing{0.0};
  int nx{0}, ny{0}, nz{0};
  std::vector<float> samples;  // row-major, x fastest

  bool inside_domain(const Vec3& p) const;
  Real interpolate(const Vec3& p) const;  // clamped trilinear
  Vec3 max_corner() const;
};

struct PoseSample {
  Real t{0.0};
  Vec3 position{Vec3::Zero()};
  Quat rotation{Quat::Identity()};
};

struct SdfHit {
  Real distance{0.0};
  Vec3 normal{Vec3::UnitZ()};
};

struct RigidObstacle {
  std::string name;
  std::vector<SdfPrimitive> primitives;
  std::optional<GridSdf> grid;
  std::vector<PoseSample> trajectory;  // strictly increasing times
  mutable bool span_warning_emitted{false};

  /// Pose at time t: linear position, slerp rotation, clamped outside the
  /// trajectory span (with a one-shot warning).
  PoseSample pose_at(Real t) const;

  /// Signed distance and outward normal in the obstacle's local frame.
  SdfHit query_local(const Vec3& local_point) const;
};

Real sdf_primitive_distance(const SdfPrimitive& prim, const Vec3& p);
Vec3 sdf_primitive_gradient(const SdfPrimitive& prim, const Vec3& p);

/// Signed distance and world normal to the obstacle posed at time t.
SdfHit sdf_query(const RigidObstacle& obstacle, const Vec3& world_point, Real t);

/// Samples an analytic union into a grid (row-major, x fastest).
GridSdf bake_grid_sdf(std::span<const SdfPrimitive> primitives, const Vec3& origin,
                      Real spacing, int nx, int ny, int nz);

// -------------------------------------------------------------------------

struct CollisionOptions {
  bool self_collision{true};
  Real contact_slack{1e-4};       // extra push-out for obstacle contacts, m
  Real axis_sample_factor{0.5};   // capsule axis sampling: spacing = factor * radius
};

/// Live collision primitives of a state: one capsule per live segment plus
/// one sphere per fruit attachment.
std::vector<CollisionPrimitive> collect_primitives(const SimState& state);

/// Uniform spatial hash broad phase; cell size = 2 x max primitive radius.
/// Returns a superset of all overlapping pairs, sorted, without duplicates.
std::vector<std::pair<int, int>> broad_phase(std::span<const CollisionPrimitive> prims);

/// Candidate sets reused across the iterations of one substep.
struct ContactCache {
  std::vector<CollisionPrimitive> prims;
  std::vector<std::pair<int, int>> self_candidates;  // filtered by adjacency
  std::vector<int> obstacle_candidates;              // primitive indices near any obstacle
};

ContactCache build_contact_cache(const SimState& state, std::span<const RigidObstacle> obstacles,
                                 Real t, const CollisionOptions& opts);

/// Narrow phase + positional response over cached candidates. Self-collision
/// pairs split the correction by inverse mass; obstacle contacts push only the
/// plant, by the full depth plus slack. Returns the contacts resolved.
std::vector<Contact> resolve_contacts_cached(SimState& state, ContactCache& cache,
                                             std::span<const RigidObstacle> obstacles, Real t,
                                             const CollisionOptions& opts);

/// One-call form: builds the candidate sets and resolves once.
std::vector<Contact> resolve_contacts(SimState& state, std::span<const RigidObstacle> obstacles,
                                      Real t, const CollisionOptions& opts = {});

}  // namespace plantsim
