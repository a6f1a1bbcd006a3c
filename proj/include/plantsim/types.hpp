#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <string>
#include <vector>

namespace plantsim {

using Real = double;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Quat = Eigen::Quaterniond;

/// Augmented Darboux vector: the full quaternion product is retained, so the
/// scalar part survives alongside the bend/twist vector. Units 1/m.
struct Darboux {
  Real scalar{0.0};
  Vec3 vector{Vec3::Zero()};

  Vec4 as_vec4() const { return Vec4(scalar, vector.x(), vector.y(), vector.z()); }
  Real dot(const Darboux& o) const { return scalar * o.scalar + vector.dot(o.vector); }
  Real squared_norm() const { return scalar * scalar + vector.squaredNorm(); }
  Real norm() const { return std::sqrt(squared_norm()); }

  Darboux operator+(const Darboux& o) const { return {scalar + o.scalar, vector + o.vector}; }
  Darboux operator-(const Darboux& o) const { return {scalar - o.scalar, vector - o.vector}; }
  Darboux operator*(Real s) const { return {scalar * s, vector * s}; }
  Darboux operator-() const { return {-scalar, -vector}; }
};

inline Darboux operator*(Real s, const Darboux& d) { return d * s; }

struct Material {
  Real young_modulus{2e7};  // Pa
  Real poisson_ratio{0.3};
  Real density{300.0};  // kg/m^3
};

/// Point mass on a rod centerline.
struct Particle {
  Vec3 position{Vec3::Zero()};
  Vec3 velocity{Vec3::Zero()};
  Real inverse_mass{0.0};  // 1/kg, 0 = pinned
  Real radius{0.003};      // collision radius, m
};

/// Unit-quaternion material frame attached to one rod segment. Angular
/// velocity and the diagonal inverse inertia live in the body frame.
struct OrientationElement {
  Quat rotation{Quat::Identity()};
  Vec3 angular_velocity{Vec3::Zero()};
  Vec3 inverse_inertia{Vec3::Zero()};  // diagonal, 1/(kg m^2), 0 = pinned
};

struct RodSegment {
  int particle_a{-1};
  int particle_b{-1};
  int orientation{-1};
  Real rest_length{0.0};
  Real radius{0.003};
  Material material{};
  bool alive{true};
  bool pedicel{false};  // carries the organ fracture thresholds
};

/// Couples two adjacent segments (parent first, child second along the
/// root-to-tip direction) through a rest Darboux vector.
struct BendTwistPair {
  int segment_a{-1};  // parent
  int segment_b{-1};  // child
  Real mean_length{0.0};
  Darboux rest_darboux{};
  bool alive{true};
};

enum class OrganKind { Fruit, Leaf };

struct OrganAttachment {
  int node{-1};
  OrganKind kind{OrganKind::Fruit};
  // fruit
  Real fruit_radius{0.015};
  Real fruit_mass{0.02};
  Real pedicel_length{0.03};
  Real pedicel_radius{0.003};
  Vec3 pedicel_direction{0.0, 0.0, -1.0};  // from the node toward the fruit
  // leaf
  std::string leaf_template;
  Real scale{1.0};
  // filled in when the attachment is instantiated in a SimState
  int particle{-1};
  int pedicel_segment{-1};
  int first_segment{-1};
  int segment_count{0};
};

}  // namespace plantsim
