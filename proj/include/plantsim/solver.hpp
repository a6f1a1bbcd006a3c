#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "plantsim/collision.hpp"
#include "plantsim/fracture.hpp"
#include "plantsim/state.hpp"

namespace plantsim {

struct SolverParams {
  Real dt{1.0 / 120.0};
  int substeps{8};
  int iterations{20};
  Vec3 gravity{0.0, 0.0, -9.81};
  Real velocity_damping{0.1};  // 1/s
  CollisionOptions collision{};
};

/// Thrown when a step produces non-finite state. The message carries the
/// substep and the worst constraint seen.
struct SimAbort : std::runtime_error {
  explicit SimAbort(const std::string& msg) : std::runtime_error(msg) {}
};

/// Semi-implicit prediction: free particles get v += dt g, p += dt v; free
/// orientations integrate their body-frame angular velocity. Pinned elements
/// stay put.
void predict(SimState& state, const Vec3& gravity, Real dt);

/// Physical compliances (inverse of the discrete stiffness, which is the
/// material triple times the element length).
Vec3 stretch_compliance(const RodSegment& segment);
Vec4 bend_compliance(const SimState& state, const BendTwistPair& pair);

/// One compliant projection of the stretch/shear constraint of a segment,
/// expressed per material-frame component. lambda accumulates within a
/// substep and must be zeroed at its start.
void project_stretch_shear(SimState& state, int segment_index, const Vec3& compliance, Real dt,
                           Vec3& lambda);

/// One compliant projection of the 4-component bend/twist constraint of a
/// pair. Touches only the two orientations.
void project_bend_twist(SimState& state, int pair_index, const Vec4& compliance, Real dt,
                        Vec4& lambda);

/// Advances the state by exactly params.dt. Per substep: predict, then
/// `iterations` Gauss-Seidel passes (stretch/shear in segment order, then
/// bend/twist in pair order, then contact resolution), then the velocity
/// update with damping. When thresholds are given, runs the fracture check
/// once at the end of the step and appends any events.
void step(SimState& state, const SolverParams& params, std::span<const RigidObstacle> obstacles,
          const FractureThresholds* thresholds = nullptr,
          std::vector<FractureEvent>* events = nullptr);

}  // namespace plantsim
