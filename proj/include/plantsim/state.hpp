#pragma once

#include <vector>

#include "plantsim/types.hpp"

namespace plantsim {

/// Complete dynamic state of one plant. Owned by a single stepping context at
/// a time; freely movable between threads.
struct SimState {
  std::vector<Particle> particles;
  std::vector<OrientationElement> orientations;
  std::vector<RodSegment> segments;
  std::vector<BendTwistPair> bend_pairs;
  std::vector<OrganAttachment> attachments;
  Real time{0.0};

  int live_segment_count() const;
  int live_pair_count() const;
};

Real kinetic_energy(const SimState& state);
Vec3 linear_momentum(const SimState& state);

/// Checks the structural invariants (index ranges, live references, shared
/// particle of bend pairs). Throws std::logic_error on violation.
void validate_state(const SimState& state);

}  // namespace plantsim
