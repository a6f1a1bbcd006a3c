#include "plantsim/fracture.hpp"

#include <algorithm>

#include "plantsim/rod.hpp"

namespace plantsim {

const char* to_string(FractureTrigger trigger) {
  return trigger == FractureTrigger::Stretch ? "stretch" : "bend";
}

Real FractureThresholds::stretch_limit_for(const RodSegment& segment, int index) const {
  const auto it = overrides.find(index);
  if (it != overrides.end()) return it->second.first;
  return segment.pedicel ? stretch_limit : stretch_limit * structural_scale;
}

Real FractureThresholds::bend_limit_for(const RodSegment& segment, int index) const {
  const auto it = overrides.find(index);
  if (it != overrides.end()) return it->second.second;
  return segment.pedicel ? bend_limit : bend_limit * structural_scale;
}

static void kill_segment(SimState& state, int segment) {
  state.segments[segment].alive = false;
  for (auto& pair : state.bend_pairs) {
    if (pair.alive && (pair.segment_a == segment || pair.segment_b == segment))
      pair.alive = false;
  }
}

std::vector<FractureEvent> check_fracture(SimState& state, const FractureThresholds& thresholds,
                                          Real t) {
  std::vector<FractureEvent> events;

  for (size_t i = 0; i < state.segments.size(); ++i) {
    auto& seg = state.segments[i];
    if (!seg.alive) continue;
    const Vec3 c = stretch_shear_constraint(state.particles[seg.particle_a].position,
                                            state.particles[seg.particle_b].position,
                                            state.orientations[seg.orientation].rotation,
                                            seg.rest_length);
    const Real magnitude = c.norm();
    if (magnitude > thresholds.stretch_limit_for(seg, static_cast<int>(i))) {
      events.push_back({t, static_cast<int>(i), FractureTrigger::Stretch, magnitude});
      kill_segment(state, static_cast<int>(i));
    }
  }

  for (auto& pair : state.bend_pairs) {
    if (!pair.alive) continue;
    const auto& child = state.segments[pair.segment_b];
    const Darboux c = bend_twist_constraint(pair,
                                            state.orientations[state.segments[pair.segment_a].orientation].rotation,
                                            state.orientations[child.orientation].rotation);
    const Real magnitude = thresholds.full_bend_magnitude ? c.norm() : c.vector.norm();
    if (magnitude > thresholds.bend_limit_for(child, pair.segment_b)) {
      events.push_back({t, pair.segment_b, FractureTrigger::Bend, magnitude});
      kill_segment(state, pair.segment_b);
    }
  }

  std::sort(events.begin(), events.end(),
            [](const FractureEvent& a, const FractureEvent& b) { return a.segment < b.segment; });
  return events;
}

std::optional<Real> detach_time(const std::vector<FractureEvent>& events, Real trajectory_start) {
  if (events.empty()) return std::nullopt;
  Real first = events.front().time;
  for (const auto& e : events) first = std::min(first, e.time);
  return first - trajectory_start;
}

}  // namespace plantsim
