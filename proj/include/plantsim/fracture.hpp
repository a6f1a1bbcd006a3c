#pragma once

#include <map>
#include <optional>
#include <vector>

#include "plantsim/state.hpp"

namespace plantsim {

enum class FractureTrigger { Stretch, Bend };

const char* to_string(FractureTrigger trigger);

struct FractureEvent {
  Real time{0.0};
  int segment{-1};
  FractureTrigger trigger{FractureTrigger::Stretch};
  Real magnitude{0.0};  // constraint magnitude at the moment of failure
};

/// Strain limits. The base values apply to pedicel segments; structural
/// segments use base * structural_scale so only the intended organs detach
/// unless a per-segment override says otherwise.
struct FractureThresholds {
  Real stretch_limit{0.1};             // on |C_s|, unitless
  Real bend_limit{0.31};               // on |C_b|, 1/m
  Real structural_scale{10.0};
  bool full_bend_magnitude{true};      // false: vector part only
  std::map<int, std::pair<Real, Real>> overrides;  // segment -> (stretch, bend)

  Real stretch_limit_for(const RodSegment& segment, int index) const;
  Real bend_limit_for(const RodSegment& segment, int index) const;
};

/// Scans every live segment and bend pair against the thresholds, kills the
/// violators (for a bend pair, its child segment) together with every bend
/// pair referencing them, and reports what broke. Detached subtrees stay in
/// the state as free dynamic bodies.
std::vector<FractureEvent> check_fracture(SimState& state, const FractureThresholds& thresholds,
                                          Real t);

/// Time from trajectory start to the first fracture; empty when nothing broke.
std::optional<Real> detach_time(const std::vector<FractureEvent>& events, Real trajectory_start);

}  // namespace plantsim
