#include "plantsim/state.hpp"

#include <stdexcept>
#include <string>

namespace plantsim {

int SimState::live_segment_count() const {
  int n = 0;
  for (const auto& s : segments)
    if (s.alive) ++n;
  return n;
}

int SimState::live_pair_count() const {
  int n = 0;
  for (const auto& p : bend_pairs)
    if (p.alive) ++n;
  return n;
}

Real kinetic_energy(const SimState& state) {
  Real ke = 0.0;
  for (const auto& p : state.particles) {
    if (p.inverse_mass > 0.0) ke += 0.5 * p.velocity.squaredNorm() / p.inverse_mass;
  }
  for (const auto& o : state.orientations) {
    for (int k = 0; k < 3; ++k) {
      if (o.inverse_inertia[k] > 0.0)
        ke += 0.5 * o.angular_velocity[k] * o.angular_velocity[k] / o.inverse_inertia[k];
    }
  }
  return ke;
}

Vec3 linear_momentum(const SimState& state) {
  Vec3 p = Vec3::Zero();
  for (const auto& part : state.particles) {
    if (part.inverse_mass > 0.0) p += part.velocity / part.inverse_mass;
  }
  return p;
}

void validate_state(const SimState& state) {
  const int np = static_cast<int>(state.particles.size());
  const int no = static_cast<int>(state.orientations.size());
  const int ns = static_cast<int>(state.segments.size());

  for (int i = 0; i < ns; ++i) {
    const auto& s = state.segments[i];
    if (!s.alive) continue;
    if (s.particle_a < 0 || s.particle_a >= np || s.particle_b < 0 || s.particle_b >= np)
      throw std::logic_error("segment " + std::to_string(i) + " references missing particle");
    if (s.particle_a == s.particle_b)
      throw std::logic_error("segment " + std::to_string(i) + " is degenerate");
    if (s.orientation < 0 || s.orientation >= no)
      throw std::logic_error("segment " + std::to_string(i) + " references missing orientation");
    if (!(s.rest_length > 0.0))
      throw std::logic_error("segment " + std::to_string(i) + " has non-positive rest length");
  }
  for (size_t i = 0; i < state.bend_pairs.size(); ++i) {
    const auto& bp = state.bend_pairs[i];
    if (!bp.alive) continue;
    if (bp.segment_a < 0 || bp.segment_a >= ns || bp.segment_b < 0 || bp.segment_b >= ns)
      throw std::logic_error("bend pair " + std::to_string(i) + " references missing segment");
    const auto& sa = state.segments[bp.segment_a];
    const auto& sb = state.segments[bp.segment_b];
    if (!sa.alive || !sb.alive)
      throw std::logic_error("bend pair " + std::to_string(i) + " references dead segment");
    const bool share = sa.particle_a == sb.particle_a || sa.particle_a == sb.particle_b ||
                       sa.particle_b == sb.particle_a || sa.particle_b == sb.particle_b;
    if (!share)
      throw std::logic_error("bend pair " + std::to_string(i) + " segments share no particle");
  }
  for (size_t i = 0; i < state.particles.size(); ++i) {
    if (state.particles[i].inverse_mass < 0.0)
      throw std::logic_error("particle " + std::to_string(i) + " has negative inverse mass");
  }
}

}  // namespace plantsim
