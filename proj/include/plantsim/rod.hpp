#pragma once

#include <cmath>
#include <stdexcept>

#include "plantsim/types.hpp"

namespace plantsim {

/// World-space director d_k of the frame encoded by q (k in {1,2,3});
/// d3 is the rest tangent of the rod.
inline Vec3 director(const Quat& q, int axis_index) {
  switch (axis_index) {
    case 1: return q * Vec3::UnitX();
    case 2: return q * Vec3::UnitY();
    case 3: return q * Vec3::UnitZ();
    default: throw std::invalid_argument("director: axis_index must be 1, 2 or 3");
  }
}

/// Discrete Darboux vector between two neighbor frames over length l:
/// (2/l) * conj(q_i) * q_next, all four components retained.
inline Darboux compute_darboux(const Quat& q_i, const Quat& q_next, Real l) {
  if (!(l > 0.0)) throw std::invalid_argument("compute_darboux: length must be positive");
  const Quat rel = q_i.conjugate() * q_next;
  const Real s = 2.0 / l;
  return Darboux{s * rel.w(), s * rel.vec()};
}

/// Stretch/shear constraint: (p2 - p1)/l0 - d3. Zero when the segment vector
/// matches l0 * d3 exactly.
inline Vec3 stretch_shear_constraint(const Vec3& p1, const Vec3& p2, const Quat& q, Real l0) {
  if (!(l0 > 0.0)) throw std::invalid_argument("stretch_shear_constraint: rest length must be positive");
  return (p2 - p1) / l0 - director(q, 3);
}

/// Sign that moves the constraint to the nearest rest pose. Omega and -Omega
/// encode the same rotation; the quadrance comparison over all four
/// components picks the closer representative. Ties resolve to +1.
inline int darboux_sign(const Darboux& current, const Darboux& rest) {
  // |a-b|^2 < |a+b|^2  <=>  dot(a,b) > 0
  return current.dot(rest) >= 0.0 ? 1 : -1;
}

/// Bend/twist constraint: Omega - s * Omega0 as a 4-component value.
inline Darboux bend_twist_constraint(const BendTwistPair& pair, const Quat& q1, const Quat& q2) {
  const Darboux omega = compute_darboux(q1, q2, pair.mean_length);
  const int s = darboux_sign(omega, pair.rest_darboux);
  return omega - static_cast<Real>(s) * pair.rest_darboux;
}

struct StiffnessTriples {
  Vec3 stretch_shear;  // (GA, GA, EA), N
  Vec3 bend_twist;     // (EI, EI, GJ), N m^2
};

/// Per-constraint stiffness triples for a circular cross section of the given
/// radius.
inline StiffnessTriples material_to_stiffness(const Material& m, Real radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("material_to_stiffness: radius must be positive");
  const Real area = M_PI * radius * radius;
  const Real bending_moment = M_PI * std::pow(radius, 4) / 4.0;  // I
  const Real polar_moment = 2.0 * bending_moment;                // J
  const Real shear_modulus = m.young_modulus / (2.0 * (1.0 + m.poisson_ratio));
  return StiffnessTriples{
      Vec3(shear_modulus * area, shear_modulus * area, m.young_modulus * area),
      Vec3(m.young_modulus * bending_moment, m.young_modulus * bending_moment,
           shear_modulus * polar_moment)};
}

}  // namespace plantsim
