#include "plantsim/solver.hpp"

#include <algorithm>
#include <cmath>

#include "plantsim/rod.hpp"

namespace plantsim {

void predict(SimState& state, const Vec3& gravity, Real dt) {
  for (auto& p : state.particles) {
    if (p.inverse_mass <= 0.0) continue;
    p.velocity += dt * gravity;
    p.position += dt * p.velocity;
  }
  for (auto& o : state.orientations) {
    if (o.inverse_inertia.isZero()) continue;
    const Quat spin(0.0, o.angular_velocity.x(), o.angular_velocity.y(), o.angular_velocity.z());
    const Quat dq = o.rotation * spin;
    o.rotation.coeffs() += 0.5 * dt * dq.coeffs();
    o.rotation.normalize();
  }
}

Vec3 stretch_compliance(const RodSegment& segment) {
  const StiffnessTriples k = material_to_stiffness(segment.material, segment.radius);
  return (k.stretch_shear * segment.rest_length).cwiseInverse();
}

Vec4 bend_compliance(const SimState& state, const BendTwistPair& pair) {
  const auto& sa = state.segments[pair.segment_a];
  const auto& sb = state.segments[pair.segment_b];
  const Vec3 ka = material_to_stiffness(sa.material, sa.radius).bend_twist;
  const Vec3 kb = material_to_stiffness(sb.material, sb.radius).bend_twist;
  const Vec3 k3 = 0.5 * (ka + kb);
  // The quaternion scalar has no classical stiffness of its own; give it the
  // mean of the vector entries.
  const Real kw = k3.sum() / 3.0;
  return (Vec4(kw, k3.x(), k3.y(), k3.z()) * pair.mean_length).cwiseInverse();
}

namespace {

inline void add_body_rotation(Quat& q, const Vec3& dtheta) {
  const Quat spin(0.0, dtheta.x(), dtheta.y(), dtheta.z());
  const Quat dq = q * spin;
  q.coeffs() += 0.5 * dq.coeffs();
  q.normalize();
}

inline void project_stretch_impl(SimState& state, const RodSegment& seg, const Vec3& alpha_tilde,
                                 Vec3& lambda) {
  auto& pa = state.particles[seg.particle_a];
  auto& pb = state.particles[seg.particle_b];
  auto& oe = state.orientations[seg.orientation];
  const Real l0 = seg.rest_length;
  const Quat q = oe.rotation;

  const Vec3 u = (pb.position - pa.position) / l0;
  const Vec3 ubar = q.conjugate() * u;  // segment direction in the material frame
  const Vec3 c(ubar.x(), ubar.y(), ubar.z() - 1.0);

  const Real w_pos = (pa.inverse_mass + pb.inverse_mass) / (l0 * l0);
  const Vec3& w_rot = oe.inverse_inertia;
  const bool rotate = !w_rot.isZero();

  // body-frame angular gradients J_k = e_k x ubar
  const Vec3 j[3] = {Vec3(0.0, -ubar.z(), ubar.y()), Vec3(ubar.z(), 0.0, -ubar.x()),
                     Vec3(-ubar.y(), ubar.x(), 0.0)};

  Vec3 dlambda = Vec3::Zero();
  Vec3 dtheta = Vec3::Zero();
  for (int k = 0; k < 3; ++k) {
    const Real ang = w_rot.dot(j[k].cwiseProduct(j[k]));
    const Real denom = w_pos + ang + alpha_tilde[k];
    if (denom <= 0.0) continue;
    const Real dl = (-c[k] - alpha_tilde[k] * lambda[k]) / denom;
    lambda[k] += dl;
    dlambda[k] = dl;
    dtheta += dl * w_rot.cwiseProduct(j[k]);
  }

  const Vec3 impulse = q * dlambda;  // sum_k dlambda_k d_k
  if (pa.inverse_mass > 0.0) pa.position -= (pa.inverse_mass / l0) * impulse;
  if (pb.inverse_mass > 0.0) pb.position += (pb.inverse_mass / l0) * impulse;
  if (rotate) add_body_rotation(oe.rotation, dtheta);
}

inline void project_bend_impl(SimState& state, const BendTwistPair& pair, const Vec4& alpha_tilde,
                              Vec4& lambda) {
  auto& o1 = state.orientations[state.segments[pair.segment_a].orientation];
  auto& o2 = state.orientations[state.segments[pair.segment_b].orientation];
  const Vec3& w1 = o1.inverse_inertia;
  const Vec3& w2 = o2.inverse_inertia;
  const bool rot1 = !w1.isZero();
  const bool rot2 = !w2.isZero();
  if (!rot1 && !rot2) return;

  const Quat rel = o1.rotation.conjugate() * o2.rotation;
  const Real scale = 2.0 / pair.mean_length;
  const Real ow = scale * rel.w();
  const Vec3 ov = scale * rel.vec();
  const Darboux omega{ow, ov};
  const Real sign = darboux_sign(omega, pair.rest_darboux) >= 0 ? 1.0 : -1.0;
  const Vec4 c(ow - sign * pair.rest_darboux.scalar, ov.x() - sign * pair.rest_darboux.vector.x(),
               ov.y() - sign * pair.rest_darboux.vector.y(),
               ov.z() - sign * pair.rest_darboux.vector.z());

  // body-frame angular gradients of each component of (2/l) conj(q1) q2
  const Vec3 j1[4] = {0.5 * ov, Vec3(-0.5 * ow, -0.5 * ov.z(), 0.5 * ov.y()),
                      Vec3(0.5 * ov.z(), -0.5 * ow, -0.5 * ov.x()),
                      Vec3(-0.5 * ov.y(), 0.5 * ov.x(), -0.5 * ow)};
  const Vec3 j2[4] = {-0.5 * ov, Vec3(0.5 * ow, -0.5 * ov.z(), 0.5 * ov.y()),
                      Vec3(0.5 * ov.z(), 0.5 * ow, -0.5 * ov.x()),
                      Vec3(-0.5 * ov.y(), 0.5 * ov.x(), 0.5 * ow)};

  Vec3 dtheta1 = Vec3::Zero();
  Vec3 dtheta2 = Vec3::Zero();
  for (int k = 0; k < 4; ++k) {
    const Real ang1 = rot1 ? w1.dot(j1[k].cwiseProduct(j1[k])) : 0.0;
    const Real ang2 = rot2 ? w2.dot(j2[k].cwiseProduct(j2[k])) : 0.0;
    const Real denom = ang1 + ang2 + alpha_tilde[k];
    if (denom <= 0.0) continue;
    const Real dl = (-c[k] - alpha_tilde[k] * lambda[k]) / denom;
    lambda[k] += dl;
    if (rot1) dtheta1 += dl * w1.cwiseProduct(j1[k]);
    if (rot2) dtheta2 += dl * w2.cwiseProduct(j2[k]);
  }
  if (rot1) add_body_rotation(o1.rotation, dtheta1);
  if (rot2) add_body_rotation(o2.rotation, dtheta2);
}

}  // namespace

void project_stretch_shear(SimState& state, int segment_index, const Vec3& compliance, Real dt,
                           Vec3& lambda) {
  const Vec3 alpha_tilde = compliance / (dt * dt);
  project_stretch_impl(state, state.segments[segment_index], alpha_tilde, lambda);
}

void project_bend_twist(SimState& state, int pair_index, const Vec4& compliance, Real dt,
                        Vec4& lambda) {
  const Vec4 alpha_tilde = compliance / (dt * dt);
  project_bend_impl(state, state.bend_pairs[pair_index], alpha_tilde, lambda);
}

void step(SimState& state, const SolverParams& params, std::span<const RigidObstacle> obstacles,
          const FractureThresholds* thresholds, std::vector<FractureEvent>* events) {
  const Real dt_sub = params.dt / params.substeps;
  const Real t0 = state.time;

  std::vector<int> live_segments;
  std::vector<int> live_pairs;
  live_segments.reserve(state.segments.size());
  live_pairs.reserve(state.bend_pairs.size());
  for (size_t i = 0; i < state.segments.size(); ++i)
    if (state.segments[i].alive) live_segments.push_back(static_cast<int>(i));
  for (size_t i = 0; i < state.bend_pairs.size(); ++i)
    if (state.bend_pairs[i].alive) live_pairs.push_back(static_cast<int>(i));

  std::vector<Vec3> alpha_s(live_segments.size());
  std::vector<Vec4> alpha_b(live_pairs.size());
  const Real inv_dt2 = 1.0 / (dt_sub * dt_sub);
  for (size_t i = 0; i < live_segments.size(); ++i)
    alpha_s[i] = stretch_compliance(state.segments[live_segments[i]]) * inv_dt2;
  for (size_t i = 0; i < live_pairs.size(); ++i)
    alpha_b[i] = bend_compliance(state, state.bend_pairs[live_pairs[i]]) * inv_dt2;

  std::vector<Vec3> lambda_s(live_segments.size());
  std::vector<Vec4> lambda_b(live_pairs.size());
  std::vector<Vec3> prev_pos(state.particles.size());
  std::vector<Quat> prev_rot(state.orientations.size());

  for (int sub = 0; sub < params.substeps; ++sub) {
    for (size_t i = 0; i < state.particles.size(); ++i) prev_pos[i] = state.particles[i].position;
    for (size_t i = 0; i < state.orientations.size(); ++i)
      prev_rot[i] = state.orientations[i].rotation;

    predict(state, params.gravity, dt_sub);

    const Real t_sub = t0 + (sub + 1) * dt_sub;
    ContactCache cache = build_contact_cache(state, obstacles, t_sub, params.collision);

    std::fill(lambda_s.begin(), lambda_s.end(), Vec3::Zero());
    std::fill(lambda_b.begin(), lambda_b.end(), Vec4::Zero());

    for (int iter = 0; iter < params.iterations; ++iter) {
      for (size_t i = 0; i < live_segments.size(); ++i)
        project_stretch_impl(state, state.segments[live_segments[i]], alpha_s[i], lambda_s[i]);
      for (size_t i = 0; i < live_pairs.size(); ++i)
        project_bend_impl(state, state.bend_pairs[live_pairs[i]], alpha_b[i], lambda_b[i]);
      resolve_contacts_cached(state, cache, obstacles, t_sub, params.collision);
    }

    const Real damp = std::max(0.0, 1.0 - params.velocity_damping * dt_sub);
    for (size_t i = 0; i < state.particles.size(); ++i) {
      auto& p = state.particles[i];
      if (p.inverse_mass <= 0.0) continue;
      p.velocity = damp * (p.position - prev_pos[i]) / dt_sub;
    }
    for (size_t i = 0; i < state.orientations.size(); ++i) {
      auto& o = state.orientations[i];
      if (o.inverse_inertia.isZero()) continue;
      const Quat rel = prev_rot[i].conjugate() * o.rotation;
      o.angular_velocity = damp * 2.0 * rel.vec() / dt_sub;
    }
  }

  state.time = t0 + params.dt;

  bool finite = true;
  for (const auto& p : state.particles)
    finite = finite && p.position.allFinite() && p.velocity.allFinite();
  for (const auto& o : state.orientations) finite = finite && o.rotation.coeffs().allFinite();
  if (!finite) {
    Real worst = 0.0;
    int worst_segment = -1;
    for (int si : live_segments) {
      const auto& seg = state.segments[si];
      const Vec3 c = stretch_shear_constraint(state.particles[seg.particle_a].position,
                                              state.particles[seg.particle_b].position,
                                              state.orientations[seg.orientation].rotation,
                                              seg.rest_length);
      if (c.allFinite() && c.norm() > worst) {
        worst = c.norm();
        worst_segment = si;
      }
    }
    throw SimAbort("non-finite state at t=" + std::to_string(state.time) +
                   "; worst finite stretch constraint |C_s|=" + std::to_string(worst) +
                   " at segment " + std::to_string(worst_segment));
  }

  if (thresholds != nullptr) {
    auto new_events = check_fracture(state, *thresholds, state.time);
    if (events != nullptr)
      events->insert(events->end(), new_events.begin(), new_events.end());
  }
}

}  // namespace plantsim
