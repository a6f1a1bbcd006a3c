#include <doctest.h>

#include <random>
#include <set>

#include "plantsim/collision.hpp"
#include "plantsim/plant.hpp"
#include "plantsim/solver.hpp"
#include "support.hpp"

using namespace plantsim;

namespace {

CollisionPrimitive sphere_prim(const Vec3& center, Real radius, int particle = -1) {
  CollisionPrimitive p;
  p.is_capsule = false;
  p.a = center;
  p.radius = radius;
  p.particle_a = particle;
  return p;
}

CollisionPrimitive capsule_prim(const Vec3& a, const Vec3& b, Real radius) {
  CollisionPrimitive p;
  p.is_capsule = true;
  p.a = a;
  p.b = b;
  p.radius = radius;
  return p;
}

// exact all-pairs contact set
std::set<std::pair<int, int>> exact_contacts(const std::vector<CollisionPrimitive>& prims) {
  std::set<std::pair<int, int>> out;
  for (size_t i = 0; i < prims.size(); ++i)
    for (size_t j = i + 1; j < prims.size(); ++j) {
      const ClosestPair cp = closest_point_pair(prims[i], prims[j]);
      if (cp.distance < prims[i].radius + prims[j].radius)
        out.insert({static_cast<int>(i), static_cast<int>(j)});
    }
  return out;
}

}  // namespace

TEST_CASE("sphere-sphere closest points and depth") {
  const auto a = sphere_prim(Vec3(0, 0, 0), 0.05);
  const auto b = sphere_prim(Vec3(0.08, 0, 0), 0.05);
  const ClosestPair cp = closest_point_pair(a, b);
  CHECK(cp.distance == doctest::Approx(0.08));
  const Real depth = a.radius + b.radius - cp.distance;
  CHECK(depth == doctest::Approx(0.02));
  const Vec3 normal = (cp.point_a - cp.point_b).normalized();
  CHECK(normal.isApprox(-Vec3::UnitX(), 1e-12));
}

TEST_CASE("distant parallel capsules do not touch") {
  const auto a = capsule_prim(Vec3(0, 0, 0), Vec3(0.3, 0, 0), 0.01);
  const auto b = capsule_prim(Vec3(0, 1, 0), Vec3(0.3, 1, 0), 0.01);
  const ClosestPair cp = closest_point_pair(a, b);
  CHECK(cp.distance == doctest::Approx(1.0));
  CHECK(cp.distance > a.radius + b.radius);
}

TEST_CASE("coincident capsule cores fall back to the fixed axis") {
  const auto a = capsule_prim(Vec3(-0.1, 0, 0), Vec3(0.1, 0, 0), 0.02);
  const auto b = capsule_prim(Vec3(0, -0.1, 0), Vec3(0, 0.1, 0), 0.02);
  const ClosestPair cp = closest_point_pair(a, b);
  CHECK(cp.distance == doctest::Approx(0.0));
  CHECK(cp.point_a.isApprox(cp.point_b, 1e-12));
  // response path: depth = sum of radii, normal = unit z
  SimState state;
  state.particles.resize(4);
  state.particles[0].position = a.a;
  state.particles[1].position = a.b;
  state.particles[2].position = b.a;
  state.particles[3].position = b.b;
  for (auto& p : state.particles) {
    p.inverse_mass = 1.0;
    p.radius = 0.02;
  }
  state.segments.resize(2);
  state.segments[0] = {0, 1, 0, 0.2, 0.02, Material{}, true, false};
  state.segments[1] = {2, 3, 1, 0.2, 0.02, Material{}, true, false};
  state.orientations.resize(2);
  const auto contacts = resolve_contacts(state, {}, 0.0);
  REQUIRE(contacts.size() == 1);
  CHECK(contacts[0].normal.isApprox(Vec3::UnitZ(), 1e-12));
  CHECK(contacts[0].depth == doctest::Approx(0.04));
}

TEST_CASE("closest segment pair parameters are correct") {
  Real s, t;
  Vec3 c1, c2;
  const Real d2 = closest_point_segment_segment(Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0.25, 0.5, 0),
                                                Vec3(0.25, 2.0, 0), s, t, c1, c2);
  CHECK(std::sqrt(d2) == doctest::Approx(0.5));
  CHECK(s == doctest::Approx(0.25));
  CHECK(t == doctest::Approx(0.0));
  CHECK(c1.isApprox(Vec3(0.25, 0, 0), 1e-12));
  CHECK(c2.isApprox(Vec3(0.25, 0.5, 0), 1e-12));
}

TEST_CASE("analytic sphere sdf") {
  RigidObstacle obstacle;
  SdfPrimitive sphere;
  sphere.type = SdfPrimitive::Type::Sphere;
  sphere.a = Vec3::Zero();
  sphere.radius = 1.0;
  obstacle.primitives.push_back(sphere);
  obstacle.trajectory.push_back({0.0, Vec3::Zero(), Quat::Identity()});

  const SdfHit far = sdf_query(obstacle, Vec3(2, 0, 0), 0.0);
  CHECK(far.distance == doctest::Approx(1.0));
  CHECK(far.normal.isApprox(Vec3::UnitX(), 1e-12));
  const SdfHit surface = sdf_query(obstacle, Vec3(0, 1, 0), 0.0);
  CHECK(surface.distance == doctest::Approx(0.0));
}

TEST_CASE("grid sdf tracks the analytic sphere") {
  SdfPrimitive sphere;
  sphere.type = SdfPrimitive::Type::Sphere;
  sphere.a = Vec3::Zero();
  sphere.radius = 1.0;
  // a block around the query point is enough; every sample holds the true
  // sphere distance
  const GridSdf grid =
      bake_grid_sdf(std::span(&sphere, 1), Vec3(1.5, -0.5, -0.5), 0.02, 51, 51, 51);

  RigidObstacle obstacle;
  obstacle.grid = grid;
  obstacle.trajectory.push_back({0.0, Vec3::Zero(), Quat::Identity()});
  const SdfHit hit = sdf_query(obstacle, Vec3(2, 0, 0), 0.0);
  CHECK(std::abs(hit.distance - 1.0) <= 0.02);
  const Real angle = std::acos(std::clamp(hit.normal.dot(Vec3::UnitX()), -1.0, 1.0));
  CHECK(angle < 2.0 * M_PI / 180.0);
}

TEST_CASE("grid queries outside the sampled block use the block box") {
  GridSdf grid;
  grid.origin = Vec3::Zero();
  grid.spacing = 0.1;
  grid.nx = grid.ny = grid.nz = 11;  // block [0,1]^3
  grid.samples.assign(11 * 11 * 11, 5.0f);
  RigidObstacle obstacle;
  obstacle.grid = grid;
  obstacle.trajectory.push_back({0.0, Vec3::Zero(), Quat::Identity()});
  const SdfHit hit = sdf_query(obstacle, Vec3(0.5, 0.5, 2.0), 0.0);
  CHECK(hit.distance == doctest::Approx(1.0));
  CHECK(hit.normal.isApprox(Vec3::UnitZ(), 1e-9));
}

TEST_CASE("box sdf inside and outside") {
  SdfPrimitive box;
  box.type = SdfPrimitive::Type::Box;
  box.a = Vec3::Zero();
  box.half_extents = Vec3(0.1, 0.1, 0.05);
  CHECK(sdf_primitive_distance(box, Vec3(0, 0, 0.04)) == doctest::Approx(-0.01));
  CHECK(sdf_primitive_gradient(box, Vec3(0, 0, 0.04)).isApprox(Vec3::UnitZ(), 1e-12));
  CHECK(sdf_primitive_distance(box, Vec3(0, 0, 0.1)) == doctest::Approx(0.05));
  CHECK(sdf_primitive_distance(box, Vec3(0.2, 0, 0)) == doctest::Approx(0.1));
}

TEST_CASE("pose interpolation is linear in position and slerped in rotation") {
  RigidObstacle obstacle;
  obstacle.name = "probe";
  SdfPrimitive sphere;
  sphere.type = SdfPrimitive::Type::Sphere;
  sphere.radius = 0.1;
  obstacle.primitives.push_back(sphere);
  const Quat rot(Eigen::AngleAxisd(M_PI / 2.0, Vec3::UnitZ()));
  obstacle.trajectory.push_back({1.0, Vec3(0, 0, 0), Quat::Identity()});
  obstacle.trajectory.push_back({3.0, Vec3(2, 0, 0), rot});

  const PoseSample mid = obstacle.pose_at(2.0);
  CHECK(mid.position.isApprox(Vec3(1, 0, 0), 1e-12));
  const Quat expected(Eigen::AngleAxisd(M_PI / 4.0, Vec3::UnitZ()));
  CHECK(std::abs(std::abs(mid.rotation.dot(expected)) - 1.0) < 1e-12);

  CHECK_FALSE(obstacle.span_warning_emitted);
  const PoseSample clamped = obstacle.pose_at(10.0);
  CHECK(clamped.position.isApprox(Vec3(2, 0, 0), 1e-12));
  CHECK(obstacle.span_warning_emitted);
}

TEST_CASE("a sphere inside a box face is pushed out along the normal") {
  RigidObstacle obstacle;
  SdfPrimitive box;
  box.type = SdfPrimitive::Type::Box;
  box.a = Vec3::Zero();
  box.half_extents = Vec3(0.1, 0.1, 0.05);
  obstacle.primitives.push_back(box);
  obstacle.trajectory.push_back({0.0, Vec3::Zero(), Quat::Identity()});

  SimState state;
  Particle p;
  p.position = Vec3(0, 0, 0.04);  // 0.01 inside the top face
  p.radius = 0.02;
  p.inverse_mass = 1.0;
  state.particles.push_back(p);
  OrganAttachment organ;
  organ.kind = OrganKind::Fruit;
  organ.particle = 0;
  state.attachments.push_back(organ);

  CollisionOptions opts;
  const auto contacts = resolve_contacts(state, std::span(&obstacle, 1), 0.0, opts);
  REQUIRE(contacts.size() == 1);
  CHECK(contacts[0].kind == ContactKind::PlantObstacle);
  CHECK(contacts[0].depth == doctest::Approx(0.03));
  CHECK(state.particles[0].position.z() ==
        doctest::Approx(0.04 + 0.03 + opts.contact_slack).epsilon(1e-12));
}

TEST_CASE("equal spheres split a penetration evenly") {
  SimState state;
  for (int i = 0; i < 2; ++i) {
    Particle p;
    p.position = Vec3(0.08 * i, 0, 0);
    p.radius = 0.05;
    p.inverse_mass = 4.0;
    state.particles.push_back(p);
    OrganAttachment organ;
    organ.kind = OrganKind::Fruit;
    organ.particle = i;
    state.attachments.push_back(organ);
  }
  resolve_contacts(state, {}, 0.0);
  CHECK(state.particles[0].position.x() == doctest::Approx(-0.01).epsilon(1e-12));
  CHECK(state.particles[1].position.x() == doctest::Approx(0.09).epsilon(1e-12));
}

TEST_CASE("self-collision corrections conserve momentum for any masses") {
  std::mt19937 rng(301);
  std::uniform_real_distribution<Real> mass_dist(0.5, 8.0);
  SimState state;
  for (int i = 0; i < 20; ++i) {
    Particle p;
    p.position = test_support::random_vec3(rng, 0.05);
    p.radius = 0.03;
    p.inverse_mass = mass_dist(rng);
    state.particles.push_back(p);
    OrganAttachment organ;
    organ.kind = OrganKind::Fruit;
    organ.particle = i;
    state.attachments.push_back(organ);
  }
  Vec3 weighted_before = Vec3::Zero();
  for (const auto& p : state.particles) weighted_before += p.position / p.inverse_mass;
  resolve_contacts(state, {}, 0.0);
  Vec3 weighted_after = Vec3::Zero();
  for (const auto& p : state.particles) weighted_after += p.position / p.inverse_mass;
  CHECK((weighted_after - weighted_before).norm() < 1e-12);
}

TEST_CASE("broad phase returns a superset of the exact contact set") {
  std::mt19937 rng(401);
  std::uniform_real_distribution<Real> radius_dist(0.005, 0.03);
  std::uniform_real_distribution<Real> len_dist(0.02, 0.1);
  for (int scene = 0; scene < 10; ++scene) {
    std::vector<CollisionPrimitive> prims;
    for (int i = 0; i < 100; ++i) {
      if (i % 2 == 0) {
        prims.push_back(sphere_prim(test_support::random_vec3(rng, 0.3), radius_dist(rng)));
      } else {
        const Vec3 a = test_support::random_vec3(rng, 0.3);
        const Vec3 dir = test_support::random_direction(rng);
        prims.push_back(capsule_prim(a, a + len_dist(rng) * dir, radius_dist(rng)));
      }
    }
    const auto candidates = broad_phase(prims);
    const std::set<std::pair<int, int>> candidate_set(candidates.begin(), candidates.end());
    for (const auto& pair : exact_contacts(prims)) CHECK(candidate_set.count(pair) == 1);
  }
}

TEST_CASE("adjacent plant geometry is excluded from self-collision") {
  Material m;
  // chain with segment length below the capsule diameter: consecutive and
  // once-removed capsules overlap at rest but must not collide
  SimState state = test_support::chain_state(6, 0.01, Vec3::UnitX(), m, false, 0.008);
  const auto contacts = resolve_contacts(state, {}, 0.0);
  CHECK(contacts.empty());
}

TEST_CASE("one-way coupling: the obstacle trajectory ignores the plant") {
  RigidObstacle obstacle;
  SdfPrimitive sphere;
  sphere.type = SdfPrimitive::Type::Sphere;
  sphere.radius = 0.05;
  obstacle.primitives.push_back(sphere);
  // sweeps along the chain, brushing it aside
  obstacle.trajectory.push_back({0.0, Vec3(0.08, 0.055, 0), Quat::Identity()});
  obstacle.trajectory.push_back({1.0, Vec3(0.08, -0.055, 0), Quat::Identity()});

  std::vector<PoseSample> without;
  for (int i = 0; i <= 10; ++i) without.push_back(obstacle.pose_at(0.1 * i));

  Material m;
  SimState state = test_support::chain_state(5, 0.03, Vec3::UnitX(), m, true);
  SolverParams params;
  for (int i = 0; i < 30; ++i) step(state, params, std::span(&obstacle, 1));
  // the plant was actually pushed
  CHECK(std::abs(state.particles.back().position.y()) > 1e-4);

  for (int i = 0; i <= 10; ++i) {
    const PoseSample pose = obstacle.pose_at(0.1 * i);
    CHECK(pose.position == without[i].position);
    CHECK(pose.rotation.coeffs() == without[i].rotation.coeffs());
  }
}

TEST_CASE("a sphere resting on a box converges to negligible penetration") {
  RigidObstacle obstacle;
  SdfPrimitive box;
  box.type = SdfPrimitive::Type::Box;
  box.a = Vec3(0, 0, -0.1);
  box.half_extents = Vec3(0.5, 0.5, 0.1);  // slab with its top face at z = 0
  obstacle.primitives.push_back(box);
  obstacle.trajectory.push_back({0.0, Vec3::Zero(), Quat::Identity()});

  SimState state;
  Particle p;
  p.position = Vec3(0, 0, 0.01);  // start penetrating: radius 0.02 over a face at 0
  p.radius = 0.02;
  p.inverse_mass = 10.0;
  state.particles.push_back(p);
  OrganAttachment organ;
  organ.kind = OrganKind::Fruit;
  organ.particle = 0;
  state.attachments.push_back(organ);

  SolverParams params;
  for (int i = 0; i < 60; ++i) step(state, params, std::span(&obstacle, 1));
  const Real clearance = state.particles[0].position.z() - p.radius;
  CHECK(clearance > -1e-5);  // converged penetration below 1e-5
}
