#include "plantsim/collision.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>
#include <unordered_set>

namespace plantsim {

const char* to_string(ContactKind kind) {
  switch (kind) {
    case ContactKind::CapsuleCapsule: return "capsule-capsule";
    case ContactKind::CapsuleSphere: return "capsule-sphere";
    case ContactKind::SphereSphere: return "sphere-sphere";
    case ContactKind::PlantObstacle: return "plant-obstacle";
  }
  return "unknown";
}

Real closest_point_segment_segment(const Vec3& a1, const Vec3& b1, const Vec3& a2,
                                   const Vec3& b2, Real& s, Real& t, Vec3& c1, Vec3& c2) {
  const Vec3 d1 = b1 - a1;
  const Vec3 d2 = b2 - a2;
  const Vec3 r = a1 - a2;
  const Real a = d1.squaredNorm();
  const Real e = d2.squaredNorm();
  const Real f = d2.dot(r);
  constexpr Real kEps = 1e-14;

  if (a <= kEps && e <= kEps) {
    s = t = 0.0;
  } else if (a <= kEps) {
    s = 0.0;
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const Real c = d1.dot(r);
    if (e <= kEps) {
      t = 0.0;
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const Real b = d1.dot(d2);
      const Real denom = a * e - b * b;
      s = denom > kEps ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  c1 = a1 + s * d1;
  c2 = a2 + t * d2;
  return (c1 - c2).squaredNorm();
}

static Real closest_point_segment_point(const Vec3& a, const Vec3& b, const Vec3& p, Real& t,
                                        Vec3& c) {
  const Vec3 d = b - a;
  const Real len2 = d.squaredNorm();
  t = len2 > 1e-14 ? std::clamp((p - a).dot(d) / len2, 0.0, 1.0) : 0.0;
  c = a + t * d;
  return (c - p).squaredNorm();
}

ClosestPair closest_point_pair(const CollisionPrimitive& a, const CollisionPrimitive& b) {
  ClosestPair out;
  if (a.is_capsule && b.is_capsule) {
    const Real d2 = closest_point_segment_segment(a.a, a.b, b.a, b.b, out.t_a, out.t_b,
                                                  out.point_a, out.point_b);
    out.distance = std::sqrt(d2);
  } else if (a.is_capsule) {
    const Real d2 = closest_point_segment_point(a.a, a.b, b.a, out.t_a, out.point_a);
    out.point_b = b.a;
    out.t_b = 0.0;
    out.distance = std::sqrt(d2);
  } else if (b.is_capsule) {
    const Real d2 = closest_point_segment_point(b.a, b.b, a.a, out.t_b, out.point_b);
    out.point_a = a.a;
    out.t_a = 0.0;
    out.distance = std::sqrt(d2);
  } else {
    out.point_a = a.a;
    out.point_b = b.a;
    out.distance = (a.a - b.a).norm();
  }
  return out;
}

// ---------------------------------------------------------------------------
// SDF primitives

Real sdf_primitive_distance(const SdfPrimitive& prim, const Vec3& p) {
  switch (prim.type) {
    case SdfPrimitive::Type::Sphere:
      return (p - prim.a).norm() - prim.radius;
    case SdfPrimitive::Type::Capsule: {
      Real t;
      Vec3 c;
      const Real d2 = closest_point_segment_point(prim.a, prim.b, p, t, c);
      return std::sqrt(d2) - prim.radius;
    }
    case SdfPrimitive::Type::Box: {
      const Vec3 local = p - prim.a;
      const Vec3 q = local.cwiseAbs() - prim.half_extents;
      const Vec3 outside = q.cwiseMax(0.0);
      const Real inside = std::min(q.maxCoeff(), 0.0);
      return outside.norm() + inside;
    }
  }
  return 0.0;
}

Vec3 sdf_primitive_gradient(const SdfPrimitive& prim, const Vec3& p) {
  constexpr Real kEps = 1e-12;
  switch (prim.type) {
    case SdfPrimitive::Type::Sphere: {
      const Vec3 d = p - prim.a;
      const Real n = d.norm();
      return n > kEps ? Vec3(d / n) : Vec3::UnitZ();
    }
    case SdfPrimitive::Type::Capsule: {
      Real t;
      Vec3 c;
      closest_point_segment_point(prim.a, prim.b, p, t, c);
      const Vec3 d = p - c;
      const Real n = d.norm();
      return n > kEps ? Vec3(d / n) : Vec3::UnitZ();
    }
    case SdfPrimitive::Type::Box: {
      const Vec3 local = p - prim.a;
      const Vec3 q = local.cwiseAbs() - prim.half_extents;
      const Vec3 sign(local.x() < 0 ? -1.0 : 1.0, local.y() < 0 ? -1.0 : 1.0,
                      local.z() < 0 ? -1.0 : 1.0);
      const Vec3 outside = q.cwiseMax(0.0);
      const Real on = outside.norm();
      if (on > kEps) return (outside.cwiseProduct(sign)) / on;
      // interior: face of least remaining depth
      int k = 0;
      q.maxCoeff(&k);
      Vec3 g = Vec3::Zero();
      g[k] = sign[k];
      return g;
    }
  }
  return Vec3::UnitZ();
}

// ---------------------------------------------------------------------------
// Grid SDF

Vec3 GridSdf::max_corner() const {
  return origin + spacing * Vec3(nx - 1, ny - 1, nz - 1);
}

bool GridSdf::inside_domain(const Vec3& p) const {
  const Vec3 hi = max_corner();
  return p.x() >= origin.x() && p.y() >= origin.y() && p.z() >= origin.z() && p.x() <= hi.x() &&
         p.y() <= hi.y() && p.z() <= hi.z();
}

Real GridSdf::interpolate(const Vec3& p) const {
  const Vec3 rel = (p - origin) / spacing;
  const auto clampf = [](Real v, Real hi) { return std::clamp(v, 0.0, hi); };
  const Real fx = clampf(rel.x(), nx - 1.0);
  const Real fy = clampf(rel.y(), ny - 1.0);
  const Real fz = clampf(rel.z(), nz - 1.0);
  const int ix = std::min(static_cast<int>(fx), nx - 2 >= 0 ? nx - 2 : 0);
  const int iy = std::min(static_cast<int>(fy), ny - 2 >= 0 ? ny - 2 : 0);
  const int iz = std::min(static_cast<int>(fz), nz - 2 >= 0 ? nz - 2 : 0);
  const Real tx = fx - ix, ty = fy - iy, tz = fz - iz;
  const auto at = [&](int x, int y, int z) -> Real {
    x = std::clamp(x, 0, nx - 1);
    y = std::clamp(y, 0, ny - 1);
    z = std::clamp(z, 0, nz - 1);
    return samples[(static_cast<size_t>(z) * ny + y) * nx + x];
  };
  const Real c00 = at(ix, iy, iz) * (1 - tx) + at(ix + 1, iy, iz) * tx;
  const Real c10 = at(ix, iy + 1, iz) * (1 - tx) + at(ix + 1, iy + 1, iz) * tx;
  const Real c01 = at(ix, iy, iz + 1) * (1 - tx) + at(ix + 1, iy, iz + 1) * tx;
  const Real c11 = at(ix, iy + 1, iz + 1) * (1 - tx) + at(ix + 1, iy + 1, iz + 1) * tx;
  const Real c0 = c00 * (1 - ty) + c10 * ty;
  const Real c1 = c01 * (1 - ty) + c11 * ty;
  return c0 * (1 - tz) + c1 * tz;
}

static SdfHit grid_query(const GridSdf& grid, const Vec3& p) {
  if (!grid.inside_domain(p)) {
    // Outside the sampled block: fall back to the distance from the block
    // itself with an outward normal.
    const Vec3 lo = grid.origin;
    const Vec3 hi = grid.max_corner();
    const Vec3 center = 0.5 * (lo + hi);
    SdfPrimitive box;
    box.type = SdfPrimitive::Type::Box;
    box.a = center;
    box.half_extents = 0.5 * (hi - lo);
    return SdfHit{sdf_primitive_distance(box, p), sdf_primitive_gradient(box, p)};
  }
  const Real h = 0.5 * grid.spacing;
  Vec3 g;
  for (int k = 0; k < 3; ++k) {
    Vec3 lo = p, hi = p;
    lo[k] -= h;
    hi[k] += h;
    g[k] = (grid.interpolate(hi) - grid.interpolate(lo)) / (2.0 * h);
  }
  const Real n = g.norm();
  return SdfHit{grid.interpolate(p), n > 1e-12 ? Vec3(g / n) : Vec3::UnitZ()};
}

// ---------------------------------------------------------------------------
// Obstacle

PoseSample RigidObstacle::pose_at(Real t) const {
  if (trajectory.empty()) return PoseSample{t, Vec3::Zero(), Quat::Identity()};
  if (t < trajectory.front().t - 1e-12 || t > trajectory.back().t + 1e-12) {
    if (!span_warning_emitted) {
      std::fprintf(stderr, "warning: obstacle '%s' queried at t=%g outside trajectory span [%g, %g]; clamping\n",
                   name.c_str(), t, trajectory.front().t, trajectory.back().t);
      span_warning_emitted = true;
    }
  }
  if (t <= trajectory.front().t) return trajectory.front();
  if (t >= trajectory.back().t) return trajectory.back();
  const auto it = std::upper_bound(trajectory.begin(), trajectory.end(), t,
                                   [](Real v, const PoseSample& s) { return v < s.t; });
  const PoseSample& hi = *it;
  const PoseSample& lo = *(it - 1);
  const Real u = (t - lo.t) / (hi.t - lo.t);
  PoseSample out;
  out.t = t;
  out.position = (1.0 - u) * lo.position + u * hi.position;
  out.rotation = lo.rotation.slerp(u, hi.rotation);
  return out;
}

SdfHit RigidObstacle::query_local(const Vec3& local_point) const {
  SdfHit best{std::numeric_limits<Real>::max(), Vec3::UnitZ()};
  for (const auto& prim : primitives) {
    const Real d = sdf_primitive_distance(prim, local_point);
    if (d < best.distance) best = SdfHit{d, sdf_primitive_gradient(prim, local_point)};
  }
  if (grid) {
    const SdfHit g = grid_query(*grid, local_point);
    if (g.distance < best.distance) best = g;
  }
  return best;
}

SdfHit sdf_query(const RigidObstacle& obstacle, const Vec3& world_point, Real t) {
  const PoseSample pose = obstacle.pose_at(t);
  const Quat inv = pose.rotation.conjugate();
  const Vec3 local = inv * (world_point - pose.position);
  SdfHit hit = obstacle.query_local(local);
  hit.normal = pose.rotation * hit.normal;
  return hit;
}

GridSdf bake_grid_sdf(std::span<const SdfPrimitive> primitives, const Vec3& origin, Real spacing,
                      int nx, int ny, int nz) {
  GridSdf grid;
  grid.origin = origin;
  grid.spacing = spacing;
  grid.nx = nx;
  grid.ny = ny;
  grid.nz = nz;
  grid.samples.resize(static_cast<size_t>(nx) * ny * nz);
  size_t idx = 0;
  for (int z = 0; z < nz; ++z)
    for (int y = 0; y < ny; ++y)
      for (int x = 0; x < nx; ++x) {
        const Vec3 p = origin + spacing * Vec3(x, y, z);
        Real best = std::numeric_limits<Real>::max();
        for (const auto& prim : primitives) best = std::min(best, sdf_primitive_distance(prim, p));
        grid.samples[idx++] = static_cast<float>(best);
      }
  return grid;
}

// ---------------------------------------------------------------------------
// Broad phase

std::vector<CollisionPrimitive> collect_primitives(const SimState& state) {
  std::vector<CollisionPrimitive> prims;
  prims.reserve(state.segments.size() + state.attachments.size());
  for (size_t i = 0; i < state.segments.size(); ++i) {
    const auto& s = state.segments[i];
    if (!s.alive) continue;
    CollisionPrimitive p;
    p.is_capsule = true;
    p.a = state.particles[s.particle_a].position;
    p.b = state.particles[s.particle_b].position;
    p.radius = s.radius;
    p.particle_a = s.particle_a;
    p.particle_b = s.particle_b;
    p.segment = static_cast<int>(i);
    prims.push_back(p);
  }
  for (const auto& organ : state.attachments) {
    if (organ.kind != OrganKind::Fruit || organ.particle < 0) continue;
    CollisionPrimitive p;
    p.is_capsule = false;
    p.a = state.particles[organ.particle].position;
    p.radius = state.particles[organ.particle].radius;
    p.particle_a = organ.particle;
    prims.push_back(p);
  }
  return prims;
}

namespace {

struct CellKey {
  int64_t key;
  bool operator==(const CellKey& o) const { return key == o.key; }
};

struct CellHash {
  size_t operator()(const CellKey& c) const { return std::hash<int64_t>()(c.key); }
};

inline CellKey make_key(int x, int y, int z) {
  // 21 bits per axis, offset to keep coordinates positive
  const int64_t bias = 1 << 20;
  return CellKey{((x + bias) << 42) | ((y + bias) << 21) | (z + bias)};
}

}  // namespace

std::vector<std::pair<int, int>> broad_phase(std::span<const CollisionPrimitive> prims) {
  std::vector<std::pair<int, int>> pairs;
  if (prims.size() < 2) return pairs;
  Real max_radius = 0.0;
  for (const auto& p : prims) max_radius = std::max(max_radius, p.radius);
  if (max_radius <= 0.0) return pairs;
  const Real cell = 2.0 * max_radius;

  std::unordered_map<CellKey, std::vector<int>, CellHash> table;
  table.reserve(prims.size() * 2);
  const auto cell_index = [cell](Real v) { return static_cast<int>(std::floor(v / cell)); };
  for (size_t i = 0; i < prims.size(); ++i) {
    const auto& p = prims[i];
    const Vec3 lo = (p.is_capsule ? p.a.cwiseMin(p.b) : p.a) - Vec3::Constant(p.radius);
    const Vec3 hi = (p.is_capsule ? p.a.cwiseMax(p.b) : p.a) + Vec3::Constant(p.radius);
    if (!lo.allFinite() || !hi.allFinite()) continue;
    const int x0 = cell_index(lo.x()), x1 = cell_index(hi.x());
    const int y0 = cell_index(lo.y()), y1 = cell_index(hi.y());
    const int z0 = cell_index(lo.z()), z1 = cell_index(hi.z());
    const long span = static_cast<long>(x1 - x0 + 1) * (y1 - y0 + 1) * (z1 - z0 + 1);
    if (!p.is_capsule || span <= 128) {
      for (int x = x0; x <= x1; ++x)
        for (int y = y0; y <= y1; ++y)
          for (int z = z0; z <= z1; ++z) table[make_key(x, y, z)].push_back(static_cast<int>(i));
    } else {
      // long diagonal capsule: walk the core instead of filling its box.
      // With radius <= cell/2, every overlapped cell is within one cell of a
      // core sample when samples are at most one cell apart.
      const Real core_len = (p.b - p.a).norm();
      const int samples = static_cast<int>(std::ceil(core_len / cell)) + 1;
      for (int s = 0; s < samples; ++s) {
        const Real u = samples > 1 ? static_cast<Real>(s) / (samples - 1) : 0.0;
        const Vec3 point = (1.0 - u) * p.a + u * p.b;
        const int cx = cell_index(point.x()), cy = cell_index(point.y()),
                  cz = cell_index(point.z());
        for (int x = cx - 1; x <= cx + 1; ++x)
          for (int y = cy - 1; y <= cy + 1; ++y)
            for (int z = cz - 1; z <= cz + 1; ++z) {
              auto& bucket = table[make_key(x, y, z)];
              if (bucket.empty() || bucket.back() != static_cast<int>(i))
                bucket.push_back(static_cast<int>(i));
            }
      }
    }
  }
  for (auto& [key, ids] : table) {
    for (size_t a = 0; a < ids.size(); ++a)
      for (size_t b = a + 1; b < ids.size(); ++b)
        pairs.emplace_back(std::min(ids[a], ids[b]), std::max(ids[a], ids[b]));
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return pairs;
}

// ---------------------------------------------------------------------------
// Contact generation and response

namespace {

inline uint64_t particle_pair_key(int a, int b) {
  const uint64_t lo = static_cast<uint64_t>(std::min(a, b));
  const uint64_t hi = static_cast<uint64_t>(std::max(a, b));
  return (hi << 32) | lo;
}

// Rest-adjacent geometry always overlaps: skip pairs sharing a particle or
// whose particles are linked by a live segment.
bool excluded_pair(const CollisionPrimitive& a, const CollisionPrimitive& b,
                   const std::unordered_set<uint64_t>& links) {
  const int pa[2] = {a.particle_a, a.particle_b};
  const int pb[2] = {b.particle_a, b.particle_b};
  for (int i : pa) {
    if (i < 0) continue;
    for (int j : pb) {
      if (j < 0) continue;
      if (i == j) return true;
      if (links.count(particle_pair_key(i, j))) return true;
    }
  }
  return false;
}

std::unordered_set<uint64_t> segment_links(const SimState& state) {
  std::unordered_set<uint64_t> links;
  links.reserve(state.segments.size() * 2);
  for (const auto& s : state.segments) {
    if (!s.alive) continue;
    links.insert(particle_pair_key(s.particle_a, s.particle_b));
  }
  return links;
}

void apply_split_correction(SimState& state, const Contact& c,
                            const std::vector<CollisionPrimitive>& prims) {
  const auto& a = prims[c.body_a];
  const auto& b = prims[c.body_b];
  const auto w = [&](int particle) {
    return particle >= 0 ? state.particles[particle].inverse_mass : 0.0;
  };
  const Real ua0 = a.is_capsule ? 1.0 - c.bary_a : 1.0;
  const Real ua1 = a.is_capsule ? c.bary_a : 0.0;
  const Real ub0 = b.is_capsule ? 1.0 - c.bary_b : 1.0;
  const Real ub1 = b.is_capsule ? c.bary_b : 0.0;
  const Real denom = w(a.particle_a) * ua0 * ua0 + w(a.particle_b) * ua1 * ua1 +
                     w(b.particle_a) * ub0 * ub0 + w(b.particle_b) * ub1 * ub1;
  if (denom <= 0.0) return;
  const Real lambda = c.depth / denom;
  const Vec3 push = lambda * c.normal;
  if (a.particle_a >= 0) state.particles[a.particle_a].position += w(a.particle_a) * ua0 * push;
  if (a.particle_b >= 0) state.particles[a.particle_b].position += w(a.particle_b) * ua1 * push;
  if (b.particle_a >= 0) state.particles[b.particle_a].position -= w(b.particle_a) * ub0 * push;
  if (b.particle_b >= 0) state.particles[b.particle_b].position -= w(b.particle_b) * ub1 * push;
}

void apply_obstacle_correction(SimState& state, const Contact& c,
                               const std::vector<CollisionPrimitive>& prims, Real slack) {
  const auto& a = prims[c.body_a];
  const auto w = [&](int particle) {
    return particle >= 0 ? state.particles[particle].inverse_mass : 0.0;
  };
  const Real u0 = a.is_capsule ? 1.0 - c.bary_a : 1.0;
  const Real u1 = a.is_capsule ? c.bary_a : 0.0;
  const Real denom = w(a.particle_a) * u0 * u0 + w(a.particle_b) * u1 * u1;
  if (denom <= 0.0) return;
  const Real lambda = (c.depth + slack) / denom;
  const Vec3 push = lambda * c.normal;
  if (a.particle_a >= 0) state.particles[a.particle_a].position += w(a.particle_a) * u0 * push;
  if (a.particle_b >= 0) state.particles[a.particle_b].position += w(a.particle_b) * u1 * push;
}

}  // namespace

ContactCache build_contact_cache(const SimState& state, std::span<const RigidObstacle> obstacles,
                                 Real t, const CollisionOptions& opts) {
  ContactCache cache;
  cache.prims = collect_primitives(state);
  if (opts.self_collision && cache.prims.size() >= 2) {
    const auto links = segment_links(state);
    for (const auto& [i, j] : broad_phase(cache.prims)) {
      if (!excluded_pair(cache.prims[i], cache.prims[j], links)) cache.self_candidates.emplace_back(i, j);
    }
  }
  if (!obstacles.empty()) {
    Real max_radius = 0.0;
    for (const auto& p : cache.prims) max_radius = std::max(max_radius, p.radius);
    const Real margin = max_radius + 0.05;
    for (const auto& obstacle : obstacles) {
      const PoseSample pose = obstacle.pose_at(t);
      Vec3 lo = Vec3::Constant(std::numeric_limits<Real>::max());
      Vec3 hi = Vec3::Constant(std::numeric_limits<Real>::lowest());
      const auto extend = [&](const Vec3& local, Real r) {
        const Vec3 world = pose.rotation * local + pose.position;
        lo = lo.cwiseMin(world - Vec3::Constant(r));
        hi = hi.cwiseMax(world + Vec3::Constant(r));
      };
      for (const auto& prim : obstacle.primitives) {
        switch (prim.type) {
          case SdfPrimitive::Type::Sphere: extend(prim.a, prim.radius); break;
          case SdfPrimitive::Type::Capsule:
            extend(prim.a, prim.radius);
            extend(prim.b, prim.radius);
            break;
          case SdfPrimitive::Type::Box:
            for (int cx = -1; cx <= 1; cx += 2)
              for (int cy = -1; cy <= 1; cy += 2)
                for (int cz = -1; cz <= 1; cz += 2)
                  extend(prim.a + prim.half_extents.cwiseProduct(Vec3(cx, cy, cz)), 0.0);
            break;
        }
      }
      if (obstacle.grid) {
        const Vec3 glo = obstacle.grid->origin;
        const Vec3 ghi = obstacle.grid->max_corner();
        for (int cx = 0; cx <= 1; ++cx)
          for (int cy = 0; cy <= 1; ++cy)
            for (int cz = 0; cz <= 1; ++cz)
              extend(Vec3(cx ? ghi.x() : glo.x(), cy ? ghi.y() : glo.y(), cz ? ghi.z() : glo.z()), 0.0);
      }
      if (lo.x() > hi.x()) continue;  // no geometry
      lo -= Vec3::Constant(margin);
      hi += Vec3::Constant(margin);
      for (size_t i = 0; i < cache.prims.size(); ++i) {
        const auto& p = cache.prims[i];
        const Vec3 plo = (p.is_capsule ? p.a.cwiseMin(p.b) : p.a) - Vec3::Constant(p.radius);
        const Vec3 phi = (p.is_capsule ? p.a.cwiseMax(p.b) : p.a) + Vec3::Constant(p.radius);
        const bool overlap = (plo.array() <= hi.array()).all() && (phi.array() >= lo.array()).all();
        if (overlap) cache.obstacle_candidates.push_back(static_cast<int>(i));
      }
    }
    std::sort(cache.obstacle_candidates.begin(), cache.obstacle_candidates.end());
    cache.obstacle_candidates.erase(
        std::unique(cache.obstacle_candidates.begin(), cache.obstacle_candidates.end()),
        cache.obstacle_candidates.end());
  }
  return cache;
}

std::vector<Contact> resolve_contacts_cached(SimState& state, ContactCache& cache,
                                             std::span<const RigidObstacle> obstacles, Real t,
                                             const CollisionOptions& opts) {
  std::vector<Contact> contacts;
  // refresh cores from the current particle positions
  for (auto& p : cache.prims) {
    p.a = state.particles[p.particle_a].position;
    if (p.is_capsule) p.b = state.particles[p.particle_b].position;
  }

  for (const auto& [i, j] : cache.self_candidates) {
    const auto& a = cache.prims[i];
    const auto& b = cache.prims[j];
    const ClosestPair cp = closest_point_pair(a, b);
    const Real overlap = a.radius + b.radius - cp.distance;
    if (overlap <= 0.0) continue;
    Contact c;
    c.kind = a.is_capsule && b.is_capsule  ? ContactKind::CapsuleCapsule
             : !a.is_capsule && !b.is_capsule ? ContactKind::SphereSphere
                                              : ContactKind::CapsuleSphere;
    c.body_a = i;
    c.body_b = j;
    c.bary_a = cp.t_a;
    c.bary_b = cp.t_b;
    c.depth = overlap;
    c.normal = cp.distance > 1e-12 ? Vec3((cp.point_a - cp.point_b) / cp.distance) : Vec3::UnitZ();
    c.point = 0.5 * (cp.point_a + cp.point_b);
    apply_split_correction(state, c, cache.prims);
    contacts.push_back(c);
  }

  for (size_t oi = 0; oi < obstacles.size(); ++oi) {
    const auto& obstacle = obstacles[oi];
    for (int pi : cache.obstacle_candidates) {
      auto& prim = cache.prims[pi];
      prim.a = state.particles[prim.particle_a].position;
      if (prim.is_capsule) prim.b = state.particles[prim.particle_b].position;

      Real best_distance = std::numeric_limits<Real>::max();
      SdfHit best_hit{};
      Real best_bary = 0.0;
      Vec3 best_point = prim.a;
      if (prim.is_capsule) {
        const Real core_length = (prim.b - prim.a).norm();
        const int n = std::max(2, static_cast<int>(std::ceil(
                                      core_length / (opts.axis_sample_factor * prim.radius))));
        for (int k = 0; k < n; ++k) {
          const Real u = static_cast<Real>(k) / (n - 1);
          const Vec3 sample = (1.0 - u) * prim.a + u * prim.b;
          const SdfHit hit = sdf_query(obstacle, sample, t);
          if (hit.distance < best_distance) {
            best_distance = hit.distance;
            best_hit = hit;
            best_bary = u;
            best_point = sample;
          }
        }
      } else {
        best_hit = sdf_query(obstacle, prim.a, t);
        best_distance = best_hit.distance;
      }
      const Real depth = prim.radius - best_distance;
      if (depth <= 0.0) continue;
      Contact c;
      c.kind = ContactKind::PlantObstacle;
      c.body_a = pi;
      c.body_b = static_cast<int>(oi);
      c.bary_a = best_bary;
      c.depth = depth;
      c.normal = best_hit.normal;
      c.point = best_point - best_hit.distance * best_hit.normal;
      apply_obstacle_correction(state, c, cache.prims, opts.contact_slack);
      contacts.push_back(c);
    }
  }
  return contacts;
}

std::vector<Contact> resolve_contacts(SimState& state, std::span<const RigidObstacle> obstacles,
                                      Real t, const CollisionOptions& opts) {
  ContactCache cache = build_contact_cache(state, obstacles, t, opts);
  return resolve_contacts_cached(state, cache, obstacles, t, opts);
}

}  // namespace plantsim
