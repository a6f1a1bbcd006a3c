#pragma once

#include <filesystem>
#include <vector>

#include "plantsim/collision.hpp"
#include "plantsim/fracture.hpp"
#include "plantsim/state.hpp"

namespace plantsim {

/// Recorded trajectory of one run. Rows are (position, quaternion) per
/// particle; the quaternion is the frame of the particle's primary segment
/// (the lowest-index segment leaving it, else the one arriving, else
/// identity).
struct FrameSeries {
  int particle_count{0};
  std::vector<int> frame_steps;           // sim step index of each frame
  std::vector<std::vector<Vec3>> positions;
  std::vector<std::vector<Quat>> rotations;
};

/// particle -> orientation element used for the frame rows (-1 = identity)
std::vector<int> frame_orientation_map(const SimState& state);

void append_frame(FrameSeries& series, const SimState& state, int step,
                  const std::vector<int>& orientation_map);

void write_frames_csv(const std::filesystem::path& path, const FrameSeries& series);
FrameSeries load_frames_csv(const std::filesystem::path& path);

/// Compact binary twin of the CSV: little-endian, "PSFB" magic, u32 version,
/// u32 particle count, u32 frame count, then per frame a u32 step index and
/// 7 f64 per particle (x, y, z, qw, qx, qy, qz).
void write_frames_binary(const std::filesystem::path& path, const FrameSeries& series);
FrameSeries load_frames_binary(const std::filesystem::path& path);

void write_events_csv(const std::filesystem::path& path, const std::vector<FractureEvent>& events);
std::vector<FractureEvent> load_events_csv(const std::filesystem::path& path);

/// CSV rows t,x,y,z,qw,qx,qy,qz ('#' comments and a non-numeric header line
/// allowed). Times must increase strictly; quaternions are normalized.
std::vector<PoseSample> load_trajectory_csv(const std::filesystem::path& path);
void write_trajectory_csv(const std::filesystem::path& path,
                          const std::vector<PoseSample>& trajectory);

/// Grid SDF file: text header (origin, spacing, dims, data mode), then the
/// row-major (x fastest) samples either as ASCII or little-endian float32.
void save_grid_sdf(const std::filesystem::path& path, const GridSdf& grid, bool binary);
GridSdf load_grid_sdf(const std::filesystem::path& path);

}  // namespace plantsim
