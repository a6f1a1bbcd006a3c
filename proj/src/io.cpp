#include "plantsim/io.hpp"

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace plantsim {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_or_throw(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.string().c_str(), mode));
  if (!f) throw std::runtime_error("cannot open " + path.string());
  return f;
}

[[noreturn]] void parse_fail(const std::filesystem::path& path, size_t line,
                             const std::string& what) {
  throw std::runtime_error(path.string() + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

std::vector<int> frame_orientation_map(const SimState& state) {
  std::vector<int> map(state.particles.size(), -1);
  // prefer the lowest-index outgoing segment, fall back to the incoming one
  for (size_t i = state.segments.size(); i-- > 0;) {
    const auto& s = state.segments[i];
    map[s.particle_b] = s.orientation;
  }
  for (size_t i = state.segments.size(); i-- > 0;) {
    const auto& s = state.segments[i];
    map[s.particle_a] = s.orientation;
  }
  return map;
}

void append_frame(FrameSeries& series, const SimState& state, int step,
                  const std::vector<int>& orientation_map) {
  series.particle_count = static_cast<int>(state.particles.size());
  series.frame_steps.push_back(step);
  std::vector<Vec3> pos(state.particles.size());
  std::vector<Quat> rot(state.particles.size(), Quat::Identity());
  for (size_t i = 0; i < state.particles.size(); ++i) {
    pos[i] = state.particles[i].position;
    if (orientation_map[i] >= 0) rot[i] = state.orientations[orientation_map[i]].rotation;
  }
  series.positions.push_back(std::move(pos));
  series.rotations.push_back(std::move(rot));
}

void write_frames_csv(const std::filesystem::path& path, const FrameSeries& series) {
  FilePtr f = open_or_throw(path, "w");
  std::fprintf(f.get(), "frame,id,x,y,z,qw,qx,qy,qz\n");
  for (size_t fi = 0; fi < series.positions.size(); ++fi) {
    for (int id = 0; id < series.particle_count; ++id) {
      const Vec3& p = series.positions[fi][id];
      const Quat& q = series.rotations[fi][id];
      std::fprintf(f.get(), "%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                   series.frame_steps[fi], id, p.x(), p.y(), p.z(), q.w(), q.x(), q.y(), q.z());
    }
  }
}

FrameSeries load_frames_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  FrameSeries series;
  std::string line;
  size_t line_no = 0;
  int current_step = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "frame,id,x,y,z,qw,qx,qy,qz") continue;
    int step, id;
    double x, y, z, qw, qx, qy, qz;
    if (std::sscanf(line.c_str(), "%d,%d,%lf,%lf,%lf,%lf,%lf,%lf,%lf", &step, &id, &x, &y, &z,
                    &qw, &qx, &qy, &qz) != 9)
      parse_fail(path, line_no, "malformed frame row");
    if (step != current_step) {
      current_step = step;
      series.frame_steps.push_back(step);
      series.positions.emplace_back();
      series.rotations.emplace_back();
    }
    series.positions.back().emplace_back(x, y, z);
    series.rotations.back().emplace_back(qw, qx, qy, qz);
  }
  if (!series.positions.empty())
    series.particle_count = static_cast<int>(series.positions.front().size());
  return series;
}

void write_frames_binary(const std::filesystem::path& path, const FrameSeries& series) {
  FilePtr f = open_or_throw(path, "wb");
  const char magic[4] = {'P', 'S', 'F', 'B'};
  const uint32_t version = 1;
  const uint32_t particles = static_cast<uint32_t>(series.particle_count);
  const uint32_t frames = static_cast<uint32_t>(series.positions.size());
  std::fwrite(magic, 1, 4, f.get());
  std::fwrite(&version, 4, 1, f.get());
  std::fwrite(&particles, 4, 1, f.get());
  std::fwrite(&frames, 4, 1, f.get());
  for (size_t fi = 0; fi < series.positions.size(); ++fi) {
    const uint32_t step = static_cast<uint32_t>(series.frame_steps[fi]);
    std::fwrite(&step, 4, 1, f.get());
    for (int id = 0; id < series.particle_count; ++id) {
      const Vec3& p = series.positions[fi][id];
      const Quat& q = series.rotations[fi][id];
      const double row[7] = {p.x(), p.y(), p.z(), q.w(), q.x(), q.y(), q.z()};
      std::fwrite(row, sizeof(double), 7, f.get());
    }
  }
}

FrameSeries load_frames_binary(const std::filesystem::path& path) {
  FilePtr f = open_or_throw(path, "rb");
  char magic[4];
  uint32_t version, particles, frames;
  if (std::fread(magic, 1, 4, f.get()) != 4 || std::memcmp(magic, "PSFB", 4) != 0)
    throw std::runtime_error(path.string() + ": not a frame file");
  if (std::fread(&version, 4, 1, f.get()) != 1 || version != 1)
    throw std::runtime_error(path.string() + ": unsupported frame file version");
  if (std::fread(&particles, 4, 1, f.get()) != 1 || std::fread(&frames, 4, 1, f.get()) != 1)
    throw std::runtime_error(path.string() + ": truncated frame file");
  FrameSeries series;
  series.particle_count = static_cast<int>(particles);
  for (uint32_t fi = 0; fi < frames; ++fi) {
    uint32_t step;
    if (std::fread(&step, 4, 1, f.get()) != 1)
      throw std::runtime_error(path.string() + ": truncated frame file");
    series.frame_steps.push_back(static_cast<int>(step));
    std::vector<Vec3> pos(particles);
    std::vector<Quat> rot(particles);
    for (uint32_t id = 0; id < particles; ++id) {
      double row[7];
      if (std::fread(row, sizeof(double), 7, f.get()) != 7)
        throw std::runtime_error(path.string() + ": truncated frame file");
      pos[id] = Vec3(row[0], row[1], row[2]);
      rot[id] = Quat(row[3], row[4], row[5], row[6]);
    }
    series.positions.push_back(std::move(pos));
    series.rotations.push_back(std::move(rot));
  }
  return series;
}

void write_events_csv(const std::filesystem::path& path,
                      const std::vector<FractureEvent>& events) {
  FilePtr f = open_or_throw(path, "w");
  std::fprintf(f.get(), "time,segment,trigger,magnitude\n");
  for (const auto& e : events) {
    std::fprintf(f.get(), "%.17g,%d,%s,%.17g\n", e.time, e.segment, to_string(e.trigger),
                 e.magnitude);
  }
}

std::vector<FractureEvent> load_events_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<FractureEvent> events;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "time,segment,trigger,magnitude") continue;
    FractureEvent e;
    char trigger[16];
    if (std::sscanf(line.c_str(), "%lf,%d,%15[^,],%lf", &e.time, &e.segment, trigger,
                    &e.magnitude) != 4)
      parse_fail(path, line_no, "malformed event row");
    if (std::strcmp(trigger, "stretch") == 0)
      e.trigger = FractureTrigger::Stretch;
    else if (std::strcmp(trigger, "bend") == 0)
      e.trigger = FractureTrigger::Bend;
    else
      parse_fail(path, line_no, "unknown trigger");
    events.push_back(e);
  }
  return events;
}

std::vector<PoseSample> load_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<PoseSample> trajectory;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    PoseSample s;
    double qw, qx, qy, qz;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf", &s.t, &s.position.x(),
                    &s.position.y(), &s.position.z(), &qw, &qx, &qy, &qz) != 8) {
      if (line_no == 1) continue;  // header
      parse_fail(path, line_no, "malformed trajectory row");
    }
    s.rotation = Quat(qw, qx, qy, qz);
    if (s.rotation.norm() < 1e-9) parse_fail(path, line_no, "zero quaternion");
    s.rotation.normalize();
    if (!trajectory.empty() && s.t <= trajectory.back().t)
      parse_fail(path, line_no, "trajectory times must increase strictly");
    trajectory.push_back(s);
  }
  if (trajectory.empty()) throw std::runtime_error(path.string() + ": empty trajectory");
  return trajectory;
}

void write_trajectory_csv(const std::filesystem::path& path,
                          const std::vector<PoseSample>& trajectory) {
  FilePtr f = open_or_throw(path, "w");
  std::fprintf(f.get(), "t,x,y,z,qw,qx,qy,qz\n");
  for (const auto& s : trajectory) {
    std::fprintf(f.get(), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t,
                 s.position.x(), s.position.y(), s.position.z(), s.rotation.w(), s.rotation.x(),
                 s.rotation.y(), s.rotation.z());
  }
}

void save_grid_sdf(const std::filesystem::path& path, const GridSdf& grid, bool binary) {
  FilePtr f = open_or_throw(path, "wb");
  std::fprintf(f.get(), "sdfgrid 1\n");
  std::fprintf(f.get(), "origin %.17g %.17g %.17g\n", grid.origin.x(), grid.origin.y(),
               grid.origin.z());
  std::fprintf(f.get(), "spacing %.17g\n", grid.spacing);
  std::fprintf(f.get(), "dims %d %d %d\n", grid.nx, grid.ny, grid.nz);
  if (binary) {
    std::fprintf(f.get(), "data binary\n");
    std::fwrite(grid.samples.data(), sizeof(float), grid.samples.size(), f.get());
  } else {
    std::fprintf(f.get(), "data ascii\n");
    for (size_t i = 0; i < grid.samples.size(); ++i)
      std::fprintf(f.get(), "%.9g%c", grid.samples[i], (i + 1) % 8 == 0 ? '\n' : ' ');
    std::fprintf(f.get(), "\n");
  }
}

GridSdf load_grid_sdf(const std::filesystem::path& path) {
  FilePtr f = open_or_throw(path, "rb");
  GridSdf grid;
  char mode[16];
  int version = 0;
  if (std::fscanf(f.get(), "sdfgrid %d\n", &version) != 1 || version != 1)
    throw std::runtime_error(path.string() + ": not a version-1 sdf grid");
  if (std::fscanf(f.get(), "origin %lf %lf %lf\n", &grid.origin.x(), &grid.origin.y(),
                  &grid.origin.z()) != 3 ||
      std::fscanf(f.get(), "spacing %lf\n", &grid.spacing) != 1 ||
      std::fscanf(f.get(), "dims %d %d %d\n", &grid.nx, &grid.ny, &grid.nz) != 3 ||
      std::fscanf(f.get(), "data %15s", mode) != 1)
    throw std::runtime_error(path.string() + ": malformed sdf grid header");
  if (!(grid.spacing > 0.0) || grid.nx < 2 || grid.ny < 2 || grid.nz < 2)
    throw std::runtime_error(path.string() + ": invalid sdf grid dimensions");
  const size_t count = static_cast<size_t>(grid.nx) * grid.ny * grid.nz;
  grid.samples.resize(count);
  if (std::strcmp(mode, "binary") == 0) {
    std::fgetc(f.get());  // newline after the header
    if (std::fread(grid.samples.data(), sizeof(float), count, f.get()) != count)
      throw std::runtime_error(path.string() + ": truncated sdf grid data");
  } else if (std::strcmp(mode, "ascii") == 0) {
    for (size_t i = 0; i < count; ++i) {
      float v;
      if (std::fscanf(f.get(), "%f", &v) != 1)
        throw std::runtime_error(path.string() + ": truncated sdf grid data");
      grid.samples[i] = v;
    }
  } else {
    throw std::runtime_error(path.string() + ": unknown sdf data mode");
  }
  return grid;
}

}  // namespace plantsim
