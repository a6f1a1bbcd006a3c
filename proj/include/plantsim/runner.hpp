#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "plantsim/io.hpp"
#include "plantsim/scene.hpp"

namespace plantsim {

struct RunMetrics {
  int node_count{0};
  int rod_count{0};
  int frame_count{0};
  int steps{0};
  Real sim_seconds{0.0};
  Real wall_seconds{0.0};
  Real realtime_ratio{0.0};
  int tip_particle{-1};
  Real tip_sag{0.0};
  std::optional<Real> detach_time;
  Real ke_peak{0.0};
  Real ke_final{0.0};
  bool reached_quiescence{false};
};

struct RunOutput {
  RunMetrics metrics;
  FrameSeries frames;
  std::vector<FractureEvent> events;
  std::filesystem::path out_dir;
};

/// Compiled plant plus the simulation state and resolved selectors of a scene.
struct PreparedScene {
  PlantGraph graph;
  SimState state;
  int tip_node{-1};
  int tip_particle{-1};
  Real trajectory_start{0.0};
  std::vector<std::string> warnings;
};

PreparedScene prepare_scene(const SceneConfig& config);

/// Vertical drop of the tip particle between the first and last frame.
Real tip_sag_from_frames(const FrameSeries& frames, int tip_particle);

/// Runs the scene to its configured duration (or quiescence when enabled) and
/// writes frames.csv, events.csv and metrics.json into out_dir.
RunOutput run(const SceneConfig& config, const std::filesystem::path& out_dir);

void write_metrics_json(const std::filesystem::path& path, const RunMetrics& metrics);

struct SweepRow {
  Real value{0.0};
  RunMetrics metrics;
};

struct SweepResult {
  std::string parameter;
  std::string metric;  // column the verdict is about
  std::vector<SweepRow> rows;
  std::string verdict;  // strictly increasing / strictly decreasing / non-monotonic
};

/// One run per value, otherwise identical scene. Writes sweep.csv and
/// summary.txt plus one run directory per value; a failing member run aborts
/// the sweep but leaves the completed results on disk.
SweepResult sweep(const SceneConfig& config, const std::string& parameter,
                  const std::vector<Real>& values, const std::filesystem::path& out_dir);

struct BenchResult {
  int node_count{0};
  int rod_count{0};
  Real sim_seconds{0.0};
  Real wall_seconds{0.0};
  Real realtime_ratio{0.0};
  std::string hardware;
};

/// Measures simulated seconds per wall second over at least `sim_seconds` of
/// simulation, without writing frames.
BenchResult benchmark(const SceneConfig& config, Real sim_seconds = 10.0);

std::string hardware_descriptor();

}  // namespace plantsim
