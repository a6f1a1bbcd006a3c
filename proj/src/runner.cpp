#include "plantsim/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

namespace plantsim {

using nlohmann::json;

PreparedScene prepare_scene(const SceneConfig& config) {
  PreparedScene out;
  CompiledPlant compiled = compile_plant(config.curves, config.compiler);
  out.graph = std::move(compiled.graph);
  out.warnings = compiled.warnings;

  for (const auto& spec : config.organs) {
    OrganAttachment organ = spec.organ;
    organ.node = resolve_node(out.graph, spec.where);
    out.graph.organs.push_back(organ);
  }

  std::set<int> pins;
  if (config.pin_root) pins.insert(out.graph.root);
  for (const auto& pin : config.pins) pins.insert(resolve_node(out.graph, pin));

  out.state = build_sim_state(out.graph, config.material, pins, config.templates);

  if (config.tip) {
    out.tip_node = resolve_node(out.graph, *config.tip);
  } else {
    // default: the node farthest from the root
    Real best = -1.0;
    out.tip_node = out.graph.root;
    for (size_t i = 0; i < out.graph.nodes.size(); ++i) {
      const Real d = (out.graph.nodes[i].position - out.graph.nodes[out.graph.root].position).norm();
      if (d > best) {
        best = d;
        out.tip_node = static_cast<int>(i);
      }
    }
  }
  out.tip_particle = out.tip_node;  // graph nodes map 1:1 onto the leading particles

  out.trajectory_start = 0.0;
  bool first = true;
  for (const auto& obstacle : config.obstacles) {
    if (obstacle.trajectory.empty()) continue;
    const Real t0 = obstacle.trajectory.front().t;
    out.trajectory_start = first ? t0 : std::min(out.trajectory_start, t0);
    first = false;
  }
  return out;
}

Real tip_sag_from_frames(const FrameSeries& frames, int tip_particle) {
  if (frames.positions.empty() || tip_particle < 0 || tip_particle >= frames.particle_count)
    return 0.0;
  return frames.positions.front()[tip_particle].z() - frames.positions.back()[tip_particle].z();
}

void write_metrics_json(const std::filesystem::path& path, const RunMetrics& m) {
  json doc;
  doc["node_count"] = m.node_count;
  doc["rod_count"] = m.rod_count;
  doc["frame_count"] = m.frame_count;
  doc["steps"] = m.steps;
  doc["sim_seconds"] = m.sim_seconds;
  doc["wall_seconds"] = m.wall_seconds;
  doc["realtime_ratio"] = m.realtime_ratio;
  doc["tip_particle"] = m.tip_particle;
  doc["tip_sag"] = m.tip_sag;
  if (m.detach_time)
    doc["detach_time"] = *m.detach_time;
  else
    doc["detach_time"] = nullptr;
  doc["ke_peak"] = m.ke_peak;
  doc["ke_final"] = m.ke_final;
  doc["reached_quiescence"] = m.reached_quiescence;
  std::ofstream out(path);
  out << doc.dump(2) << "\n";
}

RunOutput run(const SceneConfig& config, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  RunOutput out;
  out.out_dir = out_dir;

  PreparedScene prepared = prepare_scene(config);
  SimState& state = prepared.state;
  for (const auto& w : prepared.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());

  out.metrics.node_count = static_cast<int>(prepared.graph.nodes.size());
  out.metrics.rod_count = state.live_segment_count();
  out.metrics.tip_particle = prepared.tip_particle;

  const int steps = static_cast<int>(std::llround(config.duration / config.solver.dt));
  const std::vector<int> orientation_map = frame_orientation_map(state);
  append_frame(out.frames, state, 0, orientation_map);

  const auto wall_start = std::chrono::steady_clock::now();
  int executed = 0;
  for (int s = 1; s <= steps; ++s) {
    try {
      step(state, config.solver, config.obstacles, &config.fracture, &out.events);
    } catch (const SimAbort& abort) {
      throw SimAbort("step " + std::to_string(s) + ": " + abort.what());
    }
    executed = s;
    const Real ke = kinetic_energy(state);
    out.metrics.ke_peak = std::max(out.metrics.ke_peak, ke);
    out.metrics.ke_final = ke;
    const bool quiescent = ke < config.quiescence_ke;
    const bool last = s == steps || (config.stop_at_quiescence && quiescent);
    if (s % config.frame_stride == 0 || last) {
      if (out.frames.frame_steps.back() != s) append_frame(out.frames, state, s, orientation_map);
    }
    if (last && config.stop_at_quiescence && quiescent) {
      out.metrics.reached_quiescence = true;
      break;
    }
  }
  const auto wall_end = std::chrono::steady_clock::now();

  out.metrics.steps = executed;
  out.metrics.sim_seconds = executed * config.solver.dt;
  out.metrics.wall_seconds = std::chrono::duration<Real>(wall_end - wall_start).count();
  out.metrics.realtime_ratio =
      out.metrics.wall_seconds > 0.0 ? out.metrics.sim_seconds / out.metrics.wall_seconds : 0.0;
  out.metrics.frame_count = static_cast<int>(out.frames.positions.size());
  if (!out.metrics.reached_quiescence)
    out.metrics.reached_quiescence = out.metrics.ke_final < config.quiescence_ke;
  out.metrics.tip_sag = tip_sag_from_frames(out.frames, prepared.tip_particle);
  if (const auto detach = detach_time(out.events, prepared.trajectory_start))
    out.metrics.detach_time = *detach;

  write_frames_csv(out_dir / "frames.csv", out.frames);
  if (config.binary_frames) write_frames_binary(out_dir / "frames.bin", out.frames);
  write_events_csv(out_dir / "events.csv", out.events);
  write_metrics_json(out_dir / "metrics.json", out.metrics);
  return out;
}

namespace {

std::string monotonic_verdict(const std::vector<Real>& column) {
  if (column.size() < 2) return "constant";
  bool increasing = true, decreasing = true;
  for (size_t i = 1; i < column.size(); ++i) {
    increasing = increasing && column[i] > column[i - 1];
    decreasing = decreasing && column[i] < column[i - 1];
  }
  if (increasing) return "strictly increasing";
  if (decreasing) return "strictly decreasing";
  return "non-monotonic";
}

}  // namespace

SweepResult sweep(const SceneConfig& config, const std::string& parameter,
                  const std::vector<Real>& values, const std::filesystem::path& out_dir) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  std::filesystem::create_directories(out_dir);

  SweepResult result;
  result.parameter = parameter;
  result.metric =
      (parameter == "c_s_max" || parameter == "c_b_max") ? "detach_time" : "tip_sag";

  const auto flush = [&]() {
    std::ofstream csv(out_dir / "sweep.csv");
    csv << parameter << ",node_count,rod_count,tip_sag,detach_time,realtime_ratio\n";
    char buf[256];
    for (const auto& row : result.rows) {
      std::snprintf(buf, sizeof(buf), "%.17g,%d,%d,%.17g,", row.value, row.metrics.node_count,
                    row.metrics.rod_count, row.metrics.tip_sag);
      csv << buf;
      if (row.metrics.detach_time)
        csv << *row.metrics.detach_time;
      else
        csv << "none";
      std::snprintf(buf, sizeof(buf), ",%.6g\n", row.metrics.realtime_ratio);
      csv << buf;
    }
    std::vector<Real> column;
    for (const auto& row : result.rows) {
      if (result.metric == "detach_time")
        column.push_back(row.metrics.detach_time ? *row.metrics.detach_time
                                                 : std::numeric_limits<Real>::infinity());
      else
        column.push_back(row.metrics.tip_sag);
    }
    result.verdict = monotonic_verdict(column);
    std::ofstream summary(out_dir / "summary.txt");
    summary << "sweep over " << parameter << " (" << result.rows.size() << "/" << values.size()
            << " runs)\n";
    for (const auto& row : result.rows) {
      summary << "  " << parameter << " = " << row.value << "  ->  " << result.metric << " = ";
      if (result.metric == "detach_time" && !row.metrics.detach_time)
        summary << "none";
      else
        summary << (result.metric == "detach_time" ? *row.metrics.detach_time
                                                   : row.metrics.tip_sag);
      summary << "  (nodes " << row.metrics.node_count << ", rods " << row.metrics.rod_count
              << ")\n";
    }
    summary << result.metric << ": " << result.verdict << "\n";
  };

  for (size_t i = 0; i < values.size(); ++i) {
    SceneConfig member = config;
    apply_sweep_value(member, parameter, values[i]);
    const std::filesystem::path member_dir =
        out_dir / (parameter + "_" + std::to_string(i));
    try {
      RunOutput member_out = run(member, member_dir);
      result.rows.push_back({values[i], member_out.metrics});
    } catch (...) {
      flush();  // keep the partial table on disk
      throw;
    }
  }
  flush();
  return result;
}

std::string hardware_descriptor() {
  std::string model = "unknown cpu";
  std::ifstream cpuinfo("/proc/cpuinfo");
  std::string line;
  while (std::getline(cpuinfo, line)) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) {
        model = line.substr(colon + 1);
        const auto start = model.find_first_not_of(' ');
        if (start != std::string::npos) model = model.substr(start);
      }
      break;
    }
  }
  return model + ", " + std::to_string(std::thread::hardware_concurrency()) + " threads";
}

BenchResult benchmark(const SceneConfig& config, Real sim_seconds) {
  PreparedScene prepared = prepare_scene(config);
  SimState& state = prepared.state;

  BenchResult result;
  result.node_count = static_cast<int>(prepared.graph.nodes.size());
  result.rod_count = state.live_segment_count();
  result.hardware = hardware_descriptor();

  const int steps =
      std::max(1, static_cast<int>(std::ceil(sim_seconds / config.solver.dt)));
  const auto start = std::chrono::steady_clock::now();
  for (int s = 1; s <= steps; ++s)
    step(state, config.solver, config.obstacles, &config.fracture, nullptr);
  const auto end = std::chrono::steady_clock::now();

  result.sim_seconds = steps * config.solver.dt;
  result.wall_seconds = std::chrono::duration<Real>(end - start).count();
  result.realtime_ratio = result.sim_seconds / result.wall_seconds;
  return result;
}

}  // namespace plantsim
