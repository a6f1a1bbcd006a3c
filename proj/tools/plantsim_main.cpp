#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "plantsim/runner.hpp"

namespace fs = std::filesystem;
using namespace plantsim;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSimAbort = 3;
constexpr int kExitDisconnected = 4;

fs::path output_root() {
  if (const char* env = std::getenv("PLANTSIM_OUT")) return fs::path(env);
  return fs::path("out");
}

fs::path default_out_dir(const fs::path& scene, const std::string& suffix) {
  return output_root() / (scene.stem().string() + suffix);
}

void print_warnings(const SceneConfig& config) {
  for (const auto& w : config.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
}

int cmd_validate(const fs::path& scene_path) {
  const SceneConfig config = load_scene(scene_path);
  print_warnings(config);
  std::fputs(config.dump_canonical().c_str(), stdout);
  return 0;
}

int cmd_compile(const fs::path& scene_path, const std::string& out_file) {
  const SceneConfig config = load_scene(scene_path);
  print_warnings(config);
  const PreparedScene prepared = prepare_scene(config);
  for (const auto& w : prepared.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());

  int key_nodes = 0;
  for (const auto& node : prepared.graph.nodes) key_nodes += node.key() ? 1 : 0;
  std::printf("plant: %s\n", config.plant_reference.c_str());
  std::printf("nodes: %zu (%d key)\n", prepared.graph.nodes.size(), key_nodes);
  std::printf("edges: %zu\n", prepared.graph.edges.size());
  std::printf("organs: %zu\n", prepared.graph.organs.size());
  std::printf("rods: %d\n", prepared.state.live_segment_count());
  std::printf("bend pairs: %d\n", prepared.state.live_pair_count());

  if (!out_file.empty()) {
    nlohmann::json doc;
    doc["root"] = prepared.graph.root;
    doc["nodes"] = nlohmann::json::array();
    for (const auto& node : prepared.graph.nodes) {
      doc["nodes"].push_back({{"p", {node.position.x(), node.position.y(), node.position.z()}},
                              {"r", node.radius},
                              {"junction", node.junction},
                              {"leaf", node.leaf}});
    }
    doc["edges"] = nlohmann::json::array();
    for (const auto& e : prepared.graph.edges) doc["edges"].push_back({e[0], e[1]});
    doc["organs"] = nlohmann::json::array();
    for (const auto& organ : prepared.graph.organs) {
      doc["organs"].push_back({{"node", organ.node},
                               {"kind", organ.kind == OrganKind::Fruit ? "fruit" : "leaf"}});
    }
    doc["rod_count"] = prepared.state.live_segment_count();
    std::ofstream out(out_file);
    if (!out) throw ConfigError("cannot write " + out_file);
    out << doc.dump(2) << "\n";
    std::printf("graph written to %s\n", out_file.c_str());
  }
  return 0;
}

int cmd_run(const fs::path& scene_path, fs::path out_dir, int stride_override) {
  SceneConfig config = load_scene(scene_path);
  print_warnings(config);
  if (stride_override > 0) config.frame_stride = stride_override;
  if (out_dir.empty()) out_dir = default_out_dir(scene_path, "");
  const RunOutput out = run(config, out_dir);
  std::printf("steps: %d, frames: %d, rods: %d\n", out.metrics.steps, out.metrics.frame_count,
              out.metrics.rod_count);
  std::printf("tip sag: %.6g m\n", out.metrics.tip_sag);
  if (out.metrics.detach_time)
    std::printf("detach time: %.6g s\n", *out.metrics.detach_time);
  else
    std::printf("detach time: none\n");
  std::printf("realtime ratio: %.3g\n", out.metrics.realtime_ratio);
  std::printf("output: %s\n", out_dir.string().c_str());
  return 0;
}

int cmd_sweep(const fs::path& scene_path, const std::string& parameter,
              const std::vector<double>& values, fs::path out_dir) {
  const SceneConfig config = load_scene(scene_path);
  print_warnings(config);
  if (out_dir.empty()) out_dir = default_out_dir(scene_path, "_sweep_" + parameter);
  const SweepResult result = sweep(config, parameter, {values.begin(), values.end()}, out_dir);
  for (const auto& row : result.rows) {
    std::printf("%s = %-12g %s = ", parameter.c_str(), row.value, result.metric.c_str());
    if (result.metric == "detach_time") {
      if (row.metrics.detach_time)
        std::printf("%g s\n", *row.metrics.detach_time);
      else
        std::printf("none\n");
    } else {
      std::printf("%g m\n", row.metrics.tip_sag);
    }
  }
  std::printf("%s: %s\n", result.metric.c_str(), result.verdict.c_str());
  std::printf("output: %s\n", out_dir.string().c_str());
  return 0;
}

int cmd_bench(const fs::path& scene_path, double sim_seconds) {
  const SceneConfig config = load_scene(scene_path);
  print_warnings(config);
  const BenchResult result = benchmark(config, sim_seconds);
  std::printf("rods: %d (nodes %d)\n", result.rod_count, result.node_count);
  std::printf("simulated %.3g s in %.3g s wall\n", result.sim_seconds, result.wall_seconds);
  std::printf("realtime ratio: %.3f\n", result.realtime_ratio);
  std::printf("hardware: %s\n", result.hardware.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"plantsim - position-and-orientation-based rod simulator for plants"};
  app.require_subcommand(1);

  std::string scene;
  std::string out_dir;
  std::string graph_out;
  std::string parameter;
  std::vector<double> values;
  int stride = 0;
  double sim_seconds = 10.0;

  auto* validate = app.add_subcommand("validate", "load a scene and print its canonical form");
  validate->add_option("scene", scene, "scene file")->required();

  auto* compile = app.add_subcommand("compile", "compile the plant only and report counts");
  compile->add_option("scene", scene, "scene file")->required();
  compile->add_option("--out", graph_out, "write the compiled graph as JSON");

  auto* run_cmd = app.add_subcommand("run", "simulate a scene and write frames/events/metrics");
  run_cmd->add_option("scene", scene, "scene file")->required();
  run_cmd->add_option("-o,--output", out_dir, "output directory");
  run_cmd->add_option("--stride", stride, "override the frame stride");

  auto* sweep_cmd = app.add_subcommand("sweep", "run a parameter study");
  sweep_cmd->add_option("scene", scene, "scene file")->required();
  sweep_cmd->add_option("--param", parameter, "sigma_distance|stiffness|density|c_s_max|c_b_max")
      ->required();
  sweep_cmd->add_option("--values", values, "parameter values")->required()->delimiter(',');
  sweep_cmd->add_option("-o,--output", out_dir, "output directory");

  auto* bench_cmd = app.add_subcommand("bench", "measure the simulation-to-real-time ratio");
  bench_cmd->add_option("scene", scene, "scene file")->required();
  bench_cmd->add_option("--sim-seconds", sim_seconds, "simulated window, >= 10 s by default");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(scene);
    if (compile->parsed()) return cmd_compile(scene, graph_out);
    if (run_cmd->parsed()) return cmd_run(scene, out_dir, stride);
    if (sweep_cmd->parsed()) return cmd_sweep(scene, parameter, values, out_dir);
    if (bench_cmd->parsed()) return cmd_bench(scene, sim_seconds);
  } catch (const DisconnectedPlantError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitDisconnected;
  } catch (const SimAbort& e) {
    std::fprintf(stderr, "error: simulation aborted: %s\n", e.what());
    return kExitSimAbort;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
  return 0;
}
