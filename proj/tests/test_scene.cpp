#include <doctest.h>

#include <fstream>
#include <sstream>

#include "plantsim/runner.hpp"
#include "support.hpp"

using namespace plantsim;
using test_support::test_dir;

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// tiny vertical stem with a fruit near the top
void write_plant(const std::filesystem::path& path) {
  write_file(path, R"({
  "curves": [
    {"points": [[0, 0, 0], [0, 0, 0.12]], "radius": 0.005}
  ],
  "root": {"curve": 0, "end": "first"},
  "sigma_connect": 0.02,
  "sigma_distance": 0.02,
  "organs": [
    {"kind": "fruit", "at": [0, 0, 0.12], "radius": 0.012, "mass": 0.01}
  ]
})");
}

std::filesystem::path write_minimal_scene(const std::filesystem::path& dir,
                                          const std::string& extra = "") {
  write_plant(dir / "plant.json");
  write_file(dir / "scene.json", "{\n  \"plant\": \"plant.json\",\n  \"duration\": 0.25" + extra +
                                     "\n}\n");
  return dir / "scene.json";
}

}  // namespace

TEST_CASE("a minimal scene loads with the documented defaults") {
  const auto dir = test_dir("scene_minimal");
  const SceneConfig cfg = load_scene(write_minimal_scene(dir));
  CHECK(cfg.material.young_modulus == doctest::Approx(2e7));
  CHECK(cfg.material.poisson_ratio == doctest::Approx(0.3));
  CHECK(cfg.material.density == doctest::Approx(300.0));
  CHECK(cfg.solver.dt == doctest::Approx(1.0 / 120.0));
  CHECK(cfg.solver.substeps == 8);
  CHECK(cfg.solver.iterations == 20);
  CHECK(cfg.solver.gravity.isApprox(Vec3(0, 0, -9.81)));
  CHECK(cfg.solver.velocity_damping == doctest::Approx(0.1));
  CHECK(cfg.fracture.stretch_limit == doctest::Approx(0.1));
  CHECK(cfg.fracture.bend_limit == doctest::Approx(0.31));
  CHECK(cfg.fracture.structural_scale == doctest::Approx(10.0));
  CHECK(cfg.pin_root);
  CHECK(cfg.frame_stride == 8);
  CHECK(cfg.compiler.sigma_distance == doctest::Approx(0.02));
  CHECK(cfg.warnings.empty());
}

TEST_CASE("the reference configuration loads") {
  const auto dir = test_dir("scene_reference");
  write_plant(dir / "plant.json");
  write_file(dir / "scene.json", R"({
  "plant": "plant.json",
  "material": {"young_modulus": 2e7, "poisson_ratio": 0.3, "density": 300},
  "compiler": {"sigma_distance": 0.02}
})");
  const SceneConfig cfg = load_scene(dir / "scene.json");
  CHECK(cfg.material.young_modulus == doctest::Approx(2e7));
  CHECK(cfg.material.density == doctest::Approx(300.0));
  CHECK(cfg.compiler.sigma_distance == doctest::Approx(0.02));
}

TEST_CASE("out-of-range parameters are rejected") {
  const auto dir = test_dir("scene_ranges");
  write_plant(dir / "plant.json");
  write_file(dir / "scene.json",
             R"({"plant": "plant.json", "material": {"density": -5}})");
  CHECK_THROWS_AS(load_scene(dir / "scene.json"), ConfigError);
  write_file(dir / "scene.json",
             R"({"plant": "plant.json", "material": {"young_modulus": 1e3}})");
  CHECK_THROWS_AS(load_scene(dir / "scene.json"), ConfigError);
  write_file(dir / "scene.json", R"({"plant": "plant.json", "solver": {"substeps": 0}})");
  CHECK_THROWS_AS(load_scene(dir / "scene.json"), ConfigError);
}

TEST_CASE("densities outside the typical band only warn") {
  const auto dir = test_dir("scene_warn");
  write_plant(dir / "plant.json");
  write_file(dir / "scene.json", R"({"plant": "plant.json", "material": {"density": 150}})");
  const SceneConfig cfg = load_scene(dir / "scene.json");
  REQUIRE(cfg.warnings.size() == 1);
  CHECK(cfg.warnings[0].find("band") != std::string::npos);
}

TEST_CASE("unknown keys are errors with the key named") {
  const auto dir = test_dir("scene_unknown");
  write_plant(dir / "plant.json");
  write_file(dir / "scene.json", R"({"plant": "plant.json", "sigma_distanse": 0.02})");
  try {
    load_scene(dir / "scene.json");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("sigma_distanse") != std::string::npos);
  }
  write_file(dir / "scene.json", R"({"plant": "plant.json", "solver": {"dtt": 0.01}})");
  CHECK_THROWS_AS(load_scene(dir / "scene.json"), ConfigError);
}

TEST_CASE("missing referenced files are errors") {
  const auto dir = test_dir("scene_missing");
  write_file(dir / "scene.json", R"({"plant": "nowhere.json"})");
  CHECK_THROWS_AS(load_scene(dir / "scene.json"), ConfigError);
}

TEST_CASE("the canonical form round-trips exactly") {
  const auto dir = test_dir("scene_roundtrip");
  write_plant(dir / "plant.json");
  write_file(dir / "scene.json", R"({
  "plant": "plant.json",
  "material": {"young_modulus": 1.7e7},
  "obstacles": [
    {"name": "probe",
     "primitives": [{"type": "sphere", "center": [0.3, 0, 0.1], "radius": 0.05}],
     "pose": {"position": [0, 0, 0]}}
  ],
  "pins": [{"at": [0, 0, 0]}],
  "tip": {"at": [0, 0, 0.12]}
})");
  const SceneConfig first = load_scene(dir / "scene.json");
  write_file(dir / "canonical.json", first.dump_canonical());
  const SceneConfig second = load_scene(dir / "canonical.json");
  CHECK(first.dump_canonical() == second.dump_canonical());
  CHECK(second.material.young_modulus == doctest::Approx(1.7e7));
}

TEST_CASE("sweep values map onto the right fields") {
  const auto dir = test_dir("scene_sweepval");
  SceneConfig cfg = load_scene(write_minimal_scene(dir));
  apply_sweep_value(cfg, "stiffness", 3e7);
  CHECK(cfg.material.young_modulus == doctest::Approx(3e7));
  apply_sweep_value(cfg, "density", 600);
  CHECK(cfg.material.density == doctest::Approx(600));
  apply_sweep_value(cfg, "sigma_distance", 0.035);
  CHECK(cfg.compiler.sigma_distance == doctest::Approx(0.035));
  apply_sweep_value(cfg, "c_s_max", 0.25);
  CHECK(cfg.fracture.stretch_limit == doctest::Approx(0.25));
  apply_sweep_value(cfg, "c_b_max", 0.5);
  CHECK(cfg.fracture.bend_limit == doctest::Approx(0.5));
  CHECK_THROWS_AS(apply_sweep_value(cfg, "dt", 0.01), ConfigError);
}

TEST_CASE("a zero-duration run writes a single initial frame and no events") {
  const auto dir = test_dir("scene_zero");
  write_plant(dir / "plant.json");
  write_file(dir / "scene.json", R"({"plant": "plant.json", "duration": 0})");
  const SceneConfig cfg = load_scene(dir / "scene.json");
  const RunOutput out = run(cfg, dir / "out");
  CHECK(out.metrics.frame_count == 1);
  CHECK(out.metrics.steps == 0);
  CHECK(out.events.empty());
  CHECK(std::filesystem::exists(dir / "out" / "frames.csv"));
  CHECK(std::filesystem::exists(dir / "out" / "events.csv"));
  CHECK(std::filesystem::exists(dir / "out" / "metrics.json"));
}

TEST_CASE("frame count follows the stride") {
  const auto dir = test_dir("scene_stride");
  // 0.25 s at 120 Hz = 30 steps; stride 6 -> 5 recorded steps + the initial
  write_plant(dir / "plant.json");
  write_file(dir / "scene.json",
             R"({"plant": "plant.json", "duration": 0.25, "output": {"frame_stride": 6}})");
  const SceneConfig cfg = load_scene(dir / "scene.json");
  const RunOutput out = run(cfg, dir / "out");
  CHECK(out.metrics.steps == 30);
  CHECK(out.metrics.frame_count == 30 / 6 + 1);
}

TEST_CASE("two runs of the same scene are byte-identical") {
  const auto dir = test_dir("scene_determinism");
  const SceneConfig cfg = load_scene(write_minimal_scene(dir));
  run(cfg, dir / "a");
  run(cfg, dir / "b");
  CHECK(read_file(dir / "a" / "frames.csv") == read_file(dir / "b" / "frames.csv"));
  CHECK(read_file(dir / "a" / "events.csv") == read_file(dir / "b" / "events.csv"));
  CHECK(!read_file(dir / "a" / "frames.csv").empty());
}

TEST_CASE("reloaded frames reproduce the tip sag bit for bit") {
  const auto dir = test_dir("scene_reload");
  const SceneConfig cfg = load_scene(write_minimal_scene(dir));
  const RunOutput out = run(cfg, dir / "out");
  const FrameSeries reloaded = load_frames_csv(dir / "out" / "frames.csv");
  CHECK(reloaded.particle_count == out.frames.particle_count);
  REQUIRE(reloaded.positions.size() == out.frames.positions.size());
  const Real sag = tip_sag_from_frames(reloaded, out.metrics.tip_particle);
  CHECK(sag == out.metrics.tip_sag);  // %.17g round-trips doubles exactly

  // and the metrics file agrees bit for bit
  std::ifstream metrics_in(dir / "out" / "metrics.json");
  const auto metrics = nlohmann::json::parse(metrics_in);
  CHECK(metrics["tip_sag"].get<Real>() == sag);
}

TEST_CASE("binary frames mirror the csv") {
  const auto dir = test_dir("scene_binary");
  write_plant(dir / "plant.json");
  write_file(dir / "scene.json",
             R"({"plant": "plant.json", "duration": 0.1, "output": {"binary_frames": true}})");
  const SceneConfig cfg = load_scene(dir / "scene.json");
  const RunOutput out = run(cfg, dir / "out");
  const FrameSeries bin = load_frames_binary(dir / "out" / "frames.bin");
  const FrameSeries csv = load_frames_csv(dir / "out" / "frames.csv");
  REQUIRE(bin.positions.size() == csv.positions.size());
  for (size_t f = 0; f < bin.positions.size(); ++f)
    for (int i = 0; i < bin.particle_count; ++i)
      CHECK(bin.positions[f][i] == csv.positions[f][i]);
  CHECK(out.metrics.frame_count == static_cast<int>(bin.positions.size()));
}

TEST_CASE("event files round-trip") {
  const auto dir = test_dir("scene_events");
  std::vector<FractureEvent> events;
  events.push_back({1.25, 7, FractureTrigger::Stretch, 0.123456789012345});
  events.push_back({2.5, 9, FractureTrigger::Bend, 0.456});
  write_events_csv(dir / "events.csv", events);
  const auto loaded = load_events_csv(dir / "events.csv");
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0].time == events[0].time);
  CHECK(loaded[0].segment == 7);
  CHECK(loaded[0].trigger == FractureTrigger::Stretch);
  CHECK(loaded[0].magnitude == events[0].magnitude);
  CHECK(loaded[1].trigger == FractureTrigger::Bend);
}

TEST_CASE("trajectory files parse, validate and round-trip") {
  const auto dir = test_dir("scene_traj");
  write_file(dir / "traj.csv",
             "t,x,y,z,qw,qx,qy,qz\n0,0,0,0,1,0,0,0\n1,0.5,0,0,0.7071067811865476,0,0,0.7071067811865476\n");
  const auto traj = load_trajectory_csv(dir / "traj.csv");
  REQUIRE(traj.size() == 2);
  CHECK(traj[1].position.x() == doctest::Approx(0.5));
  CHECK(traj[1].rotation.norm() == doctest::Approx(1.0));
  write_trajectory_csv(dir / "roundtrip.csv", traj);
  const auto again = load_trajectory_csv(dir / "roundtrip.csv");
  CHECK(again[1].position.x() == traj[1].position.x());
  CHECK(again[1].rotation.coeffs() == traj[1].rotation.coeffs());

  write_file(dir / "bad.csv", "0,0,0,0,1,0,0,0\n0,1,0,0,1,0,0,0\n");
  CHECK_THROWS(load_trajectory_csv(dir / "bad.csv"));
}

TEST_CASE("grid sdf files round-trip in both encodings") {
  const auto dir = test_dir("scene_grid");
  SdfPrimitive sphere;
  sphere.type = SdfPrimitive::Type::Sphere;
  sphere.a = Vec3(0.01, -0.02, 0.0);
  sphere.radius = 0.5;
  const GridSdf grid = bake_grid_sdf(std::span(&sphere, 1), Vec3(-1, -1, -1), 0.25, 9, 9, 9);
  for (const bool binary : {false, true}) {
    const auto path = dir / (binary ? "grid.bin.sdf" : "grid.txt.sdf");
    save_grid_sdf(path, grid, binary);
    const GridSdf loaded = load_grid_sdf(path);
    CHECK(loaded.nx == grid.nx);
    CHECK(loaded.spacing == grid.spacing);
    REQUIRE(loaded.samples.size() == grid.samples.size());
    if (binary) {
      CHECK(loaded.samples == grid.samples);
    } else {
      for (size_t i = 0; i < grid.samples.size(); ++i)
        CHECK(loaded.samples[i] == doctest::Approx(grid.samples[i]).epsilon(1e-6));
    }
  }
}

TEST_CASE("scenes can reference grid obstacles") {
  const auto dir = test_dir("scene_grid_obstacle");
  SdfPrimitive box;
  box.type = SdfPrimitive::Type::Box;
  box.a = Vec3(0, 0, -0.05);
  box.half_extents = Vec3(0.2, 0.2, 0.05);
  const GridSdf grid = bake_grid_sdf(std::span(&box, 1), Vec3(-0.3, -0.3, -0.2), 0.02, 31, 31, 21);
  save_grid_sdf(dir / "floor.sdf", grid, true);
  write_plant(dir / "plant.json");
  write_file(dir / "scene.json", R"({
  "plant": "plant.json",
  "duration": 0.1,
  "obstacles": [{"name": "floor", "grid": "floor.sdf", "pose": {"position": [0, 0, 0]}}]
})");
  const SceneConfig cfg = load_scene(dir / "scene.json");
  REQUIRE(cfg.obstacles.size() == 1);
  CHECK(cfg.obstacles[0].grid.has_value());
  const RunOutput out = run(cfg, dir / "out");
  CHECK(out.metrics.steps == 12);
}

TEST_CASE("sweeps run every value and report a verdict") {
  const auto dir = test_dir("scene_sweep");
  write_plant(dir / "plant.json");
  write_file(dir / "scene.json", R"({
  "plant": "plant.json",
  "duration": 0.5,
  "solver": {"velocity_damping": 3.0},
  "tip": {"at": [0, 0, 0.12]}
})");
  const SceneConfig cfg = load_scene(dir / "scene.json");
  const SweepResult result = sweep(cfg, "density", {300.0, 900.0}, dir / "out");
  REQUIRE(result.rows.size() == 2);
  CHECK(result.metric == "tip_sag");
  CHECK(std::filesystem::exists(dir / "out" / "sweep.csv"));
  CHECK(std::filesystem::exists(dir / "out" / "summary.txt"));
  CHECK(std::filesystem::exists(dir / "out" / "density_0" / "metrics.json"));
  CHECK((result.verdict == "strictly increasing" || result.verdict == "strictly decreasing" ||
         result.verdict == "non-monotonic"));
}

TEST_CASE("pins and tips resolve by index or position") {
  PlantGraph g = test_support::chain_graph(4, 0.05, Vec3::UnitZ());
  NodeSelector by_index;
  by_index.node = 2;
  CHECK(resolve_node(g, by_index) == 2);
  NodeSelector by_position;
  by_position.at = Vec3(0.001, 0, 0.151);
  CHECK(resolve_node(g, by_position) == 3);
  NodeSelector bad;
  bad.node = 9;
  CHECK_THROWS_AS(resolve_node(g, bad), ConfigError);
}
