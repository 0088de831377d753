#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "crossdiff/runner.hpp"
#include "doctest.h"

using namespace crossdiff;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& sub) {
  const fs::path dir = fs::temp_directory_path() / "crossdiff_runner_test" / sub;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(static_cast<bool>(in));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

RunConfig tiny(const std::string& name) {
  RunConfig cfg;
  cfg.name = name;
  cfg.mesh_left = 0.0;
  cfg.mesh_right = 1.0;
  cfg.mesh_cells = 20;
  cfg.flux_family = FluxFamily::BT;
  cfg.a = {{{1.0, 1.0}, {1.0, 1.0}}};
  cfg.c1 = cfg.c2 = 0.1;
  cfg.init1.terms = {{InitTerm::Kind::Constant, 0.2, 0, 0, 0},
                     {InitTerm::Kind::Bump, 0, 0.35, 0.02, 1.0}};
  cfg.init2.terms = {{InitTerm::Kind::Constant, 0.2, 0, 0, 0},
                     {InitTerm::Kind::Bump, 0, 0.65, 0.02, 1.0}};
  cfg.tau = 1e-3;
  cfg.tol = 1e-9;
  cfg.mode = RunMode::Time;
  cfg.t_end = 0.01;
  cfg.snapshots = {0.0, 0.01};
  return cfg;
}

}  // namespace

TEST_CASE("output directory resolution") {
  RunConfig cfg = tiny("resolver");
  RunOverrides ov;

  unsetenv("CROSSDIFF_OUT");
  CHECK(resolve_out_dir(cfg, ov) == "out/resolver");

  setenv("CROSSDIFF_OUT", "/tmp/cd_env", 1);
  CHECK(resolve_out_dir(cfg, ov) == "/tmp/cd_env/resolver");

  cfg.output_dir = "explicit/dir";
  CHECK(resolve_out_dir(cfg, ov) == "explicit/dir");

  ov.out_dir = "override/dir";
  CHECK(resolve_out_dir(cfg, ov) == "override/dir");
  unsetenv("CROSSDIFF_OUT");
}

TEST_CASE("a time-mode run writes the full artifact set") {
  const fs::path dir = scratch("time_run");
  RunOverrides ov;
  ov.out_dir = dir.string();
  const RunConfig cfg = [&] {
    RunConfig c = tiny("artifacts");
    c.has_zoom = true;
    c.zoom_lo = 0.4;
    c.zoom_hi = 0.6;
    return c;
  }();

  const RunResult res = run(cfg, ov);
  CHECK(res.name == "artifacts");
  CHECK(res.out_dir == dir.string());
  CHECK(res.delta == 0.0);
  CHECK_FALSE(res.stationary);
  CHECK_FALSE(res.particles.has_value());
  CHECK(res.traj.state.step == 10);

  for (const char* f :
       {"config.out.conf", "diagnostics.csv", "profile_t0.csv", "profile_t0.svg",
        "profile_t0.01.csv", "profile_t0.01.svg", "zoom_t0.csv", "zoom_t0.01.csv",
        "profile_final.csv", "profile_final.svg"}) {
    CAPTURE(f);
    CHECK(fs::exists(dir / f));
  }

  SUBCASE("profile files carry every node in order") {
    const auto rows = lines_of(slurp(dir / "profile_final.csv"));
    REQUIRE(rows.size() == 2 + 21);
    CHECK(rows[0] == "# crossdiff v1");
    CHECK(rows[1] == "x,u1,u2");
    double prev = -1.0;
    for (size_t r = 2; r < rows.size(); ++r) {
      const double x = std::strtod(rows[r].c_str(), nullptr);
      CHECK(x > prev);
      prev = x;
    }
    CHECK(prev == 1.0);
  }
  SUBCASE("zoom files keep only the window") {
    const auto rows = lines_of(slurp(dir / "zoom_t0.csv"));
    REQUIRE(rows.size() == 2 + 5);  // nodes 0.4, 0.45, 0.5, 0.55, 0.6
    CHECK(std::strtod(rows[2].c_str(), nullptr) == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(std::strtod(rows.back().c_str(), nullptr) == doctest::Approx(0.6).epsilon(1e-14));
  }
  SUBCASE("diagnostics track every step") {
    const auto rows = lines_of(slurp(dir / "diagnostics.csv"));
    REQUIRE(rows.size() == 2 + 11);
    CHECK(rows[1].rfind("n,t,mass1,mass2,entropy1,entropy2,", 0) == 0);
  }
  SUBCASE("the config echo reloads to the same run") {
    const std::string echo = slurp(dir / "config.out.conf");
    CHECK(echo.rfind("#", 0) == 0);
    const RunConfig again = parse_config(echo, cfg.name);
    CHECK(again.mesh_cells == cfg.mesh_cells);
    CHECK(again.snapshots == cfg.snapshots);
    CHECK(again.output_dir == dir.string());
    CHECK(again.zoom_lo == cfg.zoom_lo);
  }
  SUBCASE("reruns are byte-identical") {
    const std::string diag = slurp(dir / "diagnostics.csv");
    const std::string prof = slurp(dir / "profile_final.csv");
    const std::string svg = slurp(dir / "profile_final.svg");
    run(cfg, ov);
    CHECK(slurp(dir / "diagnostics.csv") == diag);
    CHECK(slurp(dir / "profile_final.csv") == prof);
    CHECK(slurp(dir / "profile_final.svg") == svg);
  }
  fs::remove_all(dir.parent_path());
}

TEST_CASE("snapshot overrides replace the configured list") {
  const fs::path dir = scratch("snap_override");
  RunOverrides ov;
  ov.out_dir = dir.string();
  ov.snapshots = {0.005};

  run(tiny("snaps"), ov);
  CHECK(fs::exists(dir / "profile_t0.005.csv"));
  CHECK_FALSE(fs::exists(dir / "profile_t0.csv"));
  CHECK_FALSE(fs::exists(dir / "profile_t0.01.csv"));
  CHECK(fs::exists(dir / "profile_final.csv"));
  fs::remove_all(dir.parent_path());
}

TEST_CASE("a steady-mode run synthesizes initial and final snapshots") {
  const fs::path dir = scratch("steady_run");
  RunConfig cfg = tiny("steady");
  cfg.mode = RunMode::Steady;
  cfg.t_end = 0.0;
  cfg.snapshots.clear();
  cfg.max_steps = 50;
  cfg.init1.terms = {{InitTerm::Kind::Constant, 1.0, 0, 0, 0}};
  cfg.init2.terms = {{InitTerm::Kind::Constant, 2.0, 0, 0, 0}};
  RunOverrides ov;
  ov.out_dir = dir.string();

  const RunResult res = run(cfg, ov);
  CHECK(res.stationary);
  CHECK(res.traj.state.step == 1);
  REQUIRE(res.traj.snapshots.size() == 2);
  CHECK(res.traj.snapshots[0].step == 0);
  CHECK(res.traj.snapshots[1].step == 1);
  CHECK(fs::exists(dir / "profile_t0.csv"));
  CHECK(fs::exists(dir / "profile_t0.001.csv"));
  CHECK(fs::exists(dir / "profile_final.csv"));
  fs::remove_all(dir.parent_path());
}

TEST_CASE("particle companion artifacts") {
  const fs::path dir = scratch("particles");
  RunConfig cfg = tiny("withp");
  cfg.snapshots.clear();
  cfg.t_end = 0.005;
  cfg.c1 = cfg.c2 = 0.05;
  cfg.particles.enabled = true;
  cfg.particles.n = 50;
  cfg.particles.sigma1 = cfg.particles.sigma2 = std::sqrt(0.1);
  cfg.particles.seed = 3;
  cfg.particles.bandwidth = 0.05;
  cfg.particles.kernel_eps = 0.05;
  RunOverrides ov;
  ov.out_dir = dir.string();

  const RunResult res = run(cfg, ov);
  REQUIRE(res.particles.has_value());
  CHECK(res.particles->n == 50);
  CHECK(res.particles->l1_u1 >= 0.0);
  CHECK(res.particles->l1_u1 <= 2.0);
  CHECK(res.particles->boundary_frac1 >= 0.0);
  CHECK(res.particles->boundary_frac1 <= 1.0);
  for (const char* f : {"particles.csv", "particle_density.csv", "particle_report.csv"}) {
    CAPTURE(f);
    CHECK(fs::exists(dir / f));
  }
  const auto rows = lines_of(slurp(dir / "particles.csv"));
  CHECK(rows.size() == 3 + 100);  // marker, count comment, header, 50 per species

  SUBCASE("same seed reproduces the cloud, another seed moves it") {
    const std::string cloud = slurp(dir / "particles.csv");
    run(cfg, ov);
    CHECK(slurp(dir / "particles.csv") == cloud);
    RunOverrides reseeded = ov;
    reseeded.seed = 4;
    run(cfg, reseeded);
    CHECK(slurp(dir / "particles.csv") != cloud);
  }
  fs::remove_all(dir.parent_path());
}

TEST_CASE("sweeps") {
  SUBCASE("duplicate names are rejected upfront") {
    CHECK_THROWS_WITH_AS(sweep({tiny("dup"), tiny("dup")}),
                         doctest::Contains("duplicate"), ConfigError);
  }
  SUBCASE("runs land in sibling directories with a joint summary") {
    const fs::path base = scratch("sweep_two");
    RunOverrides ov;
    ov.out_dir = base.string();
    RunConfig b = tiny("second");
    b.t_end = 0.005;
    const auto results = sweep({tiny("first"), b}, ov);
    REQUIRE(results.size() == 2);
    CHECK(results[0].out_dir == (base / "first").string());
    CHECK(fs::exists(base / "first" / "diagnostics.csv"));
    CHECK(fs::exists(base / "second" / "diagnostics.csv"));
    const auto rows = lines_of(slurp(base / "sweep_summary.csv"));
    REQUIRE(rows.size() == 4);
    CHECK(rows[1].rfind("name,steps,", 0) == 0);
    CHECK(rows[2].rfind("first,10,", 0) == 0);
    CHECK(rows[3].rfind("second,5,", 0) == 0);
    CHECK_FALSE(fs::exists(base / "delta_scaling.csv"));
    fs::remove_all(base.parent_path());
  }
  SUBCASE("a family differing only in delta gets the scaling table") {
    const fs::path base = scratch("sweep_delta");
    RunOverrides ov;
    ov.out_dir = base.string();
    RunConfig d0 = tiny("d0");
    RunConfig d1 = tiny("d1");
    d1.flux_family = FluxFamily::BTDelta;
    d1.flux_delta = 1e-3;
    RunConfig d2 = tiny("d2");
    d2.flux_family = FluxFamily::BTDelta;
    d2.flux_delta = 1e-2;
    const auto results = sweep({d0, d1, d2}, ov);
    REQUIRE(results.size() == 3);
    REQUIRE(fs::exists(base / "delta_scaling.csv"));
    const auto rows = lines_of(slurp(base / "delta_scaling.csv"));
    REQUIRE(rows.size() == 5);
    CHECK(rows[1] == "delta,product");
    CHECK(rows[2].rfind("0,", 0) == 0);  // delta = 0 row has zero product
    CHECK(rows[3].rfind("0.001,", 0) == 0);
    CHECK(rows[4].rfind("0.01,", 0) == 0);
    fs::remove_all(base.parent_path());
  }
  SUBCASE("one failing run does not sink the others") {
    const fs::path base = scratch("sweep_fail");
    RunOverrides ov;
    ov.out_dir = base.string();
    RunConfig bad = tiny("bad");
    bad.mode = RunMode::Steady;
    bad.max_steps = 2;
    bad.tol_s = 1e-14;
    const auto results = sweep({tiny("good"), bad}, ov);
    REQUIRE(results.size() == 1);
    CHECK(results[0].name == "good");
    const auto rows = lines_of(slurp(base / "sweep_summary.csv"));
    REQUIRE(rows.size() == 3);
    CHECK(rows[2].rfind("good,", 0) == 0);
    fs::remove_all(base.parent_path());
  }
  SUBCASE("an empty sweep still writes the summary header") {
    const fs::path base = scratch("sweep_empty");
    RunOverrides ov;
    ov.out_dir = base.string();
    CHECK(sweep({}, ov).empty());
    const auto rows = lines_of(slurp(base / "sweep_summary.csv"));
    REQUIRE(rows.size() == 2);
    fs::remove_all(base.parent_path());
  }
}
