#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "crossdiff/config.hpp"
#include "crossdiff/errors.hpp"
#include "crossdiff/runner.hpp"

namespace {

void error_line(const char* kind, const std::exception& e) {
  std::string msg = e.what();
  std::replace(msg.begin(), msg.end(), '\n', ';');
  std::fprintf(stderr, "error: %s: %s\n", kind, msg.c_str());
}

void print_run(const crossdiff::RunResult& r) {
  std::printf("run '%s': %ld steps, t = %g%s, wrote %s\n", r.name.c_str(), r.traj.state.step,
              r.traj.state.time, r.stationary ? " (stationary)" : "", r.out_dir.c_str());
  if (r.particles) {
    const crossdiff::ParticleReport& p = *r.particles;
    std::printf("  particles: n = %d, L1 = (%g, %g), boundary mass = (%g, %g)\n", p.n, p.l1_u1,
                p.l1_u2, p.boundary_frac1, p.boundary_frac2);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entropy-regularized FE solver for two-species cross-diffusion models"};
  app.require_subcommand(1);

  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::vector<double> snapshots;

  std::string run_path;
  CLI::App* cmd_run = app.add_subcommand("run", "execute one config file");
  cmd_run->add_option("config", run_path, "config file")->required();

  std::vector<std::string> sweep_paths;
  CLI::App* cmd_sweep = app.add_subcommand("sweep", "execute several configs concurrently");
  cmd_sweep->add_option("configs", sweep_paths, "config files");

  std::string preset_name;
  bool emit = false;
  CLI::App* cmd_preset = app.add_subcommand("preset", "list presets or emit one as a config");
  cmd_preset->add_option("name", preset_name, "preset name");
  cmd_preset->add_flag("--emit", emit, "print the canonical config to stdout");

  for (CLI::App* cmd : {cmd_run, cmd_sweep}) {
    cmd->add_option("--out", out_dir, "output directory (run: exact; sweep: base)");
    cmd->add_option("--seed", seed, "particle RNG seed override");
    cmd->add_option("--snapshot", snapshots, "snapshot time, repeatable; replaces the config's");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  crossdiff::RunOverrides ov{out_dir, seed, snapshots};
  try {
    if (cmd_run->parsed()) {
      print_run(crossdiff::run(crossdiff::load_config(run_path), ov));
    } else if (cmd_sweep->parsed()) {
      std::vector<crossdiff::RunConfig> cfgs;
      cfgs.reserve(sweep_paths.size());
      for (const std::string& p : sweep_paths) cfgs.push_back(crossdiff::load_config(p));
      const auto results = crossdiff::sweep(cfgs, ov);
      for (const crossdiff::RunResult& r : results) print_run(r);
      std::printf("sweep: %zu/%zu runs ok\n", results.size(), cfgs.size());
      if (results.size() != cfgs.size()) return 3;
    } else if (cmd_preset->parsed()) {
      if (preset_name.empty()) {
        for (const std::string& n : crossdiff::preset_names()) {
          std::printf("%-22s%s\n", n.c_str(), crossdiff::preset_comment(n).c_str() + 1);
        }
      } else if (emit) {
        const crossdiff::RunConfig cfg = crossdiff::preset(preset_name);
        std::printf("%s\n%s", crossdiff::preset_comment(preset_name).c_str(),
                    crossdiff::emit_config(cfg).c_str());
      } else {
        const crossdiff::RunConfig cfg = crossdiff::preset(preset_name);
        std::printf("%s\nuse 'preset %s --emit' to print the config\n",
                    crossdiff::preset_comment(cfg.name).c_str(), cfg.name.c_str());
      }
    }
  } catch (const crossdiff::ConfigError& e) {
    error_line("config", e);
    return 2;
  } catch (const crossdiff::SolverError& e) {
    error_line("solver", e);
    return 3;
  } catch (const std::exception& e) {
    error_line("internal", e);
    return 3;
  }
  return 0;
}
