// Copyright 2026 The locnav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <regex>
#include <string>
#include <thread>

#include "locnav/config.hpp"
#include "locnav/error.hpp"
#include "locnav/render.hpp"
#include "locnav/runner.hpp"
#include "locnav/worlds.hpp"

namespace {

struct Common {
  std::string config;
  std::string robot;
  std::string estimator;
  std::string out;
  std::optional<std::uint64_t> seed;
  int workers = 0;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("config", c.config, "Scenario file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--robot", c.robot, "Robot preset override")->check(CLI::IsMember({"udacity_bot", "sagar_bot"}));
  cmd->add_option("--estimator", c.estimator, "Estimator override")->check(CLI::IsMember({"amcl", "ekf", "both"}));
  cmd->add_option("--out", c.out, "Output directory (overrides output_dir)");
  cmd->add_option("--seed", c.seed, "Seed override");
  cmd->add_option("--workers", c.workers, "Filter worker threads");
}

locnav::RunConfig load(const Common& c) {
  std::optional<std::string> robot;
  if (!c.robot.empty()) robot = c.robot;
  locnav::RunConfig cfg = locnav::load_run_config(c.config, robot);
  if (!c.estimator.empty()) cfg.estimator = locnav::parse_estimator(c.estimator);
  if (c.seed) cfg.seed = *c.seed;
  if (c.workers > 0) cfg.amcl.workers = c.workers;
  if (!c.out.empty()) cfg.output_dir = c.out;
  return cfg;
}

void print_summary(const locnav::RunSummary& s, const std::filesystem::path& dir) {
  std::cout << "run: " << dir.string() << "\n";
  std::cout << "exit " << s.exit_code << " (" << s.exit_reason << ")\n";
  auto opt = [](const std::optional<double>& v) { return v ? std::to_string(*v) : std::string("-"); };
  std::cout << "time_to_converge_s " << opt(s.time_to_converge) << "  time_to_goal_s " << opt(s.time_to_goal)
            << "  final_error_m " << s.final_error << "\n";
  for (const auto& e : s.estimators) {
    std::cout << "  " << e.name << ": mean " << e.mean_error << " m, final " << e.final_error << " m";
    if (e.recovered) std::cout << ", recovered " << (*e.recovered ? "yes" : "no");
    std::cout << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planar AMCL/EKF localization and navigation simulator"};
  app.require_subcommand(1);

  Common run_opts;
  auto* run = app.add_subcommand("run", "Run one scenario");
  add_common(run, run_opts);

  Common cmp_opts;
  auto* cmp = app.add_subcommand("compare", "Run AMCL and EKF on the same event and noise stream");
  add_common(cmp, cmp_opts);

  std::string run_dir;
  auto* render = app.add_subcommand("render", "Render images from a run directory");
  render->add_option("run_dir", run_dir, "Run directory")->required();

  Common batch_opts;
  std::string seeds;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  auto* batch = app.add_subcommand("batch", "Run a seed range");
  add_common(batch, batch_opts);
  batch->add_option("--seeds", seeds, "Seed range a..b")->required();
  batch->add_option("--jobs", jobs, "Parallel runs");

  std::string fixture_dir;
  auto* fixtures = app.add_subcommand("fixtures", "Write the fixture map files");
  fixtures->add_option("dir", fixture_dir, "Target directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : locnav::kExitConfigError;
  }

  try {
    if (*run || *cmp) {
      const Common& c = *run ? run_opts : cmp_opts;
      locnav::RunConfig cfg = load(c);
      const auto dir = locnav::resolve_output_dir(cfg.output_dir);
      const auto s = *run ? locnav::run_scenario(cfg, dir) : locnav::compare_estimators(cfg, dir);
      print_summary(s, dir);
      return s.exit_code;
    }
    if (*render) {
      const auto files = locnav::render_artifacts(run_dir);
      std::cout << files.trajectory.string() << "\n" << files.particles.string() << "\n"
                << files.error.string() << "\n";
      return 0;
    }
    if (*batch) {
      const std::regex range(R"((\d+)\.\.(\d+))");
      std::smatch m;
      if (!std::regex_match(seeds, m, range)) throw locnav::ConfigError("--seeds must look like a..b");
      locnav::RunConfig cfg = load(batch_opts);
      const auto dir = locnav::resolve_output_dir(cfg.output_dir);
      const auto results =
          locnav::run_batch(cfg, std::stoull(m[1].str()), std::stoull(m[2].str()), dir, jobs);
      int failures = 0;
      for (const auto& r : results) {
        std::cout << "seed " << r.seed << ": exit " << r.summary.exit_code << "\n";
        if (r.summary.exit_code != 0) ++failures;
      }
      std::cout << results.size() - failures << "/" << results.size() << " succeeded\n";
      return failures == 0 ? 0 : locnav::kExitGoalNotReached;
    }
    if (*fixtures) {
      locnav::write_fixture_maps(fixture_dir);
      return 0;
    }
  } catch (const locnav::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return locnav::kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return locnav::kExitConfigError;
  }
  return 0;
}
