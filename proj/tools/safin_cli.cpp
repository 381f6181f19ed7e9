// Copyright 2026 The safin Authors
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


// Command-line harness: dataset synthesis, training, single runs, batch
// experiments, assessor sweeps and trace replay. Commands compose through
// files: synth -> train -> run/experiment/replay.

#include <fmt/format.h>

#include <CLI11.hpp>
#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "safin/assessor.hpp"
#include "safin/dataset.hpp"
#include "safin/io.hpp"
#include "safin/planners.hpp"
#include "safin/random.hpp"
#include "safin/replay.hpp"
#include "safin/sim.hpp"

namespace {

using safin::AssessMode;
using safin::PlannerKind;

struct ModelPaths {
  std::string longitudinal;
  std::string lateral;
  std::string assessor;
};

struct LoadedModels {
  std::optional<safin::Model> longitudinal, lateral, assessor;
  safin::PlannerModels view() const {
    return {longitudinal ? &*longitudinal : nullptr,
            lateral ? &*lateral : nullptr, assessor ? &*assessor : nullptr};
  }
};

safin::Model require_model(const std::string& path, const char* flag) {
  if (path.empty()) {
    throw std::runtime_error(fmt::format("missing model: pass {}", flag));
  }
  return safin::load_model_file(path);
}

LoadedModels load_models(const ModelPaths& p, PlannerKind planner,
                         AssessMode assess) {
  LoadedModels m;
  if (planner != PlannerKind::kMpc) {
    m.longitudinal = require_model(p.longitudinal, "--long-model");
    m.lateral = require_model(p.lateral, "--lat-model");
  }
  if (planner == PlannerKind::kSafIn && assess == AssessMode::kLearned) {
    m.assessor = require_model(p.assessor, "--assessor-model");
  }
  return m;
}

void add_model_flags(CLI::App* cmd, ModelPaths& p) {
  cmd->add_option("--long-model", p.longitudinal, "Longitudinal planner model");
  cmd->add_option("--lat-model", p.lateral, "Lateral planner model");
  cmd->add_option("--assessor-model", p.assessor, "Aggressiveness model");
}

struct ClassOptions {
  std::vector<std::string> names{"1"};
  double axl_min = -6.0, axl_max = 4.0, dp_min = 7.0, dp_max = 37.0;
};

void add_class_flags(CLI::App* cmd, ClassOptions& c, bool multi) {
  auto* opt = cmd->add_option("--class", c.names,
                              "Experiment class: 1..4 or custom")
                  ->check(CLI::IsMember({"1", "2", "3", "4", "custom"}));
  if (multi) {
    opt->delimiter(',');
  } else {
    opt->expected(1);
  }
  cmd->add_option("--axl-min", c.axl_min, "Custom class: leader accel min");
  cmd->add_option("--axl-max", c.axl_max, "Custom class: leader accel max");
  cmd->add_option("--dp-min", c.dp_min, "Custom class: leader offset min");
  cmd->add_option("--dp-max", c.dp_max, "Custom class: leader offset max");
}

safin::ExperimentClass make_class(const std::string& name,
                                  const ClassOptions& c) {
  if (name != "custom") return safin::preset_class(std::stoi(name));
  if (!(c.axl_min <= c.axl_max) || !(c.dp_min <= c.dp_max)) {
    throw std::runtime_error("custom class: min must not exceed max");
  }
  return {"custom", c.axl_min, c.axl_max, c.dp_min, c.dp_max};
}

PlannerKind planner_of(const std::string& s) { return *safin::parse_planner(s); }
AssessMode assess_of(const std::string& s) { return *safin::parse_assess(s); }

const std::vector<std::string> kPlannerNames = {"mpc", "nn", "safin"};
const std::vector<std::string> kAssessNames = {"learned", "oracle",
                                               "always-aggressive"};

// Writes `text` to `path`, or to stdout when `path` is "-".
void write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

template <typename F>
auto with_file_context(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const safin::FormatError& e) {
    throw safin::FormatError(path + ": " + e.what());
  }
}

void print_outcome(const safin::EpisodeResult& r) {
  fmt::print("collided: {}\n", r.collided ? "yes" : "no");
  if (r.collided) fmt::print("collision_time: {:.1f}\n", r.collision_time);
  fmt::print("success: {}\n", r.success ? "yes" : "no");
  if (r.crossing_time) fmt::print("lane_change_time: {:.1f}\n", *r.crossing_time);
  fmt::print("final_py: {:.4f}\n", r.final_py);
  fmt::print("steps: {}\n", r.steps);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Safe lane-change planning harness"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI file; one [section] per subcommand");

  std::uint64_t seed = 1;
  int workers = 1;
  double a_th = 0.5;
  app.add_option("--seed", seed, "Base random seed")->capture_default_str();
  app.add_option("--workers", workers, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--a-th", a_th, "Aggressiveness threshold [m/s^2]")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();

  safin::SimConfig cfg;

  // synth
  auto* synth = app.add_subcommand("synth", "Synthesize a training dataset");
  std::string synth_kind = "planner";
  int synth_n = 1000;
  std::string synth_out;
  synth->add_option("--kind", synth_kind, "planner or assessor")
      ->check(CLI::IsMember({"planner", "assessor"}))
      ->capture_default_str();
  synth->add_option("--n", synth_n,
                    "Scenarios (planner) or samples (assessor)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth->add_option("--out", synth_out, "Output CSV")->required();

  // train
  auto* train = app.add_subcommand("train", "Train a network on a dataset");
  std::string train_target = "ax";
  std::string train_data, train_out;
  safin::TrainOptions topt;
  train->add_option("--target", train_target, "ax, ay or assessor")
      ->check(CLI::IsMember({"ax", "ay", "assessor"}))
      ->capture_default_str();
  train->add_option("--data", train_data, "Dataset CSV")->required();
  train->add_option("--epochs", topt.epochs)->capture_default_str();
  train->add_option("--lr", topt.learning_rate)->capture_default_str();
  train->add_option("--final-lr-fraction", topt.final_lr_fraction,
                    "Cosine decay of the learning rate to lr * fraction")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  train->add_option("--batch", topt.batch)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train->add_option("--out", train_out, "Output model file")->required();

  // run
  auto* run = app.add_subcommand("run", "Run and log a single episode");
  ClassOptions run_class;
  std::string run_planner = "safin", run_assess = "always-aggressive";
  std::string run_out, run_trace_out;
  ModelPaths run_models;
  add_class_flags(run, run_class, false);
  run->add_option("--planner", run_planner)
      ->check(CLI::IsMember(kPlannerNames))
      ->capture_default_str();
  run->add_option("--assess", run_assess)
      ->check(CLI::IsMember(kAssessNames))
      ->capture_default_str();
  run->add_option("--out", run_out, "Trajectory CSV");
  run->add_option("--trace-out", run_trace_out,
                  "Write the surrounding traffic as a replay trace");
  add_model_flags(run, run_models);

  // experiment
  auto* exp = app.add_subcommand("experiment", "Batch Monte Carlo experiment");
  ClassOptions exp_class;
  exp_class.names = {"1", "2", "3", "4"};
  std::vector<std::string> exp_planners{"mpc", "nn", "safin"};
  std::string exp_assess = "always-aggressive";
  int exp_n = 20000;
  std::string exp_out;
  ModelPaths exp_models;
  add_class_flags(exp, exp_class, true);
  exp->add_option("--planner", exp_planners, "Comma-separated planners")
      ->delimiter(',')
      ->check(CLI::IsMember(kPlannerNames));
  exp->add_option("--assess", exp_assess)
      ->check(CLI::IsMember(kAssessNames))
      ->capture_default_str();
  exp->add_option("--n", exp_n, "Episodes per row")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  exp->add_option("--out", exp_out, "Metrics CSV");
  add_model_flags(exp, exp_models);

  // assess-sweep
  auto* sweep = app.add_subcommand("assess-sweep",
                                   "Uncertain and error rates over a_th");
  std::string sweep_model, sweep_out;
  int sweep_n = 20000;
  std::vector<double> sweep_th{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  sweep->add_option("--assessor-model", sweep_model)->required();
  sweep->add_option("--n", sweep_n, "Evaluation samples")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep->add_option("--thresholds", sweep_th, "Comma-separated a_th values")
      ->delimiter(',')
      ->check(CLI::NonNegativeNumber);
  sweep->add_option("--out", sweep_out, "Sweep CSV");

  // replay
  auto* replay = app.add_subcommand("replay", "Drive the ego against a trace");
  std::string replay_trace, replay_out;
  std::string replay_planner = "safin", replay_assess = "always-aggressive";
  ModelPaths replay_models;
  replay->add_option("--trace", replay_trace, "Trace CSV")->required();
  replay->add_option("--planner", replay_planner)
      ->check(CLI::IsMember(kPlannerNames))
      ->capture_default_str();
  replay->add_option("--assess", replay_assess)
      ->check(CLI::IsMember(kAssessNames))
      ->capture_default_str();
  replay->add_option("--out", replay_out, "Trajectory CSV");
  add_model_flags(replay, replay_models);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  cfg.a_th = a_th;

  try {
    if (synth->parsed()) {
      std::ostringstream os;
      if (synth_kind == "planner") {
        const auto d = safin::synth_dataset(synth_n, seed, cfg, workers);
        safin::write_planner_dataset(os, d);
        fmt::print("records: {}\n", d.x.cols());
      } else {
        const auto d = safin::synth_assessor_dataset(synth_n, seed);
        safin::write_assessor_dataset(os, d);
        fmt::print("records: {}\n", d.x.cols());
      }
      write_output(synth_out, os.str());
    } else if (train->parsed()) {
      topt.seed = seed;
      auto in = open_input(train_data);
      safin::Model init = train_target == "assessor"
                              ? safin::make_assessor_model(seed)
                              : safin::make_planner_model(seed);
      Eigen::MatrixXd x, y;
      if (train_target == "assessor") {
        auto d = with_file_context(train_data,
                                   [&] { return safin::read_assessor_dataset(in); });
        x = std::move(d.x);
        y = std::move(d.y);
      } else {
        auto d = with_file_context(train_data,
                                   [&] { return safin::read_planner_dataset(in); });
        x = std::move(d.x);
        y = d.y.row(train_target == "ax" ? 0 : 1);
      }
      std::vector<double> losses;
      const safin::Model m = safin::train_mlp(x, y, init, topt, &losses);
      for (std::size_t e = 0; e < losses.size(); ++e) {
        fmt::print("epoch {} loss {:.6f}\n", e + 1, losses[e]);
      }
      safin::save_model_file(train_out, m);
    } else if (run->parsed()) {
      const auto planner = planner_of(run_planner);
      const auto assess = assess_of(run_assess);
      const auto models = load_models(run_models, planner, assess);
      const auto cls = make_class(run_class.names.front(), run_class);
      const auto sc = safin::sample_scenario(cls, seed);
      cfg.record_trajectory = true;
      const auto r = safin::run_episode(sc, planner, assess, models.view(), cfg);
      print_outcome(r);
      if (!run_out.empty()) {
        std::ostringstream os;
        safin::write_trajectory(os, r.trajectory);
        write_output(run_out, os.str());
      }
      if (!run_trace_out.empty()) {
        std::ostringstream os;
        safin::write_trace(os, safin::trace_from_episode(
                                   sc.initial, r, sc.follower_mode, cfg.geometry));
        write_output(run_trace_out, os.str());
      }
    } else if (exp->parsed()) {
      const auto assess = assess_of(exp_assess);
      std::vector<safin::MetricsRow> rows;
      for (const auto& name : exp_class.names) {
        const auto cls = make_class(name, exp_class);
        for (const auto& p : exp_planners) {
          const auto planner = planner_of(p);
          const auto models = load_models(exp_models, planner, assess);
          rows.push_back({name, planner, assess,
                          safin::run_experiment(cls, planner, assess,
                                                models.view(), exp_n, seed,
                                                workers, cfg)});
        }
      }
      std::ostringstream table;
      safin::write_metrics_table(table, rows);
      std::cout << table.str();
      if (!exp_out.empty()) {
        std::ostringstream os;
        safin::write_metrics_csv(os, rows);
        write_output(exp_out, os.str());
      }
    } else if (sweep->parsed()) {
      const safin::Model m = safin::load_model_file(sweep_model);
      const auto eval = safin::synth_assessor_dataset(sweep_n, seed);
      const auto rows =
          safin::assessor_sweep(eval, m, sweep_th, safin::derive_seed(seed, 1));
      std::ostringstream table;
      safin::write_sweep_table(table, rows);
      std::cout << table.str();
      if (!sweep_out.empty()) {
        std::ostringstream os;
        safin::write_sweep_csv(os, rows);
        write_output(sweep_out, os.str());
      }
    } else if (replay->parsed()) {
      const auto planner = planner_of(replay_planner);
      const auto assess = assess_of(replay_assess);
      auto in = open_input(replay_trace);
      const auto trace =
          with_file_context(replay_trace, [&] { return safin::read_trace(in); });
      const auto models = load_models(replay_models, planner, assess);
      cfg.record_trajectory = true;
      const auto r = safin::run_replay(trace, planner, assess, models.view(), cfg);
      print_outcome(r);
      if (!replay_out.empty()) {
        std::ostringstream os;
        safin::write_trajectory(os, r.trajectory);
        write_output(replay_out, os.str());
      }
    }
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
