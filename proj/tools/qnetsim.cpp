// Copyright 2026 The qnetsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qnetsim: command-line entry point.
//
// Exit codes: 0 success, 1 usage, 2 config, 3 runtime. Failures print a
// single-line JSON object on stderr.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qnet/commands.hpp"
#include "qnet/config.hpp"
#include "qnet/errors.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kConfig = 2, kRuntime = 3 };

int report(const std::string& kind, const std::string& message,
           const std::vector<std::string>& problems, int code) {
  nlohmann::json err = {{"error", {{"kind", kind}, {"message", message}}}};
  if (!problems.empty()) err["error"]["problems"] = problems;
  std::cerr << err.dump() << '\n';
  return code;
}

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw qnet::UsageError(std::string(flag) + ": '" + item +
                             "' is not a number");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum network control simulator"};
  app.require_subcommand(1);

  std::int64_t shots = 10000;
  std::uint64_t seed = 1;
  auto* swap = app.add_subcommand("swap-circuit",
                                  "Four-qubit entanglement swapping circuit");
  swap->add_option("--shots", shots, "Number of seeded shots");
  swap->add_option("--seed", seed, "Random seed");

  std::int64_t trials = 100;
  auto* tele = app.add_subcommand("teleport", "Random-state teleportation report");
  tele->add_option("--trials", trials, "Number of random input states");
  tele->add_option("--seed", seed, "Random seed");

  qnet::cli::QkdOptions qkd_opts;
  std::string eve = "none";
  bool no_key = false;
  auto* qkd = app.add_subcommand("qkd", "E91 key distribution session");
  qkd->add_option("--pairs", qkd_opts.pairs, "Number of entangled pairs");
  qkd->add_option("--eavesdropper", eve, "none or intercept")
      ->check(CLI::IsMember({"none", "intercept"}));
  qkd->add_option("--fidelity", qkd_opts.fidelity, "Werner channel fidelity");
  qkd->add_option("--test-fraction", qkd_opts.test_fraction,
                  "Fraction of sifted rounds disclosed");
  qkd->add_option("--abort-threshold", qkd_opts.abort_threshold,
                  "Maximum tolerated test-subset QBER");
  qkd->add_option("--seed", qkd_opts.seed, "Random seed");
  qkd->add_flag("--no-key", no_key, "Do not print the keys");

  double f1 = 0.8;
  double f2 = 0.8;
  auto* distill = app.add_subcommand("distill", "BBPSSW closed form vs density matrix");
  distill->add_option("--f1", f1, "Fidelity of the first pair");
  distill->add_option("--f2", f2, "Fidelity of the second pair");

  std::string config_path;
  qnet::cli::SimulateOptions sim_opts;
  auto* simulate = app.add_subcommand("simulate", "Run the slotted network simulation");
  simulate->add_option("--config", config_path, "Experiment config JSON")->required();
  simulate->add_option("--horizon", sim_opts.horizon, "Override the horizon");
  simulate->add_option("--seed", sim_opts.seed, "Override the seed");
  simulate->add_option("--metrics", sim_opts.metrics_path, "Per-slot metrics CSV path");
  simulate->add_option("--summary", sim_opts.summary_path, "Summary JSON path");

  std::string lambda_text;
  auto* capacity = app.add_subcommand("capacity", "Capacity region for cutoff-1 networks");
  capacity->add_option("--config", config_path, "Experiment config JSON")->required();
  capacity->add_option("--lambda", lambda_text,
                       "Comma-separated arrival rates to test for membership");

  qnet::cli::SweepCliOptions sweep_opts;
  std::string direction_text;
  std::string rho_text;
  auto* sweep = app.add_subcommand("sweep", "Stability verdicts along a load direction");
  sweep->add_option("--config", config_path, "Experiment config JSON")->required();
  sweep->add_option("--direction", direction_text,
                    "Comma-separated direction (defaults to the config rates)");
  sweep->add_option("--rho-grid", rho_text, "Comma-separated load factors")->required();
  sweep->add_option("--seeds", sweep_opts.seeds, "Seeds per load factor");
  sweep->add_option("--horizon", sweep_opts.horizon, "Slots per run");
  sweep->add_option("--epsilon", sweep_opts.epsilon, "Slope threshold");
  sweep->add_option("--threads", sweep_opts.threads, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << app.help() << '\n';
    return report("usage", e.what(), {}, kUsage);
  }

  try {
    auto& out = std::cout;
    if (*swap) {
      qnet::cli::run_swap_circuit(shots, seed, out);
    } else if (*tele) {
      qnet::cli::run_teleport(trials, seed, out);
    } else if (*qkd) {
      qkd_opts.eavesdropper = eve == "intercept"
                                  ? qnet::protocols::Eavesdropper::InterceptResend
                                  : qnet::protocols::Eavesdropper::None;
      qkd_opts.print_key = !no_key;
      qnet::cli::run_qkd(qkd_opts, out);
    } else if (*distill) {
      qnet::cli::run_distill(f1, f2, out);
    } else if (*simulate) {
      qnet::cli::run_simulate(qnet::cli::load_config(config_path), sim_opts, out);
    } else if (*capacity) {
      std::optional<std::vector<double>> lambda;
      if (!lambda_text.empty()) lambda = parse_list(lambda_text, "--lambda");
      qnet::cli::run_capacity(qnet::cli::load_config(config_path), lambda, out);
    } else if (*sweep) {
      if (!direction_text.empty()) {
        sweep_opts.direction = parse_list(direction_text, "--direction");
      }
      sweep_opts.rho_grid = parse_list(rho_text, "--rho-grid");
      qnet::cli::run_sweep(qnet::cli::load_config(config_path), sweep_opts, out);
    }
  } catch (const qnet::ConfigError& e) {
    return report("config", e.what(), e.problems(), kConfig);
  } catch (const qnet::UsageError& e) {
    return report("usage", e.what(), {}, kUsage);
  } catch (const std::exception& e) {
    return report("runtime", e.what(), {}, kRuntime);
  }
  return kOk;
}
