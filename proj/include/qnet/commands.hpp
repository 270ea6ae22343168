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

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qnet/config.hpp"
#include "qnet/netsim.hpp"
#include "qnet/protocols.hpp"

// Subcommand bodies of the qnetsim tool. Each writes its report to the given
// stream and throws qnet::Error subclasses on failure.
namespace qnet::cli {

inline constexpr const char* kMetricsHeader = "# qnetsim metrics v1";
inline constexpr const char* kSummarySchema = "qnetsim-summary/1";

// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

void run_swap_circuit(std::int64_t shots, std::uint64_t seed, std::ostream& out);

void run_teleport(std::int64_t trials, std::uint64_t seed, std::ostream& out);

struct QkdOptions {
  std::int64_t pairs = 100000;
  protocols::Eavesdropper eavesdropper = protocols::Eavesdropper::None;
  double fidelity = 1.0;
  double test_fraction = 0.5;
  double abort_threshold = 0.05;
  std::uint64_t seed = 1;
  bool print_key = true;
};
void run_qkd(const QkdOptions& options, std::ostream& out);

void run_distill(double f1, double f2, std::ostream& out);

// Per-slot CSV. Columns: slot, then queue_<id>, arrivals_<id>, served_<id>
// for each commodity in id order, then generated, expired, consumed, live,
// rejected, delivered, mean_fidelity.
void write_metrics_csv(const netsim::Metrics& metrics, std::ostream& out);
nlohmann::json metrics_summary(const netsim::Metrics& metrics,
                               const ExperimentConfig& config);

struct SimulateOptions {
  std::optional<std::int64_t> horizon;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> metrics_path;
  std::optional<std::string> summary_path;
};
// Writes metrics to the configured or overridden files; when no metrics file
// is named the CSV goes to `out`.
void run_simulate(const ExperimentConfig& config, const SimulateOptions& options,
                  std::ostream& out);

void run_capacity(const ExperimentConfig& config,
                  const std::optional<std::vector<double>>& lambda,
                  std::ostream& out);

struct SweepCliOptions {
  std::optional<std::vector<double>> direction;  // defaults to config rates
  std::vector<double> rho_grid;
  std::size_t seeds = 5;
  std::optional<std::int64_t> horizon;
  double epsilon = 1e-3;
  std::size_t threads = 0;
};
void run_sweep(const ExperimentConfig& config, const SweepCliOptions& options,
               std::ostream& out);

}  // namespace qnet::cli
