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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qnet/netsim.hpp"

namespace qnet::cli {

inline constexpr const char* kConfigSchema = "qnetsim-config/1";

struct PolicySpec {
  std::string name = "maxweight";
  // Fall back to greedy when enumeration exceeds its budget.
  bool fallback = true;

  friend bool operator==(const PolicySpec&, const PolicySpec&) = default;
};

struct OutputSpec {
  std::optional<std::string> metrics_csv;
  std::optional<std::string> summary_json;

  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct ExperimentConfig {
  netsim::Topology topology;
  // Sorted by id.
  std::vector<netsim::Commodity> commodities;
  netsim::SimParams params;
  // Fidelity of freshly generated pairs on edges that do not set their own.
  double default_f0 = 1.0;
  PolicySpec policy;
  std::int64_t horizon = 1;
  std::uint64_t seed = 0;
  OutputSpec output;

  netsim::Network network() const;

  friend bool operator==(const ExperimentConfig&,
                         const ExperimentConfig&) = default;
};

// Throws ConfigError carrying every problem found. Syntax errors report the
// line and column.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

nlohmann::json emit_config(const ExperimentConfig& config);

}  // namespace qnet::cli
