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

#include "qnet/commands.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "qnet/control.hpp"
#include "qnet/errors.hpp"
#include "qnet/fidelity.hpp"
#include "qnet/kernel.hpp"

namespace qnet::cli {

using nlohmann::json;

namespace {

std::string fixed(double v, int digits = 12) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot open output file " + path);
  return f;
}

kernel::StateVector random_qubit(Rng& rng) {
  // Uniform on the Bloch sphere.
  const double theta = std::acos(1.0 - 2.0 * rng.uniform());
  const double phi = 2.0 * std::numbers::pi * rng.uniform();
  Eigen::VectorXcd v(2);
  v(0) = std::cos(theta / 2);
  v(1) = std::polar(std::sin(theta / 2), phi);
  return kernel::StateVector::from_amplitudes(std::move(v));
}

void check_positive(std::int64_t v, const char* what) {
  if (v < 1) throw UsageError(std::string(what) + " must be at least 1");
}

}  // namespace

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void run_swap_circuit(std::int64_t shots, std::uint64_t seed, std::ostream& out) {
  check_positive(shots, "shots");
  const auto table = protocols::swap_circuit_table();
  out << "# qnetsim swap-circuit v1\n";
  out << "# joint probabilities per step, basis states written q3q2q1q0\n";
  out << "step";
  for (int i = 0; i < 16; ++i) {
    out << ',';
    for (int q = 3; q >= 0; --q) out << ((i >> q) & 1);
  }
  out << '\n';
  const char* names[] = {"a", "b", "c", "d"};
  for (std::size_t s = 0; s < 4; ++s) {
    out << names[s];
    for (double p : table.steps[s]) out << ',' << fixed(p, 6);
    out << '\n';
  }

  Rng rng(seed);
  const auto z = kernel::MeasurementBasis::z();
  std::int64_t equal = 0;
  double min_fid = 1.0;
  for (std::int64_t i = 0; i < shots; ++i) {
    auto swapped = protocols::entanglement_swap(rng);
    const auto outer =
        kernel::partial_trace(kernel::DensityMatrix(swapped.state), {1, 2});
    min_fid = std::min(min_fid, kernel::fidelity_to_bell(outer));
    auto m0 = kernel::measure(swapped.state, 0, z, rng);
    auto m3 = kernel::measure(m0.state, 3, z, rng);
    if (m0.bit == m3.bit) ++equal;
  }
  out << "# shots\n";
  out << "shots,seed,equal_outcomes,equal_outcome_rate,min_fidelity_03\n";
  out << shots << ',' << seed << ',' << equal << ','
      << fixed(static_cast<double>(equal) / static_cast<double>(shots), 6) << ','
      << fixed(min_fid) << '\n';
}

void run_teleport(std::int64_t trials, std::uint64_t seed, std::ostream& out) {
  check_positive(trials, "trials");
  Rng rng(seed);
  double min_overlap = 1.0;
  double min_branch_overlap = 1.0;
  double max_deviation = 0.0;
  std::int64_t branch_counts[4] = {0, 0, 0, 0};
  const Eigen::MatrixXcd half = Eigen::MatrixXcd::Identity(2, 2) / 2.0;
  for (std::int64_t i = 0; i < trials; ++i) {
    const auto input = random_qubit(rng);
    const auto res = protocols::teleport(input, rng);
    min_overlap = std::min(min_overlap, kernel::overlap(input, res.output));
    ++branch_counts[res.outcome.bit1 * 2 + res.outcome.bit2];
    for (int b = 0; b < 4; ++b) {
      auto branch = protocols::teleport_branch(input, {b >> 1, b & 1});
      if (branch) {
        min_branch_overlap =
            std::min(min_branch_overlap, kernel::overlap(input, branch->output));
      }
    }
    const auto pre = protocols::teleport_output_before_correction(input);
    max_deviation =
        std::max(max_deviation, (pre.matrix() - half).cwiseAbs().maxCoeff());
  }
  out << "# qnetsim teleport v1\n";
  out << "trials,seed,min_overlap,min_branch_overlap,"
         "max_precorrection_deviation,branch_00,branch_01,branch_10,branch_11\n";
  out << trials << ',' << seed << ',' << fixed(min_overlap) << ','
      << fixed(min_branch_overlap) << ',' << fixed(max_deviation) << ','
      << branch_counts[0] << ',' << branch_counts[1] << ','
      << branch_counts[2] << ',' << branch_counts[3] << '\n';
}

void run_qkd(const QkdOptions& options, std::ostream& out) {
  check_positive(options.pairs, "pairs");
  protocols::E91Config cfg;
  cfg.n = static_cast<std::size_t>(options.pairs);
  cfg.eavesdropper = options.eavesdropper;
  cfg.test_fraction = options.test_fraction;
  cfg.abort_threshold = options.abort_threshold;
  Rng rng(options.seed);
  const auto res = protocols::e91_run(cfg, options.fidelity, rng);
  out << "# qnetsim qkd v1\n";
  out << "pairs,eavesdropper,fidelity,seed,sifted,tested,qber,abort_threshold,"
         "aborted,key_length\n";
  out << options.pairs << ','
      << (options.eavesdropper == protocols::Eavesdropper::None ? "none"
                                                                : "intercept")
      << ',' << format_double(options.fidelity) << ',' << options.seed << ','
      << res.sifted_count << ',' << res.tested_count << ','
      << fixed(res.qber_estimate, 6) << ','
      << format_double(options.abort_threshold) << ','
      << (res.aborted ? "true" : "false") << ',' << res.key_alice.size() << '\n';
  if (!res.aborted && options.print_key) {
    auto bits = [](const std::vector<std::uint8_t>& key) {
      std::string s;
      s.reserve(key.size());
      for (auto b : key) s.push_back(b ? '1' : '0');
      return s;
    };
    out << "key_alice," << bits(res.key_alice) << '\n';
    out << "key_bob," << bits(res.key_bob) << '\n';
  }
}

void run_distill(double f1, double f2, std::ostream& out) {
  const auto closed = fidelity::distill_fidelity(f1, f2);
  const auto oracle = protocols::bbpssw_evaluate(kernel::make_werner(f1),
                                                 kernel::make_werner(f2));
  out << "# qnetsim distill v1\n";
  out << "f1,f2\n" << format_double(f1) << ',' << format_double(f2) << '\n';
  out << "quantity,closed_form,density_matrix,abs_diff\n";
  out << "output_fidelity," << fixed(closed.fidelity) << ','
      << fixed(oracle.fidelity) << ','
      << fixed(std::abs(closed.fidelity - oracle.fidelity), 15) << '\n';
  out << "success_probability," << fixed(closed.success_probability) << ','
      << fixed(oracle.success_probability) << ','
      << fixed(std::abs(closed.success_probability - oracle.success_probability), 15)
      << '\n';
  out << "improves," << (closed.fidelity > std::max(f1, f2) ? "true" : "false")
      << '\n';
}

void write_metrics_csv(const netsim::Metrics& metrics, std::ostream& out) {
  out << kMetricsHeader << '\n';
  out << "slot";
  for (int id : metrics.commodity_ids) {
    out << ",queue_" << id << ",arrivals_" << id << ",served_" << id;
  }
  out << ",generated,expired,consumed,live,rejected,delivered,mean_fidelity\n";
  for (const auto& r : metrics.slots) {
    out << r.slot;
    for (std::size_t c = 0; c < metrics.commodity_ids.size(); ++c) {
      out << ',' << r.queues[c] << ',' << r.arrivals[c] << ',' << r.services[c];
    }
    out << ',' << r.generated << ',' << r.expired << ',' << r.consumed << ','
        << r.live << ',' << r.rejected << ',' << r.delivered_fidelities.size()
        << ',';
    if (!r.delivered_fidelities.empty()) {
      double sum = 0.0;
      for (double f : r.delivered_fidelities) sum += f;
      out << fixed(sum / static_cast<double>(r.delivered_fidelities.size()), 9);
    }
    out << '\n';
  }
}

json metrics_summary(const netsim::Metrics& metrics,
                     const ExperimentConfig& config) {
  const std::size_t ncom = metrics.commodity_ids.size();
  const double h = static_cast<double>(metrics.slots.size());
  std::vector<std::uint64_t> arrivals(ncom, 0), served(ncom, 0);
  std::vector<double> queue_sum(ncom, 0.0);
  std::uint64_t generated = 0, expired = 0, consumed = 0, rejected = 0;
  double fid_sum = 0.0;
  std::uint64_t delivered = 0;
  for (const auto& r : metrics.slots) {
    for (std::size_t c = 0; c < ncom; ++c) {
      arrivals[c] += r.arrivals[c];
      served[c] += r.services[c];
      queue_sum[c] += static_cast<double>(r.queues[c]);
    }
    generated += r.generated;
    expired += r.expired;
    consumed += r.consumed;
    rejected += r.rejected;
    for (double f : r.delivered_fidelities) fid_sum += f;
    delivered += r.delivered_fidelities.size();
  }
  json out;
  out["schema"] = kSummarySchema;
  out["horizon"] = metrics.slots.size();
  out["seed"] = config.seed;
  out["policy"] = config.policy.name;
  out["commodities"] = json::array();
  for (std::size_t c = 0; c < ncom; ++c) {
    out["commodities"].push_back(
        {{"id", metrics.commodity_ids[c]},
         {"arrivals", arrivals[c]},
         {"served", served[c]},
         {"final_queue", metrics.slots.empty() ? metrics.initial_queues[c]
                                               : metrics.slots.back().queues[c]},
         {"mean_queue", h > 0 ? queue_sum[c] / h : 0.0},
         {"throughput", h > 0 ? static_cast<double>(served[c]) / h : 0.0}});
  }
  out["lle"] = {{"generated", generated}, {"expired", expired}, {"consumed", consumed}};
  out["rejected_decisions"] = rejected;
  out["delivered"] = delivered;
  out["mean_delivered_fidelity"] =
      delivered ? json(fid_sum / static_cast<double>(delivered)) : json(nullptr);
  out["queue_growth_slope"] = control::queue_growth_slope(metrics);
  return out;
}

void run_simulate(const ExperimentConfig& config, const SimulateOptions& options,
                  std::ostream& out) {
  ExperimentConfig cfg = config;
  if (options.horizon) {
    if (*options.horizon < 1) throw UsageError("horizon must be at least 1");
    cfg.horizon = *options.horizon;
  }
  if (options.seed) cfg.seed = *options.seed;
  const auto net = cfg.network();
  const auto policy = control::make_policy(cfg.policy.name, cfg.policy.fallback);
  const auto metrics = netsim::run(net, *policy, cfg.horizon, cfg.seed);

  const auto metrics_path = options.metrics_path ? options.metrics_path
                                                 : cfg.output.metrics_csv;
  const auto summary_path = options.summary_path ? options.summary_path
                                                 : cfg.output.summary_json;
  if (metrics_path) {
    auto f = open_output(*metrics_path);
    write_metrics_csv(metrics, f);
  } else {
    write_metrics_csv(metrics, out);
  }
  if (summary_path) {
    auto f = open_output(*summary_path);
    f << metrics_summary(metrics, cfg).dump(2) << '\n';
  }
}

void run_capacity(const ExperimentConfig& config,
                  const std::optional<std::vector<double>>& lambda,
                  std::ostream& out) {
  const auto net = config.network();
  const auto region = control::estimate_capacity_region(net);
  out << "# qnetsim capacity v1\n";
  out << "# vertices of the expected-service region\n";
  out << "vertex";
  for (int id : region.commodity_ids) out << ",rate_" << id;
  out << '\n';
  for (std::size_t v = 0; v < region.vertices.size(); ++v) {
    out << v;
    for (double x : region.vertices[v]) out << ',' << fixed(x);
    out << '\n';
  }
  out << "# supporting half-spaces: sum normal_i * rate_i <= bound\n";
  out << "halfspace";
  for (int id : region.commodity_ids) out << ",normal_" << id;
  out << ",bound\n";
  for (std::size_t h = 0; h < region.halfspaces.size(); ++h) {
    out << h;
    for (double x : region.halfspaces[h].normal) out << ',' << fixed(x);
    out << ',' << fixed(region.halfspaces[h].bound) << '\n';
  }
  if (lambda) {
    if (lambda->size() != region.commodity_ids.size()) {
      throw UsageError("--lambda needs one rate per commodity");
    }
    const double scale = region.max_scaling(*lambda);
    out << "# membership\n";
    out << "lambda,member,member_halfspaces,max_scaling\n";
    for (std::size_t i = 0; i < lambda->size(); ++i) {
      out << (i ? ";" : "") << format_double((*lambda)[i]);
    }
    out << ',' << (region.contains(*lambda) ? "true" : "false") << ','
        << (region.satisfies_halfspaces(*lambda) ? "true" : "false") << ','
        << (std::isinf(scale) ? std::string("inf") : fixed(scale)) << '\n';
  }
}

void run_sweep(const ExperimentConfig& config, const SweepCliOptions& options,
               std::ostream& out) {
  const auto net = config.network();
  std::vector<double> direction;
  if (options.direction) {
    direction = *options.direction;
  } else {
    for (const auto& c : net.commodities()) direction.push_back(c.rate);
  }
  if (options.rho_grid.empty()) throw UsageError("--rho-grid is empty");
  if (options.seeds < 1) throw UsageError("--seeds must be at least 1");
  control::SweepOptions sweep;
  sweep.horizon = options.horizon.value_or(config.horizon);
  if (sweep.horizon < 2) throw UsageError("sweep horizon must be at least 2");
  sweep.seeds.clear();
  for (std::size_t k = 0; k < options.seeds; ++k) sweep.seeds.push_back(config.seed + k);
  sweep.slope_epsilon = options.epsilon;
  sweep.threads = options.threads;
  const auto policy = control::make_policy(config.policy.name, config.policy.fallback);
  const auto points =
      control::stability_sweep(net, *policy, direction, options.rho_grid, sweep);

  out << "# qnetsim sweep v1\n";
  out << "# policy " << policy->name() << ", horizon " << sweep.horizon
      << ", seeds " << config.seed << ".." << config.seed + options.seeds - 1
      << ", epsilon " << format_double(options.epsilon) << '\n';
  out << "rho";
  for (const auto& c : net.commodities()) out << ",rate_" << c.id;
  out << ",mean_slope,max_slope,stable_seeds,seeds,verdict\n";
  for (const auto& p : points) {
    out << format_double(p.rho);
    for (double r : p.rates) out << ',' << format_double(r);
    double max_slope = -INFINITY;
    for (double s : p.slopes) max_slope = std::max(max_slope, s);
    out << ',' << fixed(p.mean_slope, 9) << ',' << fixed(max_slope, 9) << ','
        << p.stable_seeds << ',' << p.slopes.size() << ','
        << (p.stable ? "stable" : "unstable") << '\n';
  }
}

}  // namespace qnet::cli
