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

#include <algorithm>
#include <atomic>
#include <future>
#include <string>
#include <thread>

#include "qnet/control.hpp"
#include "qnet/errors.hpp"

namespace qnet::control {

double queue_growth_slope(const netsim::Metrics& metrics) {
  const std::size_t h = metrics.slots.size();
  const std::size_t start = h / 2;
  const std::size_t count = h - start;
  if (count < 2) return 0.0;
  double mean_x = 0.0;
  double mean_y = 0.0;
  std::vector<double> totals(count);
  for (std::size_t i = 0; i < count; ++i) {
    double q = 0.0;
    for (auto v : metrics.slots[start + i].queues) q += static_cast<double>(v);
    totals[i] = q;
    mean_x += static_cast<double>(i);
    mean_y += q;
  }
  mean_x /= static_cast<double>(count);
  mean_y /= static_cast<double>(count);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double dx = static_cast<double>(i) - mean_x;
    sxy += dx * (totals[i] - mean_y);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

std::vector<SweepPoint> stability_sweep(const Network& net,
                                        const netsim::Policy& policy,
                                        std::span<const double> direction,
                                        std::span<const double> rho_grid,
                                        const SweepOptions& options) {
  const std::size_t ncom = net.commodities().size();
  if (direction.size() != ncom) {
    throw UsageError("direction has " + std::to_string(direction.size()) +
                     " entries, expected " + std::to_string(ncom));
  }
  for (double v : direction) {
    if (v < 0.0) throw UsageError("direction must be nonnegative");
  }
  if (options.seeds.empty()) throw UsageError("sweep needs at least one seed");

  std::vector<Network> networks;
  std::vector<SweepPoint> points;
  for (double rho : rho_grid) {
    if (rho < 0.0) throw UsageError("load factors must be nonnegative");
    auto commodities = net.commodities();
    SweepPoint point;
    point.rho = rho;
    for (std::size_t c = 0; c < ncom; ++c) {
      const double rate = rho * direction[c];
      if (rate > 1.0) {
        throw UsageError("rho " + std::to_string(rho) +
                         " pushes an arrival rate above 1");
      }
      commodities[c].rate = rate;
      point.rates.push_back(rate);
    }
    networks.emplace_back(net.topology(), std::move(commodities), net.params());
    point.slopes.assign(options.seeds.size(), 0.0);
    points.push_back(std::move(point));
  }

  // Every (rho, seed) cell is an independent run; results land in fixed
  // slots so thread scheduling never changes the output.
  struct Cell {
    std::size_t point;
    std::size_t seed;
  };
  std::vector<Cell> cells;
  for (std::size_t p = 0; p < points.size(); ++p) {
    for (std::size_t s = 0; s < options.seeds.size(); ++s) cells.push_back({p, s});
  }
  std::size_t workers = options.threads ? options.threads
                                        : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(cells.size(), 1));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const auto& cell = cells[i];
      const auto metrics = netsim::run(networks[cell.point], policy,
                                       options.horizon, options.seeds[cell.seed]);
      points[cell.point].slopes[cell.seed] = queue_growth_slope(metrics);
    }
  };
  std::vector<std::future<void>> futures;
  for (std::size_t w = 0; w < workers; ++w) {
    futures.push_back(std::async(std::launch::async, work));
  }
  for (auto& f : futures) f.get();

  for (auto& point : points) {
    double sum = 0.0;
    for (double s : point.slopes) {
      sum += s;
      if (s < options.slope_epsilon) ++point.stable_seeds;
    }
    point.mean_slope = sum / static_cast<double>(point.slopes.size());
    point.stable = point.stable_seeds == point.slopes.size();
  }
  return points;
}

}  // namespace qnet::control
