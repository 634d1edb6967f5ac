/*
   Copyright 2026 The SpikeForge Authors
   SPDX-License-Identifier: Apache-2.0

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spikeforge/spike_engine.hpp"

namespace spikeforge {

struct SpikeReportEntry {
  std::string name;
  std::uint64_t fired = 0;
  std::uint64_t slots = 0;
  double ratio = 0.0;
};

/// Fired/slot accounting with an accumulate-operation energy proxy: only
/// '1' spikes trigger synaptic work, so energy = fired x unit_cost.
struct SpikeReport {
  std::vector<SpikeReportEntry> layers;
  std::uint64_t fired = 0;
  std::uint64_t slots = 0;
  double ratio = 0.0;
  double energy = 0.0;
};

SpikeReport spike_report(const SpikeStats& stats, double unit_cost = 1.0);

/// Writes `prefix.key=value` lines for every layer and the totals.
void write_spike_report(std::ostream& out, const SpikeReport& report, const std::string& prefix);

struct RunReport {
  std::string engine;
  std::vector<std::size_t> predictions;
  std::optional<std::vector<int>> labels;
  std::optional<SpikeReport> spikes;
  double wall_time_ms = 0.0;
};

/// Line-oriented key=value rendering. The only nondeterministic line is
/// `wall_time_ms`, always last.
void write_run_report(std::ostream& out, const RunReport& report);

}  // namespace spikeforge
