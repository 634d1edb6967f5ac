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

#include "spikeforge/report.hpp"

#include <cstdio>
#include <ostream>

namespace spikeforge {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

double ratio_of(std::uint64_t fired, std::uint64_t slots) {
  return slots == 0 ? 0.0 : static_cast<double>(fired) / static_cast<double>(slots);
}

}  // namespace

SpikeReport spike_report(const SpikeStats& stats, double unit_cost) {
  SpikeReport report;
  for (const LayerSpikeStats& l : stats.layers) {
    report.layers.push_back({l.name, l.fired, l.slots, ratio_of(l.fired, l.slots)});
    report.fired += l.fired;
    report.slots += l.slots;
  }
  report.ratio = ratio_of(report.fired, report.slots);
  report.energy = static_cast<double>(report.fired) * unit_cost;
  return report;
}

void write_spike_report(std::ostream& out, const SpikeReport& report, const std::string& prefix) {
  for (std::size_t i = 0; i < report.layers.size(); ++i) {
    const SpikeReportEntry& e = report.layers[i];
    const std::string key = prefix + "layer." + std::to_string(i) + ".";
    out << key << "name=" << e.name << '\n';
    out << key << "fired=" << e.fired << '\n';
    out << key << "slots=" << e.slots << '\n';
    out << key << "ratio=" << fixed(e.ratio, 6) << '\n';
  }
  out << prefix << "total.fired=" << report.fired << '\n';
  out << prefix << "total.slots=" << report.slots << '\n';
  out << prefix << "total.ratio=" << fixed(report.ratio, 6) << '\n';
  out << prefix << "total.ratio_percent=" << fixed(100.0 * report.ratio, 4) << '\n';
  out << prefix << "energy_proxy=" << fixed(report.energy, 3) << '\n';
}

void write_run_report(std::ostream& out, const RunReport& report) {
  out << "engine=" << report.engine << '\n';
  out << "inputs=" << report.predictions.size() << '\n';
  std::size_t correct = 0;
  for (std::size_t i = 0; i < report.predictions.size(); ++i) {
    out << "input." << i << ".predicted=" << report.predictions[i] << '\n';
    if (report.labels && i < report.labels->size()) {
      const int label = (*report.labels)[i];
      out << "input." << i << ".label=" << label << '\n';
      if (label >= 0 && static_cast<std::size_t>(label) == report.predictions[i]) ++correct;
    }
  }
  if (report.labels) {
    out << "correct=" << correct << '\n';
    out << "accuracy=" << fixed(report.predictions.empty()
                                    ? 0.0
                                    : static_cast<double>(correct) / report.predictions.size(),
                                6)
        << '\n';
  }
  if (report.spikes) write_spike_report(out, *report.spikes, "spikes.");
  out << "wall_time_ms=" << fixed(report.wall_time_ms, 3) << '\n';
}

}  // namespace spikeforge
