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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "spikeforge/report.hpp"

namespace sf = spikeforge;

TEST(SpikeReport, ElevenPercentRaster) {
  sf::SpikeStats stats;
  stats.layers.push_back({"all", 476035, 4169728});
  const sf::SpikeReport r = sf::spike_report(stats);
  EXPECT_NEAR(r.ratio, 0.1142, 5e-5);
  std::ostringstream out;
  sf::write_spike_report(out, r, "");
  EXPECT_NE(out.str().find("total.ratio_percent=11.4165"), std::string::npos) << out.str();
}

TEST(SpikeReport, Trivial) {
  sf::SpikeStats none;
  none.layers.push_back({"a", 0, 100});
  EXPECT_EQ(sf::spike_report(none).ratio, 0.0);

  sf::SpikeTrain t(5, {1, 1, 1, 2});
  t.set(0, 0, true);
  t.set(3, 1, true);
  sf::SpikeStats two;
  two.layers.push_back({"t", t.total(), t.window() * t.plane_size()});
  EXPECT_DOUBLE_EQ(sf::spike_report(two).ratio, 0.2);

  sf::SpikeStats empty;
  const sf::SpikeReport e = sf::spike_report(empty);
  EXPECT_EQ(e.slots, 0u);
  EXPECT_EQ(e.ratio, 0.0);
}

TEST(SpikeReport, TotalsAreLayerSums) {
  sf::SpikeStats stats;
  stats.layers = {{"input", 10, 80}, {"conv2d_0", 5, 160}, {"dense_1", 7, 40}};
  const sf::SpikeReport r = sf::spike_report(stats, 2.5);
  EXPECT_EQ(r.fired, 22u);
  EXPECT_EQ(r.slots, 280u);
  EXPECT_EQ(r.fired, stats.fired());
  EXPECT_EQ(r.slots, stats.slots());
  EXPECT_DOUBLE_EQ(r.energy, 55.0);
  ASSERT_EQ(r.layers.size(), 3u);
  EXPECT_DOUBLE_EQ(r.layers[1].ratio, 5.0 / 160.0);
}

TEST(RunReport, KeyValueLayout) {
  sf::RunReport rep;
  rep.engine = "snn-asg";
  rep.predictions = {3, 1};
  rep.labels = std::vector<int>{3, 2};
  sf::SpikeStats stats;
  stats.layers = {{"input", 4, 8}};
  rep.spikes = sf::spike_report(stats);
  rep.wall_time_ms = 1.5;
  std::ostringstream out;
  sf::write_run_report(out, rep);
  const std::string s = out.str();
  for (const char* line : {"engine=snn-asg\n", "inputs=2\n", "input.0.predicted=3\n",
                           "input.1.label=2\n", "correct=1\n", "accuracy=0.500000\n",
                           "spikes.layer.0.name=input\n", "spikes.total.ratio=0.500000\n"}) {
    EXPECT_NE(s.find(line), std::string::npos) << line;
  }
  EXPECT_EQ(s.rfind("wall_time_ms=1.500\n"), s.size() - 19);
}
