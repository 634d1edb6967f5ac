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

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "spikeforge/annq.hpp"
#include "spikeforge/convert.hpp"
#include "spikeforge/kernels.hpp"
#include "spikeforge/spike_engine.hpp"

namespace sf = spikeforge;

namespace {

sf::Tensor uniform(std::mt19937_64& rng, const sf::Shape& shape, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> data(shape.size());
  for (double& v : data) v = d(rng);
  return sf::Tensor(shape, std::move(data));
}

sf::LayerSpec layer(std::mt19937_64& rng, sf::LayerGeometry g) {
  sf::LayerSpec l;
  l.geometry = g;
  l.bias.assign(g.out_channels, 0.3);
  if (g.kind != sf::LayerKind::AvgPool) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(g.weight_shape().per_item()));
    l.weights = uniform(rng, g.weight_shape(), -bound, bound);
  }
  return l;
}

// conv3x3(3->16) -> avgpool2 -> conv3x3(16->32) -> dense(512->10), 8x8 input.
sf::NetworkSpec small_vgg(const sf::VRConfig& cfg) {
  std::mt19937_64 rng(1);
  sf::NetworkSpec net;
  net.cfg = cfg;
  net.layers.push_back(layer(rng, {sf::LayerKind::Conv2d, 3, 16, 3, 1, 1}));
  net.layers.push_back(layer(rng, {sf::LayerKind::AvgPool, 16, 16, 2, 2, 0}));
  net.layers.push_back(layer(rng, {sf::LayerKind::Conv2d, 16, 32, 3, 1, 1}));
  net.layers.push_back(layer(rng, {sf::LayerKind::Dense, 32 * 4 * 4, 10, 1, 1, 0}));
  return sf::convert_network(net);
}

sf::SpikeTrain grid_input(const sf::VRConfig& cfg, std::size_t batch) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> level(cfg.t_min(), cfg.t_max());
  std::vector<double> data(batch * 3 * 8 * 8);
  for (double& v : data) v = static_cast<double>(level(rng)) / cfg.t_q();
  return sf::encode_input(sf::Tensor({batch, 3, 8, 8}, std::move(data)), cfg);
}

void BM_Conv2d(benchmark::State& state) {
  const auto channels = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(3);
  const sf::Tensor x = uniform(rng, {1, channels, 16, 16}, -1, 1);
  const sf::LayerGeometry g{sf::LayerKind::Conv2d, channels, channels, 3, 1, 1};
  const sf::Tensor w = uniform(rng, g.weight_shape(), -1, 1);
  const std::vector<double> b(channels, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(sf::conv2d_forward(x, w, b, g));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(channels * channels * 9 * 256));
}
BENCHMARK(BM_Conv2d)->Arg(8)->Arg(16)->Arg(32);

void BM_IfNetwork(benchmark::State& state) {
  const sf::VRConfig cfg(static_cast<int>(state.range(0)), 0, static_cast<int>(state.range(0)));
  const sf::NetworkSpec net = small_vgg(cfg);
  const sf::SpikeTrain in = grid_input(cfg, 8);
  for (auto _ : state) benchmark::DoNotOptimize(sf::if_network_forward(net, in));
}
BENCHMARK(BM_IfNetwork)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_AsgNetwork(benchmark::State& state) {
  const sf::VRConfig cfg(static_cast<int>(state.range(0)), 0, static_cast<int>(state.range(0)));
  const sf::NetworkSpec net = small_vgg(cfg);
  const sf::SpikeTrain in = grid_input(cfg, 8);
  for (auto _ : state) benchmark::DoNotOptimize(sf::asg_network_forward(net, in));
}
BENCHMARK(BM_AsgNetwork)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_AsgMergedDivision(benchmark::State& state) {
  const sf::VRConfig cfg(16, 0, 16);
  const sf::NetworkSpec net = small_vgg(cfg);
  const sf::SpikeTrain in = grid_input(cfg, 8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sf::asg_network_forward(net, in, {.merged_division = true}));
  }
}
BENCHMARK(BM_AsgMergedDivision)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
