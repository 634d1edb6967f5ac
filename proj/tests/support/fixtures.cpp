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

#include "fixtures.hpp"

#include <algorithm>
#include <cmath>

namespace spikeforge::testing {

namespace {

double f32(double v) { return static_cast<double>(static_cast<float>(v)); }

Tensor uniform_weights(std::mt19937_64& rng, const Shape& shape, double gain) {
  const double fan_in = static_cast<double>(shape.per_item());
  const double bound = gain / std::sqrt(fan_in);
  std::uniform_real_distribution<double> dist(-bound, bound);
  std::vector<double> data(shape.size());
  for (double& v : data) v = f32(dist(rng));
  return Tensor(shape, std::move(data));
}

std::vector<double> uniform_vector(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> out(n);
  for (double& v : out) v = f32(dist(rng));
  return out;
}

BatchNormParams random_bn(std::mt19937_64& rng, std::size_t channels) {
  return {uniform_vector(rng, channels, 0.6, 1.4), uniform_vector(rng, channels, -0.05, 0.1),
          uniform_vector(rng, channels, -0.1, 0.1), uniform_vector(rng, channels, 0.6, 1.5)};
}

LayerSpec make_layer(std::mt19937_64& rng, LayerGeometry g, const VRConfig& cfg, double gain,
                     bool batch_norm) {
  LayerSpec layer;
  layer.geometry = g;
  if (g.kind == LayerKind::AvgPool) {
    layer.bias.assign(g.out_channels, 0.0);
    return layer;
  }
  layer.weights = uniform_weights(rng, g.weight_shape(), gain);
  // Centre the pre-activations inside the rails so interior grid points get
  // exercised as well as the clamps.
  const double mid = 0.5 * (cfg.lower_rail() + cfg.upper_rail());
  layer.bias = uniform_vector(rng, g.out_channels, mid - 0.25, mid + 0.1);
  if (batch_norm) layer.bn = random_bn(rng, g.out_channels);
  return layer;
}

}  // namespace

NetworkSpec random_network(std::uint64_t seed, const VRConfig& cfg, const FixtureOptions& options) {
  std::mt19937_64 rng(seed);
  NetworkSpec net;
  net.cfg = cfg;
  net.mode = NetworkMode::Ann;

  std::uniform_int_distribution<std::size_t> depth_dist(options.min_layers, options.max_layers);
  const std::size_t depth = depth_dist(rng);
  std::size_t channels = options.input_channels;
  std::size_t size = options.input_size;
  bool flat = false;

  for (std::size_t i = 0; i + 1 < depth; ++i) {
    std::uniform_int_distribution<int> kind_dist(0, 9);
    const int roll = kind_dist(rng);
    LayerGeometry g;
    if (flat || roll == 9) {
      std::uniform_int_distribution<std::size_t> width(4, options.max_channels * 2);
      g = {LayerKind::Dense, flat ? channels : channels * size * size, width(rng), 1, 1, 0};
      channels = g.out_channels;
      size = 1;
      flat = true;
    } else if (roll >= 6 && size >= 2 && size % 2 == 0) {
      g = {LayerKind::AvgPool, channels, channels, 2, 2, 0};
      size /= 2;
    } else {
      std::uniform_int_distribution<std::size_t> width(2, options.max_channels);
      const std::size_t k = (roll % 3 == 0 || size < 3) ? 1 : 3;
      const std::size_t stride = (roll == 5 && size >= 4) ? 2 : 1;
      g = {LayerKind::Conv2d, channels, width(rng), k, stride, k / 2};
      size = (size + 2 * (k / 2) - k) / stride + 1;
      channels = g.out_channels;
    }
    net.layers.push_back(make_layer(rng, g, cfg, options.weight_gain,
                                    options.batch_norm && g.kind != LayerKind::AvgPool));
  }
  const std::size_t features = flat ? channels : channels * size * size;
  LayerGeometry head{LayerKind::Dense, features, options.classes, 1, 1, 0};
  net.layers.push_back(make_layer(rng, head, cfg, options.weight_gain * 2.0, options.batch_norm));
  net.validate();
  return net;
}

NetworkSpec vgg_tiny(std::uint64_t seed, const VRConfig& cfg, bool batch_norm) {
  std::mt19937_64 rng(seed);
  NetworkSpec net;
  net.cfg = cfg;
  const double gain = 0.5;
  net.layers.push_back(make_layer(rng, {LayerKind::Conv2d, 3, 8, 3, 1, 1}, cfg, gain, batch_norm));
  net.layers.push_back(make_layer(rng, {LayerKind::AvgPool, 8, 8, 2, 2, 0}, cfg, gain, false));
  net.layers.push_back(make_layer(rng, {LayerKind::Conv2d, 8, 16, 3, 1, 1}, cfg, gain, batch_norm));
  net.layers.push_back(make_layer(rng, {LayerKind::Dense, 16 * 4 * 4, 10, 1, 1, 0}, cfg, 1.0, false));
  net.validate();
  return net;
}

Tensor random_grid_input(std::mt19937_64& rng, const Shape& shape, const VRConfig& cfg) {
  std::uniform_int_distribution<int> level(cfg.t_min(), cfg.t_max());
  std::vector<double> data(shape.size());
  for (double& v : data) v = static_cast<double>(level(rng)) / cfg.t_q();
  return Tensor(shape, std::move(data));
}

Tensor random_unit_input(std::mt19937_64& rng, const Shape& shape) {
  return random_tensor(rng, shape, 0.0, 1.0);
}

Tensor random_tensor(std::mt19937_64& rng, const Shape& shape, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> data(shape.size());
  for (double& v : data) v = dist(rng);
  return Tensor(shape, std::move(data));
}

Tensor naive_conv2d(const Tensor& input, const Tensor& weights, const std::vector<double>& bias,
                    std::size_t stride, std::size_t padding) {
  const Shape in = input.shape();
  const Shape ws = weights.shape();
  const std::size_t k = ws.h;
  // Materialize the zero-padded input, then slide over it.
  const Shape padded_shape{in.n, in.c, in.h + 2 * padding, in.w + 2 * padding};
  Tensor padded(padded_shape);
  for (std::size_t n = 0; n < in.n; ++n)
    for (std::size_t c = 0; c < in.c; ++c)
      for (std::size_t h = 0; h < in.h; ++h)
        for (std::size_t w = 0; w < in.w; ++w)
          padded.at(n, c, h + padding, w + padding) = input.at(n, c, h, w);

  const std::size_t oh = (padded_shape.h - k) / stride + 1;
  const std::size_t ow = (padded_shape.w - k) / stride + 1;
  Tensor out(Shape{in.n, ws.n, oh, ow});
  for (std::size_t n = 0; n < in.n; ++n)
    for (std::size_t o = 0; o < ws.n; ++o)
      for (std::size_t y = 0; y < oh; ++y)
        for (std::size_t x = 0; x < ow; ++x) {
          double acc = 0.0;
          for (std::size_t c = 0; c < in.c; ++c)
            for (std::size_t i = 0; i < k; ++i)
              for (std::size_t j = 0; j < k; ++j)
                acc += weights.at(o, c, i, j) * padded.at(n, c, y * stride + i, x * stride + j);
          out.at(n, o, y, x) = acc + bias[o];
        }
  return out;
}

Tensor naive_dense(const Tensor& input, const Tensor& weights, const std::vector<double>& bias) {
  const std::size_t batch = input.shape().n;
  const std::size_t features = input.shape().per_item();
  const std::size_t outs = weights.shape().n;
  Tensor out(Shape{batch, outs, 1, 1});
  for (std::size_t n = 0; n < batch; ++n)
    for (std::size_t o = 0; o < outs; ++o) {
      double acc = 0.0;
      for (std::size_t i = 0; i < features; ++i)
        acc += weights[o * features + i] * input[n * features + i];
      out[n * outs + o] = acc + bias[o];
    }
  return out;
}

Tensor naive_avgpool(const Tensor& input, std::size_t window, std::size_t stride) {
  const Shape in = input.shape();
  const std::size_t oh = (in.h - window) / stride + 1;
  const std::size_t ow = (in.w - window) / stride + 1;
  Tensor out(Shape{in.n, in.c, oh, ow});
  for (std::size_t n = 0; n < in.n; ++n)
    for (std::size_t c = 0; c < in.c; ++c)
      for (std::size_t y = 0; y < oh; ++y)
        for (std::size_t x = 0; x < ow; ++x) {
          std::vector<double> patch;
          for (std::size_t i = 0; i < window; ++i)
            for (std::size_t j = 0; j < window; ++j)
              patch.push_back(input.at(n, c, y * stride + i, x * stride + j));
          double sum = 0.0;
          for (double v : patch) sum += v;
          out.at(n, c, y, x) = sum / static_cast<double>(patch.size());
        }
  return out;
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) return INFINITY;
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

std::string fixture_dir() { return SPIKEFORGE_FIXTURE_DIR; }

}  // namespace spikeforge::testing
