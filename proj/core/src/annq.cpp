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

#include "spikeforge/annq.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spikeforge/network.hpp"
#include "spikeforge/numeric.hpp"

namespace spikeforge {

VRConfig::VRConfig(int t_q, int t_min, int t_max) : t_q_(t_q), t_min_(t_min), t_max_(t_max) {
  if (t_q < 1 || t_min < 0 || t_min >= t_max || t_max > t_q) {
    throw ConfigError("invalid VR config (T_q=" + std::to_string(t_q) +
                      ", T_min=" + std::to_string(t_min) + ", T_max=" + std::to_string(t_max) +
                      "): require 0 <= T_min < T_max <= T_q");
  }
}

std::optional<int> VRConfig::count_of(double x) const {
  const double scaled = x * t_q_;
  const double level = std::nearbyint(scaled);
  if (std::abs(scaled - level) > kSnapTolerance) return std::nullopt;
  if (level < t_min_ || level > t_max_) return std::nullopt;
  return static_cast<int>(level) - t_min_;
}

void BatchNormParams::validate(std::size_t channels) const {
  if (gamma.size() != channels || beta.size() != channels || mean.size() != channels ||
      variance.size() != channels) {
    throw ShapeError("batch norm parameter lengths (" + std::to_string(gamma.size()) + ", " +
                     std::to_string(beta.size()) + ", " + std::to_string(mean.size()) + ", " +
                     std::to_string(variance.size()) + ") != channel count " +
                     std::to_string(channels));
  }
  for (double v : variance) {
    if (!(v >= 0.0)) throw std::invalid_argument("batch norm variance must be non-negative");
  }
}

Tensor BatchNormParams::apply(const Tensor& x) const {
  const Shape& s = x.shape();
  validate(s.c);
  Tensor out = x;
  auto d = out.mutable_data();
  for (std::size_t n = 0; n < s.n; ++n) {
    for (std::size_t c = 0; c < s.c; ++c) {
      const double inv_std = 1.0 / std::sqrt(variance[c] + kBatchNormEpsilon);
      double* p = d.data() + s.offset(n, c, 0, 0);
      for (std::size_t i = 0; i < s.spatial(); ++i) {
        p[i] = gamma[c] * (p[i] - mean[c]) * inv_std + beta[c];
      }
    }
  }
  out.require_finite("batch norm");
  return out;
}

Tensor clamp(const Tensor& x, const VRConfig& cfg) {
  Tensor out = x;
  const double lo = cfg.lower_rail();
  const double hi = cfg.upper_rail();
  for (double& v : out.mutable_data()) v = std::clamp(v, lo, hi);
  return out;
}

Tensor quantize(const Tensor& x, const VRConfig& cfg) {
  Tensor out = x;
  const double tq = cfg.t_q();
  for (double& v : out.mutable_data()) v = snap_floor(v * tq) / tq;
  out.require_finite("quantize");
  return out;
}

FoldedLayer fold_batchnorm(const Tensor& weights, std::span<const double> bias,
                           const BatchNormParams& bn) {
  const std::size_t out_channels = weights.shape().n;
  bn.validate(out_channels);
  if (bias.size() != out_channels) {
    throw ShapeError("bias length " + std::to_string(bias.size()) + " != out_channels " +
                     std::to_string(out_channels));
  }
  FoldedLayer folded{weights, std::vector<double>(out_channels)};
  const std::size_t per_channel = weights.shape().per_item();
  auto w = folded.weights.mutable_data();
  for (std::size_t c = 0; c < out_channels; ++c) {
    const double scale = bn.gamma[c] / std::sqrt(bn.variance[c] + kBatchNormEpsilon);
    for (std::size_t i = 0; i < per_channel; ++i) w[c * per_channel + i] *= scale;
    folded.bias[c] = scale * (bias[c] - bn.mean[c]) + bn.beta[c];
  }
  folded.weights.require_finite("fold_batchnorm");
  return folded;
}

NetworkSpec fold_network(const NetworkSpec& net) {
  NetworkSpec out = net;
  for (LayerSpec& layer : out.layers) {
    if (!layer.bn) continue;
    if (layer.geometry.kind == LayerKind::AvgPool) {
      throw std::invalid_argument("cannot fold batch norm into an avgpool layer");
    }
    FoldedLayer folded = fold_batchnorm(layer.weights, layer.bias, *layer.bn);
    layer.weights = std::move(folded.weights);
    layer.bias = std::move(folded.bias);
    layer.bn.reset();
  }
  return out;
}

AnnTrace ann_forward_trace(const NetworkSpec& net, const Tensor& input, const VRConfig& cfg) {
  if (net.layers.empty()) throw std::invalid_argument("network has no layers");
  for (const LayerSpec& layer : net.layers) {
    if (layer.bn) throw std::invalid_argument("ann_forward requires batch norm to be folded");
  }
  AnnTrace trace;
  Tensor x = input;
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    Tensor z = linear_forward(net.layers[i], x);
    if (net.is_classifier(i)) {
      trace.logits = std::move(z);
      break;
    }
    x = quantize(clamp(z, cfg), cfg);
    trace.hidden.push_back(x);
  }
  return trace;
}

Tensor ann_forward(const NetworkSpec& net, const Tensor& input, const VRConfig& cfg) {
  return ann_forward_trace(net, input, cfg).logits;
}

bool on_grid(const Tensor& x, const VRConfig& cfg) {
  return std::all_of(x.data().begin(), x.data().end(),
                     [&](double v) { return cfg.count_of(v).has_value(); });
}

}  // namespace spikeforge
