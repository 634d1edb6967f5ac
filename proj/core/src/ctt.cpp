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

#include "spikeforge/ctt.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spikeforge/parallel.hpp"
#include "spikeforge/spike_engine.hpp"

namespace spikeforge {

void CttConfig::validate() const {
  if (!(lr > 0.0)) throw std::invalid_argument("CTT learning rate must be positive");
  if (epochs < 1) throw std::invalid_argument("CTT epochs must be >= 1");
  if (init_theta && !(*init_theta > 0.0)) {
    throw std::invalid_argument("CTT initial threshold must be positive");
  }
}

namespace {

std::vector<std::int64_t> channel_counts(const SpikeTrain& train) {
  const Shape& s = train.shape();
  std::vector<std::int64_t> counts(s.c, 0);
  for (std::size_t t = 0; t < train.window(); ++t) {
    const auto plane = train.plane(t);
    for (std::size_t n = 0; n < s.n; ++n) {
      for (std::size_t c = 0; c < s.c; ++c) {
        const std::size_t base = s.offset(n, c, 0, 0);
        for (std::size_t i = 0; i < s.spatial(); ++i) counts[c] += plane[base + i];
      }
    }
  }
  return counts;
}

std::vector<double> count_difference(const std::vector<std::int64_t>& asg,
                                     const std::vector<std::int64_t>& ifc) {
  std::vector<double> loss(asg.size());
  for (std::size_t c = 0; c < asg.size(); ++c) loss[c] = static_cast<double>(asg[c] - ifc[c]);
  return loss;
}

std::vector<SpikeTrain> encode_calibration(const NetworkSpec& net, std::span<const Tensor> calib) {
  std::vector<SpikeTrain> trains;
  for (const Tensor& batch : calib) {
    for (std::size_t n = 0; n < batch.shape().n; ++n) {
      trains.push_back(encode_input(batch.item(n), net.cfg));
    }
  }
  if (trains.empty()) throw EmptyCalibrationError("calibration set is empty");
  return trains;
}

const std::vector<double>& thresholds_of(const LayerSpec& layer, std::size_t index) {
  if (!layer.thresholds) {
    throw std::invalid_argument("layer " + std::to_string(index) + " has no thresholds");
  }
  return *layer.thresholds;
}

void check_snn(const NetworkSpec& net) {
  if (net.mode != NetworkMode::Snn) throw std::invalid_argument("threshold training needs an SNN-mode network");
  net.validate();
}

}  // namespace

std::vector<double> ctt_loss(const SpikeTrain& layer_input, const LayerSpec& layer,
                             std::span<const double> theta_if, const VRConfig& cfg) {
  if (theta_if.size() != layer.geometry.out_channels) {
    throw ShapeError("threshold count " + std::to_string(theta_if.size()) +
                     " != layer out_channels " + std::to_string(layer.geometry.out_channels));
  }
  const auto consts = layer_step_constant(layer, cfg);
  const auto potentials = layer_potentials(layer_input, layer, consts, cfg);
  const auto if_counts = channel_counts(if_fire(potentials, theta_if));
  const auto asg_counts = channel_counts(asg_fire(potentials, cfg.theta()));
  return count_difference(asg_counts, if_counts);
}

std::vector<double> ctt_update(std::span<const double> theta, std::span<const double> loss,
                               double lr) {
  if (theta.size() != loss.size()) {
    throw ShapeError("threshold count " + std::to_string(theta.size()) + " != loss length " +
                     std::to_string(loss.size()));
  }
  std::vector<double> out(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    out[i] = std::max(kMinThreshold, theta[i] - lr * loss[i]);
  }
  return out;
}

std::vector<std::vector<double>> ctt_layer_losses(const NetworkSpec& net,
                                                  std::span<const Tensor> calib) {
  check_snn(net);
  std::vector<SpikeTrain> inputs = encode_calibration(net, calib);
  std::vector<std::vector<double>> losses;
  for (std::size_t i = 0; i < net.classifier_index(); ++i) {
    const LayerSpec& layer = net.layers[i];
    const auto& theta = thresholds_of(layer, i);
    const auto consts = layer_step_constant(layer, net.cfg);
    std::vector<std::vector<std::int64_t>> if_counts(inputs.size());
    std::vector<std::vector<std::int64_t>> asg_counts(inputs.size());
    parallel_for(inputs.size(), [&](std::size_t k) {
      const auto potentials = layer_potentials(inputs[k], layer, consts, net.cfg);
      SpikeTrain out = if_fire(potentials, theta);
      if_counts[k] = channel_counts(out);
      asg_counts[k] = channel_counts(asg_fire(potentials, net.cfg.theta()));
      inputs[k] = std::move(out);
    });
    std::vector<double> loss(layer.geometry.out_channels, 0.0);
    for (std::size_t k = 0; k < inputs.size(); ++k) {
      const auto d = count_difference(asg_counts[k], if_counts[k]);
      for (std::size_t c = 0; c < loss.size(); ++c) loss[c] += d[c];
    }
    losses.push_back(std::move(loss));
  }
  return losses;
}

double mean_abs_loss(const std::vector<std::vector<double>>& losses) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& layer : losses) {
    for (double l : layer) {
      sum += std::abs(l);
      ++n;
    }
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

CttResult ctt_train(NetworkSpec& net, std::span<const Tensor> calib, const CttConfig& cfg) {
  cfg.validate();
  check_snn(net);
  if (cfg.init_theta) {
    for (std::size_t i = 0; i < net.classifier_index(); ++i) {
      net.layers[i].thresholds =
          std::vector<double>(net.layers[i].geometry.out_channels, *cfg.init_theta);
    }
  }

  CttResult result;
  result.initial_mean_abs_loss = mean_abs_loss(ctt_layer_losses(net, calib));

  std::vector<SpikeTrain> inputs = encode_calibration(net, calib);
  const std::size_t items = inputs.size();
  const double asg_theta = net.cfg.theta();

  for (std::size_t i = 0; i < net.classifier_index(); ++i) {
    LayerSpec& layer = net.layers[i];
    const auto consts = layer_step_constant(layer, net.cfg);

    // The layer's input is fixed while it trains, so potentials and the ASG
    // targets are computed once.
    std::vector<std::vector<Tensor>> potentials(items);
    std::vector<std::vector<std::int64_t>> asg_counts(items);
    parallel_for(items, [&](std::size_t k) {
      potentials[k] = layer_potentials(inputs[k], layer, consts, net.cfg);
      asg_counts[k] = channel_counts(asg_fire(potentials[k], asg_theta));
    });
    std::vector<std::int64_t> asg_total(layer.geometry.out_channels, 0);
    for (const auto& counts : asg_counts) {
      for (std::size_t c = 0; c < counts.size(); ++c) asg_total[c] += counts[c];
    }

    const Shape out_shape = potentials.front().front().shape();
    const double step = cfg.lr / (static_cast<double>(items) * static_cast<double>(out_shape.spatial()));
    std::vector<double> theta = thresholds_of(layer, i);
    std::vector<std::vector<std::int64_t>> if_counts(items);
    int epochs_run = 0;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
      parallel_for(items, [&](std::size_t k) {
        if_counts[k] = channel_counts(if_fire(potentials[k], theta));
      });
      std::vector<std::int64_t> if_total(theta.size(), 0);
      for (const auto& counts : if_counts) {
        for (std::size_t c = 0; c < counts.size(); ++c) if_total[c] += counts[c];
      }
      const auto loss = count_difference(asg_total, if_total);
      if (std::all_of(loss.begin(), loss.end(), [](double l) { return l == 0.0; })) break;
      theta = ctt_update(theta, loss, step);
      ++epochs_run;
    }
    layer.thresholds = theta;
    result.thresholds.push_back(theta);
    result.epochs_run.push_back(epochs_run);

    parallel_for(items, [&](std::size_t k) { inputs[k] = if_fire(potentials[k], theta); });
  }

  result.final_mean_abs_loss = mean_abs_loss(ctt_layer_losses(net, calib));
  return result;
}

}  // namespace spikeforge
