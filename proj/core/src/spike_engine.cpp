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

#include "spikeforge/spike_engine.hpp"

#include <algorithm>
#include <string>

#include "spikeforge/numeric.hpp"
#include "spikeforge/parallel.hpp"

namespace spikeforge {

SpikeTrain encode_input(const Tensor& x, const VRConfig& cfg) {
  const auto window = static_cast<std::size_t>(cfg.window());
  SpikeTrain train(window, x.shape());
  const auto data = x.data();
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto count = cfg.count_of(data[i]);
    if (!count) {
      throw GridError("input value " + std::to_string(data[i]) + " at element " +
                      std::to_string(i) + " is not on the VR grid");
    }
    // IF on the constant (x - T_min/T_q) with threshold T/T_q, scaled by T_q
    // so the membrane stays integral.
    long membrane = 0;
    for (std::size_t t = 0; t < window; ++t) {
      membrane += *count;
      if (membrane >= cfg.window()) {
        membrane -= cfg.window();
        train.set(t, i, true);
      }
    }
  }
  return train;
}

std::vector<std::uint8_t> if_neuron(std::span<const double> potentials, double theta) {
  std::vector<std::uint8_t> out(potentials.size(), 0);
  double membrane = 0.0;
  for (std::size_t t = 0; t < potentials.size(); ++t) {
    membrane += potentials[t];
    if (reaches(membrane, theta)) {
      membrane -= theta;
      out[t] = 1;
    }
  }
  return out;
}

std::vector<std::uint8_t> asg_fire(double average, double theta, std::size_t window) {
  std::vector<std::uint8_t> out(window, 0);
  // Membrane in units of theta after t integrations and n resets is
  // t*r - n; evaluating it directly avoids drift from repeated addition.
  const double r = average / theta;
  std::size_t fired = 0;
  for (std::size_t t = 0; t < window; ++t) {
    const double membrane = static_cast<double>(t + 1) * r - static_cast<double>(fired);
    if (reaches(membrane, 1.0)) {
      out[t] = 1;
      ++fired;
    }
  }
  return out;
}

std::vector<std::uint8_t> asg_neuron(std::span<const double> potentials, double theta) {
  if (potentials.empty()) return {};
  double sum = 0.0;
  for (double v : potentials) sum += v;
  return asg_fire(sum / static_cast<double>(potentials.size()), theta, potentials.size());
}

std::vector<std::uint8_t> if_layer_step(NeuronState& state, const Tensor& input_potential,
                                        std::span<const double> theta) {
  const Shape& s = input_potential.shape();
  if (state.membrane.shape() != s) {
    throw ShapeError("membrane shape " + state.membrane.shape().str() +
                     " != input potential shape " + s.str());
  }
  if (theta.size() != s.c) {
    throw ShapeError("threshold count " + std::to_string(theta.size()) + " != channels " +
                     std::to_string(s.c));
  }
  std::vector<std::uint8_t> fired(s.size(), 0);
  auto u = state.membrane.mutable_data();
  const auto v = input_potential.data();
  for (std::size_t n = 0; n < s.n; ++n) {
    for (std::size_t c = 0; c < s.c; ++c) {
      const std::size_t base = s.offset(n, c, 0, 0);
      for (std::size_t i = base; i < base + s.spatial(); ++i) {
        u[i] += v[i];
        if (reaches(u[i], theta[c])) {
          u[i] -= theta[c];
          fired[i] = 1;
        }
      }
    }
  }
  return fired;
}

std::vector<double> layer_step_constant(const LayerSpec& layer, const VRConfig& cfg) {
  if (layer.step_constant) return *layer.step_constant;
  std::vector<double> out = layer.bias;
  for (double& v : out) v -= cfg.lower_rail();
  return out;
}

LayerDrive::LayerDrive(const LayerSpec& layer, const VRConfig& cfg, const Shape& input_shape,
                       std::vector<double> step_const)
    : layer_(&layer),
      step_const_(std::move(step_const)),
      output_shape_(layer.geometry.output_shape(input_shape)) {
  if (step_const_.size() != layer.geometry.out_channels) {
    throw ShapeError("step constant length " + std::to_string(step_const_.size()) +
                     " != out_channels " + std::to_string(layer.geometry.out_channels));
  }
  const LayerGeometry& g = layer.geometry;
  if (g.kind != LayerKind::Conv2d || g.padding == 0 || cfg.t_min() == 0) return;

  const Shape one{1, input_shape.c, input_shape.h, input_shape.w};
  const std::vector<double> no_bias(g.out_channels, 0.0);
  Tensor reach = conv2d_forward(Tensor::filled(one, 1.0), layer.weights, no_bias, g);
  const double offset = static_cast<double>(cfg.t_min()) / cfg.window();
  const std::size_t per_channel = layer.weights.shape().per_item();
  const auto w = layer.weights.data();
  const Shape& rs = reach.shape();
  auto d = reach.mutable_data();
  for (std::size_t c = 0; c < rs.c; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < per_channel; ++i) total += w[c * per_channel + i];
    double* p = d.data() + rs.offset(0, c, 0, 0);
    for (std::size_t i = 0; i < rs.spatial(); ++i) p[i] = offset * (p[i] - total);
  }
  border_ = std::move(reach);
}

Tensor LayerDrive::operator()(const Tensor& plane) const {
  Tensor v = linear_forward(*layer_, plane, step_const_);
  if (border_.empty()) return v;
  const Shape& s = v.shape();
  const std::size_t per_item = s.per_item();
  auto d = v.mutable_data();
  const auto b = border_.data();
  for (std::size_t n = 0; n < s.n; ++n) {
    for (std::size_t i = 0; i < per_item; ++i) d[n * per_item + i] += b[i];
  }
  return v;
}

std::vector<Tensor> layer_potentials(const SpikeTrain& inputs, const LayerSpec& layer,
                                     std::span<const double> step_const, const VRConfig& cfg) {
  const LayerDrive drive(layer, cfg, inputs.shape(),
                         std::vector<double>(step_const.begin(), step_const.end()));
  std::vector<Tensor> potentials;
  potentials.reserve(inputs.window());
  for (std::size_t t = 0; t < inputs.window(); ++t) {
    potentials.push_back(drive(inputs.plane_tensor(t)));
  }
  return potentials;
}

SpikeTrain if_fire(std::span<const Tensor> potentials, std::span<const double> theta) {
  if (potentials.empty()) throw std::invalid_argument("if_fire needs at least one time step");
  const Shape& s = potentials.front().shape();
  SpikeTrain out(potentials.size(), s);
  NeuronState state = NeuronState::zeros(s);
  for (std::size_t t = 0; t < potentials.size(); ++t) {
    const auto fired = if_layer_step(state, potentials[t], theta);
    std::copy(fired.begin(), fired.end(), out.mutable_plane(t).begin());
  }
  return out;
}

SpikeTrain asg_fire(std::span<const Tensor> potentials, double theta, bool pre_divided) {
  if (potentials.empty()) throw std::invalid_argument("asg_fire needs at least one time step");
  if (!(theta > 0.0)) throw std::invalid_argument("ASG threshold must be positive");
  const Shape& s = potentials.front().shape();
  const std::size_t window = potentials.size();
  std::vector<double> average(s.size(), 0.0);
  for (const Tensor& v : potentials) {
    if (v.shape() != s) throw ShapeError("per-step potentials disagree in shape");
    const auto d = v.data();
    for (std::size_t i = 0; i < average.size(); ++i) average[i] += d[i];
  }
  if (!pre_divided) {
    for (double& a : average) a /= static_cast<double>(window);
  }
  SpikeTrain out(window, s);
  for (std::size_t i = 0; i < average.size(); ++i) {
    const auto train = asg_fire(average[i], theta, window);
    for (std::size_t t = 0; t < window; ++t) {
      if (train[t]) out.set(t, i, true);
    }
  }
  return out;
}

SpikeTrain asg_layer(const SpikeTrain& inputs, const LayerSpec& layer,
                     std::span<const double> step_const, double theta, const VRConfig& cfg,
                     AsgOptions options) {
  if (!options.merged_division) {
    return asg_fire(layer_potentials(inputs, layer, step_const, cfg), theta);
  }
  const double inv_window = 1.0 / static_cast<double>(inputs.window());
  LayerSpec merged = layer;
  for (double& w : merged.weights.mutable_data()) w *= inv_window;
  merged.pool_scale *= inv_window;
  std::vector<double> merged_const(step_const.begin(), step_const.end());
  for (double& c : merged_const) c *= inv_window;
  return asg_fire(layer_potentials(inputs, merged, merged_const, cfg), theta, true);
}

// ---------------------------------------------------------------------------

std::uint64_t SpikeStats::fired() const {
  std::uint64_t total = 0;
  for (const auto& l : layers) total += l.fired;
  return total;
}

std::uint64_t SpikeStats::slots() const {
  std::uint64_t total = 0;
  for (const auto& l : layers) total += l.slots;
  return total;
}

double SpikeStats::ratio() const {
  const auto s = slots();
  return s == 0 ? 0.0 : static_cast<double>(fired()) / static_cast<double>(s);
}

void SpikeStats::accumulate(const SpikeStats& other) {
  if (layers.empty()) {
    layers = other.layers;
    return;
  }
  if (other.layers.size() != layers.size()) {
    throw std::invalid_argument("cannot accumulate spike stats of different networks");
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    layers[i].fired += other.layers[i].fired;
    layers[i].slots += other.layers[i].slots;
  }
}

namespace {

std::string layer_name(const NetworkSpec& net, std::size_t index) {
  return std::string(to_string(net.layers[index].geometry.kind)) + "_" + std::to_string(index);
}

LayerSpikeStats stats_of(std::string name, const SpikeTrain& train) {
  return {std::move(name), train.total(), static_cast<std::uint64_t>(train.window()) *
                                              train.plane_size()};
}

void check_input(const NetworkSpec& net, const SpikeTrain& input) {
  if (net.mode != NetworkMode::Snn) throw std::invalid_argument("SNN engine requires an SNN-mode network");
  net.validate();
  if (input.window() != static_cast<std::size_t>(net.cfg.window())) {
    throw ShapeError("input train window " + std::to_string(input.window()) +
                     " != network window T=" + std::to_string(net.cfg.window()));
  }
}

Tensor decode_logits(Tensor accumulated, const VRConfig& cfg) {
  const double window = cfg.window();
  for (double& v : accumulated.mutable_data()) v = v / window + cfg.lower_rail();
  return accumulated;
}

SimulationResult if_item(const NetworkSpec& net, const SpikeTrain& input,
                         const SimulationOptions& options) {
  const std::size_t window = input.window();
  const std::vector<Shape> shapes = layer_shapes(net, input.shape());
  const std::size_t depth = net.layers.size();

  std::vector<NeuronState> states;
  std::vector<LayerDrive> drives;
  std::vector<std::vector<double>> thresholds;
  std::vector<SpikeTrain> outputs;
  for (std::size_t i = 0; i < depth; ++i) {
    states.push_back(NeuronState::zeros(shapes[i]));
    drives.emplace_back(net.layers[i], net.cfg, i == 0 ? input.shape() : shapes[i - 1],
                        layer_step_constant(net.layers[i], net.cfg));
    thresholds.push_back(net.layers[i].thresholds
                             ? *net.layers[i].thresholds
                             : std::vector<double>(shapes[i].c, net.cfg.theta()));
    if (!net.is_classifier(i)) outputs.emplace_back(window, shapes[i]);
  }
  Tensor accumulated = Tensor::zeros(shapes.back());

  for (std::size_t t = 0; t < window; ++t) {
    Tensor plane = input.plane_tensor(t);
    for (std::size_t i = 0; i < depth; ++i) {
      Tensor potential = drives[i](plane);
      if (net.is_classifier(i)) {
        auto acc = accumulated.mutable_data();
        const auto v = potential.data();
        for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += v[k];
        break;
      }
      const auto fired = if_layer_step(states[i], potential, thresholds[i]);
      std::copy(fired.begin(), fired.end(), outputs[i].mutable_plane(t).begin());
      plane = outputs[i].plane_tensor(t);
    }
  }

  SimulationResult result;
  result.logits = decode_logits(std::move(accumulated), net.cfg);
  result.stats.layers.push_back(stats_of("input", input));
  for (std::size_t i = 0; i + 1 < depth; ++i) {
    result.stats.layers.push_back(stats_of(layer_name(net, i), outputs[i]));
  }
  if (options.keep_trains) {
    result.trains.push_back(input);
    for (auto& o : outputs) result.trains.push_back(std::move(o));
  }
  return result;
}

SimulationResult asg_item(const NetworkSpec& net, const SpikeTrain& input,
                          const SimulationOptions& options) {
  const double theta = net.cfg.theta();
  SimulationResult result;
  result.stats.layers.push_back(stats_of("input", input));
  if (options.keep_trains) result.trains.push_back(input);

  SpikeTrain current = input;
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    const LayerSpec& layer = net.layers[i];
    const std::vector<double> consts = layer_step_constant(layer, net.cfg);
    if (net.is_classifier(i)) {
      const auto potentials = layer_potentials(current, layer, consts, net.cfg);
      Tensor accumulated = Tensor::zeros(potentials.front().shape());
      auto acc = accumulated.mutable_data();
      for (const Tensor& v : potentials) {
        const auto d = v.data();
        for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += d[k];
      }
      result.logits = decode_logits(std::move(accumulated), net.cfg);
      break;
    }
    current = asg_layer(current, layer, consts, theta, net.cfg, {options.merged_division});
    result.stats.layers.push_back(stats_of(layer_name(net, i), current));
    if (options.keep_trains) result.trains.push_back(current);
  }
  return result;
}

template <typename ItemFn>
SimulationResult run_batched(const NetworkSpec& net, const SpikeTrain& input,
                             const SimulationOptions& options, ItemFn item_fn) {
  check_input(net, input);
  const std::size_t batch = input.shape().n;
  if (batch == 0) throw ShapeError("empty input batch");
  std::vector<SimulationResult> items(batch);
  parallel_for(batch, [&](std::size_t b) { items[b] = item_fn(net, input.item(b), options); });

  SimulationResult result;
  std::vector<Tensor> logits;
  for (auto& item : items) {
    logits.push_back(std::move(item.logits));
    result.stats.accumulate(item.stats);
  }
  result.logits = stack(logits);
  if (options.keep_trains) {
    const std::size_t n_trains = items.front().trains.size();
    for (std::size_t k = 0; k < n_trains; ++k) {
      std::vector<SpikeTrain> per_item;
      per_item.reserve(batch);
      for (auto& item : items) per_item.push_back(std::move(item.trains[k]));
      result.trains.push_back(stack(per_item));
    }
  }
  return result;
}

}  // namespace

SimulationResult if_network_forward(const NetworkSpec& net, const SpikeTrain& input,
                                    SimulationOptions options) {
  return run_batched(net, input, options, if_item);
}

SimulationResult asg_network_forward(const NetworkSpec& net, const SpikeTrain& input,
                                     SimulationOptions options) {
  return run_batched(net, input, options, asg_item);
}

std::size_t argmax_item(const Tensor& logits, std::size_t item) {
  const std::size_t stride = logits.shape().per_item();
  const auto d = logits.data().subspan(item * stride, stride);
  return static_cast<std::size_t>(std::max_element(d.begin(), d.end()) - d.begin());
}

}  // namespace spikeforge
