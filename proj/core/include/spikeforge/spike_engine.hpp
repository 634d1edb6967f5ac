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
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "spikeforge/annq.hpp"
#include "spikeforge/network.hpp"
#include "spikeforge/tensor.hpp"

namespace spikeforge {

/// Raised when an input to the spike encoder is not on the VR grid.
class GridError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Rate-encode grid values: each element x emits T_q*x - T_min evenly
/// spaced spikes over the T-step window.
SpikeTrain encode_input(const Tensor& x, const VRConfig& cfg);

// ---------------------------------------------------------------------------
// Single-neuron dynamics

/// IF with reset-by-subtraction over per-step potentials.
std::vector<std::uint8_t> if_neuron(std::span<const double> potentials, double theta);

/// IF on a constant per-step input `average` for `window` steps.
std::vector<std::uint8_t> asg_fire(double average, double theta, std::size_t window);

/// Averaging spike generation: average the per-step potentials, then fire
/// on the constant average.
std::vector<std::uint8_t> asg_neuron(std::span<const double> potentials, double theta);

// ---------------------------------------------------------------------------
// Layer dynamics

/// Membrane state of one spiking layer.
struct NeuronState {
  Tensor membrane;

  static NeuronState zeros(const Shape& shape) { return {Tensor::zeros(shape)}; }
};

/// One IF step: integrate `input_potential`, fire where the membrane reaches
/// its channel's threshold and subtract the threshold there.
std::vector<std::uint8_t> if_layer_step(NeuronState& state, const Tensor& input_potential,
                                        std::span<const double> theta);

/// Per-step constant of a converted layer (stored, or derived from its bias).
std::vector<double> layer_step_constant(const LayerSpec& layer, const VRConfig& cfg);

/// Per-step drive V(t) of a converted layer: its linear map of the input
/// plane plus the step constant.
///
/// The bias correction folds the T_min offset of every kernel tap into one
/// per-channel constant, but zero-padded taps carry no offset in the ANN.
/// Padded conv layers therefore also add a per-site border term
/// (T_min / T) * (conv(w, 1) - sum(w)), which is zero away from the edges.
class LayerDrive {
 public:
  LayerDrive(const LayerSpec& layer, const VRConfig& cfg, const Shape& input_shape,
             std::vector<double> step_const);

  Tensor operator()(const Tensor& plane) const;
  const Shape& output_shape() const { return output_shape_; }

 private:
  const LayerSpec* layer_;
  std::vector<double> step_const_;
  Shape output_shape_;
  Tensor border_;
};

/// V(t) for every step of `inputs`. Buffers all T planes.
std::vector<Tensor> layer_potentials(const SpikeTrain& inputs, const LayerSpec& layer,
                                     std::span<const double> step_const, const VRConfig& cfg);

/// IF over buffered per-step potentials with per-channel thresholds.
SpikeTrain if_fire(std::span<const Tensor> potentials, std::span<const double> theta);

/// ASG over buffered per-step potentials with one threshold. When
/// `pre_divided` is set the potentials already carry the 1/T factor.
SpikeTrain asg_fire(std::span<const Tensor> potentials, double theta, bool pre_divided = false);

struct AsgOptions {
  /// Fold the 1/T averaging into weights and step constant instead of
  /// dividing the summed potential.
  bool merged_division = false;
};

/// One ASG layer driven by an input spike train.
SpikeTrain asg_layer(const SpikeTrain& inputs, const LayerSpec& layer,
                     std::span<const double> step_const, double theta, const VRConfig& cfg,
                     AsgOptions options = {});

// ---------------------------------------------------------------------------
// Networks

struct LayerSpikeStats {
  std::string name;
  std::uint64_t fired = 0;
  std::uint64_t slots = 0;

  double ratio() const { return slots == 0 ? 0.0 : static_cast<double>(fired) / slots; }
  friend bool operator==(const LayerSpikeStats&, const LayerSpikeStats&) = default;
};

/// Spike counts per spiking layer; the input encoding is the first entry.
struct SpikeStats {
  std::vector<LayerSpikeStats> layers;

  std::uint64_t fired() const;
  std::uint64_t slots() const;
  double ratio() const;

  /// Element-wise sum with another run over the same network.
  void accumulate(const SpikeStats& other);

  friend bool operator==(const SpikeStats&, const SpikeStats&) = default;
};

struct SimulationOptions {
  bool keep_trains = false;
  bool merged_division = false;
};

struct SimulationResult {
  /// Decoded classifier output: accumulated potential / T + T_min / T_q.
  Tensor logits;
  SpikeStats stats;
  /// Input train followed by every spiking layer's output (if kept).
  std::vector<SpikeTrain> trains;
};

/// Causal IF network: every layer consumes the previous layer's plane at
/// step t before step t+1 is simulated.
SimulationResult if_network_forward(const NetworkSpec& net, const SpikeTrain& input,
                                    SimulationOptions options = {});

/// Layer-wise ASG network at threshold T/T_q on every spiking layer.
SimulationResult asg_network_forward(const NetworkSpec& net, const SpikeTrain& input,
                                     SimulationOptions options = {});

std::size_t argmax_item(const Tensor& logits, std::size_t item);

}  // namespace spikeforge
