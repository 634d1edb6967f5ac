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

#include "spikeforge/annq.hpp"
#include "spikeforge/tensor.hpp"

namespace spikeforge {

struct IceConfig {
  /// Expansion factor: number of (x_q, x'_q, x^_q) channel triples.
  int phi = 1;
  /// Base quantization level, normally the SNN window T.
  int window = 1;
  /// Iteration c quantizes at T+c and T-c instead of repeating T+1 / T-1.
  bool varied_levels = false;

  void validate() const;
};

/// Input channel expansion. For each of `phi` iterations, appends C channels
/// quantized at T, C at T+1 and C at T-1, the latter two remapped level-for-
/// level onto the T grid. Output has 3 * phi * C channels, all on {t/T}.
///
/// When T == 1 the T-1 branch is undefined; it is emitted as zeros and a
/// warning is written to stderr.
Tensor ice_expand(const Tensor& x, const IceConfig& cfg);

/// Moves ICE levels t/T onto the VR grid value (T_min + t) / T_q.
Tensor ice_to_vr_grid(const Tensor& expanded, int window, const VRConfig& vr);

/// ice_expand, grid mapping, then rate encoding of every expanded channel.
SpikeTrain ice_then_encode(const Tensor& x, const IceConfig& cfg, const VRConfig& vr);

}  // namespace spikeforge
