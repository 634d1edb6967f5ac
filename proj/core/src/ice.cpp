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

#include "spikeforge/ice.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>

#include "spikeforge/numeric.hpp"
#include "spikeforge/spike_engine.hpp"

namespace spikeforge {

void IceConfig::validate() const {
  if (phi < 1) throw std::invalid_argument("ICE expansion factor phi must be >= 1");
  if (window < 1) throw std::invalid_argument("ICE window T must be >= 1");
}

namespace {

// Level t on the T grid for x quantized at `level` steps; t/level is
// remapped to t/T for t in [1, T], so only t = level > T stays at 1.
double remapped_level(double x, int level, int window) {
  if (level < 1) return 0.0;
  const double t = snap_floor(x * level);
  return std::min(t, static_cast<double>(window));
}

}  // namespace

Tensor ice_expand(const Tensor& x, const IceConfig& cfg) {
  cfg.validate();
  const int window = cfg.window;
  for (double v : x.data()) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::domain_error("ICE input value " + std::to_string(v) + " outside [0, 1]");
    }
  }
  if (window < 2) {
    std::cerr << "warning: ICE with T=1 has no T-1 branch; emitting zero channels\n";
  }

  const Shape& in = x.shape();
  const std::size_t branches = 3 * static_cast<std::size_t>(cfg.phi);
  Tensor out(Shape{in.n, branches * in.c, in.h, in.w});
  const double grid = window;

  for (int c = 1; c <= cfg.phi; ++c) {
    const int up = cfg.varied_levels ? window + c : window + 1;
    const int down = cfg.varied_levels ? window - c : window - 1;
    const int levels[3] = {window, up, down};
    for (std::size_t b = 0; b < 3; ++b) {
      const std::size_t channel0 = (static_cast<std::size_t>(c - 1) * 3 + b) * in.c;
      for (std::size_t n = 0; n < in.n; ++n) {
        for (std::size_t ch = 0; ch < in.c; ++ch) {
          for (std::size_t h = 0; h < in.h; ++h) {
            for (std::size_t w = 0; w < in.w; ++w) {
              const double v = x.at(n, ch, h, w);
              out.at(n, channel0 + ch, h, w) = remapped_level(v, levels[b], window) / grid;
            }
          }
        }
      }
    }
  }
  return out;
}

Tensor ice_to_vr_grid(const Tensor& expanded, int window, const VRConfig& vr) {
  if (window != vr.window()) {
    throw std::invalid_argument("ICE window " + std::to_string(window) +
                                " != VR window T=" + std::to_string(vr.window()));
  }
  Tensor out = expanded;
  for (double& v : out.mutable_data()) {
    const double t = std::nearbyint(v * window);
    v = vr.decode(static_cast<int>(t));
  }
  return out;
}

SpikeTrain ice_then_encode(const Tensor& x, const IceConfig& cfg, const VRConfig& vr) {
  return encode_input(ice_to_vr_grid(ice_expand(x, cfg), cfg.window, vr), vr);
}

}  // namespace spikeforge
