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

#include <cmath>

namespace spikeforge {

/// Values within this distance of an integer are treated as that integer
/// before any floor or threshold comparison. Accumulation-order noise in
/// double precision stays far below it; the VR grid spacing stays far above.
inline constexpr double kSnapTolerance = 1e-9;

/// Mathematical floor that first snaps near-integers onto the integer.
inline double snap_floor(double v) {
  const double r = std::nearbyint(v);
  if (std::abs(v - r) <= kSnapTolerance) return r;
  return std::floor(v);
}

/// `value >= threshold`, with the same snapping as snap_floor.
inline bool reaches(double value, double threshold) {
  return value >= threshold - kSnapTolerance;
}

}  // namespace spikeforge
