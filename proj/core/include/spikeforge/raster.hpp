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

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "spikeforge/tensor.hpp"

namespace spikeforge {

/// Raised for a truncated or mislabelled raster stream.
class RasterFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// SPK1 raster record layout (all integers little-endian u32):
///
///   "SPK1" | T | N | C | H | W | T planes of ceil(N*C*H*W / 8) bytes
///
/// Element i of a plane lives in byte i/8 at bit i%8 (LSB first). A file may
/// hold several records back to back.
inline constexpr char kRasterMagic[4] = {'S', 'P', 'K', '1'};

void write_raster(std::ostream& out, const SpikeTrain& train);

/// Reads every record until end of stream.
std::vector<SpikeTrain> read_rasters(std::istream& in);

void write_raster_file(const std::string& path, const std::vector<SpikeTrain>& trains);
std::vector<SpikeTrain> read_raster_file(const std::string& path);

}  // namespace spikeforge
