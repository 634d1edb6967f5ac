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

#include "spikeforge/raster.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace spikeforge {

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> bytes{static_cast<char>(v & 0xffu), static_cast<char>((v >> 8) & 0xffu),
                                  static_cast<char>((v >> 16) & 0xffu),
                                  static_cast<char>((v >> 24) & 0xffu)};
  out.write(bytes.data(), bytes.size());
}

std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  in.read(reinterpret_cast<char*>(b.data()), b.size());
  if (in.gcount() != 4) throw RasterFormatError("truncated raster header");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

std::uint32_t checked_u32(std::size_t v) {
  if (v > 0xffffffffu) throw RasterFormatError("raster extent exceeds u32");
  return static_cast<std::uint32_t>(v);
}

}  // namespace

void write_raster(std::ostream& out, const SpikeTrain& train) {
  out.write(kRasterMagic, sizeof kRasterMagic);
  put_u32(out, checked_u32(train.window()));
  for (std::size_t d : train.shape().dims()) put_u32(out, checked_u32(d));
  const std::size_t size = train.plane_size();
  std::vector<char> packed((size + 7) / 8);
  for (std::size_t t = 0; t < train.window(); ++t) {
    std::fill(packed.begin(), packed.end(), 0);
    const auto plane = train.plane(t);
    for (std::size_t i = 0; i < size; ++i) {
      if (plane[i]) packed[i / 8] = static_cast<char>(packed[i / 8] | (1u << (i % 8)));
    }
    out.write(packed.data(), static_cast<std::streamsize>(packed.size()));
  }
  if (!out) throw RasterFormatError("failed writing raster");
}

std::vector<SpikeTrain> read_rasters(std::istream& in) {
  std::vector<SpikeTrain> trains;
  while (true) {
    char magic[4];
    in.read(magic, sizeof magic);
    if (in.gcount() == 0 && in.eof()) break;
    if (in.gcount() != 4 || std::memcmp(magic, kRasterMagic, 4) != 0) {
      throw RasterFormatError("bad raster magic (expected SPK1)");
    }
    const std::uint32_t window = get_u32(in);
    Shape shape{get_u32(in), get_u32(in), get_u32(in), get_u32(in)};
    if (window == 0) throw RasterFormatError("raster window must be positive");
    constexpr std::uint64_t kMaxSlots = std::uint64_t{1} << 34;
    std::uint64_t slots = window;
    for (std::size_t d : shape.dims()) {
      if (d != 0 && slots > kMaxSlots / d) throw RasterFormatError("raster record too large");
      slots *= d;
    }
    SpikeTrain train(window, shape);
    const std::size_t size = shape.size();
    std::vector<unsigned char> packed((size + 7) / 8);
    for (std::size_t t = 0; t < window; ++t) {
      in.read(reinterpret_cast<char*>(packed.data()), static_cast<std::streamsize>(packed.size()));
      if (static_cast<std::size_t>(in.gcount()) != packed.size()) {
        throw RasterFormatError("truncated raster plane");
      }
      auto plane = train.mutable_plane(t);
      for (std::size_t i = 0; i < size; ++i) plane[i] = (packed[i / 8] >> (i % 8)) & 1u;
    }
    trains.push_back(std::move(train));
  }
  return trains;
}

void write_raster_file(const std::string& path, const std::vector<SpikeTrain>& trains) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  for (const SpikeTrain& t : trains) write_raster(out, t);
}

std::vector<SpikeTrain> read_raster_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_rasters(in);
}

}  // namespace spikeforge
