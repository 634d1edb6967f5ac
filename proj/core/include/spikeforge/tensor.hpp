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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spikeforge {

/// Raised when tensor extents or parameter lengths disagree.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Extents of a rank-4 (N, C, H, W) array.
struct Shape {
  std::size_t n = 0;
  std::size_t c = 0;
  std::size_t h = 0;
  std::size_t w = 0;

  std::size_t size() const { return n * c * h * w; }
  std::size_t per_item() const { return c * h * w; }
  std::size_t spatial() const { return h * w; }

  std::size_t offset(std::size_t in, std::size_t ic, std::size_t ih, std::size_t iw) const {
    return ((in * c + ic) * h + ih) * w + iw;
  }

  std::array<std::size_t, 4> dims() const { return {n, c, h, w}; }
  std::string str() const;

  friend bool operator==(const Shape&, const Shape&) = default;
};

/// Dense row-major NCHW tensor of doubles.
///
/// Values are immutable through the const interface; kernels build new
/// tensors rather than mutating their inputs. Every tensor produced by a
/// public operation holds only finite values.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape);
  Tensor(Shape shape, std::vector<double> data);

  static Tensor zeros(Shape shape) { return Tensor(shape); }
  static Tensor filled(Shape shape, double value);

  const Shape& shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::span<const double> data() const { return data_; }
  std::span<double> mutable_data() { return data_; }

  double at(std::size_t n, std::size_t c, std::size_t h, std::size_t w) const {
    return data_[shape_.offset(n, c, h, w)];
  }
  double& at(std::size_t n, std::size_t c, std::size_t h, std::size_t w) {
    return data_[shape_.offset(n, c, h, w)];
  }
  double operator[](std::size_t i) const { return data_[i]; }
  double& operator[](std::size_t i) { return data_[i]; }

  /// Item `index` of the batch, as a (1, C, H, W) tensor.
  Tensor item(std::size_t index) const;

  /// Same data viewed under a new shape of equal size.
  Tensor reshaped(Shape shape) const;

  /// Throws if any element is NaN or infinite.
  void require_finite(const char* what) const;

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  Shape shape_{};
  std::vector<double> data_;
};

/// Concatenate (1, C, H, W) items along the batch axis.
Tensor stack(std::span<const Tensor> items);

/// Binary spike raster with `window` time steps over a rank-4 shape.
///
/// Plane `t` holds the spikes emitted at step t (0-based) for every element.
class SpikeTrain {
 public:
  SpikeTrain() = default;
  SpikeTrain(std::size_t window, Shape shape);

  std::size_t window() const { return window_; }
  const Shape& shape() const { return shape_; }
  std::size_t plane_size() const { return shape_.size(); }

  bool spike(std::size_t t, std::size_t element) const {
    return bits_[t * shape_.size() + element] != 0;
  }
  void set(std::size_t t, std::size_t element, bool fired) {
    bits_[t * shape_.size() + element] = fired ? 1 : 0;
  }

  std::span<const std::uint8_t> plane(std::size_t t) const {
    return {bits_.data() + t * shape_.size(), shape_.size()};
  }
  std::span<std::uint8_t> mutable_plane(std::size_t t) {
    return {bits_.data() + t * shape_.size(), shape_.size()};
  }

  /// Plane `t` as a 0/1-valued tensor.
  Tensor plane_tensor(std::size_t t) const;

  /// Number of spikes of one element over the whole window.
  std::size_t count(std::size_t element) const;
  /// Per-element spike counts, as a tensor of the train's shape.
  Tensor counts() const;
  std::uint64_t total() const;

  /// Item `index` of the batch, as a (T, 1, C, H, W) train.
  SpikeTrain item(std::size_t index) const;

  friend bool operator==(const SpikeTrain&, const SpikeTrain&) = default;

 private:
  std::size_t window_ = 0;
  Shape shape_{};
  std::vector<std::uint8_t> bits_;
};

/// Concatenate single-item trains along the batch axis.
SpikeTrain stack(std::span<const SpikeTrain> items);

}  // namespace spikeforge
