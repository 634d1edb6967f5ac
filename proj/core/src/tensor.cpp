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

#include "spikeforge/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace spikeforge {

std::string Shape::str() const {
  return "(" + std::to_string(n) + ", " + std::to_string(c) + ", " + std::to_string(h) + ", " +
         std::to_string(w) + ")";
}

Tensor::Tensor(Shape shape) : shape_(shape), data_(shape.size(), 0.0) {}

Tensor::Tensor(Shape shape, std::vector<double> data) : shape_(shape), data_(std::move(data)) {
  if (data_.size() != shape_.size()) {
    throw ShapeError("tensor data length " + std::to_string(data_.size()) +
                     " does not match shape " + shape_.str());
  }
  require_finite("tensor construction");
}

Tensor Tensor::filled(Shape shape, double value) {
  Tensor t(shape);
  std::fill(t.data_.begin(), t.data_.end(), value);
  t.require_finite("Tensor::filled");
  return t;
}

Tensor Tensor::item(std::size_t index) const {
  if (index >= shape_.n) {
    throw ShapeError("batch index " + std::to_string(index) + " out of range for shape " +
                     shape_.str());
  }
  const std::size_t stride = shape_.per_item();
  Shape s{1, shape_.c, shape_.h, shape_.w};
  std::vector<double> slice(data_.begin() + static_cast<std::ptrdiff_t>(index * stride),
                            data_.begin() + static_cast<std::ptrdiff_t>((index + 1) * stride));
  return Tensor(s, std::move(slice));
}

Tensor Tensor::reshaped(Shape shape) const {
  if (shape.size() != shape_.size()) {
    throw ShapeError("cannot reshape " + shape_.str() + " to " + shape.str());
  }
  Tensor t = *this;
  t.shape_ = shape;
  return t;
}

void Tensor::require_finite(const char* what) const {
  for (double v : data_) {
    if (!std::isfinite(v)) {
      throw std::domain_error(std::string(what) + ": non-finite value in tensor");
    }
  }
}

Tensor stack(std::span<const Tensor> items) {
  if (items.empty()) return {};
  const Shape first = items.front().shape();
  std::vector<double> data;
  data.reserve(first.per_item() * items.size());
  for (const Tensor& t : items) {
    if (t.shape().n != 1 || t.shape().per_item() != first.per_item() ||
        t.shape().c != first.c || t.shape().h != first.h) {
      throw ShapeError("cannot stack tensor of shape " + t.shape().str() + " with " + first.str());
    }
    data.insert(data.end(), t.data().begin(), t.data().end());
  }
  return Tensor(Shape{items.size(), first.c, first.h, first.w}, std::move(data));
}

SpikeTrain::SpikeTrain(std::size_t window, Shape shape)
    : window_(window), shape_(shape), bits_(window * shape.size(), 0) {
  if (window == 0) throw std::invalid_argument("spike train window must be positive");
}

Tensor SpikeTrain::plane_tensor(std::size_t t) const {
  Tensor out(shape_);
  auto p = plane(t);
  auto d = out.mutable_data();
  for (std::size_t i = 0; i < p.size(); ++i) d[i] = p[i];
  return out;
}

std::size_t SpikeTrain::count(std::size_t element) const {
  std::size_t c = 0;
  for (std::size_t t = 0; t < window_; ++t) c += bits_[t * shape_.size() + element];
  return c;
}

Tensor SpikeTrain::counts() const {
  Tensor out(shape_);
  auto d = out.mutable_data();
  for (std::size_t t = 0; t < window_; ++t) {
    auto p = plane(t);
    for (std::size_t i = 0; i < p.size(); ++i) d[i] += p[i];
  }
  return out;
}

std::uint64_t SpikeTrain::total() const {
  return std::accumulate(bits_.begin(), bits_.end(), std::uint64_t{0});
}

SpikeTrain SpikeTrain::item(std::size_t index) const {
  if (index >= shape_.n) {
    throw ShapeError("batch index " + std::to_string(index) + " out of range for train " +
                     shape_.str());
  }
  Shape s{1, shape_.c, shape_.h, shape_.w};
  SpikeTrain out(window_, s);
  const std::size_t stride = shape_.per_item();
  for (std::size_t t = 0; t < window_; ++t) {
    auto src = plane(t).subspan(index * stride, stride);
    std::copy(src.begin(), src.end(), out.mutable_plane(t).begin());
  }
  return out;
}

SpikeTrain stack(std::span<const SpikeTrain> items) {
  if (items.empty()) return {};
  const SpikeTrain& first = items.front();
  const std::size_t stride = first.shape().per_item();
  Shape s{items.size(), first.shape().c, first.shape().h, first.shape().w};
  SpikeTrain out(first.window(), s);
  for (std::size_t i = 0; i < items.size(); ++i) {
    const SpikeTrain& item = items[i];
    if (item.window() != first.window() || item.shape().n != 1 ||
        item.shape().per_item() != stride) {
      throw ShapeError("cannot stack spike train of shape " + item.shape().str());
    }
    for (std::size_t t = 0; t < first.window(); ++t) {
      auto src = item.plane(t);
      std::copy(src.begin(), src.end(), out.mutable_plane(t).begin() + i * stride);
    }
  }
  return out;
}

}  // namespace spikeforge
