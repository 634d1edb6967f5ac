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

#include "spikeforge/kernels.hpp"

#include <string>

namespace spikeforge {

std::string_view to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::Conv2d: return "conv2d";
    case LayerKind::Dense: return "dense";
    case LayerKind::AvgPool: return "avgpool";
  }
  return "unknown";
}

LayerKind layer_kind_from_string(std::string_view name) {
  if (name == "conv2d") return LayerKind::Conv2d;
  if (name == "dense") return LayerKind::Dense;
  if (name == "avgpool") return LayerKind::AvgPool;
  throw std::invalid_argument("unsupported layer kind '" + std::string(name) + "'");
}

void LayerGeometry::validate() const {
  if (kernel < 1) throw std::invalid_argument("layer kernel must be >= 1");
  if (stride < 1) throw std::invalid_argument("layer stride must be >= 1");
  if (in_channels < 1 || out_channels < 1) {
    throw std::invalid_argument("layer channel counts must be >= 1");
  }
  if (kind == LayerKind::AvgPool && in_channels != out_channels) {
    throw std::invalid_argument("avgpool layer must preserve the channel count");
  }
  if (kind == LayerKind::Dense && (kernel != 1 || padding != 0)) {
    throw std::invalid_argument("dense layer must have kernel 1 and no padding");
  }
}

Shape LayerGeometry::weight_shape() const {
  switch (kind) {
    case LayerKind::Conv2d: return {out_channels, in_channels, kernel, kernel};
    case LayerKind::Dense: return {out_channels, in_channels, 1, 1};
    case LayerKind::AvgPool: return {0, 0, 0, 0};
  }
  return {};
}

namespace {

std::size_t sliding_extent(std::size_t extent, std::size_t kernel, std::size_t stride,
                           std::size_t padding, const char* dim) {
  const std::size_t padded = extent + 2 * padding;
  if (padded < kernel) {
    throw ShapeError(std::string("input ") + dim + " extent " + std::to_string(extent) +
                     " (padding " + std::to_string(padding) + ") is smaller than kernel " +
                     std::to_string(kernel));
  }
  return (padded - kernel) / stride + 1;
}

}  // namespace

Shape LayerGeometry::output_shape(const Shape& input) const {
  switch (kind) {
    case LayerKind::Conv2d:
      if (input.c != in_channels) {
        throw ShapeError("conv2d input channels " + std::to_string(input.c) +
                         " != layer in_channels " + std::to_string(in_channels));
      }
      return {input.n, out_channels, sliding_extent(input.h, kernel, stride, padding, "height"),
              sliding_extent(input.w, kernel, stride, padding, "width")};
    case LayerKind::Dense:
      if (input.per_item() != in_channels) {
        throw ShapeError("dense input features " + std::to_string(input.per_item()) +
                         " != layer in_channels " + std::to_string(in_channels));
      }
      return {input.n, out_channels, 1, 1};
    case LayerKind::AvgPool:
      if (input.c != in_channels) {
        throw ShapeError("avgpool input channels " + std::to_string(input.c) +
                         " != layer channels " + std::to_string(in_channels));
      }
      return {input.n, in_channels, sliding_extent(input.h, kernel, stride, 0, "height"),
              sliding_extent(input.w, kernel, stride, 0, "width")};
  }
  return {};
}

Tensor conv2d_forward(const Tensor& input, const Tensor& weights, std::span<const double> bias,
                      const LayerGeometry& geometry) {
  geometry.validate();
  const Shape& in = input.shape();
  const Shape expected = geometry.weight_shape();
  if (weights.shape() != expected) {
    throw ShapeError("conv2d weight shape " + weights.shape().str() + " != expected " +
                     expected.str());
  }
  if (bias.size() != geometry.out_channels) {
    throw ShapeError("conv2d bias length " + std::to_string(bias.size()) +
                     " != out_channels " + std::to_string(geometry.out_channels));
  }
  const Shape out_shape = geometry.output_shape(in);
  Tensor out(out_shape);

  const auto k = static_cast<std::ptrdiff_t>(geometry.kernel);
  const auto pad = static_cast<std::ptrdiff_t>(geometry.padding);
  const auto stride = static_cast<std::ptrdiff_t>(geometry.stride);
  const auto in_h = static_cast<std::ptrdiff_t>(in.h);
  const auto in_w = static_cast<std::ptrdiff_t>(in.w);
  const auto src = input.data();
  const auto wts = weights.data();
  auto dst = out.mutable_data();

  for (std::size_t n = 0; n < out_shape.n; ++n) {
    for (std::size_t oc = 0; oc < out_shape.c; ++oc) {
      for (std::size_t oh = 0; oh < out_shape.h; ++oh) {
        for (std::size_t ow = 0; ow < out_shape.w; ++ow) {
          double acc = bias[oc];
          const std::ptrdiff_t h0 = static_cast<std::ptrdiff_t>(oh) * stride - pad;
          const std::ptrdiff_t w0 = static_cast<std::ptrdiff_t>(ow) * stride - pad;
          for (std::size_t ic = 0; ic < in.c; ++ic) {
            const double* wrow = wts.data() + expected.offset(oc, ic, 0, 0);
            const double* plane = src.data() + in.offset(n, ic, 0, 0);
            for (std::ptrdiff_t kh = 0; kh < k; ++kh) {
              const std::ptrdiff_t ih = h0 + kh;
              if (ih < 0 || ih >= in_h) continue;
              for (std::ptrdiff_t kw = 0; kw < k; ++kw) {
                const std::ptrdiff_t iw = w0 + kw;
                if (iw < 0 || iw >= in_w) continue;
                acc += wrow[kh * k + kw] * plane[ih * in_w + iw];
              }
            }
          }
          dst[out_shape.offset(n, oc, oh, ow)] = acc;
        }
      }
    }
  }
  out.require_finite("conv2d_forward");
  return out;
}

Tensor dense_forward(const Tensor& input, const Tensor& weights, std::span<const double> bias) {
  const Shape& in = input.shape();
  const Shape& ws = weights.shape();
  if (ws.h != 1 || ws.w != 1) {
    throw ShapeError("dense weights must be (out, in, 1, 1), got " + ws.str());
  }
  if (ws.c != in.per_item()) {
    throw ShapeError("dense input features " + std::to_string(in.per_item()) +
                     " != weight columns " + std::to_string(ws.c));
  }
  if (bias.size() != ws.n) {
    throw ShapeError("dense bias length " + std::to_string(bias.size()) + " != weight rows " +
                     std::to_string(ws.n));
  }
  Tensor out(Shape{in.n, ws.n, 1, 1});
  const auto src = input.data();
  const auto wts = weights.data();
  auto dst = out.mutable_data();
  const std::size_t features = ws.c;
  for (std::size_t n = 0; n < in.n; ++n) {
    const double* x = src.data() + n * features;
    for (std::size_t o = 0; o < ws.n; ++o) {
      const double* row = wts.data() + o * features;
      double acc = bias[o];
      for (std::size_t i = 0; i < features; ++i) acc += row[i] * x[i];
      dst[n * ws.n + o] = acc;
    }
  }
  out.require_finite("dense_forward");
  return out;
}

Tensor avgpool_forward(const Tensor& input, std::size_t window, std::size_t stride) {
  const Shape& in = input.shape();
  if (window < 1 || stride < 1) throw std::invalid_argument("avgpool window and stride must be >= 1");
  if (window > in.h || window > in.w) {
    throw ShapeError("avgpool window " + std::to_string(window) + " exceeds spatial extent " +
                     std::to_string(in.h) + "x" + std::to_string(in.w));
  }
  if ((in.h - window) % stride != 0 || (in.w - window) % stride != 0) {
    throw ShapeError("avgpool window " + std::to_string(window) + " / stride " +
                     std::to_string(stride) + " does not tile spatial extent " +
                     std::to_string(in.h) + "x" + std::to_string(in.w));
  }
  const Shape out_shape{in.n, in.c, (in.h - window) / stride + 1, (in.w - window) / stride + 1};
  Tensor out(out_shape);
  const auto area = static_cast<double>(window * window);
  const auto src = input.data();
  auto dst = out.mutable_data();
  for (std::size_t n = 0; n < in.n; ++n) {
    for (std::size_t c = 0; c < in.c; ++c) {
      const double* plane = src.data() + in.offset(n, c, 0, 0);
      for (std::size_t oh = 0; oh < out_shape.h; ++oh) {
        for (std::size_t ow = 0; ow < out_shape.w; ++ow) {
          double acc = 0.0;
          for (std::size_t kh = 0; kh < window; ++kh) {
            for (std::size_t kw = 0; kw < window; ++kw) {
              acc += plane[(oh * stride + kh) * in.w + ow * stride + kw];
            }
          }
          dst[out_shape.offset(n, c, oh, ow)] = acc / area;
        }
      }
    }
  }
  out.require_finite("avgpool_forward");
  return out;
}

}  // namespace spikeforge
