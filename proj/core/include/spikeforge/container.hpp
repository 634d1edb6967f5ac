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

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "spikeforge/network.hpp"
#include "spikeforge/tensor.hpp"

namespace spikeforge {

/// Raised for unreadable, truncated or inconsistent container files.
class ContainerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kManifestVersion = "1.0";

/// Network container: a JSON manifest plus a sibling blob of little-endian
/// float32 values (weights and biases, row-major, at manifest byte offsets).
/// Configuration, batch-norm parameters, thresholds, step constants and
/// pooling scales are stored in the manifest as decimal doubles.
///
/// The blob is written next to the manifest as `<stem>.bin`.
void write_network(const std::filesystem::path& manifest, const NetworkSpec& net);
NetworkSpec read_network(const std::filesystem::path& manifest);

enum class TensorDType { F32, F64 };

/// Tensor files use the same manifest-plus-blob layout. The manifest's
/// `dtype` names the blob element type; f64 keeps VR-grid inputs such as 0.1
/// exactly on the grid. A manifest without `dtype` is read as f32.
void write_tensor(const std::filesystem::path& manifest, const Tensor& tensor,
                  TensorDType dtype = TensorDType::F64);
Tensor read_tensor(const std::filesystem::path& manifest);

/// One integer class label per line; blank lines and `#` comments ignored.
std::vector<int> read_labels(const std::filesystem::path& path);
void write_labels(const std::filesystem::path& path, const std::vector<int>& labels);

}  // namespace spikeforge
