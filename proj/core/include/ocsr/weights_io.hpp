// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0
//
// CGW1 weight container: the 4-byte magic "CGW1" followed by one record
// per tensor. Each record is
//   u32  name length (little endian)
//   ...  UTF-8 name bytes
//   u32  axis count (1..4)
//   u32  one dim per axis
//   f32  data values, row-major, IEEE-754 little endian
// Records run until end of file. Layout is fixed so identical weights
// always serialize to identical bytes.

#pragma once

#include <string>
#include <vector>

#include "ocsr/nn.hpp"
#include "ocsr/tensor.hpp"

namespace ocsr {

struct NamedTensor {
  std::string name;
  Tensor value;
};

/// Serializes tensors in list order. Throws IoError on filesystem trouble.
void save_weights(const std::string& path, const std::vector<NamedTensor>& tensors);

/// Same, but returns the bytes instead of writing a file.
std::string weights_to_bytes(const std::vector<NamedTensor>& tensors);

/// Parses a CGW1 file. Throws IoError if unreadable, ParseError (with byte
/// offset) on bad magic, truncation, or nonsense dims.
std::vector<NamedTensor> load_weights(const std::string& path);
std::vector<NamedTensor> weights_from_bytes(const std::string& bytes);

/// Copies live network parameters into a named-tensor list (same order).
std::vector<NamedTensor> snapshot_params(const std::vector<ParamRef<float>>& params);

/// Writes saved tensors back into live parameters, matching by name.
/// Every parameter must be present with an equal shape and no extra
/// tensors may remain; otherwise ShapeError.
void restore_params(const std::vector<ParamRef<float>>& params,
                    const std::vector<NamedTensor>& tensors);

}  // namespace ocsr
