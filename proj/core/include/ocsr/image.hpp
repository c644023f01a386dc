// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Single-channel images and pixelwise label maps.
//
// Intensity convention: 0 = blank paper, 1 = full ink. This makes "all
// background" the all-zero image, so binarization is idempotent and network
// inputs are mostly zero. PGM files invert on the way out (paper white,
// ink black) so they view correctly; label maps are stored as raw class
// indices, one byte per pixel.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ocsr {

struct Image {
  int rows = 0;
  int cols = 0;
  std::vector<float> px;  // row-major, intensity in [0,1], 1 = ink

  Image() = default;
  Image(int r, int c) : rows(r), cols(c), px(size_t(r) * size_t(c), 0.0f) {}

  float& at(int r, int c) { return px[size_t(r) * cols + c]; }
  float at(int r, int c) const { return px[size_t(r) * cols + c]; }
  bool in_bounds(int r, int c) const {
    return r >= 0 && r < rows && c >= 0 && c < cols;
  }
};

/// Pixelwise class-index maps for atoms (la), bonds (lb) and charges (lc).
/// Index semantics are fixed by the dataset's Vocabulary; 0 is Empty.
struct LabelMaps {
  int rows = 0;
  int cols = 0;
  std::vector<uint8_t> la, lb, lc;

  LabelMaps() = default;
  LabelMaps(int r, int c)
      : rows(r),
        cols(c),
        la(size_t(r) * size_t(c), 0),
        lb(size_t(r) * size_t(c), 0),
        lc(size_t(r) * size_t(c), 0) {}

  size_t idx(int r, int c) const { return size_t(r) * cols + c; }
};

/// Thresholds to a hard {0,1} ink mask: 1 where intensity >= threshold.
/// Requires threshold in (0,1).
Image binarize(const Image& img, float threshold);

/// Binary PGM (P5) round trip for images. Bytes are photometric
/// (255 = paper, 0 = ink), i.e. byte = round((1 - intensity) * 255).
void write_pgm(const std::string& path, const Image& img);
Image read_pgm(const std::string& path);

/// Binary PGM (P5) round trip for one label channel; bytes are the raw
/// class indices.
void write_label_pgm(const std::string& path, const std::vector<uint8_t>& data,
                     int rows, int cols);
std::vector<uint8_t> read_label_pgm(const std::string& path, int& rows, int& cols);

}  // namespace ocsr
