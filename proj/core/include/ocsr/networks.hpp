// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0
//
// The two network families of the recognizer plus classifier-input
// assembly.
//
// Segmentation: eight 3x3 conv+ReLU layers whose dilation (and matching
// padding) follows 1,2,4,8,8,4,2,1, then a linear 1x1 head that emits one
// channel per atom class, bond class and charge class. Spatial dimensions
// never change, so the output splits into three per-pixel logit maps over
// the input image.
//
// Classifiers: a depthwise-separable 3x3, three dilated 3x3 convs
// (dilations 2,4,8), a plain 3x3 conv — each followed by ReLU — then a
// global max pool and a linear 1x1 head. One instance each for atoms,
// bonds and charges; they differ only in channel counts.
//
// Classifier inputs are square window cuts of side 2*bond_length centered
// on the candidate: the relevant segmentation channels (as per-pixel
// softmax probabilities), the binary image, and one highlight channel
// marking the candidate (a disk for atoms/charges) or two (the two halves
// of the line from one atom to the other, for bonds). The highlight
// shapes reuse the exact geometry of the renderer's label maps.

#pragma once

#include <cstdint>
#include <vector>

#include "ocsr/image.hpp"
#include "ocsr/molgraph.hpp"
#include "ocsr/nn.hpp"
#include "ocsr/tensor.hpp"

namespace ocsr {

// ---------------------------------------------------------------------------
// Segmentation network

struct SegmentationMaps {
  Tensor sa;  // (1, n_a, H, W)
  Tensor sb;  // (1, n_b, H, W)
  Tensor sc;  // (1, n_c, H, W)
};

struct SegNetConfig {
  int hidden = 32;  // trunk channel width
  int n_a = 10;
  int n_b = 8;
  int n_c = 5;

  int head_channels() const { return n_a + n_b + n_c; }
};

class SegmentationNet {
 public:
  explicit SegmentationNet(const SegNetConfig& cfg);

  const SegNetConfig& config() const { return cfg_; }

  /// image: (1, 1, H, W) with values in [0,1]. Returns the concatenated
  /// logit map (1, n_a+n_b+n_c, H, W); spatial dims preserved.
  Tensor forward_raw(const Tensor& image);

  /// Same forward pass with the head split into the three logit maps.
  SegmentationMaps forward(const Tensor& image);

  /// grad_raw must match forward_raw's output shape; returns the gradient
  /// w.r.t. the input image and accumulates parameter gradients.
  Tensor backward(const Tensor& grad_raw);

  std::vector<ParamRef<float>> params() { return net_.params(); }
  void zero_grad() { net_.zero_grad(); }

  /// He init of all weights, zero biases, from one seeded stream.
  void init(uint64_t seed);

 private:
  SegNetConfig cfg_;
  Sequential<float> net_;
};

/// Splits a concatenated head tensor into the three per-task maps.
SegmentationMaps split_maps(const Tensor& raw, int n_a, int n_b, int n_c);

/// Per-pixel softmax over the channel axis; same shape as the input.
Tensor softmax_channels(const Tensor& logits);

/// (1, 1, rows, cols) copy of an image's intensities.
Tensor image_to_tensor(const Image& img);

/// softmax_channels applied to all three maps; classifiers consume the
/// segmentation as probabilities, never as raw logits.
SegmentationMaps softmax_maps(const SegmentationMaps& logits);

struct SegLoss {
  double total = 0.0;
  double part_a = 0.0;  // pixelwise CE of the atom channels
  double part_b = 0.0;
  double part_c = 0.0;
  Tensor grad;  // gradient w.r.t. the concatenated logits
};

/// Sum of the three pixelwise cross entropies (each itself a sum over
/// pixels) against the three label maps; total = part_a+part_b+part_c.
SegLoss total_segmentation_loss(const Tensor& raw, const LabelMaps& labels,
                                int n_a, int n_b, int n_c);

// ---------------------------------------------------------------------------
// Classifier networks

struct ClsNetConfig {
  int in_channels = 0;  // n_a+2 (atoms), n_b+3 (bonds) or n_c+2 (charges)
  int hidden = 32;
  int n_out = 0;  // class count including Empty
};

class ClassifierNet {
 public:
  explicit ClassifierNet(const ClsNetConfig& cfg);

  const ClsNetConfig& config() const { return cfg_; }

  /// input: (1, in_channels, K, K). Returns n_out logits.
  std::vector<float> forward(const Tensor& input);

  /// grad over the logits; accumulates parameter grads, returns input grad.
  Tensor backward(const std::vector<float>& grad_logits);

  std::vector<ParamRef<float>> params() { return net_.params(); }
  void zero_grad() { net_.zero_grad(); }
  void init(uint64_t seed);

 private:
  ClsNetConfig cfg_;
  Sequential<float> net_;
};

// ---------------------------------------------------------------------------
// Classifier input assembly

struct CutSpec {
  int window;  // square side in pixels, always 2 * bond_length

  explicit CutSpec(int bond_length);
  int bond_length() const { return window / 2; }
};

/// Window cut for an atom candidate: seg channels, the image, and a disk
/// highlight of the given radius at the window center. seg must be
/// (1, C, H, W) and the image the same H x W; out-of-image pixels are
/// zero. Output: (1, C+2, window, window).
Tensor assemble_atom_input(const Tensor& seg, const Image& img, PixelPos cand,
                           const CutSpec& cut, int highlight_radius);

/// Same geometry with the charge segmentation channels.
Tensor assemble_charge_input(const Tensor& seg, const Image& img, PixelPos cand,
                             const CutSpec& cut, int highlight_radius);

/// Window cut for a bond candidate, centered between the two atom
/// positions. Highlight channel 0 covers the half-line from cand_a to the
/// midpoint, channel 1 the half from the midpoint to cand_b, both of the
/// given width. Output: (1, C+3, window, window). Throws CandidateError
/// if the endpoints are 2*bond_length apart or more.
Tensor assemble_bond_input(const Tensor& seg, const Image& img, PixelPos cand_a,
                           PixelPos cand_b, const CutSpec& cut,
                           int highlight_width);

/// True when the pair is close enough to classify: squared distance
/// strictly below (2*bond_length)^2.
bool bond_pair_in_range(PixelPos a, PixelPos b, int bond_length);

}  // namespace ocsr
