// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0

#include "ocsr/networks.hpp"

#include <cmath>
#include <memory>
#include <string>

#include "ocsr/error.hpp"
#include "ocsr/random.hpp"

namespace ocsr {

namespace {

void check_positive(int v, const char* what) {
  if (v <= 0) throw ShapeError(std::string(what) + " must be positive");
}

}  // namespace

// ---------------------------------------------------------------------------
// Segmentation network

SegmentationNet::SegmentationNet(const SegNetConfig& cfg) : cfg_(cfg) {
  check_positive(cfg.hidden, "hidden width");
  check_positive(cfg.n_a, "n_a");
  check_positive(cfg.n_b, "n_b");
  check_positive(cfg.n_c, "n_c");
  const int dil[8] = {1, 2, 4, 8, 8, 4, 2, 1};
  int in_ch = 1;
  for (int i = 0; i < 8; ++i) {
    const std::string name = "conv" + std::to_string(i + 1);
    net_.add(name, std::make_unique<Conv2d<float>>(in_ch, cfg.hidden, 3, dil[i],
                                                   dil[i]));
    net_.add(name + "_relu", std::make_unique<ReLU<float>>());
    in_ch = cfg.hidden;
  }
  net_.add("head",
           std::make_unique<Conv2d<float>>(in_ch, cfg.head_channels(), 1, 0, 1));
}

Tensor SegmentationNet::forward_raw(const Tensor& image) {
  if (image.n != 1 || image.c != 1) {
    throw ShapeError("segmentation input must be (1,1,H,W), got " +
                     image.shape_str());
  }
  return net_.forward(image);
}

SegmentationMaps SegmentationNet::forward(const Tensor& image) {
  return split_maps(forward_raw(image), cfg_.n_a, cfg_.n_b, cfg_.n_c);
}

Tensor SegmentationNet::backward(const Tensor& grad_raw) {
  return net_.backward(grad_raw);
}

void SegmentationNet::init(uint64_t seed) {
  Rng rng(seed);
  init_he(params(), rng);
}

SegmentationMaps split_maps(const Tensor& raw, int n_a, int n_b, int n_c) {
  if (raw.c != n_a + n_b + n_c) {
    throw ShapeError("cannot split " + raw.shape_str() + " into " +
                     std::to_string(n_a) + "+" + std::to_string(n_b) + "+" +
                     std::to_string(n_c) + " channels");
  }
  SegmentationMaps maps{Tensor(raw.n, n_a, raw.h, raw.w),
                        Tensor(raw.n, n_b, raw.h, raw.w),
                        Tensor(raw.n, n_c, raw.h, raw.w)};
  auto copy_block = [&](Tensor& dst, int from) {
    for (int i = 0; i < raw.n; ++i)
      for (int j = 0; j < dst.c; ++j)
        for (int y = 0; y < raw.h; ++y)
          for (int x = 0; x < raw.w; ++x)
            dst.at(i, j, y, x) = raw.at(i, from + j, y, x);
  };
  copy_block(maps.sa, 0);
  copy_block(maps.sb, n_a);
  copy_block(maps.sc, n_a + n_b);
  return maps;
}

Tensor softmax_channels(const Tensor& logits) {
  Tensor out(logits.n, logits.c, logits.h, logits.w);
  for (int i = 0; i < logits.n; ++i) {
    for (int y = 0; y < logits.h; ++y) {
      for (int x = 0; x < logits.w; ++x) {
        float mx = logits.at(i, 0, y, x);
        for (int j = 1; j < logits.c; ++j)
          mx = std::max(mx, logits.at(i, j, y, x));
        double denom = 0.0;
        for (int j = 0; j < logits.c; ++j)
          denom += std::exp(double(logits.at(i, j, y, x) - mx));
        for (int j = 0; j < logits.c; ++j) {
          out.at(i, j, y, x) =
              float(std::exp(double(logits.at(i, j, y, x) - mx)) / denom);
        }
      }
    }
  }
  return out;
}

Tensor image_to_tensor(const Image& img) {
  Tensor t(1, 1, img.rows, img.cols);
  for (int r = 0; r < img.rows; ++r)
    for (int c = 0; c < img.cols; ++c) t.at(0, 0, r, c) = img.at(r, c);
  return t;
}

SegmentationMaps softmax_maps(const SegmentationMaps& logits) {
  return SegmentationMaps{softmax_channels(logits.sa),
                          softmax_channels(logits.sb),
                          softmax_channels(logits.sc)};
}

SegLoss total_segmentation_loss(const Tensor& raw, const LabelMaps& labels,
                                int n_a, int n_b, int n_c) {
  if (raw.n != 1 || raw.h != labels.rows || raw.w != labels.cols) {
    throw ShapeError("segmentation loss: logits " + raw.shape_str() +
                     " vs labels " + std::to_string(labels.rows) + "x" +
                     std::to_string(labels.cols));
  }
  SegLoss out;
  out.grad = Tensor(raw.n, raw.c, raw.h, raw.w);
  struct Part {
    int offset, count;
    const std::vector<uint8_t>* map;
    double* value;
  };
  const Part parts[3] = {{0, n_a, &labels.la, &out.part_a},
                         {n_a, n_b, &labels.lb, &out.part_b},
                         {n_a + n_b, n_c, &labels.lc, &out.part_c}};
  for (const Part& part : parts) {
    Tensor slice(1, part.count, raw.h, raw.w);
    for (int j = 0; j < part.count; ++j)
      for (int y = 0; y < raw.h; ++y)
        for (int x = 0; x < raw.w; ++x)
          slice.at(0, j, y, x) = raw.at(0, part.offset + j, y, x);
    MapLoss<float> ml = pixelwise_cross_entropy(slice, *part.map);
    *part.value = ml.value;
    for (int j = 0; j < part.count; ++j)
      for (int y = 0; y < raw.h; ++y)
        for (int x = 0; x < raw.w; ++x)
          out.grad.at(0, part.offset + j, y, x) = ml.grad.at(0, j, y, x);
  }
  out.total = out.part_a + out.part_b + out.part_c;
  return out;
}

// ---------------------------------------------------------------------------
// Classifier networks

ClassifierNet::ClassifierNet(const ClsNetConfig& cfg) : cfg_(cfg) {
  check_positive(cfg.in_channels, "input channels");
  check_positive(cfg.hidden, "hidden width");
  check_positive(cfg.n_out, "output classes");
  net_.add("depthconv1",
           std::make_unique<DepthwiseSeparable<float>>(cfg.in_channels, cfg.hidden));
  net_.add("depthconv1_relu", std::make_unique<ReLU<float>>());
  const int dil[3] = {2, 4, 8};
  for (int i = 0; i < 3; ++i) {
    const std::string name = "conv" + std::to_string(i + 2);
    net_.add(name, std::make_unique<Conv2d<float>>(cfg.hidden, cfg.hidden, 3,
                                                   dil[i], dil[i]));
    net_.add(name + "_relu", std::make_unique<ReLU<float>>());
  }
  net_.add("conv5", std::make_unique<Conv2d<float>>(cfg.hidden, cfg.hidden, 3, 1, 1));
  net_.add("conv5_relu", std::make_unique<ReLU<float>>());
  net_.add("maxpool", std::make_unique<GlobalMaxPool<float>>());
  net_.add("last", std::make_unique<Conv2d<float>>(cfg.hidden, cfg.n_out, 1, 0, 1));
}

std::vector<float> ClassifierNet::forward(const Tensor& input) {
  if (input.n != 1 || input.c != cfg_.in_channels) {
    throw ShapeError("classifier input must be (1," +
                     std::to_string(cfg_.in_channels) + ",K,K), got " +
                     input.shape_str());
  }
  Tensor out = net_.forward(input);
  return std::vector<float>(out.data.begin(), out.data.end());
}

Tensor ClassifierNet::backward(const std::vector<float>& grad_logits) {
  if (int(grad_logits.size()) != cfg_.n_out) {
    throw ShapeError("classifier gradient length mismatch");
  }
  Tensor g(1, cfg_.n_out, 1, 1);
  g.data.assign(grad_logits.begin(), grad_logits.end());
  return net_.backward(g);
}

void ClassifierNet::init(uint64_t seed) {
  Rng rng(seed);
  init_he(params(), rng);
}

// ---------------------------------------------------------------------------
// Input assembly

CutSpec::CutSpec(int bond_length) : window(2 * bond_length) {
  if (bond_length < 2) throw ShapeError("cut window needs bond_length >= 2");
}

bool bond_pair_in_range(PixelPos a, PixelPos b, int bond_length) {
  const long long dr = a.row - b.row, dc = a.col - b.col;
  const long long lim = 2LL * bond_length;
  return dr * dr + dc * dc < lim * lim;
}

namespace {

void check_seg_image(const Tensor& seg, const Image& img) {
  if (seg.n != 1) throw ShapeError("segmentation cut expects batch size 1");
  if (seg.h != img.rows || seg.w != img.cols) {
    throw ShapeError("segmentation map " + seg.shape_str() +
                     " does not cover the " + std::to_string(img.rows) + "x" +
                     std::to_string(img.cols) + " image");
  }
}

/// Copies the K x K window with top-left image coordinate (top, left) from
/// seg and img into the first C+1 channels of out; outside pixels stay 0.
Tensor cut_window(const Tensor& seg, const Image& img, int top, int left,
                  int window, int extra_channels) {
  Tensor out(1, seg.c + 1 + extra_channels, window, window);
  for (int r = 0; r < window; ++r) {
    const int ir = top + r;
    if (ir < 0 || ir >= img.rows) continue;
    for (int c = 0; c < window; ++c) {
      const int ic = left + c;
      if (ic < 0 || ic >= img.cols) continue;
      for (int j = 0; j < seg.c; ++j)
        out.at(0, j, r, c) = seg.at(0, j, ir, ic);
      out.at(0, seg.c, r, c) = img.at(ir, ic);
    }
  }
  return out;
}

Tensor assemble_center_highlight(const Tensor& seg, const Image& img,
                                 PixelPos cand, const CutSpec& cut,
                                 int radius) {
  check_seg_image(seg, img);
  if (radius < 1) throw ShapeError("highlight radius must be >= 1");
  const int k = cut.window;
  const int top = cand.row - k / 2, left = cand.col - k / 2;
  Tensor out = cut_window(seg, img, top, left, k, 1);
  const int hc = seg.c + 1;  // highlight channel
  const int ctr = k / 2;
  const int r2 = radius * radius;
  for (int r = ctr - radius; r <= ctr + radius; ++r) {
    for (int c = ctr - radius; c <= ctr + radius; ++c) {
      if (r < 0 || r >= k || c < 0 || c >= k) continue;
      const int dr = r - ctr, dc = c - ctr;
      if (dr * dr + dc * dc <= r2) out.at(0, hc, r, c) = 1.0f;
    }
  }
  return out;
}

}  // namespace

Tensor assemble_atom_input(const Tensor& seg, const Image& img, PixelPos cand,
                           const CutSpec& cut, int highlight_radius) {
  return assemble_center_highlight(seg, img, cand, cut, highlight_radius);
}

Tensor assemble_charge_input(const Tensor& seg, const Image& img, PixelPos cand,
                             const CutSpec& cut, int highlight_radius) {
  return assemble_center_highlight(seg, img, cand, cut, highlight_radius);
}

Tensor assemble_bond_input(const Tensor& seg, const Image& img, PixelPos cand_a,
                           PixelPos cand_b, const CutSpec& cut,
                           int highlight_width) {
  check_seg_image(seg, img);
  if (highlight_width < 1) throw ShapeError("highlight width must be >= 1");
  if (!bond_pair_in_range(cand_a, cand_b, cut.bond_length())) {
    throw CandidateError("bond candidate endpoints are too far apart (" +
                         std::to_string(cand_a.row) + "," +
                         std::to_string(cand_a.col) + ") -- (" +
                         std::to_string(cand_b.row) + "," +
                         std::to_string(cand_b.col) + ")");
  }
  const int k = cut.window;
  const int mid_row = (cand_a.row + cand_b.row) / 2;
  const int mid_col = (cand_a.col + cand_b.col) / 2;
  const int top = mid_row - k / 2, left = mid_col - k / 2;
  Tensor out = cut_window(seg, img, top, left, k, 2);

  // Same thick-rectangle geometry as the renderer's bond labels:
  // longitudinal span [0, len] inclusive, perpendicular [-w/2, w/2)
  // half-open, split at the exact midpoint. The band is computed in a
  // canonical endpoint order so that swapping the call order swaps the
  // two highlight channels bit-exactly (the half-open boundary would
  // otherwise flip sides).
  const bool a_first = cand_a.row < cand_b.row ||
                       (cand_a.row == cand_b.row && cand_a.col < cand_b.col);
  const PixelPos p0 = a_first ? cand_a : cand_b;
  const PixelPos p1 = a_first ? cand_b : cand_a;
  const double ar = p0.row - top, ac = p0.col - left;
  const double br = p1.row - top, bc = p1.col - left;
  const double dr = br - ar, dc = bc - ac;
  const double len = std::sqrt(dr * dr + dc * dc);
  if (len < 1e-9) {
    throw CandidateError("bond candidate endpoints coincide");
  }
  const double ur = dr / len, uc = dc / len;
  const double nr = -uc, nc = ur;
  const double half = highlight_width / 2.0;
  // Channel seg.c+1 marks cand_a's half, seg.c+2 marks cand_b's half.
  const int c_p0 = a_first ? seg.c + 1 : seg.c + 2;
  const int c_p1 = a_first ? seg.c + 2 : seg.c + 1;
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) {
      const double qr = r - ar, qc = c - ac;
      const double t = qr * ur + qc * uc;
      if (t < 0.0 || t > len) continue;
      const double s = qr * nr + qc * nc;
      if (s < -half || s >= half) continue;
      out.at(0, t < len / 2.0 ? c_p0 : c_p1, r, c) = 1.0f;
    }
  }
  return out;
}

}  // namespace ocsr
