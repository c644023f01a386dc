// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Minimal neural-network engine: direct-loop convolutions (plain, dilated
// and depthwise-separable), ReLU, global max pooling, a Sequential
// container with reverse-mode gradients, cross-entropy losses and Adam.
//
// Conventions:
// - forward() records whatever backward() needs; calling backward() before
//   forward() raises UsageError.
// - backward() accumulates into parameter gradients (call zero_grad()
//   between steps) and returns the gradient w.r.t. the layer input.
// - ReLU uses subgradient 0 at exactly 0.
// - All reductions run in fixed row-major order, so results are bit-stable
//   across runs on the same platform.

#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "ocsr/error.hpp"
#include "ocsr/random.hpp"
#include "ocsr/tensor.hpp"

namespace ocsr {

template <typename T>
struct ParamRef {
  std::string name;
  BasicTensor<T>* value;
  BasicTensor<T>* grad;
  int fan_in = 0;  // inputs feeding one output unit; 0 marks a bias
};

template <typename T>
class Layer {
 public:
  virtual ~Layer() = default;
  virtual BasicTensor<T> forward(const BasicTensor<T>& x) = 0;
  virtual BasicTensor<T> backward(const BasicTensor<T>& grad_out) = 0;
  virtual std::vector<ParamRef<T>> params() { return {}; }
  virtual std::string kind() const = 0;

 protected:
  void require_record(bool have) const {
    if (!have) throw UsageError(kind() + ": backward called before forward");
  }
};

// ---------------------------------------------------------------------------
// Convolution (kernel 1x1 or 3x3, square, arbitrary padding/dilation)

template <typename T>
class Conv2d : public Layer<T> {
 public:
  Conv2d(int in_ch, int out_ch, int kernel, int padding, int dilation)
      : in_ch_(in_ch), out_ch_(out_ch), k_(kernel), pad_(padding), dil_(dilation),
        weight_(out_ch, in_ch, kernel, kernel), wgrad_(out_ch, in_ch, kernel, kernel),
        bias_(1, out_ch, 1, 1), bgrad_(1, out_ch, 1, 1) {
    if (kernel != 1 && kernel != 3) throw ShapeError("Conv2d kernel must be 1 or 3");
    if (padding < 0 || dilation < 1) throw ShapeError("Conv2d bad pad/dilation");
  }

  std::string kind() const override { return "Conv2d"; }

  BasicTensor<T> forward(const BasicTensor<T>& x) override {
    if (x.c != in_ch_) {
      throw ShapeError("Conv2d: input channels " + std::to_string(x.c) +
                       " != " + std::to_string(in_ch_));
    }
    pad_input(x);
    const int oh = x.h + 2 * pad_ - (k_ - 1) * dil_;
    const int ow = x.w + 2 * pad_ - (k_ - 1) * dil_;
    if (oh <= 0 || ow <= 0) throw ShapeError("Conv2d: output would be empty");
    out_h_ = oh;
    out_w_ = ow;
    BasicTensor<T> out(x.n, out_ch_, oh, ow);
    for (int i = 0; i < x.n; ++i) {
      for (int oc = 0; oc < out_ch_; ++oc) {
        T* orow0 = &out.data[out.index(i, oc, 0, 0)];
        const T b = bias_.data[oc];
        for (int y = 0; y < oh * ow; ++y) orow0[y] = b;
        for (int ic = 0; ic < in_ch_; ++ic) {
          for (int ky = 0; ky < k_; ++ky) {
            for (int kx = 0; kx < k_; ++kx) {
              const T wv = weight_.at(oc, ic, ky, kx);
              for (int y = 0; y < oh; ++y) {
                const T* irow = &pad_x_.data[pad_x_.index(i, ic, y + ky * dil_, kx * dil_)];
                T* orow = &out.data[out.index(i, oc, y, 0)];
                for (int x2 = 0; x2 < ow; ++x2) orow[x2] += wv * irow[x2];
              }
            }
          }
        }
      }
    }
    have_record_ = true;
    return out;
  }

  BasicTensor<T> backward(const BasicTensor<T>& grad_out) override {
    this->require_record(have_record_);
    if (grad_out.n != pad_x_.n || grad_out.c != out_ch_ || grad_out.h != out_h_ ||
        grad_out.w != out_w_) {
      throw ShapeError("Conv2d backward: gradient shape " + grad_out.shape_str());
    }
    BasicTensor<T> gpad(pad_x_.n, in_ch_, pad_x_.h, pad_x_.w);
    for (int i = 0; i < grad_out.n; ++i) {
      for (int oc = 0; oc < out_ch_; ++oc) {
        T bsum = 0;
        const T* g0 = &grad_out.data[grad_out.index(i, oc, 0, 0)];
        for (int y = 0; y < out_h_ * out_w_; ++y) bsum += g0[y];
        bgrad_.data[oc] += bsum;
        for (int ic = 0; ic < in_ch_; ++ic) {
          for (int ky = 0; ky < k_; ++ky) {
            for (int kx = 0; kx < k_; ++kx) {
              T wsum = 0;
              const T wv = weight_.at(oc, ic, ky, kx);
              for (int y = 0; y < out_h_; ++y) {
                const T* irow = &pad_x_.data[pad_x_.index(i, ic, y + ky * dil_, kx * dil_)];
                T* grow = &gpad.data[gpad.index(i, ic, y + ky * dil_, kx * dil_)];
                const T* gout = &grad_out.data[grad_out.index(i, oc, y, 0)];
                for (int x2 = 0; x2 < out_w_; ++x2) {
                  wsum += gout[x2] * irow[x2];
                  grow[x2] += wv * gout[x2];
                }
              }
              wgrad_.at(oc, ic, ky, kx) += wsum;
            }
          }
        }
      }
    }
    // Crop padding off the input gradient.
    BasicTensor<T> gx(pad_x_.n, in_ch_, pad_x_.h - 2 * pad_, pad_x_.w - 2 * pad_);
    for (int i = 0; i < gx.n; ++i)
      for (int j = 0; j < gx.c; ++j)
        for (int y = 0; y < gx.h; ++y)
          for (int x2 = 0; x2 < gx.w; ++x2)
            gx.at(i, j, y, x2) = gpad.at(i, j, y + pad_, x2 + pad_);
    return gx;
  }

  std::vector<ParamRef<T>> params() override {
    return {{"weight", &weight_, &wgrad_, in_ch_ * k_ * k_},
            {"bias", &bias_, &bgrad_, 0}};
  }

 private:
  void pad_input(const BasicTensor<T>& x) {
    pad_x_ = BasicTensor<T>(x.n, x.c, x.h + 2 * pad_, x.w + 2 * pad_);
    for (int i = 0; i < x.n; ++i)
      for (int j = 0; j < x.c; ++j)
        for (int y = 0; y < x.h; ++y) {
          const T* src = &x.data[x.index(i, j, y, 0)];
          T* dst = &pad_x_.data[pad_x_.index(i, j, y + pad_, pad_)];
          std::copy(src, src + x.w, dst);
        }
  }

  int in_ch_, out_ch_, k_, pad_, dil_;
  BasicTensor<T> weight_, wgrad_, bias_, bgrad_;
  BasicTensor<T> pad_x_;
  int out_h_ = 0, out_w_ = 0;
  bool have_record_ = false;
};

// ---------------------------------------------------------------------------
// Depthwise-separable 3x3: per-channel 3x3 (padding 1) then pointwise 1x1.

template <typename T>
class DepthwiseSeparable : public Layer<T> {
 public:
  DepthwiseSeparable(int in_ch, int out_ch)
      : in_ch_(in_ch), out_ch_(out_ch),
        depth_w_(in_ch, 1, 3, 3), depth_g_(in_ch, 1, 3, 3),
        point_(in_ch, out_ch, 1, 0, 1) {}

  std::string kind() const override { return "DepthwiseSeparable"; }

  BasicTensor<T> forward(const BasicTensor<T>& x) override {
    if (x.c != in_ch_) throw ShapeError("DepthwiseSeparable: channel mismatch");
    pad_x_ = BasicTensor<T>(x.n, x.c, x.h + 2, x.w + 2);
    for (int i = 0; i < x.n; ++i)
      for (int j = 0; j < x.c; ++j)
        for (int y = 0; y < x.h; ++y) {
          const T* src = &x.data[x.index(i, j, y, 0)];
          std::copy(src, src + x.w, &pad_x_.data[pad_x_.index(i, j, y + 1, 1)]);
        }
    BasicTensor<T> mid(x.n, x.c, x.h, x.w);
    for (int i = 0; i < x.n; ++i) {
      for (int j = 0; j < x.c; ++j) {
        for (int ky = 0; ky < 3; ++ky) {
          for (int kx = 0; kx < 3; ++kx) {
            const T wv = depth_w_.at(j, 0, ky, kx);
            for (int y = 0; y < x.h; ++y) {
              const T* irow = &pad_x_.data[pad_x_.index(i, j, y + ky, kx)];
              T* mrow = &mid.data[mid.index(i, j, y, 0)];
              for (int x2 = 0; x2 < x.w; ++x2) mrow[x2] += wv * irow[x2];
            }
          }
        }
      }
    }
    have_record_ = true;
    return point_.forward(mid);
  }

  BasicTensor<T> backward(const BasicTensor<T>& grad_out) override {
    this->require_record(have_record_);
    BasicTensor<T> gmid = point_.backward(grad_out);
    BasicTensor<T> gpad(pad_x_.n, pad_x_.c, pad_x_.h, pad_x_.w);
    for (int i = 0; i < gmid.n; ++i) {
      for (int j = 0; j < in_ch_; ++j) {
        for (int ky = 0; ky < 3; ++ky) {
          for (int kx = 0; kx < 3; ++kx) {
            T wsum = 0;
            const T wv = depth_w_.at(j, 0, ky, kx);
            for (int y = 0; y < gmid.h; ++y) {
              const T* irow = &pad_x_.data[pad_x_.index(i, j, y + ky, kx)];
              T* grow = &gpad.data[gpad.index(i, j, y + ky, kx)];
              const T* gout = &gmid.data[gmid.index(i, j, y, 0)];
              for (int x2 = 0; x2 < gmid.w; ++x2) {
                wsum += gout[x2] * irow[x2];
                grow[x2] += wv * gout[x2];
              }
            }
            depth_g_.at(j, 0, ky, kx) += wsum;
          }
        }
      }
    }
    BasicTensor<T> gx(gpad.n, gpad.c, gpad.h - 2, gpad.w - 2);
    for (int i = 0; i < gx.n; ++i)
      for (int j = 0; j < gx.c; ++j)
        for (int y = 0; y < gx.h; ++y)
          for (int x2 = 0; x2 < gx.w; ++x2)
            gx.at(i, j, y, x2) = gpad.at(i, j, y + 1, x2 + 1);
    return gx;
  }

  std::vector<ParamRef<T>> params() override {
    std::vector<ParamRef<T>> out = {{"depth_weight", &depth_w_, &depth_g_, 9}};
    for (auto& p : point_.params()) {
      out.push_back({"point_" + p.name, p.value, p.grad, p.fan_in});
    }
    return out;
  }

 private:
  int in_ch_, out_ch_;
  BasicTensor<T> depth_w_, depth_g_;
  Conv2d<T> point_;
  BasicTensor<T> pad_x_;
  bool have_record_ = false;
};

// ---------------------------------------------------------------------------

template <typename T>
class ReLU : public Layer<T> {
 public:
  std::string kind() const override { return "ReLU"; }

  BasicTensor<T> forward(const BasicTensor<T>& x) override {
    mask_.assign(x.size(), 0);
    BasicTensor<T> out = x;
    for (size_t i = 0; i < out.data.size(); ++i) {
      if (out.data[i] > T(0)) {
        mask_[i] = 1;
      } else {
        out.data[i] = T(0);  // gradient 0 at exactly 0 by convention
      }
    }
    have_record_ = true;
    return out;
  }

  BasicTensor<T> backward(const BasicTensor<T>& grad_out) override {
    this->require_record(have_record_);
    if (grad_out.size() != mask_.size()) throw ShapeError("ReLU backward shape");
    BasicTensor<T> gx = grad_out;
    for (size_t i = 0; i < gx.data.size(); ++i) {
      if (!mask_[i]) gx.data[i] = T(0);
    }
    return gx;
  }

 private:
  std::vector<char> mask_;
  bool have_record_ = false;
};

/// Reduces each channel over all spatial positions to its maximum (ties go
/// to the first position in row-major order). Realizes a full-window max
/// pool whatever the window size.
template <typename T>
class GlobalMaxPool : public Layer<T> {
 public:
  std::string kind() const override { return "GlobalMaxPool"; }

  BasicTensor<T> forward(const BasicTensor<T>& x) override {
    in_n_ = x.n;
    in_c_ = x.c;
    in_h_ = x.h;
    in_w_ = x.w;
    argmax_.assign(size_t(x.n) * x.c, 0);
    BasicTensor<T> out(x.n, x.c, 1, 1);
    for (int i = 0; i < x.n; ++i) {
      for (int j = 0; j < x.c; ++j) {
        const T* plane = &x.data[x.index(i, j, 0, 0)];
        size_t best = 0;
        for (size_t p = 1; p < size_t(x.h) * x.w; ++p) {
          if (plane[p] > plane[best]) best = p;
        }
        argmax_[size_t(i) * x.c + j] = best;
        out.at(i, j, 0, 0) = plane[best];
      }
    }
    have_record_ = true;
    return out;
  }

  BasicTensor<T> backward(const BasicTensor<T>& grad_out) override {
    this->require_record(have_record_);
    BasicTensor<T> gx(in_n_, in_c_, in_h_, in_w_);
    for (int i = 0; i < gx.n; ++i) {
      for (int j = 0; j < gx.c; ++j) {
        gx.data[gx.index(i, j, 0, 0) + argmax_[size_t(i) * gx.c + j]] +=
            grad_out.at(i, j, 0, 0);
      }
    }
    return gx;
  }

 private:
  int in_n_ = 0, in_c_ = 0, in_h_ = 0, in_w_ = 0;
  std::vector<size_t> argmax_;
  bool have_record_ = false;
};

// ---------------------------------------------------------------------------

template <typename T>
class Sequential : public Layer<T> {
 public:
  std::string kind() const override { return "Sequential"; }

  Sequential() = default;

  void add(const std::string& name, std::unique_ptr<Layer<T>> layer) {
    names_.push_back(name);
    layers_.push_back(std::move(layer));
  }

  BasicTensor<T> forward(const BasicTensor<T>& x) override {
    BasicTensor<T> cur = x;
    for (auto& l : layers_) cur = l->forward(cur);
    have_record_ = true;
    return cur;
  }

  BasicTensor<T> backward(const BasicTensor<T>& grad_out) override {
    this->require_record(have_record_);
    BasicTensor<T> cur = grad_out;
    for (size_t i = layers_.size(); i-- > 0;) cur = layers_[i]->backward(cur);
    return cur;
  }

  std::vector<ParamRef<T>> params() override {
    std::vector<ParamRef<T>> out;
    for (size_t i = 0; i < layers_.size(); ++i) {
      for (auto& p : layers_[i]->params()) {
        out.push_back({names_[i] + "." + p.name, p.value, p.grad, p.fan_in});
      }
    }
    return out;
  }

  void zero_grad() {
    for (auto& p : params()) p.grad->fill(T(0));
  }

  size_t num_layers() const { return layers_.size(); }
  Layer<T>& layer(size_t i) { return *layers_[i]; }

 private:
  std::vector<std::string> names_;
  std::vector<std::unique_ptr<Layer<T>>> layers_;
  bool have_record_ = false;
};

// ---------------------------------------------------------------------------
// Losses

template <typename T>
struct ScalarLoss {
  double value = 0.0;
  std::vector<T> grad;  // d loss / d logits
};

/// Numerically stable softmax cross-entropy for one logit vector.
/// gradient = softmax(logits) - onehot(label).
template <typename T>
ScalarLoss<T> softmax_cross_entropy(const std::vector<T>& logits, int label) {
  if (label < 0 || size_t(label) >= logits.size()) {
    throw ShapeError("cross entropy: label out of range");
  }
  T mx = logits[0];
  for (T v : logits) mx = std::max(mx, v);
  double denom = 0.0;
  for (T v : logits) denom += std::exp(double(v - mx));
  ScalarLoss<T> out;
  out.value = std::log(denom) - double(logits[label] - mx);
  out.grad.resize(logits.size());
  for (size_t i = 0; i < logits.size(); ++i) {
    out.grad[i] = T(std::exp(double(logits[i] - mx)) / denom);
  }
  out.grad[label] -= T(1);
  return out;
}

template <typename T>
struct MapLoss {
  double value = 0.0;
  BasicTensor<T> grad;
};

/// Pixelwise softmax cross-entropy, summed (not averaged) over all pixels
/// and batch entries in row-major order. label_map holds one class index
/// per pixel, sized n*h*w.
template <typename T>
MapLoss<T> pixelwise_cross_entropy(const BasicTensor<T>& logits,
                                   const std::vector<uint8_t>& label_map) {
  if (label_map.size() != size_t(logits.n) * logits.h * logits.w) {
    throw ShapeError("pixelwise CE: label map size mismatch");
  }
  MapLoss<T> out;
  out.grad = BasicTensor<T>(logits.n, logits.c, logits.h, logits.w);
  std::vector<T> v(logits.c);
  size_t li = 0;
  for (int i = 0; i < logits.n; ++i) {
    for (int y = 0; y < logits.h; ++y) {
      for (int x = 0; x < logits.w; ++x, ++li) {
        for (int j = 0; j < logits.c; ++j) v[j] = logits.at(i, j, y, x);
        ScalarLoss<T> s = softmax_cross_entropy(v, label_map[li]);
        out.value += s.value;
        for (int j = 0; j < logits.c; ++j) out.grad.at(i, j, y, x) = s.grad[j];
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Adam

template <typename T>
class Adam {
 public:
  Adam(double lr = 1e-3, double beta1 = 0.9, double beta2 = 0.999,
       double eps = 1e-8)
      : lr_(lr), b1_(beta1), b2_(beta2), eps_(eps) {}

  /// One update over the given parameters. Moment buffers are keyed by
  /// order, so always pass the same parameter list.
  void step(const std::vector<ParamRef<T>>& params) {
    if (m_.empty()) {
      for (const auto& p : params) {
        m_.emplace_back(p.value->size(), 0.0);
        v_.emplace_back(p.value->size(), 0.0);
      }
    }
    if (m_.size() != params.size()) throw ShapeError("Adam: parameter list changed");
    ++t_;
    const double c1 = 1.0 - std::pow(b1_, double(t_));
    const double c2 = 1.0 - std::pow(b2_, double(t_));
    for (size_t pi = 0; pi < params.size(); ++pi) {
      auto& value = params[pi].value->data;
      auto& grad = params[pi].grad->data;
      if (value.size() != m_[pi].size()) throw ShapeError("Adam: shape changed");
      for (size_t i = 0; i < value.size(); ++i) {
        const double g = double(grad[i]);
        m_[pi][i] = b1_ * m_[pi][i] + (1.0 - b1_) * g;
        v_[pi][i] = b2_ * v_[pi][i] + (1.0 - b2_) * g * g;
        const double mhat = m_[pi][i] / c1;
        const double vhat = v_[pi][i] / c2;
        value[i] = T(double(value[i]) - lr_ * mhat / (std::sqrt(vhat) + eps_));
      }
    }
  }

  int64_t steps_taken() const { return t_; }

 private:
  double lr_, b1_, b2_, eps_;
  int64_t t_ = 0;
  std::vector<std::vector<double>> m_, v_;
};

// ---------------------------------------------------------------------------
// Initialization

/// He-style normal init: weights get std = sqrt(2 / fan_in), biases (fan_in
/// 0) get zero. Parameters are visited in params() order with one RNG
/// stream, so equal layouts with the same seed always get identical values.
template <typename T>
void init_he(const std::vector<ParamRef<T>>& params, Rng& rng) {
  for (const auto& p : params) {
    if (p.fan_in > 0) {
      const double std_dev = std::sqrt(2.0 / double(p.fan_in));
      for (auto& v : p.value->data) v = T(rng.normal() * std_dev);
    } else {
      p.value->fill(T(0));
    }
  }
}

}  // namespace ocsr
