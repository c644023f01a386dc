// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Dense 4-axis tensors in NCHW order, row-major (w fastest). The network
// engine templates on the scalar type: float for training/inference and
// double for finite-difference gradient checks.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ocsr/error.hpp"

namespace ocsr {

template <typename T>
struct BasicTensor {
  int n = 0, c = 0, h = 0, w = 0;
  std::vector<T> data;

  BasicTensor() = default;
  BasicTensor(int n_, int c_, int h_, int w_) : n(n_), c(c_), h(h_), w(w_) {
    if (n_ <= 0 || c_ <= 0 || h_ <= 0 || w_ <= 0) {
      throw ShapeError("tensor axes must be positive");
    }
    data.assign(size_t(n_) * size_t(c_) * size_t(h_) * size_t(w_), T(0));
  }

  size_t size() const { return data.size(); }

  size_t index(int i, int j, int y, int x) const {
    return ((size_t(i) * c + j) * h + y) * w + x;
  }
  T& at(int i, int j, int y, int x) { return data[index(i, j, y, x)]; }
  T at(int i, int j, int y, int x) const { return data[index(i, j, y, x)]; }

  template <typename U>
  bool same_shape(const BasicTensor<U>& o) const {
    return n == o.n && c == o.c && h == o.h && w == o.w;
  }
  std::string shape_str() const {
    return "(" + std::to_string(n) + "," + std::to_string(c) + "," +
           std::to_string(h) + "," + std::to_string(w) + ")";
  }

  void fill(T v) { data.assign(data.size(), v); }

  template <typename U>
  BasicTensor<U> cast() const {
    BasicTensor<U> out(n, c, h, w);
    for (size_t i = 0; i < data.size(); ++i) out.data[i] = static_cast<U>(data[i]);
    return out;
  }
};

using Tensor = BasicTensor<float>;
using Tensor64 = BasicTensor<double>;

}  // namespace ocsr
