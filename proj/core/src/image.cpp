// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0

#include "ocsr/image.hpp"

#include <cmath>
#include <fstream>

#include "ocsr/error.hpp"

namespace ocsr {

namespace {

void write_p5(const std::string& path, const std::vector<uint8_t>& bytes,
              int rows, int cols) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for writing: " + path);
  f << "P5\n" << cols << " " << rows << "\n255\n";
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("write failed: " + path);
}

// Reads one whitespace-separated token, skipping '#' comment lines.
int read_header_int(std::istream& in, const std::string& path) {
  for (;;) {
    int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
      continue;
    }
    if (std::isspace(c)) {
      in.get();
      continue;
    }
    break;
  }
  int value = 0;
  if (!(in >> value)) throw ParseError("bad PGM header in " + path, 0);
  return value;
}

std::vector<uint8_t> read_p5(const std::string& path, int& rows, int& cols) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for reading: " + path);
  char m0 = 0, m1 = 0;
  f.get(m0);
  f.get(m1);
  if (m0 != 'P' || m1 != '5') throw ParseError("not a P5 PGM: " + path, 0);
  cols = read_header_int(f, path);
  rows = read_header_int(f, path);
  const int maxval = read_header_int(f, path);
  if (cols <= 0 || rows <= 0 || maxval != 255) {
    throw ParseError("unsupported PGM geometry in " + path, 0);
  }
  f.get();  // single whitespace after maxval
  std::vector<uint8_t> bytes(size_t(rows) * size_t(cols));
  f.read(reinterpret_cast<char*>(bytes.data()),
         static_cast<std::streamsize>(bytes.size()));
  if (f.gcount() != static_cast<std::streamsize>(bytes.size())) {
    throw ParseError("truncated PGM payload in " + path, 0);
  }
  return bytes;
}

}  // namespace

Image binarize(const Image& img, float threshold) {
  if (!(threshold > 0.0f && threshold < 1.0f)) {
    throw UsageError("binarize threshold must lie in (0,1)");
  }
  Image out(img.rows, img.cols);
  for (size_t i = 0; i < img.px.size(); ++i) {
    out.px[i] = img.px[i] >= threshold ? 1.0f : 0.0f;
  }
  return out;
}

void write_pgm(const std::string& path, const Image& img) {
  std::vector<uint8_t> bytes(img.px.size());
  for (size_t i = 0; i < img.px.size(); ++i) {
    const float v = std::min(1.0f, std::max(0.0f, img.px[i]));
    bytes[i] = static_cast<uint8_t>(std::lround((1.0f - v) * 255.0f));
  }
  write_p5(path, bytes, img.rows, img.cols);
}

Image read_pgm(const std::string& path) {
  int rows = 0, cols = 0;
  const std::vector<uint8_t> bytes = read_p5(path, rows, cols);
  Image img(rows, cols);
  for (size_t i = 0; i < bytes.size(); ++i) {
    img.px[i] = 1.0f - float(bytes[i]) / 255.0f;
  }
  return img;
}

void write_label_pgm(const std::string& path, const std::vector<uint8_t>& data,
                     int rows, int cols) {
  if (data.size() != size_t(rows) * size_t(cols)) {
    throw ShapeError("label buffer does not match rows*cols");
  }
  write_p5(path, data, rows, cols);
}

std::vector<uint8_t> read_label_pgm(const std::string& path, int& rows, int& cols) {
  return read_p5(path, rows, cols);
}

}  // namespace ocsr
