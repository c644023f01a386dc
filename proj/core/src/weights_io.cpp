// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0

#include "ocsr/weights_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <set>

#include "ocsr/error.hpp"

namespace ocsr {

namespace {

void put_u32(std::string& out, uint32_t v) {
  out.push_back(char(v & 0xff));
  out.push_back(char((v >> 8) & 0xff));
  out.push_back(char((v >> 16) & 0xff));
  out.push_back(char((v >> 24) & 0xff));
}

void put_f32(std::string& out, float v) {
  uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32(out, bits);
}

struct Reader {
  const std::string& bytes;
  size_t pos = 0;

  bool at_end() const { return pos >= bytes.size(); }

  uint32_t u32() {
    if (pos + 4 > bytes.size()) {
      throw ParseError("weight file truncated", pos);
    }
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + pos);
    pos += 4;
    return uint32_t(p[0]) | (uint32_t(p[1]) << 8) | (uint32_t(p[2]) << 16) |
           (uint32_t(p[3]) << 24);
  }

  float f32() {
    const uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }

  std::string str(size_t len) {
    if (pos + len > bytes.size()) {
      throw ParseError("weight file truncated inside a name", pos);
    }
    std::string s = bytes.substr(pos, len);
    pos += len;
    return s;
  }
};

constexpr char kMagic[4] = {'C', 'G', 'W', '1'};
constexpr uint64_t kMaxElements = 1ull << 28;  // 1 GiB of f32, sanity cap

}  // namespace

std::string weights_to_bytes(const std::vector<NamedTensor>& tensors) {
  std::string out;
  out.append(kMagic, 4);
  for (const NamedTensor& t : tensors) {
    put_u32(out, uint32_t(t.name.size()));
    out.append(t.name);
    put_u32(out, 4);
    put_u32(out, uint32_t(t.value.n));
    put_u32(out, uint32_t(t.value.c));
    put_u32(out, uint32_t(t.value.h));
    put_u32(out, uint32_t(t.value.w));
    for (float v : t.value.data) put_f32(out, v);
  }
  return out;
}

void save_weights(const std::string& path, const std::vector<NamedTensor>& tensors) {
  const std::string bytes = weights_to_bytes(tensors);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open for writing: " + path);
  f.write(bytes.data(), std::streamsize(bytes.size()));
  f.flush();
  if (!f) throw IoError("write failed: " + path);
}

std::vector<NamedTensor> weights_from_bytes(const std::string& bytes) {
  Reader r{bytes};
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw ParseError("not a CGW1 weight file (bad magic)", 0);
  }
  r.pos = 4;
  std::vector<NamedTensor> out;
  while (!r.at_end()) {
    const size_t record_at = r.pos;
    const uint32_t name_len = r.u32();
    if (name_len > 4096) {
      throw ParseError("implausible tensor name length", record_at);
    }
    std::string name = r.str(name_len);
    const uint32_t axes = r.u32();
    if (axes < 1 || axes > 4) {
      throw ParseError("tensor '" + name + "' has unsupported axis count", record_at);
    }
    uint32_t dims[4] = {1, 1, 1, 1};
    uint64_t count = 1;
    for (uint32_t a = 0; a < axes; ++a) {
      const uint32_t d = r.u32();
      if (d == 0) throw ParseError("tensor '" + name + "' has a zero dim", record_at);
      dims[4 - axes + a] = d;  // left-pad with 1s
      count *= d;
      if (count > kMaxElements) {
        throw ParseError("tensor '" + name + "' is implausibly large", record_at);
      }
    }
    NamedTensor nt{std::move(name),
                   Tensor(int(dims[0]), int(dims[1]), int(dims[2]), int(dims[3]))};
    for (uint64_t i = 0; i < count; ++i) nt.value.data[i] = r.f32();
    out.push_back(std::move(nt));
  }
  return out;
}

std::vector<NamedTensor> load_weights(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open weight file: " + path);
  std::string bytes((std::istreambuf_iterator<char>(f)),
                    std::istreambuf_iterator<char>());
  return weights_from_bytes(bytes);
}

std::vector<NamedTensor> snapshot_params(const std::vector<ParamRef<float>>& params) {
  std::vector<NamedTensor> out;
  out.reserve(params.size());
  for (const auto& p : params) out.push_back({p.name, *p.value});
  return out;
}

void restore_params(const std::vector<ParamRef<float>>& params,
                    const std::vector<NamedTensor>& tensors) {
  std::set<std::string> used;
  for (const auto& p : params) {
    const NamedTensor* found = nullptr;
    for (const auto& t : tensors) {
      if (t.name == p.name) {
        found = &t;
        break;
      }
    }
    if (!found) throw ShapeError("weight file is missing tensor '" + p.name + "'");
    if (!found->value.same_shape(*p.value)) {
      throw ShapeError("tensor '" + p.name + "' has shape " +
                       found->value.shape_str() + ", expected " +
                       p.value->shape_str());
    }
    p.value->data = found->value.data;
    used.insert(p.name);
  }
  for (const auto& t : tensors) {
    if (!used.count(t.name)) {
      throw ShapeError("weight file has unexpected tensor '" + t.name + "'");
    }
  }
}

}  // namespace ocsr
