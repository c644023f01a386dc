// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0

#include "ocsr/datasets.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <map>
#include <numeric>
#include <utility>

#include "json_util.hpp"
#include "ocsr/error.hpp"
#include "ocsr/random.hpp"

namespace ocsr {
namespace {

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v & 0xff));
  out.push_back(static_cast<uint8_t>((v >> 8) & 0xff));
  out.push_back(static_cast<uint8_t>((v >> 16) & 0xff));
  out.push_back(static_cast<uint8_t>((v >> 24) & 0xff));
}

void put_i32(std::vector<uint8_t>& out, int32_t v) {
  put_u32(out, static_cast<uint32_t>(v));
}

struct ByteReader {
  const std::vector<uint8_t>& bytes;
  size_t pos = 0;

  uint8_t u8(const char* what) {
    if (pos + 1 > bytes.size())
      throw ParseError(std::string("candidate file truncated in ") + what, pos);
    return bytes[pos++];
  }
  uint32_t u32(const char* what) {
    if (pos + 4 > bytes.size())
      throw ParseError(std::string("candidate file truncated in ") + what, pos);
    uint32_t v = static_cast<uint32_t>(bytes[pos]) |
                 (static_cast<uint32_t>(bytes[pos + 1]) << 8) |
                 (static_cast<uint32_t>(bytes[pos + 2]) << 16) |
                 (static_cast<uint32_t>(bytes[pos + 3]) << 24);
    pos += 4;
    return v;
  }
  int32_t i32(const char* what) { return static_cast<int32_t>(u32(what)); }
};

/// Integer midpoint of a bond, matching the bond-window anchor convention.
PixelPos bond_midpoint(PixelPos a, PixelPos b) {
  return PixelPos{(a.row + b.row) / 2, (a.col + b.col) / 2};
}

void check_corpus_maps(const std::vector<LabeledImage>& images,
                       const std::vector<SegmentationMaps>& segprobs,
                       const Vocabulary& vocab) {
  if (images.size() != segprobs.size()) {
    throw ShapeError("got " + std::to_string(images.size()) + " images but " +
                     std::to_string(segprobs.size()) + " segmentation maps");
  }
  for (size_t i = 0; i < images.size(); ++i) {
    const Image& x = images[i].x;
    const SegmentationMaps& m = segprobs[i];
    auto check = [&](const Tensor& t, int channels, const char* name) {
      if (t.n != 1 || t.c != channels || t.h != x.rows || t.w != x.cols) {
        throw ShapeError(std::string("segmentation map ") + name +
                         " of image " + std::to_string(i) + " has shape " +
                         t.shape_str() + ", expected (1," +
                         std::to_string(channels) + "," +
                         std::to_string(x.rows) + "," + std::to_string(x.cols) +
                         ")");
      }
    };
    check(m.sa, vocab.n_a(), "sa");
    check(m.sb, vocab.n_b(), "sb");
    check(m.sc, vocab.n_c(), "sc");
  }
}

/// Atom and charge datasets share candidate positions by contract; only the
/// label function differs.
template <typename LabelFn>
CandidateDataset make_pointwise_dataset(
    const std::vector<LabeledImage>& images,
    const std::vector<SegmentationMaps>& segprobs, const Vocabulary& vocab,
    CandidateKind kind, LabelFn label_of_atom) {
  check_corpus_maps(images, segprobs, vocab);
  CandidateDataset d;
  d.kind = kind;
  d.vocab = vocab;
  for (size_t i = 0; i < images.size(); ++i) {
    const MolGraph& g = images[i].truth;
    const uint32_t id = static_cast<uint32_t>(i);
    for (const Atom& a : g.atoms) {
      d.samples.push_back(CandidateSample{
          id, kind, a.pos, a.pos, static_cast<uint8_t>(label_of_atom(a))});
    }
    for (const Bond& b : g.bonds) {
      const PixelPos mid = bond_midpoint(g.atoms[b.a].pos, g.atoms[b.b].pos);
      d.samples.push_back(CandidateSample{id, kind, mid, mid, 0});
    }
  }
  return d;
}

}  // namespace

const char* candidate_kind_name(CandidateKind k) {
  switch (k) {
    case CandidateKind::Atom: return "atom";
    case CandidateKind::Bond: return "bond";
    case CandidateKind::Charge: return "charge";
  }
  return "?";
}

int CandidateDataset::n_classes() const {
  switch (kind) {
    case CandidateKind::Atom: return vocab.n_a();
    case CandidateKind::Bond: return vocab.n_b();
    case CandidateKind::Charge: return vocab.n_c();
  }
  return 0;
}

std::string CandidateDataset::label_name(uint8_t label) const {
  const int cls = static_cast<int>(label);
  if (cls >= n_classes()) return "?";
  switch (kind) {
    case CandidateKind::Atom:
      return element_symbol(vocab.atoms[cls]);
    case CandidateKind::Bond:
      return bond_label_name(vocab.bonds[cls]);
    case CandidateKind::Charge: {
      const int q = vocab.charges[cls];
      return q > 0 ? "+" + std::to_string(q) : std::to_string(q);
    }
  }
  return "?";
}

std::vector<int64_t> CandidateDataset::class_counts() const {
  std::vector<int64_t> counts(static_cast<size_t>(n_classes()), 0);
  for (const CandidateSample& s : samples) {
    if (s.label < counts.size()) ++counts[s.label];
  }
  return counts;
}

CandidateDataset make_atom_dataset(const std::vector<LabeledImage>& images,
                                   const std::vector<SegmentationMaps>& segprobs,
                                   const Vocabulary& vocab) {
  return make_pointwise_dataset(
      images, segprobs, vocab, CandidateKind::Atom,
      [&](const Atom& a) { return vocab.atom_class(a.element); });
}

CandidateDataset make_charge_dataset(
    const std::vector<LabeledImage>& images,
    const std::vector<SegmentationMaps>& segprobs, const Vocabulary& vocab) {
  return make_pointwise_dataset(
      images, segprobs, vocab, CandidateKind::Charge,
      [&](const Atom& a) { return vocab.charge_class(a.charge); });
}

CandidateDataset make_bond_dataset(const std::vector<LabeledImage>& images,
                                   const std::vector<SegmentationMaps>& segprobs,
                                   const Vocabulary& vocab) {
  check_corpus_maps(images, segprobs, vocab);
  CandidateDataset d;
  d.kind = CandidateKind::Bond;
  d.vocab = vocab;
  for (size_t i = 0; i < images.size(); ++i) {
    const MolGraph& g = images[i].truth;
    const int L = images[i].style.bond_length;
    const uint32_t id = static_cast<uint32_t>(i);

    std::map<std::pair<int, int>, const Bond*> bonded;
    for (const Bond& b : g.bonds) {
      const PixelPos pa = g.atoms[b.a].pos, pb = g.atoms[b.b].pos;
      if (!bond_pair_in_range(pa, pb, L)) {
        throw DatasetError("image " + std::to_string(i) + ": bond " +
                           std::to_string(b.a) + "-" + std::to_string(b.b) +
                           " spans at least twice the bond length and could "
                           "never be classified");
      }
      bonded[{std::min(b.a, b.b), std::max(b.a, b.b)}] = &b;
    }

    for (int p = 0; p < g.num_atoms(); ++p) {
      for (int q = p + 1; q < g.num_atoms(); ++q) {
        const PixelPos pa = g.atoms[p].pos, pb = g.atoms[q].pos;
        if (!bond_pair_in_range(pa, pb, L)) continue;
        uint8_t label = 0;
        auto it = bonded.find({p, q});
        if (it != bonded.end()) {
          const Bond& b = *it->second;
          const auto halves = vocab.bond_halves(b.kind);
          // Begin/End is relative to the emitted (p, q) order: the Begin
          // class means the stereo bond starts at p.
          const BondLabel lbl = (b.a == p) ? halves.first : halves.second;
          label = static_cast<uint8_t>(vocab.bond_class(lbl));
        }
        d.samples.push_back(CandidateSample{id, CandidateKind::Bond, pa, pb,
                                            label});
      }
    }
  }
  return d;
}

Tensor sample_input(const CandidateSample& s, const LabeledImage& img,
                    const SegmentationMaps& segprob) {
  const CutSpec cut(img.style.bond_length);
  switch (s.kind) {
    case CandidateKind::Atom:
      return assemble_atom_input(segprob.sa, img.x, s.a, cut,
                                 img.style.atom_label_radius());
    case CandidateKind::Charge:
      return assemble_charge_input(segprob.sc, img.x, s.a, cut,
                                   img.style.atom_label_radius());
    case CandidateKind::Bond:
      return assemble_bond_input(segprob.sb, img.x, s.a, s.b, cut,
                                 img.style.bond_label_width());
  }
  throw UsageError("unknown candidate kind");
}

CandidateDataset cap_class_counts(const CandidateDataset& d,
                                  int64_t max_per_class, uint64_t seed) {
  if (max_per_class <= 0) throw DatasetError("class cap must be positive");

  std::vector<std::vector<size_t>> by_class(
      static_cast<size_t>(d.n_classes()));
  for (size_t i = 0; i < d.samples.size(); ++i) {
    by_class[d.samples[i].label].push_back(i);
  }

  std::vector<char> keep(d.samples.size(), 1);
  for (size_t cls = 0; cls < by_class.size(); ++cls) {
    std::vector<size_t>& idx = by_class[cls];
    if (static_cast<int64_t>(idx.size()) <= max_per_class) continue;
    Rng rng(substream_seed(seed, cls));
    rng.shuffle(idx);
    for (size_t k = static_cast<size_t>(max_per_class); k < idx.size(); ++k) {
      keep[idx[k]] = 0;
    }
  }

  CandidateDataset out;
  out.kind = d.kind;
  out.vocab = d.vocab;
  out.config_hash = d.config_hash;
  for (size_t i = 0; i < d.samples.size(); ++i) {
    if (keep[i]) out.samples.push_back(d.samples[i]);
  }
  return out;
}

std::vector<uint8_t> candidates_to_bytes(const CandidateDataset& d) {
  std::vector<uint8_t> out;
  out.reserve(9 + d.samples.size() * 22);
  out.push_back('C');
  out.push_back('D');
  out.push_back('S');
  out.push_back('1');
  out.push_back(static_cast<uint8_t>(d.kind));
  put_u32(out, static_cast<uint32_t>(d.samples.size()));
  for (const CandidateSample& s : d.samples) {
    put_u32(out, s.image_id);
    out.push_back(static_cast<uint8_t>(s.kind));
    put_i32(out, s.a.row);
    put_i32(out, s.a.col);
    put_i32(out, s.b.row);
    put_i32(out, s.b.col);
    out.push_back(s.label);
  }
  return out;
}

CandidateDataset candidates_from_bytes(const std::vector<uint8_t>& bytes,
                                       const Vocabulary& vocab) {
  ByteReader r{bytes};
  if (bytes.size() < 4 || bytes[0] != 'C' || bytes[1] != 'D' ||
      bytes[2] != 'S' || bytes[3] != '1') {
    throw ParseError("not a candidate dataset file (bad magic)", 0);
  }
  r.pos = 4;
  const uint8_t kind_byte = r.u8("kind");
  if (kind_byte > 2) throw ParseError("unknown candidate kind", r.pos - 1);

  CandidateDataset d;
  d.kind = static_cast<CandidateKind>(kind_byte);
  d.vocab = vocab;
  const uint32_t n = r.u32("count");
  const int n_classes = d.n_classes();
  d.samples.reserve(n);
  for (uint32_t i = 0; i < n; ++i) {
    CandidateSample s;
    s.image_id = r.u32("record");
    const uint8_t k = r.u8("record");
    if (k != kind_byte) {
      throw ParseError("record kind disagrees with file header", r.pos - 1);
    }
    s.kind = d.kind;
    s.a.row = r.i32("record");
    s.a.col = r.i32("record");
    s.b.row = r.i32("record");
    s.b.col = r.i32("record");
    s.label = r.u8("record");
    if (static_cast<int>(s.label) >= n_classes) {
      throw ParseError("label " + std::to_string(int(s.label)) +
                           " outside the vocabulary",
                       r.pos - 1);
    }
    d.samples.push_back(s);
  }
  if (r.pos != bytes.size()) {
    throw ParseError("trailing bytes after the last record", r.pos);
  }
  return d;
}

void save_candidates(const std::string& path, const CandidateDataset& d) {
  const std::vector<uint8_t> bytes = candidates_to_bytes(d);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path);
}

CandidateDataset load_candidates(const std::string& path,
                                 const Vocabulary& vocab) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  return candidates_from_bytes(bytes, vocab);
}

std::string candidates_manifest_json(const CandidateDataset& d) {
  detail::ordered_json j;
  j["kind"] = candidate_kind_name(d.kind);
  j["count"] = d.samples.size();
  j["config_hash"] = d.config_hash;
  detail::ordered_json counts = detail::ordered_json::object();
  const std::vector<int64_t> cc = d.class_counts();
  for (size_t cls = 0; cls < cc.size(); ++cls) {
    counts[d.label_name(static_cast<uint8_t>(cls))] = cc[cls];
  }
  j["class_counts"] = counts;
  j["vocabulary"] = detail::vocab_to_json(d.vocab);
  return j.dump(2) + "\n";
}

}  // namespace ocsr
