// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Classifier candidate datasets built from labeled corpora.
//
// A sample is a record, not a stored window: (image id, kind, one or two
// pixel positions, class label). Its input tensor is re-assembled on
// demand from the image and its segmentation probability maps with the
// same cut/highlight geometry used at inference time, so training data
// and inference inputs cannot drift apart.
//
// Labeling rules:
//  - atom dataset: one positive per true atom (element class) plus one
//    negative per bond, at the bond's integer midpoint, labeled Empty;
//  - bond dataset: every unordered atom pair closer than twice the bond
//    length; bonded pairs carry their bond class, with stereo direction
//    (Begin/End) expressed relative to the emitted (a, b) order; all other
//    pairs are Empty;
//  - charge dataset: the exact positions of the atom dataset with charge
//    class labels (Empty for neutral atoms and for midpoint negatives).

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ocsr/corpus.hpp"
#include "ocsr/networks.hpp"
#include "ocsr/vocab.hpp"

namespace ocsr {

enum class CandidateKind : uint8_t { Atom = 0, Bond = 1, Charge = 2 };

const char* candidate_kind_name(CandidateKind k);

struct CandidateSample {
  uint32_t image_id = 0;
  CandidateKind kind = CandidateKind::Atom;
  PixelPos a;  // candidate position; first endpoint for bonds
  PixelPos b;  // second endpoint for bonds; equals `a` otherwise
  uint8_t label = 0;  // class index within the kind's class list

  friend bool operator==(const CandidateSample& x, const CandidateSample& y) {
    return x.image_id == y.image_id && x.kind == y.kind && x.a == y.a &&
           x.b == y.b && x.label == y.label;
  }
};

struct CandidateDataset {
  CandidateKind kind = CandidateKind::Atom;
  Vocabulary vocab;
  std::vector<CandidateSample> samples;
  std::string config_hash;  // set by the CLI before saving

  /// Class count of this kind (n_a / n_b / n_c).
  int n_classes() const;

  /// Display name of a label class ("C", "single", "+1", ...).
  std::string label_name(uint8_t label) const;

  /// Per-class sample counts, indexed by label.
  std::vector<int64_t> class_counts() const;
};

/// Builds the atom / bond / charge candidate dataset over a corpus. The
/// segmentation probability maps are one per image (trained-net softmax or
/// oracle); they are validated against the image dims and vocabulary here
/// and consumed later by sample_input. Throws ShapeError on a mismatch and
/// DatasetError if a true bond's endpoints are not strictly closer than
/// twice the bond length (such a bond could never be classified).
CandidateDataset make_atom_dataset(const std::vector<LabeledImage>& images,
                                   const std::vector<SegmentationMaps>& segprobs,
                                   const Vocabulary& vocab);
CandidateDataset make_bond_dataset(const std::vector<LabeledImage>& images,
                                   const std::vector<SegmentationMaps>& segprobs,
                                   const Vocabulary& vocab);
CandidateDataset make_charge_dataset(const std::vector<LabeledImage>& images,
                                     const std::vector<SegmentationMaps>& segprobs,
                                     const Vocabulary& vocab);

/// Assembles the input tensor of one sample from its source image and the
/// image's segmentation probability maps, using the window and highlight
/// geometry of the image's render style. Bit-identical across calls.
Tensor sample_input(const CandidateSample& s, const LabeledImage& img,
                    const SegmentationMaps& segprob);

/// Deterministically subsamples classes that exceed a cap: for each label
/// with more than max_per_class samples, a seeded draw keeps exactly
/// max_per_class of them (original order preserved). Non-positive caps are
/// rejected. No rebalancing happens unless this is called.
CandidateDataset cap_class_counts(const CandidateDataset& d,
                                  int64_t max_per_class, uint64_t seed);

/// Packed little-endian serialization: "CDS1", kind byte, u32 sample
/// count, then one 22-byte record per sample (u32 image id, u8 kind,
/// 4 x i32 positions, u8 label). The vocabulary travels in the JSON
/// manifest, not in the binary file.
std::vector<uint8_t> candidates_to_bytes(const CandidateDataset& d);
CandidateDataset candidates_from_bytes(const std::vector<uint8_t>& bytes,
                                       const Vocabulary& vocab);
void save_candidates(const std::string& path, const CandidateDataset& d);
CandidateDataset load_candidates(const std::string& path,
                                 const Vocabulary& vocab);

/// Manifest JSON: kind, sample count, per-class counts by label name,
/// vocabulary, config hash.
std::string candidates_manifest_json(const CandidateDataset& d);

}  // namespace ocsr
