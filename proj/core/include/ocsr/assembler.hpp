// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Graph assembly: turns per-pixel class maps and per-candidate classifier
// decisions into a molecular graph.
//
// The procedure: run segmentation, derive atom candidate locations from
// the atom map (argmax -> non-empty mask -> 8-connected components ->
// centroids, merged when closer than half a bond length), classify each
// candidate's element and charge, keep the non-empty ones as nodes,
// enumerate node pairs closer than twice the bond length as bond
// candidates, classify each pair, and keep non-empty bonds as edges.
// Directed stereo bonds are decoded from Begin/End classes relative to
// the candidate pair order.
//
// Everything runs either with trained networks (TrainedModels) or with a
// ground-truth readout (OracleModels) that replaces the networks by
// one-hot pseudo-logits and window-majority votes — the harness for
// exactness tests of the assembly itself.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ocsr/image.hpp"
#include "ocsr/molgraph.hpp"
#include "ocsr/networks.hpp"
#include "ocsr/render.hpp"
#include "ocsr/vocab.hpp"

namespace ocsr {

// ---------------------------------------------------------------------------
// Candidates

struct AtomCandidate {
  PixelPos position;  // rounded (possibly merged) component centroid
  int support = 0;    // pixels in the component(s)
};

struct BondCandidate {
  int a = 0;  // node indices, a < b
  int b = 0;
};

/// Atom candidates from an atom logit map (1, n_a, H, W): per-pixel argmax
/// (ties to the lowest class index, so Empty wins ties), 8-connected
/// components of the non-Empty mask, support-weighted centroid merging of
/// components closer than bond_length/2. Result sorted by (row, col).
std::vector<AtomCandidate> generate_atom_candidates(const Tensor& sa,
                                                    int bond_length);

/// All unordered node pairs with Euclidean distance strictly less than
/// 2*bond_length, lower index first, sorted.
std::vector<BondCandidate> generate_bond_candidates(
    const std::vector<PixelPos>& nodes, int bond_length);

/// True iff the argmax class is not Empty; exact ties break toward the
/// lower index, hence toward Empty.
bool is_not_empty_class(const std::vector<float>& logits);

/// First-maximum argmax (the tie rule above).
int argmax_class(const std::vector<float>& logits);

// ---------------------------------------------------------------------------
// Model interface

struct Prediction {
  std::vector<float> logits;
  bool conflict = false;  // oracle stereo halves disagreed; class demoted
};

/// Geometry shared by candidate windows and highlights; mirror of the
/// renderer's label geometry.
struct BuildConfig {
  int bond_length = 40;
  int highlight_radius = 6;  // atom/charge disk radius (3 * line width)
  int highlight_width = 6;   // bond rectangle width (2 * line width + 2)

  static BuildConfig from_style(const RenderStyle& style);
};

/// One-image session: call segment() first, then any number of
/// predictions for candidates of that image.
class ModelSet {
 public:
  virtual ~ModelSet() = default;
  virtual SegmentationMaps segment(const Image& x) = 0;
  virtual Prediction predict_atom(const Image& x, PixelPos cand) = 0;
  virtual Prediction predict_charge(const Image& x, PixelPos cand) = 0;
  virtual Prediction predict_bond(const Image& x, PixelPos cand_a,
                                  PixelPos cand_b) = 0;
};

/// Ground-truth models: segmentation becomes one-hot pseudo-logits from
/// the label maps and classification becomes a majority vote over the
/// candidate's highlight region of the label map.
class OracleModels : public ModelSet {
 public:
  OracleModels(const LabelMaps& truth, const Vocabulary& vocab,
               const BuildConfig& cfg);

  SegmentationMaps segment(const Image& x) override;
  Prediction predict_atom(const Image& x, PixelPos cand) override;
  Prediction predict_charge(const Image& x, PixelPos cand) override;
  Prediction predict_bond(const Image& x, PixelPos cand_a,
                          PixelPos cand_b) override;

 private:
  Prediction disk_majority(const std::vector<uint8_t>& map, PixelPos cand,
                           int n_classes) const;

  LabelMaps truth_;
  Vocabulary vocab_;
  BuildConfig cfg_;
};

/// Live networks. Holds references only; the nets must outlive this
/// object. Classifier cuts are taken from per-pixel softmax probability
/// maps of the segmentation output.
class TrainedModels : public ModelSet {
 public:
  TrainedModels(SegmentationNet& seg, ClassifierNet& atom_net,
                ClassifierNet& bond_net, ClassifierNet& charge_net,
                const BuildConfig& cfg);

  SegmentationMaps segment(const Image& x) override;
  Prediction predict_atom(const Image& x, PixelPos cand) override;
  Prediction predict_charge(const Image& x, PixelPos cand) override;
  Prediction predict_bond(const Image& x, PixelPos cand_a,
                          PixelPos cand_b) override;

 private:
  SegmentationNet& seg_;
  ClassifierNet& atom_net_;
  ClassifierNet& bond_net_;
  ClassifierNet& charge_net_;
  BuildConfig cfg_;
  Tensor prob_a_, prob_b_, prob_c_;  // cached softmax maps of the last segment()
  bool have_maps_ = false;
};

// ---------------------------------------------------------------------------
// Graph building

struct AtomRecord {
  PixelPos position;
  int support = 0;
  std::vector<float> atom_logits;
  std::vector<float> charge_logits;
  bool accepted = false;
  int node_index = -1;  // index in the result graph when accepted
};

struct BondRecord {
  int a = 0;  // node indices of the candidate pair
  int b = 0;
  std::vector<float> logits;
  bool accepted = false;
  bool stereo_conflict = false;
  int bond_index = -1;
};

struct BuildResult {
  MolGraph graph;
  bool empty_flagged = false;           // no atom candidates at all
  std::vector<Violation> violations;    // validation outcome, never hidden
  std::vector<AtomRecord> atom_records;  // every candidate, kept or not
  std::vector<BondRecord> bond_records;
};

/// Runs the full assembly procedure over one binarized image.
BuildResult build_graph(const Image& x, ModelSet& models,
                        const Vocabulary& vocab, const BuildConfig& cfg);

/// One-hot pseudo-logit maps (+10 true class, -10 otherwise) from
/// ground-truth labels; channel counts follow the vocabulary.
SegmentationMaps oracle_segmentation(const LabelMaps& maps,
                                     const Vocabulary& vocab);

/// Serializes the per-candidate evidence (class, logits, window
/// coordinates) plus flags as a JSON document.
std::string provenance_json(const BuildResult& result, const Vocabulary& vocab,
                            const BuildConfig& cfg);

}  // namespace ocsr
