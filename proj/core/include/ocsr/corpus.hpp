// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Labeled-image corpora: batches of procedurally generated molecules
// rendered to binary images together with their pixelwise label maps and
// ground-truth graphs. Generation resamples molecules until every element
// meets its (optional) minimum image quota, so rare classes can be forced
// into small corpora. Everything is deterministic per seed, including the
// on-disk byte layout.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ocsr/image.hpp"
#include "ocsr/molgraph.hpp"
#include "ocsr/molgraph_gen.hpp"
#include "ocsr/render.hpp"
#include "ocsr/vocab.hpp"

namespace ocsr {

/// One rendered training/validation example: the binary image, its three
/// ground-truth label maps, the generating graph in canvas coordinates, and
/// the style it was drawn with.
struct LabeledImage {
  Image x;
  LabelMaps maps;
  MolGraph truth;
  RenderStyle style;
};

struct CorpusParams {
  int count = 0;                      // number of images to produce
  RenderStyle style;                  // drawing style (fixes bond_length)
  GenParams gen;                      // molecule-generator knobs; bond_length
                                      // and span caps are overridden to match
                                      // the style and canvas
  Vocabulary vocab = Vocabulary::full();
  int rows = 256;
  int cols = 256;
  std::map<Element, int> quota;       // min # images containing the element
  uint64_t seed = 0;
};

struct Corpus {
  std::vector<LabeledImage> items;
  Vocabulary vocab;
  RenderStyle style;
  int rows = 0;
  int cols = 0;
  uint64_t seed = 0;
  int64_t attempts = 0;                        // molecules sampled, total
  std::map<Element, int64_t> atom_counts;      // atoms per element, summed
  std::map<Element, int> images_containing;    // images with >= 1 such atom
  std::string config_hash;                     // set by the CLI before saving
};

/// Generates params.count labeled images. Molecules are drawn from the
/// generator (restricted to the vocabulary), rendered, and accepted only
/// while every remaining element quota still fits into the remaining
/// slots; generation or placement failures are resampled. Throws
/// DatasetError when the quotas cannot be met within 100 * count sampled
/// molecules, or when the canvas cannot hold even one bond.
Corpus render_dataset(const CorpusParams& params);

/// Manifest JSON (counts, style, vocabulary, per-element statistics).
std::string corpus_manifest_json(const Corpus& c);

/// Writes manifest.json plus, per item i: img_NNNNN.pgm (the image),
/// img_NNNNN.la.pgm / .lb.pgm / .lc.pgm (label maps) and img_NNNNN.json
/// (the truth graph). The directory must already exist. Throws IoError on
/// any write failure.
void save_corpus(const std::string& dir, const Corpus& c);

/// Reads a corpus written by save_corpus. Throws IoError / ParseError.
Corpus load_corpus(const std::string& dir);

}  // namespace ocsr
