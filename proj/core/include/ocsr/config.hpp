// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Run configuration: a small TOML-subset reader, the RunConfig struct that
// drives every pipeline command, and a stable content hash that artifacts
// carry so mismatched generation/training/evaluation runs are detectable.
//
// Supported TOML subset: [section] headers one level deep, `key = value`
// pairs, # comments, and values of type integer, float, boolean, "string"
// or a flat array of those. Unknown keys are rejected (typo safety).

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ocsr/molgraph_gen.hpp"
#include "ocsr/render.hpp"
#include "ocsr/vocab.hpp"

namespace ocsr {

struct TomlValue {
  enum class Kind { Int, Float, Bool, String, Array };
  Kind kind = Kind::Int;
  int64_t i = 0;
  double f = 0.0;
  bool b = false;
  std::string s;
  std::vector<TomlValue> array;
};

/// Parses the subset; keys are flattened to "section.key". Throws
/// ParseError (with byte offset) on malformed input.
std::map<std::string, TomlValue> parse_toml_subset(const std::string& text);

/// Corpus sizes of the four dataset roles.
struct SplitSizes {
  int seg_train = 20;   // segmentation training pool
  int cls_train = 20;   // classifier training pool
  int cls_val = 10;     // classifier validation pool
  int test = 10;        // end-to-end test pool
};

struct RunConfig {
  uint64_t seed = 1;

  // [render]
  int style_id = 1;
  int bond_length = 40;
  int rows = 256;
  int cols = 256;

  // [vocab] — class names; Empty classes are implicit
  std::vector<std::string> vocab_atoms = {"C", "N", "O", "S", "F",
                                          "Cl", "Br", "I", "P"};
  std::vector<std::string> vocab_bonds = {"single", "double", "triple",
                                          "wedge", "hash"};
  std::vector<int> vocab_charges = {+1, -1, +2, -2};

  // [gen]
  int min_atoms = 3;
  int max_atoms = 8;
  double charge_prob = 0.1;
  double stereo_prob = 0.15;
  double ring_prob = 0.3;
  double double_prob = 0.15;
  double triple_prob = 0.03;

  // [quota] — minimum images containing each element, applied per split
  std::map<std::string, int> quota;

  // [splits]
  SplitSizes splits;

  // [train]
  double lr = 1e-3;
  int seg_steps = 2000;
  int cls_steps = 600;
  int batch = 8;
  int hidden_seg = 16;
  int hidden_cls = 16;
  bool oracle_seg_for_cls = false;

  // [paths]
  std::string data_dir = "data";
  std::string weights_dir = "weights";
  std::string out_dir = "out";

  /// Style preset overridden with this config's bond length.
  RenderStyle style() const;

  /// Vocabulary built from the configured class names.
  Vocabulary vocabulary() const;

  /// Generator parameters (element quota handling stays in the corpus
  /// builder; this carries the probabilities and size bounds).
  GenParams gen_params() const;

  /// Element quota keyed by Element. Throws ParseError on a bad symbol.
  std::map<Element, int> element_quota() const;

  /// Semantic validation beyond syntax (ranges, split sizes, vocabulary
  /// well-formedness). Throws Error with a precise message.
  void validate() const;
};

/// Parses a config file body. Defaults apply to every omitted key; unknown
/// keys and type mismatches throw ParseError.
RunConfig config_from_toml(const std::string& text);

/// Canonical serialization: every experiment-defining field, fixed order,
/// one `key = value` per line. The [paths] entries are deliberately
/// excluded — where artifacts live does not change what they are, so
/// redirecting a directory must not invalidate existing artifacts. Two
/// configs are interchangeable iff their canonical strings are equal.
std::string canonical_config(const RunConfig& cfg);

/// FNV-1a (64-bit) of the canonical serialization as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

}  // namespace ocsr
